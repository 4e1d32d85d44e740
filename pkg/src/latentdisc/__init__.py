"""Intervention design and causal-graph recovery with pairwise latent confounders."""

from .discovery import (
    DiscoveryReport,
    FamilyCoverageError,
    InterventionFamily,
    adversarial_chain,
    latents_adjacent,
    latents_nonadjacent,
    recover_ancestral,
    recover_full,
    recover_full_unknown_tau,
    recover_observable,
    sample_family,
)
from .experiment import ExperimentRow, run_experiment
from .generators import GeneratorSpec, generate, inject_latents
from .graph import (
    AncestralGraph,
    CausalGraph,
    MutilationSpec,
    ancestors,
    d_separated,
    descendants,
    max_degree,
    parents,
    read_graph,
    true_ancestral,
    validate,
    write_graph,
)
from .oracles import Oracle, OracleStats, ci_test, dt_test
from .pcollider import is_pcollider, p_colliders, p_colliders_bruteforce, pcollider_table, tau
from .setsystem import (
    SSMatrix,
    binary_encoding_system,
    bruteforce_opt,
    cascade_decompose,
    colex_weightk_prefix,
    cost,
    eps_ssmatrix,
    is_strongly_separating,
    shadow_size,
    ssmatrix_2approx,
)

__version__ = "0.1.0"
