"""Command-line front end: ``latentdisc {gen,ssm,pcolliders,recover,experiment}``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .discovery import FamilyCoverageError, recover_full, recover_full_unknown_tau
from .discovery import DiscoveryReport, recover_ancestral
from .experiment import rows_to_csv, run_experiment
from .generators import MODELS, GeneratorSpec, generate, inject_latents
from .graph import CausalGraph, GraphFormatError, format_graph, read_graph, true_ancestral
from .oracles import Oracle
from .pcollider import p_colliders, p_colliders_bruteforce, tau
from .setsystem import (
    InfeasibleBudgetError,
    binary_encoding_system,
    bruteforce_opt,
    cost,
    eps_ssmatrix,
    format_matrix,
    format_set_system,
    ssmatrix_2approx,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_COVERAGE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def read_costs(path) -> list[float]:
    costs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number: {line!r}") from None
        if not value > 0 or value == float("inf"):
            raise InputError(f"{path}:{lineno}: costs must be positive and finite")
        costs.append(value)
    if not costs:
        raise InputError(f"{path}: no costs found")
    return costs


def _parse_range(text: str) -> list[int]:
    """``a:b:step`` (inclusive), or a comma list."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return list(range(lo, hi + 1, step))
        return [int(p) for p in text.split(",") if p]
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def _spec_from_args(a) -> GeneratorSpec:
    return GeneratorSpec(a.model, a.n, a.c, a.seed, a.gamma, a.n1, None if a.n1 is None else a.n - a.n1)


# -- subcommands ---------------------------------------------------------------


def cmd_gen(a) -> int:
    g = inject_latents(generate(_spec_from_args(a)), a.latent_fraction, seed=a.seed)
    _emit(format_graph(g), a.out)
    return EXIT_OK


def cmd_ssm(a) -> int:
    if a.costs_file:
        costs = read_costs(a.costs_file)
    elif a.n:
        costs = [1.0] * a.n
    else:
        raise InputError("give --costs-file or --n")
    if a.algo == "binary":
        u = binary_encoding_system(len(costs))
    elif a.m is None:
        raise InputError(f"--m is required for --algo {a.algo}")
    elif a.algo == "two-approx":
        with warnings.catch_warnings():
            warnings.simplefilter("default" if a.verbose else "ignore")
            u = ssmatrix_2approx(costs, a.m)
    elif a.algo == "eps":
        u = eps_ssmatrix(costs, a.m)
    else:
        u, _ = bruteforce_opt(costs, a.m)
    text = format_set_system(u) if a.sets else format_matrix(u)
    _emit(text, a.out)
    print(f"cost={cost(u, costs):g}", file=sys.stderr)
    return EXIT_OK


def cmd_pcolliders(a) -> int:
    g = read_graph(a.graph)
    if a.i is None or a.j is None:
        print(f"tau={tau(g)}")
        return EXIT_OK
    fn = p_colliders_bruteforce if a.brute else p_colliders
    print(" ".join(str(k) for k in sorted(fn(g, a.i, a.j))))
    return EXIT_OK


def format_report(rep: DiscoveryReport) -> str:
    lines = [f"{k}={v}" for k, v in rep.to_record().items()]
    return "\n".join(lines) + "\n\n" + format_graph(rep.recovered)


def cmd_recover(a) -> int:
    g = read_graph(a.graph)
    o = Oracle(g)
    costs = read_costs(a.costs_file) if a.costs_file else None
    if costs is not None and len(costs) != g.n:
        raise InputError(f"{len(costs)} costs for {g.n} nodes")
    if a.mode == "anc":
        with o.stage("ancestral"):
            anc = recover_ancestral(o, binary_encoding_system(g.n)) if g.n >= 2 else None
        ok = anc is None or anc.edges == true_ancestral(g).edges
        rep = DiscoveryReport(
            CausalGraph(g.n, anc.edges if anc else frozenset()),
            o.stats, {"ancestral": o.stats.stage_count("ancestral")}, 0, success=ok,
        )
    else:
        t = tau(g) if a.tau is None else a.tau
        if a.mode == "full":
            rep = recover_full(o, t, a.seed, a.constant_multiplier)
        else:
            rep = recover_full_unknown_tau(o, a.seed, a.constant_multiplier)
        rep.success = rep.recovered == g
    if costs is not None:
        rep.extra["total_linear_cost"] = o.stats.total_linear_cost(costs)
    _emit(format_report(rep), a.out)
    return EXIT_OK if rep.success else EXIT_MISMATCH


def cmd_experiment(a) -> int:
    specs = [
        GeneratorSpec(model, n, a.c, a.seed, a.gamma)
        for model in a.models.split(",")
        for n in a.n_range
    ]
    rows = run_experiment(specs, a.repeats, a.latent_fraction, timing=not a.no_timing)
    _emit(rows_to_csv(rows), a.out)
    if a.figure:
        from .plotting import plot_tau_vs_degree

        plot_tau_vs_degree(rows, a.figure)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latentdisc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common_seed(sp):
        sp.add_argument("--seed", type=int, default=0, help="RNG seed (u64)")

    def model_args(sp):
        sp.add_argument("--model", choices=MODELS, default="er")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--c", type=float, default=1.0, help="edge probability is c/n")
        sp.add_argument("--gamma", type=float, default=3.0, help="power-law exponent")
        sp.add_argument("--n1", type=int, default=None, help="bipartite left side (default n//2)")

    sp = sub.add_parser("gen", help="generate a random causal graph")
    model_args(sp)
    common_seed(sp)
    sp.add_argument("--latent-fraction", type=float, default=0.05)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("ssm", help="build a strongly separating matrix")
    sp.add_argument("--algo", choices=("two-approx", "eps", "binary", "brute"), default="eps")
    sp.add_argument("--m", type=int, default=None, help="number of interventions")
    sp.add_argument("--costs-file", default=None, help="one positive cost per line")
    sp.add_argument("--n", type=int, default=None, help="unit costs for n nodes")
    sp.add_argument("--sets", action="store_true", help="print the set-system view")
    sp.add_argument("--verbose", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_ssm)

    sp = sub.add_parser("pcolliders", help="p-colliders of a pair, or tau of the graph")
    sp.add_argument("graph")
    sp.add_argument("i", type=int, nargs="?")
    sp.add_argument("j", type=int, nargs="?")
    sp.add_argument("--brute", action="store_true", help="use path enumeration")
    sp.set_defaults(func=cmd_pcolliders)

    sp = sub.add_parser("recover", help="recover a graph file through simulated oracles")
    sp.add_argument("graph")
    sp.add_argument("--mode", choices=("anc", "full", "full-auto"), default="full")
    sp.add_argument("--tau", type=int, default=None, help="default: tau of the input graph")
    sp.add_argument("--constant-multiplier", type=float, default=1.0)
    sp.add_argument("--costs-file", default=None)
    sp.add_argument("--out", default=None)
    common_seed(sp)
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("experiment", help="tau versus degree sweep, CSV output")
    sp.add_argument("--models", default="er,bipartite,powerlaw_tree")
    sp.add_argument("--n-range", type=_parse_range, default=_parse_range("20:100:10"))
    sp.add_argument("--repeats", type=int, default=10)
    sp.add_argument("--c", type=float, default=5.0)
    sp.add_argument("--gamma", type=float, default=3.0)
    sp.add_argument("--latent-fraction", type=float, default=0.05)
    sp.add_argument("--out", default=None)
    sp.add_argument("--figure", default=None, help="also write a PNG figure here")
    sp.add_argument("--no-timing", action="store_true", help="write runtime_ms=0 for stable output")
    common_seed(sp)
    sp.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FamilyCoverageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except (InputError, GraphFormatError, InfeasibleBudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
