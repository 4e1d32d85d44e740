"""Seeded random causal-graph generators and latent injection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import CausalGraph

__all__ = ["GeneratorSpec", "MODELS", "generate", "inject_latents"]

MODELS = ("er", "bipartite", "powerlaw_tree")


@dataclass(frozen=True)
class GeneratorSpec:
    model: str
    n: int
    c: float = 1.0
    seed: int = 0
    gamma: float = 3.0
    n1: int | None = None
    n2: int | None = None

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.c < 0:
            raise ValueError("c must be non-negative")
        if self.gamma <= 1:
            raise ValueError("gamma must exceed 1")
        if self.model == "bipartite":
            n1 = self.n // 2 if self.n1 is None else self.n1
            n2 = self.n - n1 if self.n2 is None else self.n2
            if n1 < 1 or n2 < 1 or n1 + n2 != self.n:
                raise ValueError("bipartite sides must be positive and sum to n")
            object.__setattr__(self, "n1", n1)
            object.__setattr__(self, "n2", n2)


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def _powerlaw_tree(n: int, gamma: float, rng: np.random.Generator) -> set[tuple[int, int]]:
    ks = np.arange(1, n)
    probs = ks ** (-gamma)
    probs /= probs.sum()
    budget = rng.choice(ks, size=n, p=probs)
    order = rng.permutation(np.arange(1, n))
    attached = [0]
    remaining = {0: int(budget[0])}
    edges = set()
    for v in order.tolist():
        open_slots = [u for u in attached if remaining[u] > 0]
        pool = open_slots if open_slots else attached
        u = pool[int(rng.integers(len(pool)))]
        edges.add((u, v))
        remaining[u] -= 1
        # one slot of v's degree goes to its parent edge
        remaining[v] = int(budget[v]) - 1
        attached.append(v)
    return edges


def generate(spec: GeneratorSpec) -> CausalGraph:
    n = spec.n
    rng = _rng(spec.seed, 0)
    p = min(1.0, spec.c / n)
    edges: set[tuple[int, int]] = set()
    if spec.model == "er":
        coins = rng.random((n, n))
        edges = {(i, j) for i in range(n) for j in range(i + 1, n) if coins[i, j] < p}
    elif spec.model == "bipartite":
        n1 = spec.n1
        coins = rng.random((n1, n - n1))
        edges = {(i, n1 + b) for i in range(n1) for b in range(n - n1) if coins[i, b] < p}
    else:
        edges = _powerlaw_tree(n, spec.gamma, rng)
    return CausalGraph(n, frozenset(edges))


def inject_latents(g: CausalGraph, fraction: float = 0.05, seed: int = 0) -> CausalGraph:
    """Add ``floor(fraction * C(n, 2))`` new latent pairs chosen uniformly."""
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    n = g.n
    want = math.floor(fraction * math.comb(n, 2) + 1e-9)
    free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in g.latents]
    want = min(want, len(free))
    if want == 0:
        return g
    rng = _rng(seed, 1)
    picks = rng.choice(len(free), size=want, replace=False)
    return g.with_latents(free[k] for k in sorted(picks.tolist()))
