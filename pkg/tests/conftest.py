"""Shared fixtures and independent reference implementations for the tests."""

from __future__ import annotations

import random

import pytest

from latentdisc.graph import CausalGraph


def random_graph(rng: random.Random, n: int, p_edge: float, n_latents: int) -> CausalGraph:
    """Random DAG under a random topological order plus distinct latent pairs."""
    order = list(range(n))
    rng.shuffle(order)
    edges = {
        (order[a], order[b])
        for a in range(n)
        for b in range(a + 1, n)
        if rng.random() < p_edge
    }
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    latents = rng.sample(pairs, min(n_latents, len(pairs)))
    return CausalGraph(n, frozenset(edges), frozenset(latents))


def small_random_graph(seed: int, max_total: int = 10) -> CausalGraph:
    rng = random.Random(seed)
    n = rng.randint(2, max_total - 1)
    k = rng.randint(0, max_total - n)
    return random_graph(rng, n, rng.uniform(0.1, 0.6), k)


def path_blocking_dsep(g: CausalGraph, i: int, j: int, z, cut_in=(), cut_out=()) -> bool:
    """d-separation by enumerating every simple path of the mutilated expanded graph."""
    z, cut_in, cut_out = set(z), set(cut_in), set(cut_out)
    size = g.size
    arcs = set()
    for a in range(size):
        for b in g.expanded_children[a]:
            if b in cut_in or a in cut_out:
                continue
            arcs.add((a, b))
    nbrs = {v: set() for v in range(size)}
    for a, b in arcs:
        nbrs[a].add(b)
        nbrs[b].add(a)
    children = {v: {b for a, b in arcs if a == v} for v in range(size)}

    def desc(v):
        seen, stack = {v}, [v]
        while stack:
            for c in children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def open_path(path):
        for pos in range(1, len(path) - 1):
            a, v, b = path[pos - 1], path[pos], path[pos + 1]
            collider = (a, v) in arcs and (b, v) in arcs
            if collider:
                if not (desc(v) & z):
                    return False
            elif v in z:
                return False
        return True

    found = False

    def walk(path, on):
        nonlocal found
        if found:
            return
        v = path[-1]
        if v == j:
            found = open_path(path)
            return
        for w in nbrs[v]:
            if w not in on:
                on.add(w)
                path.append(w)
                walk(path, on)
                path.pop()
                on.discard(w)

    walk([i], {i})
    return not found


@pytest.fixture
def chain3() -> CausalGraph:
    return CausalGraph(3, frozenset({(0, 1), (1, 2)}))


@pytest.fixture
def pcollider5() -> CausalGraph:
    """i=0, j=1, k=2, w=3, p=4: edges i->k, w->k, w->j, k->p, p->j."""
    return CausalGraph(5, frozenset({(0, 2), (3, 2), (3, 1), (2, 4), (4, 1)}))
