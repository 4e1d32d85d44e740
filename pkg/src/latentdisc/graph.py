"""Causal graphs over observables with pairwise latent confounders.

Observables are ``0 .. n-1``.  Every latent is an unordered pair ``(u, v)``
standing for a hidden source ``l`` with ``l -> u`` and ``l -> v``.  Graph
algorithms that need latents as explicit nodes work on an *expanded* graph in
which the latent with sorted position ``q`` is node ``n + q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

__all__ = [
    "CausalGraph",
    "AncestralGraph",
    "MutilationSpec",
    "GraphFormatError",
    "validate",
    "parents",
    "ancestors",
    "descendants",
    "d_separated",
    "true_ancestral",
    "max_degree",
    "read_graph",
    "write_graph",
    "format_graph",
    "parse_graph",
]


class GraphFormatError(ValueError):
    """Raised for malformed graph files."""


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class CausalGraph:
    """Immutable causal graph ``(V u L, E u E_L)``.

    ``edges`` holds ordered observable pairs ``(u, v)`` meaning ``u -> v``;
    ``latents`` holds sorted pairs.  The constructor normalises but does not
    validate; call :func:`validate` on untrusted input.
    """

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    latents: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset((int(u), int(v)) for u, v in self.edges))
        object.__setattr__(
            self, "latents", frozenset(_pair(int(u), int(v)) for u, v in self.latents)
        )

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def sorted_latents(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.latents))

    @cached_property
    def obs_parents(self) -> tuple[frozenset[int], ...]:
        pa: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            pa[v].add(u)
        return tuple(frozenset(p) for p in pa)

    @cached_property
    def obs_children(self) -> tuple[frozenset[int], ...]:
        ch: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            ch[u].add(v)
        return tuple(frozenset(c) for c in ch)

    @property
    def size(self) -> int:
        """Number of nodes in the expanded graph (observables plus latents)."""
        return self.n + len(self.latents)

    @cached_property
    def expanded_parents(self) -> tuple[tuple[int, ...], ...]:
        pa: list[list[int]] = [sorted(p) for p in self.obs_parents]
        pa.extend([] for _ in self.latents)
        for q, (u, v) in enumerate(self.sorted_latents):
            pa[u].append(self.n + q)
            pa[v].append(self.n + q)
        return tuple(tuple(p) for p in pa)

    @cached_property
    def expanded_children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [sorted(c) for c in self.obs_children]
        ch.extend([u, v] for u, v in self.sorted_latents)
        return tuple(tuple(c) for c in ch)

    @cached_property
    def ancestor_sets(self) -> tuple[frozenset[int], ...]:
        """Strict observable ancestors of every node."""
        return tuple(frozenset(_reach(v, self.obs_parents)) for v in range(self.n))

    @cached_property
    def descendant_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(_reach(v, self.obs_children)) for v in range(self.n))

    def with_latents(self, latents: Iterable[tuple[int, int]]) -> "CausalGraph":
        return CausalGraph(self.n, self.edges, self.latents | {_pair(u, v) for u, v in latents})


@dataclass(frozen=True)
class AncestralGraph:
    """Transitive closure of an observable graph: ``(u, v)`` iff ``u ~> v``."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @cached_property
    def ancestor_sets(self) -> tuple[frozenset[int], ...]:
        anc: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            anc[v].add(u)
        return tuple(frozenset(a) for a in anc)

    def ancestors(self, v: int) -> frozenset[int]:
        return self.ancestor_sets[v]


@dataclass(frozen=True)
class MutilationSpec:
    """Edge surgery applied before a d-separation query.

    ``cut_incoming`` are intervention targets (all incoming edges, latent ones
    included, are removed); ``cut_outgoing`` lose their outgoing edges.
    """

    cut_incoming: frozenset[int] = frozenset()
    cut_outgoing: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cut_incoming", frozenset(self.cut_incoming))
        object.__setattr__(self, "cut_outgoing", frozenset(self.cut_outgoing))


_NO_MUTILATION = MutilationSpec()


def _reach(start: int, adj) -> set[int]:
    seen: set[int] = set()
    stack = list(adj[start])
    while stack:
        v = stack.pop()
        if v not in seen:
            seen.add(v)
            stack.extend(adj[v])
    return seen


def validate(g: CausalGraph) -> str | None:
    """Return ``None`` if ``g`` is well formed, else the first violation found."""
    if g.n < 0:
        return f"negative node count {g.n}"
    for u, v in g.sorted_edges:
        if not (0 <= u < g.n and 0 <= v < g.n):
            return f"edge {u}->{v} references a node outside [0, {g.n})"
        if u == v:
            return f"self-loop on node {u}"
    for u, v in g.sorted_latents:
        if u == v:
            return f"latent self-pair on node {u}"
        if not (0 <= u < g.n and 0 <= v < g.n):
            return f"latent {{{u},{v}}} references a node outside [0, {g.n})"
    # Kahn's algorithm; anything left over sits on a cycle.
    indeg = [len(p) for p in g.obs_parents]
    queue = [v for v in range(g.n) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for c in g.obs_children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    if seen != g.n:
        stuck = min(v for v in range(g.n) if indeg[v] > 0)
        return f"cycle through node {stuck}"
    return None


def _check_node(g: CausalGraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"invalid node id {v} for graph with {g.n} observables")


def parents(g: CausalGraph, v: int) -> frozenset[int]:
    _check_node(g, v)
    return g.obs_parents[v]


def ancestors(g: CausalGraph, v: int) -> frozenset[int]:
    _check_node(g, v)
    return g.ancestor_sets[v]


def descendants(g: CausalGraph, v: int) -> frozenset[int]:
    _check_node(g, v)
    return g.descendant_sets[v]


def true_ancestral(g: CausalGraph) -> AncestralGraph:
    return AncestralGraph(
        g.n, frozenset((u, v) for v in range(g.n) for u in g.ancestor_sets[v])
    )


def max_degree(g: CausalGraph) -> int:
    """Largest undirected degree, counting observable edges and latent adjacencies."""
    if g.n == 0:
        return 0
    deg = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    for u, v in g.latents:
        deg[u] += 1
        deg[v] += 1
    return max(deg)


def d_separated(
    g: CausalGraph,
    i: int,
    j: int,
    z: Iterable[int] = (),
    mut: MutilationSpec | None = None,
) -> bool:
    """Test whether ``i`` and ``j`` are d-separated by ``z`` after mutilation.

    Runs a Bayes-ball style reachability over (node, direction) states of the
    expanded graph, so latents act as unobserved fork nodes.
    """
    _check_node(g, i)
    _check_node(g, j)
    if i == j:
        raise ValueError("d-separation needs two distinct nodes")
    zset = frozenset(z)
    if i in zset or j in zset:
        raise ValueError("conditioning set must not contain the queried nodes")
    for v in zset:
        _check_node(g, v)
    mut = mut or _NO_MUTILATION
    cut_in = mut.cut_incoming
    cut_out = mut.cut_outgoing
    pa_all = g.expanded_parents
    ch_all = g.expanded_children

    if cut_in or cut_out:

        def pa(v: int):
            if v in cut_in:
                return ()
            return [p for p in pa_all[v] if p not in cut_out]

        def ch(v: int):
            if v in cut_out:
                return ()
            return [c for c in ch_all[v] if c not in cut_in]

    else:
        pa = pa_all.__getitem__
        ch = ch_all.__getitem__

    # Z and its ancestors: colliders in this set are open.
    opened = set(zset)
    stack = list(zset)
    while stack:
        for p in pa(stack.pop()):
            if p not in opened:
                opened.add(p)
                stack.append(p)

    # State True = entered from a child (moving up), False = entered from a parent.
    seen_up: set[int] = set()
    seen_down: set[int] = set()
    todo: list[tuple[int, bool]] = [(i, True)]
    while todo:
        v, up = todo.pop()
        if up:
            if v in seen_up:
                continue
            seen_up.add(v)
        else:
            if v in seen_down:
                continue
            seen_down.add(v)
        if v == j:
            return False
        blocked = v in zset
        if up:
            if not blocked:
                todo.extend((p, True) for p in pa(v))
                todo.extend((c, False) for c in ch(v))
        else:
            if not blocked:
                todo.extend((c, False) for c in ch(v))
            if v in opened:
                todo.extend((p, True) for p in pa(v))
    return True


# -- text format -------------------------------------------------------------


def format_graph(g: CausalGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"edge {u} {v}" for u, v in g.sorted_edges)
    lines.extend(f"latent {u} {v}" for u, v in g.sorted_latents)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> CausalGraph:
    n: int | None = None
    edges: list[tuple[int, int]] = []
    latents: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if n is None:
                if parts[0] != "n" or len(parts) != 2:
                    raise GraphFormatError(f"line {lineno}: expected 'n <int>' header")
                n = int(parts[1])
                if n < 0:
                    raise GraphFormatError(f"line {lineno}: negative node count")
                continue
            kind = parts[0]
            if kind not in ("edge", "latent") or len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
            u, v = int(parts[1]), int(parts[2])
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: bad integer in {raw!r}") from None
        if u == v:
            raise GraphFormatError(f"line {lineno}: endpoints must differ")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: node id out of range")
        (edges if kind == "edge" else latents).append((u, v))
    if n is None:
        raise GraphFormatError("missing 'n <int>' header")
    g = CausalGraph(n, frozenset(edges), frozenset(latents))
    problem = validate(g)
    if problem is not None:
        raise GraphFormatError(problem)
    return g


def read_graph(path) -> CausalGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: CausalGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_graph(g))
