"""p-colliders: colliders between a pair whose descendants reach a parent of the pair.

``k`` is a p-collider for ``(i, j)`` when some path ``i ... -> k <- ... j``
exists in the expanded graph (latents may be interior nodes) and ``k`` is an
observable ancestor of ``i`` or ``j`` (equivalently ``k`` is, or reaches, a
parent of one of them).
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

import networkx as nx

from .graph import CausalGraph, _check_node

__all__ = [
    "collider_path_exists",
    "is_pcollider",
    "p_colliders",
    "p_colliders_bruteforce",
    "pcollider_table",
    "tau",
    "BRUTEFORCE_CAP",
]

BRUTEFORCE_CAP = 12


def _distinct(g: CausalGraph, i: int, j: int, k: int) -> None:
    for v in (i, j, k):
        _check_node(g, v)
    if len({i, j, k}) != 3:
        raise ValueError("p-collider queries need three distinct nodes")


def collider_path_exists(g: CausalGraph, i: int, j: int, k: int) -> bool:
    """Is there a simple path ``i ... -> k <- ... j``?  Decided by max-flow.

    Every node other than ``k`` is split into ``in -> out`` with capacity one.
    Edges into ``k`` are kept one-way, ``k``'s own out-edges are dropped, and
    all remaining edges may be walked in either direction.  A super-source
    feeds ``i`` and ``j`` one unit each; flow 2 means two vertex-disjoint
    half-paths both arriving at ``k`` through an arrowhead.
    """
    _distinct(g, i, j, k)
    size = g.size
    source, sink = 2 * size, 2 * size + 1
    cap: dict[int, dict[int, int]] = {}

    def arc(a: int, b: int) -> None:
        cap.setdefault(a, {})
        cap.setdefault(b, {})
        cap[a][b] = cap[a].get(b, 0) + 1
        cap[b].setdefault(a, 0)

    for w in range(size):
        if w != k:
            arc(2 * w, 2 * w + 1)
    for a in range(size):
        for b in g.expanded_children[a]:
            if a == k:
                continue
            if b == k:
                arc(2 * a + 1, sink)
            else:
                arc(2 * a + 1, 2 * b)
                arc(2 * b + 1, 2 * a)
    arc(source, 2 * i)
    arc(source, 2 * j)

    flow = 0
    while flow < 2:
        prev = {source: source}
        queue = deque([source])
        while queue and sink not in prev:
            a = queue.popleft()
            for b, c in cap[a].items():
                if c > 0 and b not in prev:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            break
        b = sink
        while b != source:
            a = prev[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1
    return flow >= 2


def _ancestor_of_pair(g: CausalGraph, i: int, j: int, k: int) -> bool:
    anc = g.ancestor_sets
    return k in anc[i] or k in anc[j]


def is_pcollider(g: CausalGraph, i: int, j: int, k: int) -> bool:
    _distinct(g, i, j, k)
    # The reachability half is cheap, so it gates the flow computation.
    return _ancestor_of_pair(g, i, j, k) and collider_path_exists(g, i, j, k)


def p_colliders(g: CausalGraph, i: int, j: int) -> frozenset[int]:
    _check_node(g, i)
    _check_node(g, j)
    if i == j:
        raise ValueError("p_colliders needs two distinct nodes")
    candidates = (g.ancestor_sets[i] | g.ancestor_sets[j]) - {i, j}
    return frozenset(k for k in candidates if collider_path_exists(g, i, j, k))


def p_colliders_bruteforce(
    g: CausalGraph, i: int, j: int, cap: int = BRUTEFORCE_CAP
) -> frozenset[int]:
    """Reference implementation: enumerate every simple path between ``i`` and ``j``."""
    _check_node(g, i)
    _check_node(g, j)
    if i == j:
        raise ValueError("p_colliders needs two distinct nodes")
    if g.size > cap:
        raise ValueError(f"graph has {g.size} nodes incl. latents, brute force cap is {cap}")
    parents = [set(p) for p in g.expanded_parents]
    nbrs = [set(p) | set(c) for p, c in zip(g.expanded_parents, g.expanded_children)]
    pa_i, pa_j = g.obs_parents[i], g.obs_parents[j]
    targets = pa_i | pa_j
    found: set[int] = set()

    def qualifies(k: int) -> bool:
        return k in targets or bool(g.descendant_sets[k] & targets)

    path = [i]
    on_path = {i}

    def walk(v: int) -> None:
        for w in nbrs[v]:
            if w in on_path:
                continue
            if w == j:
                full = path + [j]
                for pos in range(1, len(full) - 1):
                    k = full[pos]
                    if (
                        k < g.n
                        and full[pos - 1] in parents[k]
                        and full[pos + 1] in parents[k]
                        and qualifies(k)
                    ):
                        found.add(k)
                continue
            path.append(w)
            on_path.add(w)
            walk(w)
            path.pop()
            on_path.discard(w)

    walk(i)
    return frozenset(found)


def _separation_sets(graph: nx.Graph, root) -> dict[int, frozenset]:
    """For each vertex ``x`` connected to ``root``: ``{x}`` plus every cut vertex
    whose removal disconnects ``x`` from ``root``."""
    blocks = [frozenset(b) for b in nx.biconnected_components(graph)]
    membership: dict = {}
    for idx, block in enumerate(blocks):
        for v in block:
            membership.setdefault(v, []).append(idx)
    tree = nx.Graph()
    for v, idxs in membership.items():
        if len(idxs) > 1 or v == root:
            for idx in idxs:
                tree.add_edge(("c", v), ("b", idx))
    for idx in range(len(blocks)):
        tree.add_node(("b", idx))
    if root not in membership:
        return {}
    start = ("c", root)
    parent = {start: None}
    order = [start]
    for a, b in nx.bfs_edges(tree, start):
        parent[b] = a
        order.append(b)
    # cut vertices strictly above each tree node, excluding the root itself
    above: dict = {start: frozenset()}
    for node in order[1:]:
        up = parent[node]
        extra = {up[1]} if up[0] == "c" and up[1] != root else set()
        above[node] = above[up] | extra
    out: dict[int, frozenset] = {}
    for v, idxs in membership.items():
        if v == root:
            continue
        node = ("c", v) if len(idxs) > 1 else ("b", idxs[0])
        if node in above:
            out[v] = above[node] | {v}
    return out


def pcollider_table(g: CausalGraph) -> dict[tuple[int, int], frozenset[int]]:
    """``P_ij`` for every unordered pair ``i < j`` in one sweep per candidate ``k``.

    For fixed ``k`` the flow question reduces to vertex connectivity: drop
    ``k``, attach a sink to its in-neighbours, and two disjoint arrowhead
    paths from ``{i, j}`` exist iff no single vertex separates both ``i`` and
    ``j`` from the sink.  Block-cut trees answer that for all pairs at once.
    """
    n = g.n
    table: dict[tuple[int, int], set[int]] = {p: set() for p in combinations(range(n), 2)}
    base = nx.Graph()
    base.add_nodes_from(range(g.size))
    for a in range(g.size):
        for b in g.expanded_children[a]:
            base.add_edge(a, b)
    anc = g.ancestor_sets
    sink = -1
    for k in range(n):
        # pairs for which k passes the ancestor test
        near = [v for v in range(n) if v != k and k in anc[v]]
        if not near or len(g.expanded_parents[k]) < 2:
            continue
        h = base.copy()
        h.remove_node(k)
        h.add_edges_from((sink, p) for p in g.expanded_parents[k])
        sep = _separation_sets(h, sink)
        near_set = set(near)
        for i in range(n):
            if i == k or i not in sep:
                continue
            si = sep[i]
            for j in range(i + 1, n):
                if j == k or j not in sep:
                    continue
                if i not in near_set and j not in near_set:
                    continue
                if not (si & sep[j]):
                    table[(i, j)].add(k)
    return {p: frozenset(s) for p, s in table.items()}


def tau(g: CausalGraph) -> int:
    """Maximum number of p-colliders over all pairs of observables."""
    if g.n < 3:
        return 0
    return max((len(s) for s in pcollider_table(g).values()), default=0)
