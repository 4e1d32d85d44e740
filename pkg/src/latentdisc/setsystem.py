"""Strongly separating intervention matrices under the linear cost model.

A matrix is stored row-wise as Python ints: bit ``c`` of ``rows[v]`` is set
when node ``v`` belongs to intervention ``c`` (column ``c + 1`` in 1-based
terms).  Strong separation of rows is the same as the rows forming an
antichain of subsets of the columns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

__all__ = [
    "SSMatrix",
    "InfeasibleBudgetError",
    "ApproximationBoundWarning",
    "ceil_log2",
    "is_strongly_separating",
    "binary_encoding_system",
    "cost",
    "validate_costs",
    "ssmatrix_2approx",
    "cascade_decompose",
    "shadow_size",
    "shadow",
    "colex_weightk_prefix",
    "eps_ssmatrix",
    "eps_condition",
    "bruteforce_opt",
    "lym_sum",
    "format_matrix",
    "parse_matrix",
    "format_set_system",
]

CERTIFIED_GAMMA = 66


class InfeasibleBudgetError(ValueError):
    """No strongly separating matrix of the requested shape can be built."""


class ApproximationBoundWarning(UserWarning):
    """The column budget is below the regime where the 2-approximation is proven."""


def ceil_log2(n: int) -> int:
    return max(0, (n - 1).bit_length())


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class SSMatrix:
    n: int
    m: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        limit = 1 << self.m
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError(f"row does not fit in {self.m} columns")

    @classmethod
    def from_array(cls, arr) -> "SSMatrix":
        a = np.asarray(arr, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("expected a 2-d 0/1 array")
        rows = tuple(int(sum(1 << c for c in np.flatnonzero(r))) for r in a)
        return cls(a.shape[0], a.shape[1], rows)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n, self.m), dtype=np.int8)
        for v, r in enumerate(self.rows):
            for c in range(self.m):
                if r >> c & 1:
                    out[v, c] = 1
        return out

    def weights(self) -> list[int]:
        return [popcount(r) for r in self.rows]

    def sets(self) -> list[frozenset[int]]:
        """Column view: the node set of every intervention."""
        return [
            frozenset(v for v, r in enumerate(self.rows) if r >> c & 1) for c in range(self.m)
        ]


def is_strongly_separating(u: SSMatrix) -> bool:
    rows = u.rows
    if any(r == 0 for r in rows):
        return False
    for a, b in combinations(rows, 2):
        if not (a & ~b) or not (b & ~a):
            return False
    return True


def binary_encoding_system(n: int) -> SSMatrix:
    """Two complementary columns per bit of the labels ``1..n`` (mod ``2**bits``)."""
    if n < 2:
        raise ValueError("binary encoding needs n >= 2")
    bits = ceil_log2(n)
    rows = []
    for v in range(n):
        label = (v + 1) % (1 << bits)
        r = 0
        for b in range(bits):
            r |= 1 << (2 * b if label >> b & 1 else 2 * b + 1)
        rows.append(r)
    return SSMatrix(n, 2 * bits, tuple(rows))


def validate_costs(costs: Sequence[float]) -> np.ndarray:
    c = np.asarray(costs, dtype=float)
    if c.ndim != 1:
        raise ValueError("costs must be a flat sequence")
    if not np.all(np.isfinite(c)) or np.any(c <= 0):
        raise ValueError("costs must be finite and strictly positive")
    return c


def cost(u: SSMatrix, costs: Sequence[float]) -> float:
    c = validate_costs(costs)
    if len(c) != u.n:
        raise ValueError(f"{len(c)} costs for {u.n} rows")
    return float(sum(ci * popcount(r) for ci, r in zip(c, u.rows)))


def _order_by_cost(c: np.ndarray) -> list[int]:
    """Nodes by decreasing cost, ties by index."""
    return sorted(range(len(c)), key=lambda v: (-c[v], v))


def _weight_layer(width: int, k: int):
    """All weight-``k`` masks over ``width`` bits in colex (= numeric) order."""
    if k == 0:
        yield 0
        return
    if k > width:
        return
    x = (1 << k) - 1
    limit = 1 << width
    while x < limit:
        yield x
        lowest = x & -x
        ripple = x + lowest
        x = (((ripple ^ x) >> 2) // lowest) | ripple


def ssmatrix_2approx(costs: Sequence[float], m: int) -> SSMatrix:
    """Greedy guess-and-fill construction with row-weight indicator columns.

    For every guess ``a1`` the ``a1`` most expensive nodes get unit vectors;
    the rest receive the lightest unused body vectors in cost order, and a
    body vector of weight ``k`` switches on indicator column ``k`` among the
    last ``ceil(log2 n)`` columns.  The cheapest feasible guess wins.
    """
    c = validate_costs(costs)
    n = len(c)
    if n < 2:
        raise ValueError("need at least two nodes")
    bits = ceil_log2(n)
    if m < CERTIFIED_GAMMA * bits:
        warnings.warn(
            f"m={m} < {CERTIFIED_GAMMA}*ceil(log2 n)={CERTIFIED_GAMMA * bits}; "
            "the factor-2 guarantee is not certified",
            ApproximationBoundWarning,
            stacklevel=2,
        )
    order = _order_by_cost(c)
    best: tuple[float, tuple[int, ...]] | None = None
    for a1 in range(0, 2 * m // 3 + 1):
        if a1 > n:
            break
        rows = [0] * n
        for col, v in enumerate(order[:a1]):
            rows[v] = 1 << col
        rest = order[a1:]
        if rest:
            width = m - bits - a1
            if width < 1:
                continue
            assigned = 0
            for k in range(1, bits + 1):
                for body in _weight_layer(width, k):
                    if assigned == len(rest):
                        break
                    rows[rest[assigned]] = (body << a1) | (1 << (m - bits + k - 1))
                    assigned += 1
                if assigned == len(rest):
                    break
            if assigned < len(rest):
                continue
        total = float(sum(c[v] * popcount(rows[v]) for v in range(n)))
        if best is None or total < best[0]:
            best = (total, tuple(rows))
    if best is None:
        raise InfeasibleBudgetError(
            f"no guess places {n} nodes with body weight <= {bits} in {m} columns"
        )
    return SSMatrix(n, m, best[1])


# -- Kruskal-Katona machinery --------------------------------------------------


def cascade_decompose(t: int, k: int) -> list[tuple[int, int]]:
    """Greedy ``k``-cascade form ``t = sum C(a_q, q)`` as ``[(a_k, k), ...]``."""
    if t < 1 or k < 1:
        raise ValueError("cascade form needs t >= 1 and k >= 1")
    terms = []
    q = k
    while t > 0:
        a = q
        while math.comb(a + 1, q) <= t:
            a += 1
        terms.append((a, q))
        t -= math.comb(a, q)
        q -= 1
    return terms


def shadow_size(t: int, k: int, m: int) -> int:
    """Shadow size of the first ``t`` weight-``k`` vectors in colex order."""
    if k < 1 or not 1 <= t <= math.comb(m, k):
        raise ValueError(f"t={t} outside [1, C({m},{k})]")
    return sum(math.comb(a, q - 1) for a, q in cascade_decompose(t, k))


def colex_weightk_prefix(t: int, k: int, m: int) -> list[int]:
    if not 0 <= t <= math.comb(m, k):
        raise ValueError(f"t={t} outside [0, C({m},{k})]")
    out = []
    for x in _weight_layer(m, k):
        if len(out) == t:
            break
        out.append(x)
    return out


def shadow(vectors) -> set[int]:
    """All vectors obtained by clearing one set bit of some member."""
    out = set()
    for x in vectors:
        y = x
        while y:
            low = y & -y
            out.add(x ^ low)
            y ^= low
    return out


def _layer_index(n: int, m: int) -> int:
    for k in range(1, m // 2 + 1):
        if math.comb(m, k - 1) < n <= math.comb(m, k):
            return k
    raise InfeasibleBudgetError(f"n={n} exceeds C({m},{m // 2}); no antichain is large enough")


def eps_ssmatrix(costs: Sequence[float], m: int) -> SSMatrix:
    """Flat two-layer antichain from colex prefixes, greedily matched to costs.

    Chooses the layer ``k`` with ``C(m,k-1) < n <= C(m,k)``, the fewest
    weight-``k`` colex vectors whose shadow leaves room for the rest in layer
    ``k-1``, then hands the lightest rows to the most expensive nodes.
    """
    c = validate_costs(costs)
    n = len(c)
    if n < 2:
        raise ValueError("need at least two nodes")
    k = _layer_index(n, m)
    lower = math.comb(m, k - 1)
    for t in range(0, n + 1):
        sh = shadow_size(t, k, m) if t else 0
        if t - sh + lower >= n:
            break
    top = colex_weightk_prefix(t, k, m)
    blocked = shadow(top)
    bottom = []
    for x in _weight_layer(m, k - 1):
        if len(bottom) == n - t:
            break
        if x not in blocked:
            bottom.append(x)
    vectors = bottom + top  # ascending weight
    rows = [0] * n
    for v, x in zip(_order_by_cost(c), vectors):
        rows[v] = x
    return SSMatrix(n, m, tuple(rows))


def eps_condition(costs: Sequence[float], m: int, eps: float) -> bool:
    """Cost-spread condition under which ``eps_ssmatrix`` is within ``1 + eps``.

    Costs are rescaled so the cheapest node costs 1.
    """
    c = validate_costs(costs)
    n = len(c)
    k = _layer_index(n, m)
    t = math.floor(k - eps * k / 3)
    c_max = float(c.max() / c.min())
    return c_max <= eps * n / (3 * math.comb(m, t))


# -- exhaustive reference ----------------------------------------------------

BRUTE_MAX_M = 5
BRUTE_MAX_N = 8


@lru_cache(maxsize=None)
def _antichain_profiles(m: int, n: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Every achievable sorted weight profile of an ``n``-element antichain of
    nonzero vectors in ``{0,1}^m``, with one witness antichain each."""
    universe = sorted(range(1, 1 << m), key=lambda x: (popcount(x), x))
    profiles: dict[tuple[int, ...], tuple[int, ...]] = {}
    chosen: list[int] = []

    def extend(start: int) -> None:
        if len(chosen) == n:
            key = tuple(sorted(popcount(x) for x in chosen))
            profiles.setdefault(key, tuple(chosen))
            return
        for idx in range(start, len(universe)):
            x = universe[idx]
            if all((x & ~y) and (y & ~x) for y in chosen):
                chosen.append(x)
                extend(idx + 1)
                chosen.pop()

    extend(0)
    return profiles


def bruteforce_opt(costs: Sequence[float], m: int) -> tuple[SSMatrix, float]:
    """Exact optimum by enumerating antichains (``m <= 5``, ``n <= 8``)."""
    c = validate_costs(costs)
    n = len(c)
    if m > BRUTE_MAX_M or n > BRUTE_MAX_N:
        raise ValueError(f"brute force is capped at m <= {BRUTE_MAX_M}, n <= {BRUTE_MAX_N}")
    if n < 1:
        raise ValueError("need at least one node")
    profiles = _antichain_profiles(m, n)
    if not profiles:
        raise InfeasibleBudgetError(f"no antichain of {n} nonzero vectors in {m} columns")
    order = _order_by_cost(c)
    best_val, best_witness = math.inf, None
    for weights, witness in profiles.items():
        # exchange argument: lightest rows to the most expensive nodes
        val = float(sum(c[v] * w for v, w in zip(order, weights)))
        if val < best_val:
            best_val, best_witness = val, witness
    ranked = sorted(best_witness, key=lambda x: (popcount(x), x))
    rows = [0] * n
    for v, x in zip(order, ranked):
        rows[v] = x
    return SSMatrix(n, m, tuple(rows)), best_val


def lym_sum(u: SSMatrix) -> float:
    """LYM sum over row weights; at most 1 for any antichain."""
    return sum(1 / math.comb(u.m, w) for w in u.weights())


# -- serialisation -----------------------------------------------------------


def format_matrix(u: SSMatrix) -> str:
    lines = [f"{u.n} {u.m}"]
    for r in u.rows:
        lines.append("".join("1" if r >> c & 1 else "0" for c in range(u.m)))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SSMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise ValueError("matrix header must be 'n m'") from None
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"expected {n} rows, found {len(body)}")
    rows = []
    for line in body:
        if len(line) != m or set(line) - {"0", "1"}:
            raise ValueError(f"bad matrix row {line!r}")
        rows.append(sum(1 << c for c, ch in enumerate(line) if ch == "1"))
    return SSMatrix(n, m, tuple(rows))


def format_set_system(u: SSMatrix) -> str:
    lines = []
    for c, members in enumerate(u.sets(), 1):
        lines.append(f"set {c}: " + " ".join(str(v) for v in sorted(members)))
    return "\n".join(lines) + "\n"
