"""Graph-backed conditional-independence and do-see oracles with query accounting."""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .graph import CausalGraph, MutilationSpec, _check_node, d_separated

__all__ = ["CIResult", "DTResult", "OracleStats", "Oracle", "ci_test", "dt_test"]


class CIResult(str, Enum):
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"


class DTResult(str, Enum):
    EQUAL = "equal"
    DIFFERENT = "different"


DoSet = tuple[int, ...]


@dataclass
class OracleStats:
    """Running counters.  ``interventions`` holds every distinct non-empty do-set."""

    ci_queries: int = 0
    dt_queries: int = 0
    interventions: set[DoSet] = field(default_factory=set)
    by_stage: dict[str, set[DoSet]] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)
    _stage: str | None = field(default=None, repr=False, compare=False)

    def _record(self, kind: str, do_sets: Iterable[frozenset[int]]) -> None:
        with self._lock:
            if kind == "ci":
                self.ci_queries += 1
            else:
                self.dt_queries += 1
            for s in do_sets:
                if not s:
                    continue  # the observational regime is free
                key = tuple(sorted(s))
                self.interventions.add(key)
                if self._stage is not None:
                    self.by_stage.setdefault(self._stage, set()).add(key)

    @property
    def distinct_interventions(self) -> int:
        return len(self.interventions)

    def stage_count(self, name: str) -> int:
        return len(self.by_stage.get(name, ()))

    def total_linear_cost(self, costs: Sequence[float]) -> float:
        return float(sum(costs[v] for s in self.interventions for v in s))

    def as_record(self, costs: Sequence[float] | None = None) -> dict[str, float]:
        rec: dict[str, float] = {
            "ci_queries": self.ci_queries,
            "dt_queries": self.dt_queries,
            "distinct_interventions": self.distinct_interventions,
        }
        if costs is not None:
            rec["total_linear_cost"] = self.total_linear_cost(costs)
        return rec


class Oracle:
    """Answers CI and do-see queries about a hidden causal graph."""

    def __init__(self, graph: CausalGraph) -> None:
        self.__graph = graph
        self.stats = OracleStats()

    @property
    def n(self) -> int:
        return self.__graph.n

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """Attribute do-sets queried inside the block to ``name``."""
        prev = self.stats._stage
        self.stats._stage = name
        self.stats.by_stage.setdefault(name, set())
        try:
            yield
        finally:
            self.stats._stage = prev

    def _nodes(self, vs: Iterable[int]) -> frozenset[int]:
        out = frozenset(int(v) for v in vs)
        for v in out:
            _check_node(self.__graph, v)
        return out

    def ci_test(self, i: int, j: int, z: Iterable[int] = (), s: Iterable[int] = ()) -> CIResult:
        g = self.__graph
        _check_node(g, i)
        _check_node(g, j)
        if i == j:
            raise ValueError("ci_test needs two distinct nodes")
        zs, ss = self._nodes(z), self._nodes(s)
        if i in zs or j in zs:
            raise ValueError("conditioning set must not contain the tested nodes")
        self.stats._record("ci", [ss])
        cond = zs | (ss - {i, j})
        sep = d_separated(g, i, j, cond, MutilationSpec(cut_incoming=ss))
        return CIResult.INDEPENDENT if sep else CIResult.DEPENDENT

    def dt_test(self, j: int, i: int, z: Iterable[int] = (), s: Iterable[int] = ()) -> DTResult:
        """Is ``P(v_j | v_i, Z, do(S))`` equal to ``P(v_j | Z, do(S + i))``?"""
        g = self.__graph
        _check_node(g, i)
        _check_node(g, j)
        if i == j:
            raise ValueError("dt_test needs two distinct nodes")
        zs, ss = self._nodes(z), self._nodes(s)
        if i in ss:
            raise ValueError("the exchanged node must not already be intervened on")
        if i in zs or j in zs:
            raise ValueError("conditioning set must not contain the tested nodes")
        if j in ss:
            raise ValueError("the response node must not be intervened on")
        self.stats._record("dt", [ss, ss | {i}])
        mut = MutilationSpec(cut_incoming=ss, cut_outgoing=frozenset({i}))
        sep = d_separated(g, i, j, zs | ss, mut)
        return DTResult.EQUAL if sep else DTResult.DIFFERENT


def ci_test(o: Oracle, i: int, j: int, z: Iterable[int] = (), s: Iterable[int] = ()) -> CIResult:
    return o.ci_test(i, j, z, s)


def dt_test(o: Oracle, j: int, i: int, z: Iterable[int] = (), s: Iterable[int] = ()) -> DTResult:
    return o.dt_test(j, i, z, s)
