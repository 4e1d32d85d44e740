"""Seeded tau-versus-degree sweeps over random graph families."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .generators import GeneratorSpec, generate, inject_latents
from .graph import max_degree
from .pcollider import tau

__all__ = ["ExperimentRow", "run_experiment", "summary_rows", "rows_to_csv", "write_csv"]


@dataclass(frozen=True)
class ExperimentRow:
    model: str
    n: int
    seed: int | str
    tau: float
    max_degree: float
    d2_over_n: float
    num_latents: float
    runtime_ms: int

    @property
    def is_summary(self) -> bool:
        return isinstance(self.seed, str)


def _one(spec: GeneratorSpec, latent_fraction: float, timing: bool) -> ExperimentRow:
    start = time.perf_counter()
    g = inject_latents(generate(spec), latent_fraction, seed=spec.seed)
    t = tau(g)
    d = max_degree(g)
    elapsed = round((time.perf_counter() - start) * 1000) if timing else 0
    return ExperimentRow(spec.model, spec.n, spec.seed, t, d, d * d / spec.n, len(g.latents), elapsed)


def summary_rows(rows: Sequence[ExperimentRow]) -> list[ExperimentRow]:
    """Mean and standard-deviation rows; the mean row's ``d2_over_n`` uses the mean degree."""
    first = rows[0]
    taus = np.array([r.tau for r in rows], dtype=float)
    ds = np.array([r.max_degree for r in rows], dtype=float)
    lat = np.array([r.num_latents for r in rows], dtype=float)
    ms = np.array([r.runtime_ms for r in rows], dtype=float)
    ddof = 1 if len(rows) > 1 else 0
    mean_d = float(ds.mean())
    mean = ExperimentRow(
        first.model, first.n, "mean", float(taus.mean()), mean_d, mean_d**2 / first.n,
        float(lat.mean()), int(round(ms.mean())),
    )
    std = ExperimentRow(
        first.model, first.n, "std", float(taus.std(ddof=ddof)), float(ds.std(ddof=ddof)),
        float((ds**2 / first.n).std(ddof=ddof)), float(lat.std(ddof=ddof)),
        int(round(ms.std(ddof=ddof))),
    )
    return [mean, std]


def run_experiment(
    specs: Iterable[GeneratorSpec],
    repeats: int = 10,
    latent_fraction: float = 0.05,
    timing: bool = True,
) -> list[ExperimentRow]:
    """For each spec run ``repeats`` seeds (``spec.seed``, ``spec.seed + 1``, ...)
    followed by its mean and std rows."""
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    out: list[ExperimentRow] = []
    for spec in specs:
        block = []
        for r in range(repeats):
            seeded = GeneratorSpec(spec.model, spec.n, spec.c, spec.seed + r, spec.gamma, spec.n1, spec.n2)
            block.append(_one(seeded, latent_fraction, timing))
        out.extend(block)
        out.extend(summary_rows(block))
    return out


def _cell(x) -> str:
    if isinstance(x, float):
        return str(int(x)) if x.is_integer() else repr(x)
    return str(x)


def rows_to_csv(rows: Iterable[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f.name for f in fields(ExperimentRow)])
    for row in rows:
        w.writerow([_cell(x) for x in astuple(row)])
    return buf.getvalue()


def write_csv(rows: Iterable[ExperimentRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
