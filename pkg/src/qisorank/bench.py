"""Wall-time scaling of joint versus per-factor simulation.

Without a score operator the stochastic model factorizes, so phase
estimation can be run on each network separately and the eigenvectors
multiplied. The joint run works on a statevector whose size is the product
of the factor sizes; the per-factor runs only on their sum. These timings
measure that gap on a classical simulator; they say nothing about quantum
hardware.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, asdict
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .netio import Network, from_edges
from .operators import stochastic_operator
from .pea import RegisterLayout, recovered_eigenvector, run_pea


def cycle_with_chord(n: int, name: str = "G") -> Network:
    """Cycle on ``n`` nodes plus the chord 0-2.

    The chord closes a triangle, so the graph is never bipartite and any
    product of such graphs stays connected.
    """
    if n < 3:
        raise ValueError("cycle_with_chord needs n >= 3")
    labels = [f"{name}{i}" for i in range(n)]
    edges = [(labels[i], labels[(i + 1) % n]) for i in range(n)]
    if n > 3:
        edges.append((labels[0], labels[2]))
    return from_edges(edges, name=name, nodes=labels)


@dataclass(frozen=True)
class BenchRow:
    size: int
    m: int
    joint_dim: int
    factor_dim_sum: int
    joint_seconds: float
    per_factor_seconds: float
    classical_seconds: float

    @property
    def ratio(self) -> float:
        return self.joint_seconds / self.per_factor_seconds


def _best_time(fn: Callable[[], object], repetitions: int) -> float:
    best = math.inf
    for _ in range(repetitions):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _joint(nets, t):
    return recovered_eigenvector(run_pea(stochastic_operator(nets), t=t), l1=True)


def _per_factor(nets, t):
    vecs = [recovered_eigenvector(run_pea(stochastic_operator([net]), t=t), l1=True)
            for net in nets]
    out = vecs[0]
    for v in vecs[1:]:
        out = np.kron(out, v)
    return out


def _classical(nets):
    return linalg.power_iteration(stochastic_operator(nets).matrix)[1]


def run_bench(sizes: Sequence[int] = (4, 8, 16), m: int = 2, repetitions: int = 3,
              t: int = 8) -> list[BenchRow]:
    """Time joint, per-factor and classical runs on ``m`` copies of
    :func:`cycle_with_chord` for each factor size."""
    rows = []
    for n in sizes:
        nets = [cycle_with_chord(n, name=chr(ord("a") + k)) for k in range(m)]
        RegisterLayout(t, tuple([n] * m))  # size check before any work
        rows.append(BenchRow(
            size=n,
            m=m,
            joint_dim=n**m,
            factor_dim_sum=n * m,
            joint_seconds=_best_time(lambda: _joint(nets, t), repetitions),
            per_factor_seconds=_best_time(lambda: _per_factor(nets, t), repetitions),
            classical_seconds=_best_time(lambda: _classical(nets), repetitions),
        ))
    return rows


def separable_gap(size: int, m: int = 2, t: int = 8) -> float:
    """L-infinity gap between the joint and the per-factor eigenvector."""
    nets = [cycle_with_chord(size, name=chr(ord("a") + k)) for k in range(m)]
    return float(np.max(np.abs(_joint(nets, t) - _per_factor(nets, t))))


def format_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    fields = list(asdict(rows[0])) if rows else list(BenchRow.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields + ["ratio"], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**asdict(row), "ratio": row.ratio})
    return buf.getvalue()
