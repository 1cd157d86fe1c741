"""Classical IsoRank baseline: stationary similarity vector by power iteration."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .matching import Alignment, MatchConfig, match_multiway, match_pairwise
from .measure import ConditionalTable
from .netio import Network, neighbors
from .operators import StochasticOperator, kron_support_connected


@dataclass(frozen=True, eq=False)
class SimilarityVector:
    R: np.ndarray
    dims: tuple[int, ...]
    iterations: int
    residual: float
    warnings: tuple[str, ...] = ()

    def as_tensor(self) -> np.ndarray:
        return self.R.reshape(self.dims)


def isorank_similarity(A: StochasticOperator, tol: float = 1e-10,
                       max_iters: int = 100_000) -> SimilarityVector:
    """Fixed point of ``R = A R`` reached from the uniform vector."""
    warnings = ()
    if not kron_support_connected(A.networks):
        warnings = ("Kronecker product graph is disconnected; the stationary vector "
                    "depends on the uniform start",)
    _, R, iters, residual = linalg.damped_iteration(A.matrix, tol, max_iters)
    return SimilarityVector(R=R, dims=A.dims, iterations=iters, residual=float(residual),
                            warnings=warnings)


def eq1_residual(R: SimilarityVector, nets: Sequence[Network]) -> float:
    """Largest violation of the neighbourhood recursion, summed edge by edge:
    ``R[i,j] = sum_{u in N(i)} sum_{v in N(j)} R[u,v] / (|N(u)| |N(v)|)``."""
    G1, G2 = nets
    T = R.as_tensor()
    nb1 = [neighbors(G1, i) for i in range(G1.n)]
    nb2 = [neighbors(G2, j) for j in range(G2.n)]
    worst = 0.0
    for i in range(G1.n):
        for j in range(G2.n):
            total = 0.0
            for u in nb1[i]:
                for v in nb2[j]:
                    total += T[u, v] / (len(nb1[u]) * len(nb2[v]))
            worst = max(worst, abs(T[i, j] - total))
    return worst


def similarity_tables(R: SimilarityVector) -> dict[int, ConditionalTable]:
    """Row-normalize ``R`` per network-0 node; ``R`` itself is the joint mass."""
    T = R.as_tensor()
    rest = tuple(range(1, len(R.dims)))
    tables = {}
    for x in range(R.dims[0]):
        row = np.clip(T[x], 0.0, None)
        if row.sum() <= 0:
            continue
        tables[x] = ConditionalTable.from_raw(np.sqrt(row.ravel()), focus=0, condition_value=x,
                                              rest=rest, rest_shape=row.shape)
    return tables


def baseline_alignment(R: SimilarityVector, nets: Sequence[Network],
                       cfg: MatchConfig = MatchConfig()) -> Alignment:
    tables = similarity_tables(R)
    if len(nets) == 2:
        al = match_pairwise(tables, None, nets, cfg)
    else:
        al = match_multiway([tables], nets, cfg)
    al.warnings.extend(R.warnings)
    return al
