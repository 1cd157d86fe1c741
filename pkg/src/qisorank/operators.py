"""Stochastic, Hermitian and score-augmented operators built from networks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .errors import ParseError, ValidationError
from .linalg import UNITARY_TOL
from .netio import Network

COMMUTE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StochasticOperator:
    """Column-stochastic transition matrix of one network or a Kronecker chain."""

    matrix: np.ndarray
    factors: tuple[np.ndarray, ...]
    networks: tuple[Network, ...]

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    @property
    def is_symmetric(self) -> bool:
        return linalg.is_hermitian(self.matrix)


@dataclass(frozen=True, eq=False)
class HermitianModel:
    """Closest Hermitian part ``H`` and skew part ``S`` of a stochastic ``A``."""

    H: np.ndarray
    S: np.ndarray
    rho_lower: float
    rho_upper: float
    scale_s: float
    source: StochasticOperator | None = None

    @property
    def dim(self) -> int:
        return self.H.shape[0]


@dataclass(frozen=True, eq=False)
class SimilarityOperator:
    base: HermitianModel
    B: np.ndarray | None
    commutator_norm: float
    warnings: tuple[str, ...] = ()

    @property
    def commutes(self) -> bool:
        return self.commutator_norm <= COMMUTE_TOL

    @property
    def approximate(self) -> bool:
        return not self.commutes

    def evolution(self, theta: float = 1.0) -> np.ndarray:
        """``exp(i theta H) exp(i theta B)``, the split form used for simulation."""
        U = linalg.expm_hermitian(self.base.H, theta)
        if self.B is None:
            return U
        return U @ linalg.expm_hermitian(self.B, theta)

    def exact_evolution(self, theta: float = 1.0) -> np.ndarray:
        B = 0 if self.B is None else self.B
        return linalg.expm_hermitian(self.base.H + B, theta)


@dataclass(frozen=True)
class NormalityReport:
    is_normal: bool
    normality_defect: float
    commutator_HS: float
    eig_alignment: float  # NaN unless the matrix is normal


def column_normalize(net: Network) -> StochasticOperator:
    """``A[u, v] = 1/|N(v)|`` for every edge, so each column sums to one."""
    if net.n < 2:
        raise ValidationError(f"network {net.name!r} needs at least 2 nodes")
    deg = net.degrees
    if np.any(deg == 0):
        isolated = [net.nodes[i] for i in np.flatnonzero(deg == 0)]
        raise ValidationError(f"isolated node(s) in {net.name!r}: {isolated}")
    A = net.adjacency.astype(float) / deg[None, :]
    A.setflags(write=False)
    return StochasticOperator(matrix=A, factors=(A,), networks=(net,))


def kron_chain(factors: Sequence[StochasticOperator],
               max_entries: int = linalg.MAX_KRON_ENTRIES) -> StochasticOperator:
    if len(factors) < 2:
        raise ValidationError("kron_chain needs at least two factors")
    mats = tuple(f for op in factors for f in op.factors)
    nets = tuple(n for op in factors for n in op.networks)
    A = reduce(lambda X, Y: linalg.kron(X, Y, max_entries=max_entries), mats)
    A.setflags(write=False)
    return StochasticOperator(matrix=A, factors=mats, networks=nets)


def stochastic_operator(nets: Sequence[Network]) -> StochasticOperator:
    ops = [column_normalize(net) for net in nets]
    return ops[0] if len(ops) == 1 else kron_chain(ops)


def kron_support_connected(nets: Sequence[Network]) -> bool:
    """Whether the Kronecker product graph of ``nets`` is connected.

    A product of connected graphs is connected iff at most one factor is
    bipartite; otherwise the walk operator is reducible and its Perron root
    is degenerate.
    """
    if not all(net.is_connected for net in nets):
        return False
    return sum(net.is_bipartite() for net in nets) <= 1


def hermitian_decompose(A: StochasticOperator | np.ndarray) -> HermitianModel:
    M = A.matrix if isinstance(A, StochasticOperator) else np.asarray(A)
    H = 0.5 * (M + M.conj().T)
    S = 0.5 * (M - M.conj().T)
    col = H.sum(axis=0).real
    return HermitianModel(H=H, S=S, rho_lower=float(col.min()), rho_upper=float(col.max()),
                          scale_s=float(col.max()),
                          source=A if isinstance(A, StochasticOperator) else None)


def _multiset_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.sort(a) - np.sort(b)), initial=0.0))


def normality_report(A: StochasticOperator | np.ndarray) -> NormalityReport:
    """Check normality of ``A`` and, when normal, the properties that follow.

    For a normal matrix the Hermitian and skew parts commute, and the real
    and imaginary parts of the eigenvalues of ``A`` are the spectra of ``H``
    and ``S / i``.
    """
    M = A.matrix if isinstance(A, StochasticOperator) else np.asarray(A)
    model = hermitian_decompose(M)
    H, S = model.H, model.S
    defect = float(np.max(np.abs(M.conj().T @ M - M @ M.conj().T), initial=0.0))
    commutator = float(np.max(np.abs(H @ S - S @ H), initial=0.0))
    is_normal = defect <= UNITARY_TOL
    alignment = float("nan")
    if is_normal:
        w = linalg.eig_oracle(M).eigenvalues
        wh = np.linalg.eigvalsh(H)
        ws = np.linalg.eigvalsh(-1j * S)
        alignment = max(_multiset_gap(w.real, wh), _multiset_gap(w.imag, ws))
    return NormalityReport(is_normal, defect, commutator, alignment)


def attach_scores(model: HermitianModel, B: np.ndarray | None) -> SimilarityOperator:
    """Pair a Hermitian model with an extra Hermitian score operator ``B``.

    The commutator ``[H, B]`` is measured, never assumed. When it is not
    zero, the split evolution ``exp(iH) exp(iB)`` is only an approximation of
    ``exp(i(H + B))`` and the returned operator carries a warning.
    """
    if B is None:
        return SimilarityOperator(base=model, B=None, commutator_norm=0.0)
    B = np.asarray(B)
    if B.shape != model.H.shape:
        raise ValidationError(f"score operator shape {B.shape} does not match {model.H.shape}")
    if not linalg.is_hermitian(B):
        raise ValidationError("score operator B must be Hermitian")
    H = model.H
    norm = float(np.max(np.abs(H @ B - B @ H), initial=0.0))
    warnings = ()
    if norm > COMMUTE_TOL:
        warnings = (f"approximate evolution: [H, B] has max-norm {norm:.3e}; "
                    "exp(iH)exp(iB) differs from exp(i(H+B))",)
    return SimilarityOperator(base=model, B=B, commutator_norm=norm, warnings=warnings)


def scale_of(model) -> float:
    if isinstance(model, StochasticOperator):
        return 1.0
    if isinstance(model, SimilarityOperator):
        return model.base.scale_s
    if isinstance(model, HermitianModel):
        return model.scale_s
    return float(model)


def phase_map(lam: float, model) -> float:
    """Map an eigenvalue in ``[-s, s]`` to a phase in ``[0, 0.5]``.

    ``s`` is 1 for an exact stochastic operator, so the Perron eigenvalue 1
    lands exactly on the dyadic phase 0.5.
    """
    s = scale_of(model)
    if abs(lam) > s * (1 + 1e-12):
        raise ValidationError(f"eigenvalue {lam} outside [-{s}, {s}]")
    return (lam / s + 1.0) / 4.0


def inverse_phase_map(phi: float, model) -> float:
    return (4.0 * phi - 1.0) * scale_of(model)


def parse_scores(text: str, net1: Network, net2: Network) -> np.ndarray:
    """Diagonal score operator on the ``net1 x net2`` Kronecker index.

    Each line reads ``label1<TAB>label2<TAB>score``; pairs not listed score 0.
    """
    n2 = net2.n
    diag = np.zeros(net1.n * n2)
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        if len(fields) != 3:
            raise ParseError("expected label1, label2, score", lineno)
        a, b, value = fields
        if a not in net1.index:
            raise ValidationError(f"line {lineno}: unknown node {a!r} in {net1.name!r}")
        if b not in net2.index:
            raise ValidationError(f"line {lineno}: unknown node {b!r} in {net2.name!r}")
        try:
            diag[net1.index[a] * n2 + net2.index[b]] = float(value)
        except ValueError:
            raise ParseError(f"bad score {value!r}", lineno) from None
    return np.diag(diag)


def read_scores(path: str | Path, net1: Network, net2: Network) -> np.ndarray:
    return parse_scores(Path(path).read_text(encoding="utf-8"), net1, net2)
