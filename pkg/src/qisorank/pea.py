"""Statevector simulation of phase estimation on network operators.

The working state has a phase register of ``t`` qubits followed by one
register per network. Each network register is padded to a power of two;
padding states always carry zero amplitude.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from . import linalg
from .errors import SizeError, ValidationError
from .linalg import COMPARE_TOL
from .operators import (HermitianModel, SimilarityOperator, StochasticOperator,
                        inverse_phase_map, phase_map, scale_of)

DEFAULT_MAX_STATE = 2**22
DEFAULT_T = 8
NORM_TOL = 1e-10


def max_state_size() -> int:
    value = os.environ.get("QISORANK_MAX_STATE")
    return int(value) if value else DEFAULT_MAX_STATE


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


@dataclass(frozen=True)
class RegisterLayout:
    t: int
    network_dims: tuple[int, ...]

    def __post_init__(self):
        if self.t < 0:
            raise ValidationError("phase register size must be non-negative")
        if any(d < 1 for d in self.network_dims):
            raise ValidationError("network registers need at least one basis state")
        cap = max_state_size()
        if self.total_dim > cap:
            raise SizeError(f"state dimension {self.total_dim} exceeds cap {cap} "
                            "(set QISORANK_MAX_STATE to raise it)")

    @property
    def padded_dims(self) -> tuple[int, ...]:
        return tuple(_next_pow2(d) for d in self.network_dims)

    @property
    def phase_dim(self) -> int:
        return 2**self.t

    @property
    def network_dim(self) -> int:
        return math.prod(self.padded_dims)

    @property
    def n_valid(self) -> int:
        return math.prod(self.network_dims)

    @property
    def total_dim(self) -> int:
        return self.phase_dim * self.network_dim

    @property
    def registers(self) -> tuple:
        """Register ids in storage order: ``"phase"`` (if any) then 0..m-1."""
        nets = tuple(range(len(self.network_dims)))
        return (("phase",) + nets) if self.t else nets

    @property
    def shape(self) -> tuple[int, ...]:
        return ((self.phase_dim,) if self.t else ()) + self.padded_dims

    def size_of(self, register) -> int:
        if register == "phase":
            if not self.t:
                raise ValidationError("layout has no phase register")
            return self.phase_dim
        if not isinstance(register, (int, np.integer)) or not 0 <= register < len(self.network_dims):
            raise ValidationError(f"unknown register {register!r}")
        return self.network_dims[register]

    def axis_of(self, register) -> int:
        self.size_of(register)
        return self.registers.index(register)

    def network_only(self) -> RegisterLayout:
        return RegisterLayout(0, self.network_dims)

    @cached_property
    def valid_index(self) -> np.ndarray:
        """Flat padded-network indices of the valid node tuples, row-major."""
        grids = np.indices(self.network_dims).reshape(len(self.network_dims), -1)
        return np.ravel_multi_index(grids, self.padded_dims)


@dataclass(frozen=True, eq=False)
class QuantumState:
    layout: RegisterLayout
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        if self.amplitudes.shape != (self.layout.total_dim,):
            raise ValidationError("amplitude vector does not match layout")
        if self.normalized:
            norm = np.linalg.norm(self.amplitudes)
            if abs(norm - 1.0) > NORM_TOL:
                raise ValidationError(f"state norm {norm} is not 1")

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.shape)

    def valid_tensor(self) -> np.ndarray:
        """Amplitudes with padding stripped, shape ``(2**t?, |V_1|, ..., |V_m|)``."""
        return self.tensor[tuple(slice(0, n) for n in
                                 ((self.layout.phase_dim,) if self.layout.t else ())
                                 + self.layout.network_dims)]

    def network_vector(self) -> np.ndarray:
        if self.layout.t:
            raise ValidationError("state still carries a phase register")
        return self.amplitudes[self.layout.valid_index]

    @classmethod
    def from_network_vector(cls, vector, network_dims) -> QuantumState:
        layout = RegisterLayout(0, tuple(network_dims))
        amps = np.zeros(layout.total_dim, dtype=complex)
        amps[layout.valid_index] = vector
        return cls(layout, amps)


def equal_superposition(layout: RegisterLayout) -> QuantumState:
    amps = np.zeros((layout.phase_dim, layout.network_dim), dtype=complex)
    amps[0, layout.valid_index] = 1.0 / math.sqrt(layout.n_valid)
    return QuantumState(layout, amps.ravel())


# --- phase-register gates -------------------------------------------------

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def _apply_h(psi: np.ndarray, q: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(_HADAMARD, psi, axes=([1], [q])), 0, q)


def _apply_cphase(psi: np.ndarray, q1: int, q2: int, angle: float) -> np.ndarray:
    idx = [slice(None)] * psi.ndim
    idx[q1] = idx[q2] = 1
    psi[tuple(idx)] *= np.exp(1j * angle)
    return psi


def _as_qubits(rows: np.ndarray) -> tuple[np.ndarray, int]:
    M = rows.shape[0]
    t = M.bit_length() - 1
    if M != 1 << t:
        raise ValidationError("phase register length must be a power of two")
    return rows.reshape((2,) * t + rows.shape[1:]).astype(complex), t


def qft(rows: np.ndarray) -> np.ndarray:
    """Quantum Fourier transform along axis 0 (qubit 0 is most significant).

    Gate sequence: Hadamards and controlled phases, then a bit reversal.
    Maps ``|x>`` to ``sum_y exp(2 pi i x y / M) |y> / sqrt(M)``.
    """
    psi, t = _as_qubits(np.asarray(rows))
    for j in range(t):
        psi = _apply_h(psi, j)
        for k in range(j + 1, t):
            psi = _apply_cphase(psi, j, k, 2 * np.pi / 2 ** (k - j + 1))
    for j in range(t // 2):
        psi = np.swapaxes(psi, j, t - 1 - j)
    return psi.reshape(rows.shape)


def inverse_qft(rows: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`qft`: the gates in reverse order with conjugate phases."""
    psi, t = _as_qubits(np.asarray(rows))
    for j in range(t // 2):
        psi = np.swapaxes(psi, j, t - 1 - j)
    for j in reversed(range(t)):
        for k in reversed(range(j + 1, t)):
            psi = _apply_cphase(psi, j, k, -2 * np.pi / 2 ** (k - j + 1))
        psi = _apply_h(psi, j)
    return np.ascontiguousarray(psi).reshape(rows.shape)


def _controlled_powers(psi: np.ndarray, phases: np.ndarray, t: int) -> np.ndarray:
    # Qubit j controls U^(2^(t-1-j)); U is diagonal in the eigenbasis, so its
    # powers are phase multiples, reduced mod 1 before exponentiating.
    for j in range(t):
        power = 2 ** (t - 1 - j)
        idx = [slice(None)] * psi.ndim
        idx[j] = 1
        psi[tuple(idx)] *= np.exp(2j * np.pi * np.mod(phases * power, 1.0))
    return psi


# --- eigencomponents of the evolution --------------------------------------

@dataclass
class _Spectrum:
    phases: np.ndarray      # eigenphase of each component
    vectors: np.ndarray     # N x K, unit columns
    amps: np.ndarray        # input amplitude on each component
    principal: np.ndarray   # boolean mask
    unitary: bool
    warnings: list = field(default_factory=list)


def _uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / math.sqrt(n))


def _hermitian_spectrum(G: np.ndarray) -> _Spectrum:
    es = linalg.eig_oracle(G)
    w = es.eigenvalues.real
    V = es.eigenvectors
    amps = V.conj().T @ _uniform(G.shape[0])
    principal = w >= w[0] - COMPARE_TOL
    return _Spectrum(w, V, amps, principal, unitary=True)


def _stochastic_spectrum(A: StochasticOperator) -> _Spectrum:
    if A.is_symmetric:
        return _hermitian_spectrum((A.matrix + np.eye(A.dim)) / 4.0)
    # Non-normal A: split the uniform input along A's eigenspaces with the
    # spectral projectors and weight each piece by its overlap with the
    # uniform vector. Every non-Perron piece sums to zero, so its weight
    # vanishes.
    w, V, W = linalg.diagonalize(A.matrix)
    u = _uniform(A.dim)
    lams, vecs, amps = [], [], []
    for group in linalg.eigen_clusters(w):
        piece = V[:, group] @ (W[group] @ u)
        norm = np.linalg.norm(piece)
        if norm < 1e-14:
            continue
        piece = piece / norm
        lams.append(w[group[0]].real)
        vecs.append(piece)
        amps.append(np.vdot(piece, u))
    amps = np.asarray(amps)
    amps = amps / np.linalg.norm(amps)
    lams = np.asarray(lams)
    phases = np.array([phase_map(min(max(x, -1.0), 1.0), A) for x in lams])
    principal = lams >= lams.max() - COMPARE_TOL
    return _Spectrum(phases, np.column_stack(vecs), amps, principal, unitary=False,
                     warnings=["non-normal stochastic operator: eigencomponents weighted "
                               "by their overlap with the equal superposition"])


def _spectrum(model) -> _Spectrum:
    if isinstance(model, StochasticOperator):
        return _stochastic_spectrum(model)
    if isinstance(model, HermitianModel):
        model = SimilarityOperator(base=model, B=None, commutator_norm=0.0)
    if not isinstance(model, SimilarityOperator):
        raise ValidationError(f"cannot run phase estimation on {type(model).__name__}")
    base, s = model.base, model.base.scale_s
    G = (base.H / s + np.eye(base.dim)) / 4.0
    if model.B is None:
        return _hermitian_spectrum(G)
    GB = model.B / (4.0 * s)
    if model.commutes:
        spectrum = _hermitian_spectrum(G + GB)
        spectrum.warnings.extend(model.warnings)
        return spectrum
    U = linalg.expm_hermitian(G, 2 * np.pi) @ linalg.expm_hermitian(GB, 2 * np.pi)
    T, Z = scipy.linalg.schur(U, output="complex")
    phases = np.mod(np.angle(np.diag(T)) / (2 * np.pi), 1.0)
    amps = Z.conj().T @ _uniform(base.dim)
    weight = np.abs(amps) ** 2
    principal = np.zeros(len(amps), dtype=bool)
    principal[np.argmax(weight)] = True
    return _Spectrum(phases, Z, amps, principal, unitary=True, warnings=list(model.warnings))


def _network_dims(model) -> tuple[int, ...]:
    if isinstance(model, SimilarityOperator):
        model = model.base
    if isinstance(model, HermitianModel):
        if model.source is not None:
            return model.source.dims
        return (model.dim,)
    return model.dims


# --- phase estimation ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PeaOutcome:
    phase_distribution: np.ndarray
    peak_bin: int
    recovered_eigenvalue: float
    post_state: QuantumState
    success_probability: float
    t: int
    mode: str
    final_state: QuantumState
    counts: np.ndarray | None = None
    warnings: tuple[str, ...] = ()

    @property
    def estimated_phase(self) -> float:
        return self.peak_bin / 2**self.t


def _circular_gap(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def run_pea(model, t: int = DEFAULT_T, mode: str = "exact", shots: int = 1024,
            seed: int = 0) -> PeaOutcome:
    """Simulate phase estimation from the equal-superposition input.

    ``model`` selects the evolution:

    * ``StochasticOperator``: exact-stochastic analysis with ``s = 1``, so the
      Perron eigenvalue sits on the dyadic phase 0.5;
    * ``HermitianModel``: ``U = exp(2 pi i (H/s + I)/4)``;
    * ``SimilarityOperator``: as above times ``exp(2 pi i B/(4s))``.

    In ``"sampled"`` mode ``shots`` phase readouts are drawn with ``seed``;
    the post-measurement state is still the analytic one at the empirical mode.
    """
    if t < 2:
        raise ValidationError("phase register needs t >= 2 qubits")
    if mode not in ("exact", "sampled"):
        raise ValidationError(f"unknown mode {mode!r}")
    if mode == "sampled" and shots < 1:
        raise ValidationError("sampled mode needs shots >= 1")
    dims = _network_dims(model)
    layout = RegisterLayout(t, dims)
    initial = equal_superposition(layout)
    spectrum = _spectrum(model)
    M = layout.phase_dim

    # Phase register starts in |0>; network register in eigen-coordinates.
    coeff = np.zeros((M, len(spectrum.amps)), dtype=complex)
    coeff[0] = spectrum.amps
    psi = coeff.reshape((2,) * t + (len(spectrum.amps),))
    for j in range(t):
        psi = _apply_h(psi, j)
    psi = _controlled_powers(np.ascontiguousarray(psi), spectrum.phases, t)
    coeff = inverse_qft(psi.reshape(M, -1))

    valid = coeff @ spectrum.vectors.T  # M x N, back in the node-tuple basis
    weights = np.sum(np.abs(valid) ** 2, axis=1)
    total = weights.sum()
    warnings = list(spectrum.warnings)
    if spectrum.unitary and abs(total - np.linalg.norm(initial.amplitudes) ** 2) > 1e-9:
        warnings.append(f"norm drift {abs(total - 1.0):.2e} during evolution")
    valid = valid / math.sqrt(total)
    distribution = weights / total

    counts = None
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        counts = rng.multinomial(shots, distribution)
        peak = int(np.argmax(counts))
        reported = counts / shots
    else:
        peak = int(np.argmax(distribution))
        reported = distribution

    principal_phase = spectrum.phases[spectrum.principal][0]
    others = spectrum.phases[~spectrum.principal]
    if others.size:
        gap = min(_circular_gap(principal_phase, p) for p in others)
        if gap * M < 2:
            warnings.append(f"t={t} resolves the principal phase from its nearest "
                            f"neighbour by only {gap * M:.2f} bins")

    full = np.zeros((M, layout.network_dim), dtype=complex)
    full[:, layout.valid_index] = valid
    final_state = QuantumState(layout, full.ravel())
    row = valid[peak]
    post = QuantumState.from_network_vector(row / np.linalg.norm(row), dims)
    return PeaOutcome(
        phase_distribution=reported,
        peak_bin=peak,
        recovered_eigenvalue=inverse_phase_map(peak / M, model),
        post_state=post,
        success_probability=float(np.sum(np.abs(spectrum.amps[spectrum.principal]) ** 2)),
        t=t,
        mode=mode,
        final_state=final_state,
        counts=counts,
        warnings=tuple(warnings),
    )


def recovered_eigenvector(outcome: PeaOutcome, l1: bool = False) -> np.ndarray:
    """Eigenvector read off the post-measurement network registers.

    Global phase is fixed so the largest entry is real-positive; any residual
    imaginary leakage from neighbouring phases is dropped. Returned
    L2-normalized, or L1-normalized when ``l1`` is set.
    """
    v = outcome.post_state.network_vector()
    k = np.argmax(np.abs(v))
    v = (v * np.conj(v[k]) / abs(v[k])).real
    return v / np.abs(v).sum() if l1 else v / np.linalg.norm(v)


def success_probability(M: np.ndarray, raw: bool = False) -> np.ndarray:
    """Probability that phase estimation from the equal superposition returns
    each eigenvector: ``|<u|mu_j>|^2`` with ``u`` the uniform unit vector.

    Degenerate eigenvalues are grouped and the uniform vector's projection onto
    the eigenspace stands in for the basis; the whole group weight is stored in
    the first slot of the group (order of :func:`linalg.eig_oracle`). For
    non-normal input the eigenvectors are not orthogonal, so the values are
    renormalized to sum to one unless ``raw`` is set.
    """
    M = np.asarray(M)
    n = M.shape[0]
    u = _uniform(n)
    hermitian = linalg.is_hermitian(M)
    w, V, W = linalg.diagonalize(M)
    probs = np.zeros(n)
    for group in linalg.eigen_clusters(w):
        piece = V[:, group] @ (W[group] @ u)
        if hermitian:
            probs[group[0]] = np.linalg.norm(piece) ** 2
            continue
        norm = np.linalg.norm(piece)
        if norm > 1e-14:
            probs[group[0]] = abs(np.vdot(piece / norm, u)) ** 2
    if not hermitian and not raw:
        probs /= probs.sum()
    return probs
