"""Dense matrix kernel: Kronecker products, Hermitian exponentials,
damped power iteration and a full eigendecomposition oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, SizeError, ValidationError

# Central tolerances.
HERMITIAN_TOL = 1e-12
RESIDUAL_TOL = 1e-9
UNITARY_TOL = 1e-10
COMPARE_TOL = 1e-8

MAX_KRON_ENTRIES = 2**24
MAX_ORACLE_DIM = 1024


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # unit-norm columns
    residual: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def is_hermitian(M: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    M = np.asarray(M)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and bool(
        np.max(np.abs(M - M.conj().T), initial=0.0) <= tol)


def kron(M1: np.ndarray, M2: np.ndarray, max_entries: int = MAX_KRON_ENTRIES) -> np.ndarray:
    M1, M2 = np.asarray(M1), np.asarray(M2)
    entries = M1.size * M2.size
    if entries > max_entries:
        raise SizeError(f"Kronecker product would hold {entries} entries (cap {max_entries})")
    return np.kron(M1, M2)


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column made real-positive.
    vectors = np.array(vectors, dtype=complex)
    rows = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[rows, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    safe = np.where(mags > 0, pivots, 1.0)
    return vectors * (np.where(mags > 0, mags, 1.0) / safe)


def eig_oracle(M: np.ndarray) -> EigenSystem:
    """Full eigendecomposition of a small dense matrix.

    Hermitian input goes through ``eigh`` (orthonormal eigenvectors); any
    other input through the general QR solver. Eigenvalues are sorted by
    descending real part, then descending imaginary part.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"eig_oracle needs a square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_ORACLE_DIM:
        raise SizeError(f"eig_oracle limited to dimension {MAX_ORACLE_DIM}, got {M.shape[0]}")
    if is_hermitian(M):
        w, V = np.linalg.eigh(M)
        w = w.astype(complex)
    else:
        w, V = np.linalg.eig(M)
    order = np.lexsort((-w.imag, -w.real))
    w, V = w[order], V[:, order]
    V = V / np.linalg.norm(V, axis=0)
    V = _fix_phase(V)
    if np.all(np.abs(w.imag) <= COMPARE_TOL * max(1.0, np.max(np.abs(w), initial=0.0))):
        w = w.real.astype(complex)
    residual = float(np.max(np.abs(M @ V - V * w), initial=0.0))
    return EigenSystem(eigenvalues=w, eigenvectors=V, residual=residual)


def expm_hermitian(H: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Return ``exp(i * scale * H)`` for Hermitian ``H`` via its eigenbasis."""
    H = np.asarray(H)
    if not is_hermitian(H):
        raise ValidationError("expm_hermitian requires a Hermitian matrix")
    es = eig_oracle(H)
    V = es.eigenvectors
    phases = np.exp(1j * scale * es.eigenvalues.real)
    return (V * phases) @ V.conj().T


def damped_iteration(A: np.ndarray, tol: float = 1e-10, max_iters: int = 100_000,
                     x0: np.ndarray | None = None) -> tuple[float, np.ndarray, int, float]:
    """Iterate ``x <- M x / |M x|_1`` with ``M = (A + I) / 2`` until the L1 step
    falls to ``tol``. Returns ``(damped eigenvalue, x, iterations, residual)``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise ValidationError("power iteration needs a square matrix")
    if np.any(A < 0):
        raise ValidationError("power iteration needs a nonnegative matrix")
    x = np.full(n, 1.0 / n) if x0 is None else np.asarray(x0, dtype=float) / np.sum(x0)
    residual = np.inf
    for it in range(1, max_iters + 1):
        y = 0.5 * (A @ x + x)
        lam_damped = y.sum()
        y /= lam_damped
        residual = np.abs(y - x).sum()
        x = y
        if residual <= tol:
            return lam_damped, x, it, residual
    raise ConvergenceError(
        f"power iteration did not converge in {max_iters} iterations "
        f"(final residual {residual:.3e})", residual=residual)


def power_iteration(A: np.ndarray, tol: float = 1e-10, max_iters: int = 100_000,
                    x0: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Perron eigenpair of a nonnegative matrix by damped power iteration.

    Iterates on ``(A + I) / 2``, which has the same eigenvectors as ``A`` but
    maps every eigenvalue ``lam`` to ``(lam + 1) / 2``. That removes the
    period-2 oscillation bipartite graphs cause (eigenvalue -1).

    Returns the undamped eigenvalue estimate and the L1-normalized vector.
    """
    lam_damped, x, _, _ = damped_iteration(A, tol, max_iters, x0)
    return 2.0 * lam_damped - 1.0, x


def symmetrizer(M: np.ndarray) -> np.ndarray | None:
    """Diagonal ``d`` with ``diag(d)^-1/2 M diag(d)^1/2`` symmetric, if one is found.

    Random-walk operators ``Adj D^-1`` (and their Kronecker products) have
    all nonzero entries of column ``j`` equal to ``1/d_j``, which is the
    candidate tried here.
    """
    M = np.asarray(M)
    if np.iscomplexobj(M) or np.any(M < 0):
        return None
    colmax = M.max(axis=0)
    if np.any(colmax <= 0):
        return None
    d = 1.0 / colmax
    r = np.sqrt(d)
    S = M * r[None, :] / r[:, None]
    return d if np.max(np.abs(S - S.T)) <= HERMITIAN_TOL else None


def diagonalize(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenvalues ``w``, right eigenvectors ``V`` and dual rows ``W`` (``W V = I``).

    Hermitian input and reversible walk operators go through a symmetric
    eigensolver, which stays well conditioned on large degenerate
    eigenspaces; anything else falls back to the general solver and a
    matrix inverse. Order follows :func:`eig_oracle`.
    """
    M = np.asarray(M)
    if is_hermitian(M):
        es = eig_oracle(M)
        return es.eigenvalues, es.eigenvectors, es.eigenvectors.conj().T
    d = symmetrizer(M)
    if d is not None:
        r = np.sqrt(d)
        w, Q = np.linalg.eigh(M * r[None, :] / r[:, None])
        order = np.argsort(-w, kind="stable")
        w, Q = w[order], Q[:, order]
        return w.astype(complex), Q * r[:, None], Q.T / r[None, :]
    es = eig_oracle(M)
    return es.eigenvalues, es.eigenvectors, np.linalg.inv(es.eigenvectors)


def eigen_clusters(w: np.ndarray, tol: float = COMPARE_TOL) -> list[np.ndarray]:
    """Group indices of (sorted) eigenvalues that agree within ``tol``."""
    remaining = np.ones(len(w), dtype=bool)
    groups = []
    while remaining.any():
        first = np.flatnonzero(remaining)[0]
        mask = remaining & (np.abs(w - w[first]) <= tol)
        remaining &= ~mask
        groups.append(np.flatnonzero(mask))
    return groups


def spectral_projection(M: np.ndarray, x: np.ndarray, value: complex,
                        tol: float = COMPARE_TOL) -> np.ndarray:
    """Component of ``x`` along the eigenspace of ``M`` for eigenvalue ``value``.

    Uses the (generally oblique) spectral projector ``V_c W_c``, so the
    components over all distinct eigenvalues sum back to ``x``. For
    Hermitian ``M`` this is the orthogonal projection.
    """
    w, V, W = diagonalize(M)
    mask = np.abs(w - value) <= tol
    return V[:, mask] @ (W[mask] @ x)


def principal_eigenvector(M: np.ndarray, tol: float = COMPARE_TOL) -> tuple[float, np.ndarray]:
    """Dominant eigenvalue and the unit vector reached from the uniform start.

    When the dominant eigenvalue is degenerate (reducible matrices) the
    returned vector is the projection of the uniform vector onto that
    eigenspace, which is what both power iteration and phase estimation
    converge to.
    """
    lam = eig_oracle(M).eigenvalues[0]
    u = np.full(M.shape[0], 1.0 / np.sqrt(M.shape[0]))
    v = spectral_projection(M, u, lam, tol=tol)
    v = _fix_phase(v[:, None])[:, 0]
    v = np.real_if_close(v, tol=1e6)
    return float(lam.real), v / np.linalg.norm(v)
