"""Small dense complex linear algebra for qubit and two-qubit operators.

Everything here works on plain ``numpy`` arrays. Hermitian eigenproblems of
size 2 are solved in closed form; sizes 3 and 4 go through a cyclic complex
Jacobi iteration so results do not depend on the LAPACK build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NonHermitianInput

HERMITIAN_TOL = 1e-12
DEGENERACY_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class SpectralSummary:
    """Spectrum of a Hermitian matrix, largest eigenvalue first.

    ``vectors`` holds the eigenvectors as columns in the same order as
    ``eigenvalues``; ``delta`` is the spread between the largest and the
    smallest eigenvalue.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    delta: float

    @property
    def max_eigvec(self) -> np.ndarray:
        return self.vectors[:, 0]

    @property
    def min_eigvec(self) -> np.ndarray:
        return self.vectors[:, -1]

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])


def as_square(a, dims=(2, 3, 4)) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in dims:
        raise DimensionError(f"expected a square matrix of size {dims}, got shape {m.shape}")
    return m


def hermiticity_error(a) -> float:
    m = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(a) <= tol


def hermitize(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    return 0.5 * (m + m.conj().T)


def fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first nonzero component is real positive."""
    v = np.asarray(v, dtype=complex)
    for c in v:
        mag = abs(c)
        if mag > tol:
            return v * (mag / c)
    return v


def _eig2(m: np.ndarray) -> SpectralSummary:
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    h = float(np.hypot(0.5 * (a - d), abs(b)))
    evals = np.array([mean + h, mean - h])
    if 2.0 * h <= DEGENERACY_TOL:
        # whole space is (numerically) one eigenspace: pick the canonical basis
        return SpectralSummary(evals, np.eye(2, dtype=complex), 2.0 * h)
    lam = evals[0]
    # two null vectors of (m - lam I), one from each row; keep the better conditioned one
    u1 = np.array([b, lam - a], dtype=complex)
    u2 = np.array([lam - d, np.conj(b)], dtype=complex)
    u = u1 if np.linalg.norm(u1) >= np.linalg.norm(u2) else u2
    vmax = fix_phase(u / np.linalg.norm(u))
    vmin = fix_phase(np.array([-np.conj(vmax[1]), np.conj(vmax[0])]))
    return SpectralSummary(evals, np.column_stack([vmax, vmin]), 2.0 * h)


def _jacobi(m: np.ndarray) -> SpectralSummary:
    n = m.shape[0]
    a = m.copy()
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phase = apq / mag
                g = np.eye(n, dtype=complex)
                # phase rotation making a[p, q] real, then a real Givens rotation
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.conj(phase)
                g[q, q] = c * np.conj(phase)
                a = g.conj().T @ a @ g
                a[p, q] = a[q, p] = 0.0
                v = v @ g
    evals = np.diag(a).real.copy()
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    v = v[:, order]
    delta = float(evals[0] - evals[-1])
    if delta <= DEGENERACY_TOL:
        v = np.eye(n, dtype=complex)
    else:
        v = np.column_stack([fix_phase(v[:, k] / np.linalg.norm(v[:, k])) for k in range(n)])
    return SpectralSummary(evals, v, max(delta, 0.0))


def eig_hermitian(a) -> SpectralSummary:
    """Eigen-decompose a 2x2, 3x3 or 4x4 Hermitian matrix.

    Eigenvalues are returned in descending order. When the whole spectrum
    collapses to a point (spread at most 1e-10) the eigenvectors are the
    canonical basis in index order, so ``max_eigvec`` is ``e_0``.

    Raises
    ------
    NonHermitianInput
        If ``a`` deviates from its adjoint by more than 1e-12 entrywise.
    """
    m = as_square(a)
    err = hermiticity_error(m)
    if err > HERMITIAN_TOL:
        raise NonHermitianInput(f"matrix is not Hermitian (max deviation {err:.3e})")
    m = hermitize(m)
    if m.shape[0] == 2:
        return _eig2(m)
    return _jacobi(m)


def spread(a) -> float:
    """Difference between the largest and smallest eigenvalue."""
    return eig_hermitian(a).delta


def ky_fan_norm(m) -> float:
    """Sum of singular values, ``tr sqrt(M M^T)``."""
    return float(np.sum(np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)))


def ky_fan_sparse(x: float, y: float, z: float, det: float = None, tol: float = 1e-12) -> float:
    """Trace norm of ``M`` from the nonzero entries of ``M^T M``.

    ``M^T M`` must have the pattern ``[[x, 0, y], [0, 0, 0], [y, 0, z]]``;
    the two nonzero singular values of ``M`` then sum to
    ``sqrt(x + z + 2 sqrt(xz - y^2))``. Forming ``xz - y^2`` cancels badly
    near rank one, so callers that know it in factored form pass ``det``.
    """
    if det is None:
        det = x * z - y * y
    if x < -tol or z < -tol or det < -tol:
        raise DomainError(f"(x, y, z) = ({x}, {y}, {z}) is not a positive semidefinite Gram block")
    det = max(det, 0.0)
    return float(np.sqrt(max(x + z + 2.0 * np.sqrt(det), 0.0)))


def kron(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError(f"kron expects two 2x2 factors, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def partial_trace(a, subsystem: str = "second") -> np.ndarray:
    """Trace out one qubit of a 4x4 operator ordered as ``|i> (x) |j>``.

    ``subsystem`` names the factor that is traced away.
    """
    m = np.asarray(a, dtype=complex)
    if m.shape != (4, 4):
        raise DimensionError(f"partial_trace expects a 4x4 matrix, got {m.shape}")
    t = m.reshape(2, 2, 2, 2)
    if subsystem == "second":
        return np.einsum("ijkj->ik", t)
    if subsystem == "first":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"subsystem must be 'first' or 'second', not {subsystem!r}")


def psd_floor(a) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return eig_hermitian(a).min_eigenvalue
