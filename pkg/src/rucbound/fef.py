"""Fully entangled fraction (FEF) of two-qubit states.

``f(rho) = max_U <psi+| (I (x) U^dagger) rho (I (x) U) |psi+>`` is evaluated
four ways:

* ``fef_general``: 1/4 plus four times the Ky Fan norm of
  ``M(rho)^T M(P+)``, with ``M`` the Pauli correlation matrix scaled by 1/4;
* ``fef_two_product_mixture``: closed form for ``r rA(x)rB + (1-r) tA(x)tB``;
* ``fef_product``: closed form for a single product state;
* ``fef_numeric``: direct maximization over SU(2), used as the oracle.

The Ky Fan expression is an upper bound on the FEF. It equals the FEF when
the correlation matrix has a vanishing singular value, which is the case
for every mixture of two product states. For generic states with
``det M > 0`` it overshoots, and ``fef_numeric`` gives the true value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidProbability, InvalidState
from .linalg import HERMITIAN_TOL, eig_hermitian, hermiticity_error, hermitize, ky_fan_norm, ky_fan_sparse
from .optimize import OptimizerOptions, maximize_over_unitaries
from .quantum import PAULIS, QubitState, TOL

METHODS = ("general", "two-product-mixture", "product", "numeric")

PSI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
P_PLUS = np.outer(PSI_PLUS, PSI_PLUS.conj())
_PAULI_PAIRS = np.array([[np.kron(a, b) for b in PAULIS] for a in PAULIS])


@dataclass(frozen=True, eq=False)
class FefResult:
    value: float
    method: str
    witness_unitary: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown FEF method {self.method!r}")
        if not (0.25 - 1e-9 <= self.value <= 1 + 1e-9):
            raise InvalidState(f"FEF value {self.value!r} outside [1/4, 1]")


def validate_two_qubit_state(rho) -> np.ndarray:
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise InvalidState(f"two-qubit state must be 4x4, got shape {m.shape}")
    if hermiticity_error(m) > HERMITIAN_TOL:
        raise InvalidState("two-qubit state is not Hermitian")
    m = hermitize(m)
    tr = np.trace(m).real
    if abs(tr - 1) > TOL:
        raise InvalidState(f"two-qubit state has trace {tr!r}, expected 1")
    if eig_hermitian(m).min_eigenvalue < -TOL:
        raise InvalidState("two-qubit state is not positive semidefinite")
    return m


def _as_state(s) -> QubitState:
    if isinstance(s, QubitState):
        return s
    return QubitState(np.asarray(s, dtype=complex))


def product_state(rho_a, rho_b) -> np.ndarray:
    return np.kron(_as_state(rho_a).matrix, _as_state(rho_b).matrix)


def two_product_mixture(r, rho_a, rho_b, tau_a, tau_b) -> np.ndarray:
    """``r rho_a (x) rho_b + (1 - r) tau_a (x) tau_b``."""
    return r * product_state(rho_a, rho_b) + (1 - r) * product_state(tau_a, tau_b)


def correlation_matrix(rho) -> np.ndarray:
    """Real 3x3 matrix ``M_ij = tr[rho (s_i (x) s_j)] / 4`` over the Pauli triple."""
    m = validate_two_qubit_state(rho)
    corr = np.einsum("ijab,ba->ij", _PAULI_PAIRS, m) / 4
    if np.max(np.abs(corr.imag)) > 1e-12:
        raise InvalidState("correlation matrix has a non-negligible imaginary part")
    return corr.real


M_P_PLUS = correlation_matrix(P_PLUS)


def fef_general(rho) -> FefResult:
    corr = correlation_matrix(rho)
    value = 0.25 + 4 * ky_fan_norm(corr.T @ M_P_PLUS)
    return FefResult(value, "general")


def overlap_combination(a: float, b: float) -> float:
    """``a b + sqrt((1 - a^2)(1 - b^2))`` for overlap moduli ``a, b`` in [0, 1].

    This is the cosine of the difference of the two angles whose cosines
    are ``a`` and ``b``, i.e. the overlap of the two real transformed
    eigenvectors after aligning each pair to the computational basis.
    """
    a = min(max(a, 0.0), 1.0)
    b = min(max(b, 0.0), 1.0)
    return a * b + np.sqrt(max((1 - a * a) * (1 - b * b), 0.0))


def _aligned_bloch(a: float):
    # <sigma_1>, <sigma_3> of (a, sqrt(1 - a^2)); <sigma_2> vanishes for a real vector
    a = min(max(a, 0.0), 1.0)
    s = np.sqrt(max(1 - a * a, 0.0))
    return 2 * a * s, a * a - s * s


def fef_two_product_mixture(r, rho_a, rho_b, tau_a, tau_b) -> FefResult:
    """FEF of ``r rho_a (x) rho_b + (1 - r) tau_a (x) tau_b``.

    Each factor pair is rotated by a local unitary so that the top
    eigenvector of ``rho_X`` becomes ``|0>`` and that of ``tau_X`` becomes a
    real nonnegative vector. In that frame the correlation matrix has a
    zero middle row and column, and the trace norm follows from the three
    nonzero Gram entries.
    """
    r = float(r)
    if not (0.0 <= r <= 1.0):
        raise InvalidProbability(f"mixing weight r = {r!r} outside [0, 1]")
    specs = [_as_state(s).spectrum() for s in (rho_a, rho_b, tau_a, tau_b)]
    sa, sb, ta, tb = specs
    p = sa.delta * sb.delta
    t = ta.delta * tb.delta
    b_a1, b_a3 = _aligned_bloch(abs(np.vdot(sa.max_eigvec, ta.max_eigvec)))
    b_b1, b_b3 = _aligned_bloch(abs(np.vdot(sb.max_eigvec, tb.max_eigvec)))

    u = (1 - r) * t
    v = r * p
    x = (u * b_b1) ** 2 / 16
    y = u * b_b1 * (u * b_b3 + v * b_a3) / 16
    z = ((u * b_b3) ** 2 + v * v + 2 * u * v * b_a3 * b_b3) / 16
    # xz - y^2 is the squared determinant of the nonzero 2x2 block of M
    det = (u * v * b_a1 * b_b1 / 16) ** 2
    return FefResult(0.25 + ky_fan_sparse(x, y, z, det=det), "two-product-mixture")


def fef_product(rho_a, rho_b) -> FefResult:
    da = _as_state(rho_a).spectrum().delta
    db = _as_state(rho_b).spectrum().delta
    return FefResult(0.25 + 0.25 * da * db, "product")


def entangled_overlaps(rho: np.ndarray, unitaries: np.ndarray) -> np.ndarray:
    """``<psi+|(I (x) U^dagger) rho (I (x) U)|psi+>`` for a stack of unitaries."""
    # ((I (x) U)|psi+>)_{2i+k} = U[k, i] / sqrt(2)
    w = np.transpose(unitaries, (0, 2, 1)).reshape(-1, 4) / np.sqrt(2)
    return np.einsum("ni,ij,nj->n", w.conj(), rho, w).real


def fef_numeric(rho, opts: OptimizerOptions = OptimizerOptions()) -> FefResult:
    m = validate_two_qubit_state(rho)
    best = maximize_over_unitaries(lambda us: entangled_overlaps(m, us), opts)
    return FefResult(best.value, "numeric", best.unitary)
