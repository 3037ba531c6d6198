import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rucbound.fef import (
    M_P_PLUS, P_PLUS, PSI_PLUS, correlation_matrix, fef_general, fef_numeric, fef_product,
    fef_two_product_mixture, overlap_combination, product_state, two_product_mixture,
)
from rucbound.quantum import I2, KET0, KET1, KET_PLUS, PAULIS, QubitState
from rucbound.sampling import sample_pure_state, sample_state, sample_unitary

MIXED = np.eye(4, dtype=complex) / 4


def test_correlation_matrix_examples():
    assert np.allclose(correlation_matrix(MIXED), 0)
    m = correlation_matrix(np.kron(np.diag([1, 0]), np.diag([1, 0])))
    expected = np.zeros((3, 3))
    expected[2, 2] = 0.25
    assert np.allclose(m, expected)
    # oracle: direct expectation values <psi+| s_i (x) s_j |psi+> / 4
    direct = np.array([[np.vdot(PSI_PLUS, np.kron(a, b) @ PSI_PLUS).real / 4 for b in PAULIS] for a in PAULIS])
    assert np.allclose(M_P_PLUS, direct)
    assert np.allclose(M_P_PLUS, np.diag([1, -1, 1]) / 4)
    assert np.allclose(M_P_PLUS @ M_P_PLUS.T, np.eye(3) / 16)


def test_general_examples(rng):
    assert fef_general(P_PLUS).value == pytest.approx(1, abs=1e-12)
    assert fef_general(MIXED).value == pytest.approx(0.25, abs=1e-12)
    for _ in range(20):
        a, b = sample_pure_state(rng), sample_pure_state(rng)
        assert fef_general(product_state(a, b)).value == pytest.approx(0.5, abs=1e-12)


def test_product_examples(rng):
    assert fef_product(QubitState.pure(KET0), QubitState.pure(KET_PLUS)).value == pytest.approx(0.5)
    assert fef_product(QubitState(I2 / 2), sample_state(rng)).value == pytest.approx(0.25)
    a, b = QubitState(np.diag([0.9, 0.1])), QubitState(np.diag([0.8, 0.2]))
    assert fef_product(a, b).value == pytest.approx(0.37, abs=1e-12)
    assert fef_numeric(product_state(a, b)).value == pytest.approx(0.37, abs=1e-9)


def test_mixture_examples(rng):
    for _ in range(20):
        tau_a, tau_b = sample_state(rng), sample_state(rng)
        r = rng.uniform()
        got = fef_two_product_mixture(r, QubitState(I2 / 2), sample_state(rng), tau_a, tau_b).value
        want = 0.25 + 0.25 * (1 - r) * tau_a.spectrum().delta * tau_b.spectrum().delta
        assert got == pytest.approx(want, abs=1e-12)

    # pure factors with |<rhoA|tauA>| = 0 and |<rhoB|tauB>| = 1/sqrt(2)
    args = (0.5, QubitState.pure(KET0), QubitState.pure(KET0), QubitState.pure(KET1), QubitState.pure(KET_PLUS))
    want = 0.25 + 1 / (4 * np.sqrt(2))
    assert want == pytest.approx(0.426777, abs=1e-6)
    assert fef_two_product_mixture(*args).value == pytest.approx(want, abs=1e-12)
    assert fef_numeric(two_product_mixture(*args)).value == pytest.approx(want, abs=1e-6)


def test_mixture_at_r1_is_product(rng):
    for _ in range(100):
        a, b = sample_state(rng), sample_state(rng)
        other = sample_state(rng), sample_state(rng)
        assert abs(fef_two_product_mixture(1.0, a, b, *other).value - fef_product(a, b).value) < 1e-12


def test_numeric_examples():
    assert fef_numeric(P_PLUS).value == pytest.approx(1, abs=1e-6)
    assert fef_numeric(MIXED).value == pytest.approx(0.25, abs=1e-9)


def test_overlap_combination():
    assert overlap_combination(1, 1) == pytest.approx(1)
    assert overlap_combination(0, 0) == pytest.approx(1)
    assert overlap_combination(0, 1) == pytest.approx(0)
    assert overlap_combination(0, 1 / np.sqrt(2)) == pytest.approx(1 / np.sqrt(2))


def local(rho, ua, ub):
    u = np.kron(ua, ub)
    return u @ rho @ u.conj().T


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_routes_agree_and_are_local_unitary_invariant(seed):
    rng = np.random.default_rng(seed)
    r = rng.uniform()
    states = [sample_state(rng) for _ in range(4)]
    rho = two_product_mixture(r, *states)
    analytic = fef_two_product_mixture(r, *states).value
    assert abs(fef_general(rho).value - analytic) < 1e-9
    assert abs(fef_numeric(rho).value - analytic) < 1e-5
    rotated = local(rho, sample_unitary(rng), sample_unitary(rng))
    assert abs(fef_general(rotated).value - analytic) < 1e-9


def random_two_qubit_state(rng):
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = x @ x.conj().T
    return rho / np.trace(rho)


def test_numeric_never_exceeds_general(rng):
    for _ in range(30):
        rho = random_two_qubit_state(rng)
        num = fef_numeric(rho)
        assert num.value <= fef_general(rho).value + 1e-6
        # the witness attains the reported value
        u = num.witness_unitary
        w = np.kron(I2, u) @ PSI_PLUS
        assert np.vdot(w, rho @ w).real == pytest.approx(num.value, abs=1e-12)


def test_general_overshoots_when_correlation_determinant_positive():
    triplet = MIXED + sum(np.kron(p, p) for p in PAULIS) / 12
    assert np.linalg.det(correlation_matrix(triplet)) > 0
    assert fef_general(triplet).value == pytest.approx(0.5, abs=1e-12)
    assert fef_numeric(triplet).value == pytest.approx(1 / 3, abs=1e-9)


def test_invalid_state_rejected():
    with pytest.raises(ValueError):
        fef_general(np.eye(4))
