"""Uncertainty bound for ancilla-free measurements of random unitary qubit channels.

A channel is probed with measurement ``meas1 = (rho_in, E)`` with probability
``r`` and ``meas2 = (tau_in, F)`` otherwise. For outcome subsets ``M`` and
``N`` the success probability

    r * sum_{m in M} p_m(L) + (1 - r) * sum_{n in N} q_n(L)

is bounded over all random unitary channels ``L`` by the closed form
``bound_C``. ``bound_T`` is the bound obtained by maximizing each term
separately, and ``brute_force_C`` recovers ``C`` numerically by
maximizing over single unitaries.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import InvalidProbability, NotPure, NotUnit, UnknownOutcome
from .fef import FefResult, fef_two_product_mixture, overlap_combination
from .linalg import SpectralSummary, eig_hermitian, hermitize
from .optimize import OptimizerOptions, UnitaryMaximum, maximize_over_unitaries
from .quantum import (
    I2,
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    ChannelMeasurement,
    Povm,
    QubitState,
    TOL,
    outcome_probability,
)
from .sampling import sample_binary_povm, sample_state

log = logging.getLogger(__name__)

NONTRIVIAL_TOL = 1e-8
SPREAD_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class Scenario:
    """Two ancilla-free channel measurements mixed with weight ``r``."""

    meas1: ChannelMeasurement
    meas2: ChannelMeasurement
    r: float
    subset_m: tuple = ()
    subset_n: tuple = ()

    def __post_init__(self):
        r = float(self.r)
        if not (0.0 <= r <= 1.0):
            raise InvalidProbability(f"mixing weight r = {r!r} outside [0, 1]")
        object.__setattr__(self, "r", r)
        m = tuple(str(x) for x in self.subset_m)
        n = tuple(str(x) for x in self.subset_n)
        if len(set(m)) != len(m) or len(set(n)) != len(n):
            raise UnknownOutcome("outcome subsets must not repeat labels")
        # raises UnknownOutcome on a bad label
        self.meas1.povm.subset_sum(m)
        self.meas2.povm.subset_sum(n)
        object.__setattr__(self, "subset_m", m)
        object.__setattr__(self, "subset_n", n)

    @property
    def effect_m(self) -> np.ndarray:
        return self.meas1.povm.subset_sum(self.subset_m)

    @property
    def effect_n(self) -> np.ndarray:
        return self.meas2.povm.subset_sum(self.subset_n)


@dataclass(frozen=True, eq=False)
class BoundReport:
    C: float
    T: float
    Z: float
    nontrivial: bool
    spectral: Mapping[str, SpectralSummary]
    state_overlap: float
    effect_overlap: float
    criterion_applicable: bool = True
    note: Optional[str] = field(default=None)


def _spectra(s: Scenario) -> dict:
    return {
        "rho_in": s.meas1.state.spectrum(),
        "tau_in": s.meas2.state.spectrum(),
        "E_M": eig_hermitian(s.effect_m),
        "F_N": eig_hermitian(s.effect_n),
    }


def _overlaps(spec: Mapping[str, SpectralSummary]):
    a = abs(np.vdot(spec["rho_in"].max_eigvec, spec["tau_in"].max_eigvec))
    b = abs(np.vdot(spec["E_M"].max_eigvec, spec["F_N"].max_eigvec))
    return float(min(a, 1.0)), float(min(b, 1.0))


def z_norm(s: Scenario) -> float:
    """Trace of the weighted process effect, ``r tr E(M) + (1 - r) tr F(N)``."""
    return float(s.r * np.trace(s.effect_m).real + (1 - s.r) * np.trace(s.effect_n).real)


def bound_T(s: Scenario) -> float:
    """Sum of the separately maximized terms."""
    spec = _spectra(s)
    first = np.trace(s.effect_m).real + spec["rho_in"].delta * spec["E_M"].delta
    second = np.trace(s.effect_n).real + spec["tau_in"].delta * spec["F_N"].delta
    return float(0.5 * (s.r * first + (1 - s.r) * second))


def _criterion_applicable(s: Scenario, spec) -> bool:
    return 0.0 < s.r < 1.0 and all(x.delta > SPREAD_FLOOR for x in spec.values())


def nontrivial(s: Scenario, tol: float = NONTRIVIAL_TOL) -> bool:
    """Whether ``C < T``, decided from the eigenvector overlaps.

    For ``0 < r < 1`` the two bounds coincide exactly when
    ``|<psi|phi>| == |<psi'|phi'>|`` (top eigenvectors of the two inputs and
    of the two summed effects). At ``r`` in {0, 1} there is no trade-off
    and the answer is always False.
    """
    if not 0.0 < s.r < 1.0:
        log.info("nontrivial(): r = %s is an endpoint; no trade-off is possible", s.r)
        return False
    spec = _spectra(s)
    if not _criterion_applicable(s, spec):
        log.info("nontrivial(): degenerate spectrum, overlap criterion uses tie-break eigenvectors")
    a, b = _overlaps(spec)
    return abs(a - b) > tol


def bound_C(s: Scenario) -> BoundReport:
    spec = _spectra(s)
    a, b = _overlaps(spec)
    z = z_norm(s)
    first = s.r * spec["rho_in"].delta * spec["E_M"].delta
    second = (1 - s.r) * spec["tau_in"].delta * spec["F_N"].delta
    g = overlap_combination(a, b)
    c = 0.5 * z + 0.5 * np.sqrt((first - second) ** 2 + 4 * first * second * g * g)
    t = bound_T(s)
    # g <= 1 makes C <= T exact; only rounding can push c above t
    c = min(c, t)
    applicable = _criterion_applicable(s, spec)
    note = None
    if not 0.0 < s.r < 1.0:
        note = "r is an endpoint; overlap criterion not applicable"
    elif not applicable:
        note = "degenerate spectrum; overlap criterion not applicable"
    return BoundReport(
        C=float(c), T=t, Z=z, nontrivial=bool(c < t - 1e-9), spectral=spec,
        state_overlap=a, effect_overlap=b, criterion_applicable=applicable, note=note,
    )


def _check_unit(v, name) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.shape != (2,) or abs(np.linalg.norm(v) - 1) > TOL:
        raise NotUnit(f"{name} must be a unit 2-vector")
    return v


def _pure_ket(state, name) -> np.ndarray:
    if isinstance(state, QubitState):
        if abs(state.purity - 1) > TOL:
            raise NotPure(f"{name} is not a pure state (purity {state.purity:.12g})")
        return state.spectrum().max_eigvec
    return _check_unit(state, name)


def bound_C_pure_pvm(psi_in, phi_in, e_m, f_n, r: float) -> float:
    """Bound for pure inputs and rank-one projective measurements.

    ``psi_in``, ``phi_in`` are pure :class:`QubitState` objects or unit kets;
    ``e_m``, ``f_n`` are the unit vectors of the two measured outcomes.
    """
    r = float(r)
    if not (0.0 <= r <= 1.0):
        raise InvalidProbability(f"mixing weight r = {r!r} outside [0, 1]")
    psi = _pure_ket(psi_in, "psi_in")
    phi = _pure_ket(phi_in, "phi_in")
    e = _check_unit(e_m, "e_m")
    f = _check_unit(f_n, "f_n")
    g = overlap_combination(abs(np.vdot(psi, phi)), abs(np.vdot(e, f)))
    return float(0.5 + np.sqrt((r - 0.5) ** 2 + r * (1 - r) * g * g))


def lhs_value(s: Scenario, channel) -> float:
    """Mixed success probability of ``channel`` computed on its Choi matrix."""
    p = sum(outcome_probability(channel, s.meas1, m) for m in s.subset_m)
    q = sum(outcome_probability(channel, s.meas2, n) for n in s.subset_n)
    return float(s.r * p + (1 - s.r) * q)


def unitary_success(s: Scenario, unitaries: np.ndarray) -> np.ndarray:
    """Success probability ``r tr[E U rho U^+] + (1-r) tr[F U tau U^+]`` per unitary."""
    ud = np.conj(np.transpose(unitaries, (0, 2, 1)))
    p = np.einsum("ab,nbc,cd,nda->n", s.effect_m, unitaries, s.meas1.state.matrix, ud)
    q = np.einsum("ab,nbc,cd,nda->n", s.effect_n, unitaries, s.meas2.state.matrix, ud)
    return (s.r * p + (1 - s.r) * q).real


def brute_force_C(s: Scenario, opts: OptimizerOptions = OptimizerOptions()) -> UnitaryMaximum:
    """Numerical maximum of the success probability over unitary channels.

    The success probability is linear in the channel, so mixing unitaries
    cannot beat the best single one and this maximum equals ``C``.
    """
    return maximize_over_unitaries(lambda us: unitary_success(s, us), opts)


def process_state(s: Scenario):
    """Normalized weighted process effect as a two-qubit state, with its trace ``Z``."""
    wm = s.r * np.kron(s.meas1.state.T, s.effect_m)
    wn = (1 - s.r) * np.kron(s.meas2.state.T, s.effect_n)
    z = z_norm(s)
    return hermitize((wm + wn) / z), z


def fef_route_C(s: Scenario) -> float:
    """``C`` recomputed as ``2 Z f(rho(M, N))`` with the two-product-mixture formula."""
    z = z_norm(s)
    if z <= 0:
        return 0.0
    tr_e = np.trace(s.effect_m).real
    tr_f = np.trace(s.effect_n).real
    big_r = s.r * tr_e / z
    e_state = QubitState(hermitize(s.effect_m / tr_e)) if tr_e > 0 else QubitState(I2 / 2)
    f_state = QubitState(hermitize(s.effect_n / tr_f)) if tr_f > 0 else QubitState(I2 / 2)
    rho_t = QubitState(s.meas1.state.T)
    tau_t = QubitState(s.meas2.state.T)
    f: FefResult = fef_two_product_mixture(min(max(big_r, 0.0), 1.0), rho_t, e_state, tau_t, f_state)
    return float(2 * z * f.value)


def landau_pollak_check(a, b, rho: QubitState):
    """``(lhs, bound)`` for ``<a|rho|a>/2 + <b|rho|b>/2 <= (1 + |<a|b>|)/2``."""
    a = _check_unit(a, "a")
    b = _check_unit(b, "b")
    m = rho.matrix
    lhs = 0.5 * np.vdot(a, m @ a).real + 0.5 * np.vdot(b, m @ b).real
    return float(lhs), float(0.5 * (1 + abs(np.vdot(a, b))))


def two_basis_scenario(theta: float, r: float = 0.5) -> Scenario:
    """Pure inputs ``|0>`` and ``cos(t/2)|0> + sin(t/2)|1>``; Z- then X-basis readout."""
    meas1 = ChannelMeasurement(QubitState.pure(KET0), Povm.from_basis([KET0, KET1], ("m0", "m1")))
    phi = np.cos(theta / 2) * KET0 + np.sin(theta / 2) * KET1
    meas2 = ChannelMeasurement(QubitState.pure(phi), Povm.from_basis([KET_PLUS, KET_MINUS], ("n0", "n1")))
    return Scenario(meas1, meas2, r, ("m0",), ("n0",))


@dataclass(frozen=True)
class SweepRow:
    theta: float
    C: float
    T: float
    nontrivial: bool


def example_sweep(thetas: Sequence[float], r: float = 0.5) -> list:
    rows = []
    for theta in thetas:
        theta = float(theta)
        if not (0.0 <= theta <= np.pi + 1e-15):
            raise ValueError(f"theta = {theta!r} outside [0, pi]")
        rep = bound_C(two_basis_scenario(theta, r))
        rows.append(SweepRow(theta, rep.C, rep.T, rep.nontrivial))
    return rows


def sample_scenario(rng, subsets: str = "random", r: Optional[float] = None) -> Scenario:
    """Random mixed inputs and binary POVMs.

    ``subsets`` is ``"random"`` (each label kept with probability 1/2, so
    empty and full subsets occur) or ``"singleton"``.
    """
    meas1 = ChannelMeasurement(sample_state(rng), sample_binary_povm(rng, ("m0", "m1")))
    meas2 = ChannelMeasurement(sample_state(rng), sample_binary_povm(rng, ("n0", "n1")))
    r = float(rng.uniform()) if r is None else r
    if subsets == "singleton":
        m = (meas1.povm.labels[rng.integers(2)],)
        n = (meas2.povm.labels[rng.integers(2)],)
    elif subsets == "random":
        m = tuple(lab for lab in meas1.povm.labels if rng.uniform() < 0.5)
        n = tuple(lab for lab in meas2.povm.labels if rng.uniform() < 0.5)
    else:
        raise ValueError(f"unknown subset mode {subsets!r}")
    return Scenario(meas1, meas2, r, m, n)
