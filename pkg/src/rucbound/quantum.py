"""Qubit states, POVMs, channels and ancilla-free process effects.

Conventions: ``|0> = (1, 0)``, ``|1> = (0, 1)``; two-qubit operators are
ordered reference (x) system, so the Choi matrix is
``J = sum_ij |i><j| (x) L(|i><j|)`` and transposes are taken in the
computational basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidChannel, InvalidPovm, InvalidProbability, InvalidState, UnknownOutcome
from .linalg import eig_hermitian, hermiticity_error, hermitize, kron, HERMITIAN_TOL

TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def projector(ket) -> np.ndarray:
    v = np.asarray(ket, dtype=complex)
    return np.outer(v, v.conj())


def _frozen(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class QubitState:
    """A 2x2 density operator."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidState(f"qubit state must be 2x2, got shape {m.shape}")
        if hermiticity_error(m) > HERMITIAN_TOL:
            raise InvalidState("density operator is not Hermitian")
        m = hermitize(m)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL:
            raise InvalidState(f"density operator has trace {tr!r}, expected 1")
        if eig_hermitian(m).min_eigenvalue < -TOL:
            raise InvalidState("density operator is not positive semidefinite")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def pure(cls, ket) -> "QubitState":
        v = np.asarray(ket, dtype=complex)
        n = np.linalg.norm(v)
        if v.shape != (2,) or n == 0:
            raise InvalidState("pure state needs a nonzero 2-vector")
        return cls(projector(v / n))

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(I2 / 2)

    @property
    def T(self) -> np.ndarray:
        return self.matrix.T

    def spectrum(self):
        return eig_hermitian(self.matrix)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True, eq=False)
class Povm:
    """Finite-outcome POVM with opaque string labels."""

    effects: tuple
    labels: tuple = None

    def __post_init__(self):
        effects = tuple(np.asarray(e, dtype=complex) for e in self.effects)
        if not effects:
            raise InvalidPovm("POVM needs at least one effect")
        labels = self.labels
        if labels is None:
            labels = tuple(str(k) for k in range(len(effects)))
        labels = tuple(str(x) for x in labels)
        if len(labels) != len(effects):
            raise InvalidPovm("number of labels differs from number of effects")
        if len(set(labels)) != len(labels):
            raise InvalidPovm("POVM labels must be unique")
        clean = []
        for k, (lab, e) in enumerate(zip(labels, effects)):
            try:
                clean.append(_frozen(_check_effect(lab, e)))
            except InvalidPovm as exc:
                exc.index = k
                raise
        if np.max(np.abs(sum(clean) - I2)) > TOL:
            raise InvalidPovm("POVM completeness violated: effects do not sum to the identity")
        object.__setattr__(self, "effects", tuple(clean))
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_basis(cls, kets: Sequence, labels=None) -> "Povm":
        return cls(tuple(projector(k) for k in kets), labels)

    def effect(self, label) -> np.ndarray:
        try:
            return self.effects[self.labels.index(str(label))]
        except ValueError:
            raise UnknownOutcome(f"unknown outcome label {label!r}; known: {list(self.labels)}") from None

    def subset_sum(self, labels: Iterable) -> np.ndarray:
        """Sum of the effects in ``labels``; the empty sum is the zero operator."""
        total = np.zeros((2, 2), dtype=complex)
        for lab in labels:
            total = total + self.effect(lab)
        return total


def _check_effect(lab, e: np.ndarray) -> np.ndarray:
    if e.shape != (2, 2):
        raise InvalidPovm(f"effect {lab!r} must be 2x2, got shape {e.shape}")
    if hermiticity_error(e) > HERMITIAN_TOL:
        raise InvalidPovm(f"effect {lab!r} is not Hermitian")
    e = hermitize(e)
    spec = eig_hermitian(e)
    if spec.min_eigenvalue < -TOL or spec.max_eigenvalue > 1 + TOL:
        raise InvalidPovm(f"effect {lab!r} violates 0 <= E <= I")
    return e


def _check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidChannel(f"unitary must be 2x2, got shape {u.shape}")
    if np.max(np.abs(u @ u.conj().T - I2)) > TOL:
        raise InvalidChannel("operator is not unitary within 1e-10")
    return u


@dataclass(frozen=True, eq=False)
class RandomUnitaryChannel:
    """Convex mixture ``rho -> sum_x p_x U_x rho U_x^dagger``.

    ``terms`` is a sequence of ``(weight, unitary)`` pairs.
    """

    terms: tuple

    def __post_init__(self):
        terms = []
        for item in self.terms:
            try:
                w, u = item
            except (TypeError, ValueError):
                raise InvalidChannel("terms must be (weight, unitary) pairs") from None
            w = float(w)
            if w < -TOL:
                raise InvalidChannel(f"negative mixture weight {w}")
            terms.append((max(w, 0.0), _frozen(_check_unitary(u))))
        if not terms:
            raise InvalidChannel("random unitary channel needs at least one term")
        total = sum(w for w, _ in terms)
        if abs(total - 1.0) > TOL:
            raise InvalidChannel(f"mixture weights sum to {total!r}, expected 1")
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def unitary(cls, u) -> "RandomUnitaryChannel":
        return cls(((1.0, u),))

    @classmethod
    def identity(cls) -> "RandomUnitaryChannel":
        return cls.unitary(I2)

    def mix(self, other: "RandomUnitaryChannel", p: float) -> "RandomUnitaryChannel":
        """``p * self + (1 - p) * other`` by concatenating term lists."""
        return RandomUnitaryChannel(
            tuple((p * w, u) for w, u in self.terms) + tuple(((1 - p) * w, u) for w, u in other.terms)
        )

    def kraus_operators(self):
        return [np.sqrt(w) * u for w, u in self.terms]


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """General CPTP qubit channel given by Kraus operators."""

    kraus: tuple

    def __post_init__(self):
        ks = tuple(_frozen(k) for k in self.kraus)
        if not ks or any(k.shape != (2, 2) for k in ks):
            raise InvalidChannel("Kraus operators must be a nonempty list of 2x2 matrices")
        if np.max(np.abs(sum(k.conj().T @ k for k in ks) - I2)) > TOL:
            raise InvalidChannel("Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus", ks)

    def kraus_operators(self):
        return list(self.kraus)


Channel = Union[RandomUnitaryChannel, KrausChannel]


def _kraus(channel) -> list:
    if not isinstance(channel, (RandomUnitaryChannel, KrausChannel)):
        raise InvalidChannel(f"not a channel: {type(channel).__name__}")
    return channel.kraus_operators()


@dataclass(frozen=True, eq=False)
class ChannelMeasurement:
    """Ancilla-free channel measurement: an input state and an output POVM.

    ``ancilla`` is accepted for notational completeness and ignored; the
    process effects ``rho^T (x) E_m`` do not depend on it.
    """

    state: QubitState
    povm: Povm
    ancilla: object = field(default=None, repr=False)


def choi(channel: Channel) -> np.ndarray:
    """Unnormalized Choi matrix ``(id (x) L)(|psi'+><psi'+|)``, trace 2."""
    omega = np.zeros(4, dtype=complex)
    omega[0] = omega[3] = 1.0
    j = np.zeros((4, 4), dtype=complex)
    for k in _kraus(channel):
        w = kron(I2, k) @ omega
        j = j + np.outer(w, w.conj())
    return j


def apply_channel(channel: Channel, state: QubitState) -> QubitState:
    rho = state.matrix
    out = sum(k @ rho @ k.conj().T for k in _kraus(channel))
    return QubitState(hermitize(out))


def process_effect(meas: ChannelMeasurement, outcome) -> np.ndarray:
    """Process POVM element ``rho^T (x) E_outcome``."""
    return kron(meas.state.T, meas.povm.effect(outcome))


def clamp_probability(p: float, tol: float = TOL) -> float:
    if p < -tol or p > 1 + tol:
        raise InvalidProbability(f"probability {p!r} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def outcome_probability(channel: Channel, meas: ChannelMeasurement, outcome) -> float:
    """Born rule on the Choi matrix, ``tr[(rho^T (x) E_m) J]``."""
    p = np.trace(process_effect(meas, outcome) @ choi(channel)).real
    return clamp_probability(float(p))


def measure_and_prepare_phi() -> KrausChannel:
    """Channel ``rho -> |0><0|rho|0><0| + |x0><1|rho|1><x0|`` with ``|x0> = |+>``."""
    return KrausChannel((np.outer(KET0, KET0.conj()), np.outer(KET_PLUS, KET1.conj())))
