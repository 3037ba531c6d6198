"""Seeded random qubit objects for the randomized verification suites.

All samplers take an explicit ``numpy.random.Generator``. Independent tasks
get their own generator from :func:`task_rng`, whose seed is derived from
``(seed, index)`` by :func:`derive_seed`.
"""

from __future__ import annotations

import numpy as np

from .quantum import Povm, QubitState, RandomUnitaryChannel, I2
from .linalg import hermitize, partial_trace


def derive_seed(seed: int, index: int) -> int:
    """Child seed for task ``index`` of a run seeded with ``seed``.

    The pair is hashed through ``numpy.random.SeedSequence`` and the first
    64-bit word of its state is used, so seeds are stable across platforms.
    """
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1, dtype=np.uint64)[0])


def task_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, index))


def _ginibre(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def sample_ket(rng, dim: int = 2) -> np.ndarray:
    v = _ginibre(rng, dim)
    return v / np.linalg.norm(v)


def sample_state(rng) -> QubitState:
    """Mixed qubit state: reduced state of a Haar-random two-qubit pure state."""
    psi = sample_ket(rng, 4)
    return QubitState(hermitize(partial_trace(np.outer(psi, psi.conj()), "second")))


def sample_pure_state(rng) -> QubitState:
    return QubitState.pure(sample_ket(rng))


def sample_unitary(rng) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Gaussian matrix."""
    q, r = np.linalg.qr(_ginibre(rng, (2, 2)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_binary_povm(rng, labels=("0", "1")) -> Povm:
    """Two-outcome POVM ``{E, I - E}`` with uniform eigenvalues and Haar eigenbasis."""
    v = sample_unitary(rng)
    e = hermitize(v @ np.diag(rng.uniform(0.0, 1.0, 2)) @ v.conj().T)
    return Povm((e, hermitize(I2 - e)), labels)


def sample_ru_channel(rng, k: int = 3) -> RandomUnitaryChannel:
    """``k`` Haar unitaries with weights drawn uniformly from the simplex."""
    weights = rng.dirichlet(np.ones(k))
    weights = weights / weights.sum()
    return RandomUnitaryChannel(tuple((w, sample_unitary(rng)) for w in weights))
