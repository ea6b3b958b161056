"""Spin-1/2 machinery: Bloch vectors, up-probabilities and the product-versus-entangled contrast.

Conventions: index 0 is spin up, and for N qubits the first qubit is the most
significant bit of the amplitude index, so "qubit 1 up" is the first half of
the amplitude vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, TypicalityError
from .montecarlo import Estimate, fraction_estimate, iter_state_chunks
from .sampler import MAX_QUBITS, SeedSpec, product_factors
from .linalg import StateVector


@dataclass(frozen=True)
class BlochVector:
    n_x: float
    n_y: float
    n_z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.n_x, self.n_y, self.n_z])


def _spinor(psi) -> np.ndarray:
    a = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi, dtype=np.complex128)
    if a.shape[-1] != 2:
        raise DimensionMismatch(f"a spinor has dimension 2, got {a.shape[-1]}")
    return a


def bloch_components(spinors: np.ndarray) -> np.ndarray:
    """``(n_x, n_y, n_z)`` rows for an ``(n, 2)`` array of unit spinors."""
    s = np.atleast_2d(_spinor(spinors))
    up, down = s[:, 0], s[:, 1]
    cross = up.conj() * down
    return np.stack([2 * cross.real, 2 * cross.imag, np.abs(up) ** 2 - np.abs(down) ** 2], axis=1)


def bloch_vector(spinor: StateVector) -> BlochVector:
    """``n_i = <psi|sigma_i|psi>`` for the three Pauli matrices."""
    if not isinstance(spinor, StateVector):
        spinor = StateVector(spinor)
    return BlochVector(*(float(c) for c in bloch_components(spinor.amplitudes)[0]))


def up_probability(spinor: StateVector) -> float:
    """Probability of "up" in a z-spin measurement, ``(1 + n_z) / 2``."""
    return 0.5 * (1.0 + bloch_vector(spinor).n_z)


def first_qubit_up_probability(state: StateVector) -> float:
    """``<Psi|(P_up x I x ... x I)|Psi>`` as the squared mass of the first half of the amplitudes."""
    a = state.amplitudes if isinstance(state, StateVector) else np.asarray(state)
    return float(first_qubit_up_batch(a[None, :])[0])


def first_qubit_up_batch(states: np.ndarray) -> np.ndarray:
    states = np.atleast_2d(states)
    d = states.shape[1]
    if d < 2 or d & (d - 1):
        raise TypicalityError(f"dimension {d} is not a power of two")
    head = states[:, : d // 2]
    return (head.real**2 + head.imag**2).sum(axis=1)


# --------------------------------------------------------------------------- experiments


@dataclass
class SpinReport:
    fraction_p: dict  # p -> Estimate of P(up >= 1 - p) for Haar spinors
    n_qubits: int
    threshold: float
    product_high: Estimate  # product states: P(first-qubit up >= threshold)
    haar_outside_band: Estimate  # entangled Haar states: P(first-qubit up outside band)
    band: tuple[float, float]
    n_z: np.ndarray = field(repr=False)
    up: np.ndarray = field(repr=False)


def spin_experiment(
    n_samples: int,
    seed: int,
    *,
    p_values=(0.05, 0.1, 0.25),
    n_qubits: int = 10,
    threshold: float = 0.9,
    band: tuple[float, float] = (0.4, 0.6),
) -> SpinReport:
    """Single spinors, N-qubit product states and N-qubit Haar states side by side.

    Spinors use sub-key ``(0,)``, entangled states ``(1,)`` and product-state
    factors ``(2,)`` of each stream, so the three samples are independent.

    * Haar spinors: the fraction with up-probability at least ``1 - p`` is p.
    * Product states: the first qubit is a Haar spinor, so the fraction with
      up-probability at least ``threshold`` is ``1 - threshold`` for every N.
    * Haar states on N qubits: the first-qubit up-probability is
      Beta(2^(N-1), 2^(N-1)) and hugs 1/2.
    """
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise TypicalityError(f"n_qubits must lie in [1, {MAX_QUBITS}]")
    spinors = np.empty((n_samples, 2), dtype=np.complex128)
    for lo, s in iter_state_chunks(2, n_samples, seed, (0,)):
        spinors[lo : lo + s.shape[0]] = s
    n_vec = bloch_components(spinors)
    up = 0.5 * (1.0 + n_vec[:, 2])
    frac = {p: fraction_estimate(up >= 1.0 - p) for p in p_values}

    product_up = np.empty(n_samples)
    for i in range(n_samples):
        factors = product_factors(n_qubits, SeedSpec(seed, i), (2,))
        state = factors[0]
        for f in factors[1:]:
            state = np.kron(state, f)
        product_up[i] = first_qubit_up_batch(state[None, :])[0]

    d = 2**n_qubits
    haar_up = np.empty(n_samples)
    for lo, states in iter_state_chunks(d, n_samples, seed, (1,)):
        haar_up[lo : lo + states.shape[0]] = first_qubit_up_batch(states)

    return SpinReport(
        frac,
        n_qubits,
        threshold,
        fraction_estimate(product_up >= threshold),
        fraction_estimate((haar_up < band[0]) | (haar_up > band[1])),
        band,
        n_vec[:, 2],
        up,
    )


def haar_first_qubit_variance(n_qubits: int) -> float:
    """Variance of Beta(2^(n-1), 2^(n-1)), i.e. ``1 / (4 (2^n + 1))``."""
    return 1.0 / (4.0 * (2**n_qubits + 1))


def entropy_log(d0: int) -> float:
    """Natural log of the subspace dimension (Boltzmann entropy in units of k_B)."""
    return math.log(d0)
