"""Reproducible Haar sampling on the unit sphere of C^d0.

Every sample owns its random stream.  A sample is addressed by
``(master_seed, stream_index)`` plus an optional sub-key, hashed through
numpy's :class:`~numpy.random.SeedSequence` into an independent PCG64 state.
The bits of sample ``i`` therefore never depend on how many other samples were
drawn, in what order, or in what batch size.

Sub-key conventions used across the package:

* ``()``      single states (:func:`sample_uniform`)
* ``(0,)``    first member of a pair, ``(1,)`` second member
* ``(2,)``, ``(3,)``  a second, independent pair attached to the same stream
  (``(2,)`` also carries the product-state factors of the spin experiment)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import TypicalityError
from .linalg import DenseEffect, Povm, StateVector

MAX_QUBITS = 20
_UINT64_MAX = 2**64 - 1


@dataclass(frozen=True)
class SeedSpec:
    """Address of one sample's random stream."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) <= _UINT64_MAX:
            raise TypicalityError("master_seed must be a 64-bit unsigned integer")
        if int(self.stream_index) < 0:
            raise TypicalityError("stream_index must be non-negative")

    def generator(self, *subkey: int) -> np.random.Generator:
        return _generator(self.master_seed, self.stream_index, subkey)


def _generator(master_seed: int, stream: int, subkey: Sequence[int] = ()) -> np.random.Generator:
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(stream), *subkey))
    return np.random.Generator(np.random.PCG64(ss))


def _haar_amplitudes(d0: int, gen: np.random.Generator) -> np.ndarray:
    z = gen.standard_normal(2 * d0).view(np.complex128)
    return z / np.sqrt(np.vdot(z, z).real)


def _check_dim(d0: int) -> int:
    d0 = int(d0)
    if d0 < 1:
        raise TypicalityError(f"dimension must be at least 1, got {d0}")
    return d0


def sample_uniform(d0: int, seed: SeedSpec) -> StateVector:
    """Haar-uniform unit vector in C^d0.

    Draws 2*d0 standard normals, pairs them into complex amplitudes and
    normalizes; the result is invariant in law under every unitary.
    """
    d0 = _check_dim(d0)
    return StateVector(_haar_amplitudes(d0, seed.generator()))


def sample_pair(d0: int, seed: SeedSpec) -> tuple[StateVector, StateVector]:
    """Two independent Haar states drawn from disjoint sub-streams of ``seed``."""
    d0 = _check_dim(d0)
    a = _haar_amplitudes(d0, seed.generator(0))
    b = _haar_amplitudes(d0, seed.generator(1))
    return StateVector(a), StateVector(b)


def haar_states(
    d0: int, master_seed: int, streams: Iterable[int], subkey: Sequence[int] = ()
) -> np.ndarray:
    """Stack of Haar states, one row per stream index.

    Row ``j`` is bitwise identical to ``sample_uniform(d0, SeedSpec(master_seed, streams[j]))``
    when ``subkey`` is empty, and to the matching member of :func:`sample_pair`
    for ``subkey=(0,)`` or ``(1,)``.
    """
    d0 = _check_dim(d0)
    streams = list(streams)
    out = np.empty((len(streams), d0), dtype=np.complex128)
    for row, s in enumerate(streams):
        out[row] = _haar_amplitudes(d0, _generator(master_seed, s, subkey))
    return out


def dirichlet_block_masses(
    block_sizes: Sequence[int], master_seed: int, streams: Iterable[int], subkey: Sequence[int] = ()
) -> np.ndarray:
    """Squared-norm mass a Haar state puts on each block of a basis partition.

    For a Haar vector, ``(|psi_1|^2, ..., |psi_d0|^2)`` is Dirichlet(1, ..., 1),
    so the masses of blocks of sizes ``m_1..m_K`` are Dirichlet(m_1, ..., m_K).
    Sampling them through K Gamma variates costs O(K) instead of O(d0).

    Returns
    -------
    ndarray, shape (n_streams, K)
    """
    sizes = np.asarray(block_sizes, dtype=np.float64)
    if sizes.ndim != 1 or sizes.size == 0 or np.any(sizes <= 0):
        raise TypicalityError("block sizes must be a non-empty list of positive integers")
    streams = list(streams)
    out = np.empty((len(streams), sizes.size))
    for row, s in enumerate(streams):
        g = _generator(master_seed, s, subkey).standard_gamma(sizes)
        out[row] = g / g.sum()
    return out


def sample_product_state(n_qubits: int, seed: SeedSpec) -> StateVector:
    """Tensor product of ``n_qubits`` independent Haar spinors.

    The first qubit is the most significant bit of the amplitude index, and
    index 0 of each factor is spin up.
    """
    n = int(n_qubits)
    if not 1 <= n <= MAX_QUBITS:
        raise TypicalityError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n}")
    spinors = product_factors(n, seed)
    state = spinors[0]
    for s in spinors[1:]:
        state = np.kron(state, s)
    return StateVector(state)


def product_factors(n_qubits: int, seed: SeedSpec, subkey: Sequence[int] = ()) -> np.ndarray:
    """The ``(n_qubits, 2)`` spinor factors behind :func:`sample_product_state`."""
    gen = seed.generator(*subkey)
    z = gen.standard_normal((n_qubits, 4)).view(np.complex128)
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_unitary(d: int, seed: SeedSpec) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Ginibre matrix."""
    d = _check_dim(d)
    gen = seed.generator()
    z = gen.standard_normal((d, 2 * d)).view(np.complex128) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_povm(d0: int, n_outcomes: int, seed: SeedSpec) -> Povm:
    """Random full-rank POVM ``E_z = S^{-1/2} A_z S^{-1/2}`` with ``A_z`` Wishart and ``S = sum A_z``."""
    d0 = _check_dim(d0)
    if n_outcomes < 1:
        raise TypicalityError("a POVM needs at least one outcome")
    gen = seed.generator()
    blocks = []
    for _ in range(n_outcomes):
        g = gen.standard_normal((d0, 2 * d0)).view(np.complex128)
        blocks.append(g @ g.conj().T)
    total = sum(blocks)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    effects = []
    for a in blocks:
        e = inv_sqrt @ a @ inv_sqrt
        effects.append(0.5 * (e + e.conj().T))
    # absorb rounding so the elements sum to I to machine precision
    effects[-1] = effects[-1] + (np.eye(d0) - sum(effects))
    return Povm([DenseEffect(e) for e in effects])


def haar_first_coordinates(
    d0: int, master_seed: int, streams: Iterable[int], subkey: Sequence[int] = ()
) -> np.ndarray:
    """First amplitude ``<b_1|psi>`` of Haar states without materializing them.

    With ``psi = z / |z|`` for a complex Gaussian vector z, the first amplitude is
    ``z_1 / sqrt(|z_1|^2 + R)`` where ``R = sum_{k>1} |z_k|^2`` is twice a
    Gamma(d0 - 1) variate.  Exact in law, O(1) per sample.
    """
    d0 = _check_dim(d0)
    streams = list(streams)
    out = np.empty(len(streams), dtype=np.complex128)
    for row, s in enumerate(streams):
        gen = _generator(master_seed, s, subkey)
        z1 = complex(*gen.standard_normal(2))
        rest = 2.0 * gen.standard_gamma(d0 - 1) if d0 > 1 else 0.0
        out[row] = z1 / np.sqrt(abs(z1) ** 2 + rest)
    return out
