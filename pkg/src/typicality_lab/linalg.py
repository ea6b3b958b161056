"""Complex linear algebra in subspace coordinates.

Every object here lives on a d0-dimensional subspace identified with C^d0.
States are unit vectors, effects are operators with 0 <= E <= I, and densities
are trace-one positive operators.  Effects come in four storage forms so that
structured observables can be evaluated in O(d0) for very large d0:

* :class:`DenseEffect`      full d0 x d0 Hermitian matrix
* :class:`Rank1Effect`      ``w |v><v|`` for a unit vector v
* :class:`DiagonalEffect`   diagonal matrix with entries in [0, 1]
* :class:`BasisProjector`   projector onto a set of basis vectors

plus :class:`ComplementEffect`, the lazy ``I - E`` view used for two-outcome
measurements built from a rank-one element.

Basis indices are zero-based: ``StateVector.basis(d, 0)`` is the first basis
vector.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidOperator, TypicalityError

UNIT_NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
RANGE_TOL = 1e-10
COMPLETENESS_TOL = 1e-10

# above this dimension POVM completeness is checked with random probe vectors
DENSE_CHECK_MAX_DIM = 2048


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class StateVector:
    """Unit vector in C^d0.

    Parameters
    ----------
    amplitudes : array_like of complex
        Coordinates in the subspace basis.
    normalize : bool, default=False
        Rescale to unit norm instead of requiring it.
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes, *, normalize: bool = False):
        a = np.array(amplitudes, dtype=np.complex128)
        if a.ndim != 1 or a.size == 0:
            raise TypicalityError("a state needs a non-empty 1-D amplitude vector")
        norm2 = float(np.vdot(a, a).real)
        if normalize:
            if norm2 == 0.0 or not np.isfinite(norm2):
                raise TypicalityError("cannot normalize a zero or non-finite vector")
            a /= np.sqrt(norm2)
        elif abs(norm2 - 1.0) > UNIT_NORM_TOL:
            raise TypicalityError(f"state is not normalized: |psi|^2 = {norm2!r}")
        self._amplitudes = _frozen(a)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        if not 0 <= index < dim:
            raise TypicalityError(f"basis index {index} out of range for dimension {dim}")
        a = np.zeros(dim, dtype=np.complex128)
        a[index] = 1.0
        return cls(a)

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return self._amplitudes.shape[0]

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        _check_dims(self.dim, other.dim)
        return complex(np.vdot(self._amplitudes, other._amplitudes))

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        if self.dim <= 4:
            return f"StateVector({np.array2string(self._amplitudes, precision=4)})"
        return f"StateVector(dim={self.dim})"


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} != {b}")


# --------------------------------------------------------------------------- effects


class Effect(ABC):
    """Positive operator 0 <= E <= I on C^d0."""

    dim: int

    @abstractmethod
    def expect_batch(self, states: np.ndarray) -> np.ndarray:
        """Raw ``<psi|E|psi>`` for each row of an ``(n, d0)`` array, unclamped."""

    @abstractmethod
    def trace(self) -> float: ...

    @abstractmethod
    def trace_with(self, rho: np.ndarray) -> float:
        """``tr(rho E)`` for a dense density matrix."""

    @abstractmethod
    def matvec(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        """Distinct eigenvalues and their multiplicities.

        Multiplicities sum to ``dim``; levels with multiplicity zero are dropped.
        """

    @abstractmethod
    def to_dense(self) -> np.ndarray: ...

    def diagonal(self) -> np.ndarray | None:
        """Diagonal entries when the operator is diagonal in the basis, else None."""
        return None

    def norm(self) -> float:
        values, _ = self.levels()
        return float(np.max(np.abs(values))) if values.size else 0.0


class DenseEffect(Effect):
    """Effect stored as a full Hermitian matrix."""

    def __init__(self, matrix, *, validate: bool = True):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvalidOperator(f"effect matrix must be square, got shape {m.shape}")
        asym = np.max(np.abs(m - m.conj().T))
        if asym > HERMITIAN_TOL:
            raise InvalidOperator(f"effect matrix is not Hermitian (max |E - E^H| = {asym:.3g})")
        self._matrix = _frozen(m)
        self.dim = m.shape[0]
        self._eigvals = None
        if validate:
            ev = self.eigenvalues()
            if ev[0] < -RANGE_TOL or ev[-1] > 1.0 + RANGE_TOL:
                raise InvalidOperator(
                    f"effect spectrum [{ev[0]:.3g}, {ev[-1]:.3g}] leaves [0, 1]"
                )

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def eigenvalues(self) -> np.ndarray:
        if self._eigvals is None:
            self._eigvals = _frozen(np.linalg.eigvalsh(self._matrix))
        return self._eigvals

    def expect_batch(self, states):
        states = np.atleast_2d(states)
        return np.einsum("nj,nj->n", states.conj(), states @ self._matrix.T).real

    def trace(self):
        return float(np.trace(self._matrix).real)

    def trace_with(self, rho):
        return float(np.einsum("ij,ji->", rho, self._matrix).real)

    def matvec(self, x):
        return self._matrix @ x

    def levels(self):
        values, counts = np.unique(self.eigenvalues(), return_counts=True)
        return values, counts

    def norm(self):
        ev = self.eigenvalues()
        return float(max(abs(ev[0]), abs(ev[-1])))

    def to_dense(self):
        return self._matrix.copy()

    def diagonal(self):
        off = self._matrix - np.diag(np.diag(self._matrix))
        if np.any(off != 0):
            return None
        return np.diag(self._matrix).real.copy()

    def __repr__(self):
        return f"DenseEffect(dim={self.dim})"


class Rank1Effect(Effect):
    """``weight * |v><v|`` with v a unit vector and weight in [0, 1]."""

    def __init__(self, vector: StateVector | Sequence[complex], weight: float = 1.0):
        if not isinstance(vector, StateVector):
            vector = StateVector(vector)
        weight = float(weight)
        if not 0.0 <= weight <= 1.0:
            raise InvalidOperator(f"rank-1 weight must lie in [0, 1], got {weight}")
        self.vector = vector
        self.weight = weight
        self.dim = vector.dim

    def expect_batch(self, states):
        states = np.atleast_2d(states)
        overlap = states @ self.vector.amplitudes.conj()
        return self.weight * (overlap.real**2 + overlap.imag**2)

    def trace(self):
        return self.weight

    def trace_with(self, rho):
        v = self.vector.amplitudes
        return self.weight * float(np.vdot(v, rho @ v).real)

    def matvec(self, x):
        v = self.vector.amplitudes
        return self.weight * v * np.vdot(v, x)

    def levels(self):
        if self.dim == 1 or self.weight == 0.0:
            return np.array([self.weight]), np.array([self.dim])
        return np.array([0.0, self.weight]), np.array([self.dim - 1, 1])

    def norm(self):
        return self.weight

    def to_dense(self):
        v = self.vector.amplitudes
        return self.weight * np.outer(v, v.conj())

    def diagonal(self):
        v = self.vector.amplitudes
        if np.count_nonzero(v) > 1:
            return None
        return self.weight * np.abs(v) ** 2

    def __repr__(self):
        return f"Rank1Effect(dim={self.dim}, weight={self.weight})"


class DiagonalEffect(Effect):
    """Diagonal operator with real entries in [0, 1]."""

    def __init__(self, values):
        v = np.array(values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise InvalidOperator("diagonal effect needs a non-empty 1-D vector")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise InvalidOperator("diagonal effect entries must lie in [0, 1]")
        self.values = _frozen(v)
        self.dim = v.size

    def expect_batch(self, states):
        states = np.atleast_2d(states)
        return (states.real**2 + states.imag**2) @ self.values

    def trace(self):
        return float(self.values.sum())

    def trace_with(self, rho):
        return float(np.dot(np.diag(rho).real, self.values))

    def matvec(self, x):
        return self.values * x

    def levels(self):
        return np.unique(self.values, return_counts=True)

    def norm(self):
        return float(self.values.max())

    def to_dense(self):
        return np.diag(self.values).astype(np.complex128)

    def diagonal(self):
        return self.values.copy()

    def __repr__(self):
        return f"DiagonalEffect(dim={self.dim})"


class BasisProjector(Effect):
    """Orthogonal projector onto ``span{b_k : k in indices}``."""

    def __init__(self, indices: Iterable[int], dim: int):
        idx = np.unique(np.asarray(list(indices), dtype=np.int64))
        dim = int(dim)
        if dim < 1:
            raise InvalidOperator("dimension must be positive")
        if idx.size and (idx[0] < 0 or idx[-1] >= dim):
            raise InvalidOperator(f"projector indices out of range for dimension {dim}")
        self.indices = _frozen(idx)
        self.dim = dim

    @property
    def rank(self) -> int:
        return int(self.indices.size)

    def expect_batch(self, states):
        states = np.atleast_2d(states)
        sub = states[:, self.indices]
        return (sub.real**2 + sub.imag**2).sum(axis=1)

    def trace(self):
        return float(self.rank)

    def trace_with(self, rho):
        return float(np.diag(rho).real[self.indices].sum())

    def matvec(self, x):
        out = np.zeros_like(x, dtype=np.complex128)
        out[self.indices] = x[self.indices]
        return out

    def levels(self):
        r = self.rank
        values = np.array([0.0, 1.0])
        counts = np.array([self.dim - r, r])
        keep = counts > 0
        return values[keep], counts[keep]

    def norm(self):
        return 1.0 if self.rank else 0.0

    def to_dense(self):
        return np.diag(self.diagonal()).astype(np.complex128)

    def diagonal(self):
        d = np.zeros(self.dim)
        d[self.indices] = 1.0
        return d

    def __repr__(self):
        return f"BasisProjector(rank={self.rank}, dim={self.dim})"


class ComplementEffect(Effect):
    """``I - E`` for a base effect, evaluated without materializing the identity."""

    def __init__(self, base: Effect):
        self.base = base
        self.dim = base.dim

    def expect_batch(self, states):
        states = np.atleast_2d(states)
        norms = (states.real**2 + states.imag**2).sum(axis=1)
        return norms - self.base.expect_batch(states)

    def trace(self):
        return self.dim - self.base.trace()

    def trace_with(self, rho):
        return float(np.trace(rho).real) - self.base.trace_with(rho)

    def matvec(self, x):
        return x - self.base.matvec(x)

    def levels(self):
        values, counts = self.base.levels()
        return (1.0 - values)[::-1], counts[::-1]

    def to_dense(self):
        return np.eye(self.dim, dtype=np.complex128) - self.base.to_dense()

    def diagonal(self):
        d = self.base.diagonal()
        return None if d is None else 1.0 - d

    def __repr__(self):
        return f"ComplementEffect({self.base!r})"


def complement(e: Effect) -> Effect:
    """``I - E`` in the most compact representation available."""
    if isinstance(e, ComplementEffect):
        return e.base
    if isinstance(e, DiagonalEffect):
        return DiagonalEffect(1.0 - e.values)
    if isinstance(e, BasisProjector):
        rest = np.setdiff1d(np.arange(e.dim), e.indices)
        return BasisProjector(rest, e.dim)
    if isinstance(e, DenseEffect):
        return DenseEffect(np.eye(e.dim) - e.matrix)
    return ComplementEffect(e)


# --------------------------------------------------------------------------- POVMs


class Povm:
    """Finite family of effects summing to the identity.

    Completeness is checked elementwise on the dense sum for ``dim <= 2048``.
    Larger POVMs are checked exactly on their diagonals when every element is
    diagonal, and otherwise by applying the sum to random probe vectors.
    """

    def __init__(self, effects: Sequence[Effect], labels: Sequence | None = None):
        effects = tuple(effects)
        if not effects:
            raise InvalidOperator("a POVM needs at least one effect")
        dim = effects[0].dim
        for e in effects:
            _check_dims(dim, e.dim)
        if labels is None:
            labels = tuple(range(len(effects)))
        labels = tuple(labels)
        if len(labels) != len(effects):
            raise TypicalityError("need exactly one label per effect")
        self.effects = effects
        self.labels = labels
        self.dim = dim
        self._check_completeness()

    def _check_completeness(self) -> None:
        diags = [e.diagonal() for e in self.effects]
        if all(d is not None for d in diags):
            err = np.max(np.abs(np.sum(diags, axis=0) - 1.0))
        elif self.dim <= DENSE_CHECK_MAX_DIM:
            total = sum(e.to_dense() for e in self.effects)
            err = np.max(np.abs(total - np.eye(self.dim)))
        else:
            rng = np.random.default_rng(0x9E3779B9)
            probes = rng.standard_normal((3, self.dim)) + 1j * rng.standard_normal((3, self.dim))
            err = 0.0
            for x in probes:
                x /= np.linalg.norm(x)
                y = sum(e.matvec(x) for e in self.effects)
                err = max(err, float(np.max(np.abs(y - x))))
        if err > COMPLETENESS_TOL:
            raise InvalidOperator(f"POVM elements do not sum to the identity (error {err:.3g})")

    def __len__(self) -> int:
        return len(self.effects)

    def __iter__(self):
        return iter(self.effects)

    def __getitem__(self, i) -> Effect:
        return self.effects[i]

    def __repr__(self):
        return f"Povm(outcomes={len(self)}, dim={self.dim})"


# --------------------------------------------------------------------------- densities


class DensitySpec(ABC):
    dim: int

    @abstractmethod
    def to_dense(self) -> np.ndarray: ...


class MaxMixed(DensitySpec):
    """``P0 / d0``, the normalized projector onto the whole subspace."""

    def __init__(self, dim: int):
        if dim < 1:
            raise TypicalityError("dimension must be positive")
        self.dim = int(dim)

    def to_dense(self):
        return np.eye(self.dim, dtype=np.complex128) / self.dim

    def __repr__(self):
        return f"MaxMixed({self.dim})"


class Pure(DensitySpec):
    def __init__(self, state: StateVector):
        self.state = state
        self.dim = state.dim

    def to_dense(self):
        a = self.state.amplitudes
        return np.outer(a, a.conj())

    def __repr__(self):
        return f"Pure({self.state!r})"


class DenseDensity(DensitySpec):
    def __init__(self, matrix):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidOperator("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidOperator("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > UNIT_NORM_TOL:
            raise InvalidOperator(f"density matrix has trace {tr!r}, expected 1")
        if np.linalg.eigvalsh(m)[0] < -UNIT_NORM_TOL:
            raise InvalidOperator("density matrix is not positive semidefinite")
        self.matrix = _frozen(m)
        self.dim = m.shape[0]

    def to_dense(self):
        return self.matrix.copy()

    def __repr__(self):
        return f"DenseDensity(dim={self.dim})"


# --------------------------------------------------------------------------- operations


def _as_probability(values):
    v = np.asarray(values, dtype=np.float64)
    if np.any(v < -RANGE_TOL) or np.any(v > 1.0 + RANGE_TOL):
        bad = v[(v < -RANGE_TOL) | (v > 1.0 + RANGE_TOL)].flat[0]
        raise InvalidOperator(f"probability {bad!r} outside [0, 1]; the effect is corrupt")
    return np.clip(v, 0.0, 1.0)


def expectation(psi: StateVector, e: Effect) -> float:
    """Born probability ``<psi|E|psi>``."""
    _check_dims(psi.dim, e.dim)
    return float(_as_probability(e.expect_batch(psi.amplitudes[None, :]))[0])


def expectation_batch(states: np.ndarray, e: Effect) -> np.ndarray:
    """Vectorized :func:`expectation` over the rows of an ``(n, d0)`` array of unit vectors."""
    states = np.atleast_2d(states)
    _check_dims(states.shape[1], e.dim)
    return _as_probability(e.expect_batch(states))


def ensemble_probability(rho: DensitySpec, e: Effect) -> float:
    """``tr(rho E)``.

    For ``MaxMixed`` this is ``tr(E) / d0`` and never touches a dense matrix.
    """
    _check_dims(rho.dim, e.dim)
    if isinstance(rho, Pure):
        return expectation(rho.state, e)
    if isinstance(rho, MaxMixed):
        value = e.trace() / rho.dim
    else:
        value = e.trace_with(rho.to_dense())
    return float(_as_probability(value))


def operator_norm(e: Effect | np.ndarray) -> float:
    """Largest absolute eigenvalue.

    Accepts any effect, or a plain Hermitian matrix that need not be an effect.
    """
    if isinstance(e, Effect):
        return e.norm()
    m = np.asarray(e, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidOperator(f"operator must be square, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise InvalidOperator("operator is not Hermitian")
    ev = np.linalg.eigvalsh(m)
    return float(max(abs(ev[0]), abs(ev[-1])))


def compress_to_subspace(ambient_effect, basis: Sequence[StateVector]) -> DenseEffect:
    """Matrix of ``P0 E P0`` in an orthonormal basis of the subspace.

    Parameters
    ----------
    ambient_effect : Effect or array_like
        Effect on the ambient space, as an :class:`Effect` or a dense matrix.
    basis : sequence of StateVector
        Orthonormal vectors (ambient coordinates) spanning the subspace.

    Returns
    -------
    DenseEffect
        Entries ``<b_i|E|b_j>``.
    """
    m = ambient_effect.to_dense() if isinstance(ambient_effect, Effect) else np.asarray(
        ambient_effect, dtype=np.complex128
    )
    if isinstance(basis, np.ndarray):
        B = np.asarray(basis, dtype=np.complex128)
        if B.ndim == 1:
            B = B[:, None]
    else:
        basis = list(basis)
        B = np.stack([b.amplitudes if isinstance(b, StateVector) else np.asarray(b, dtype=np.complex128) for b in basis], axis=1) if basis else np.empty((0, 0))
    if B.size == 0:
        raise TypicalityError("basis must contain at least one vector")
    if B.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"basis vectors have dimension {B.shape[0]}, operator {m.shape[0]}")
    gram_err = np.max(np.abs(B.conj().T @ B - np.eye(B.shape[1])))
    if gram_err > COMPLETENESS_TOL:
        raise TypicalityError(f"basis is not orthonormal (Gram error {gram_err:.3g})")
    c = B.conj().T @ m @ B
    # the product is Hermitian up to rounding; symmetrize so validation sees it exactly
    return DenseEffect(0.5 * (c + c.conj().T))
