"""Shared Monte Carlo plumbing: sampling Born probabilities and summarizing estimates.

Two sampling routes produce ``<psi_i|E|psi_i>`` for Haar states ``psi_i``:

``"state"``
    materialize each state from its own seed stream and apply the effect.
``"spectral"``
    use unitary invariance: ``<psi|E|psi>`` has the law of
    ``sum_j lambda_j M_j`` where ``lambda_j`` are the distinct eigenvalues of E
    and ``M`` is Dirichlet over their multiplicities.  Exact in distribution,
    O(#levels) per sample, so d0 = 10^5 or 10^6 is cheap for structured effects.

``"auto"`` picks the state route unless it would materialize more than
``STATE_BUDGET`` complex amplitudes.  The two routes consume different random
streams, so their samples agree in law but not bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import TypicalityError
from .linalg import Effect, expectation_batch
from .sampler import dirichlet_block_masses, haar_states

STATE_BUDGET = 5 * 10**8
_CHUNK_AMPLITUDES = 2**21

METHODS = ("auto", "state", "spectral")


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n: int

    def z_score(self, expected: float) -> float:
        if self.stderr == 0.0:
            return 0.0 if self.value == expected else float("inf")
        return (self.value - expected) / self.stderr

    def as_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n": self.n}


def mean_estimate(x) -> Estimate:
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 2:
        raise TypicalityError("need at least two samples for a standard error")
    return Estimate(float(x.mean()), float(x.std(ddof=1) / np.sqrt(n)), n)


def fraction_estimate(mask) -> Estimate:
    mask = np.asarray(mask, dtype=bool)
    n = mask.size
    if n == 0:
        raise TypicalityError("empty sample")
    p = float(mask.mean())
    return Estimate(p, float(np.sqrt(p * (1.0 - p) / n)), n)


def binomial_sigma(p: float, n: int) -> float:
    """Standard deviation of a sample fraction with true probability p."""
    return float(np.sqrt(p * (1.0 - p) / n))


def resolve_method(method: str, d0: int, n: int) -> str:
    if method not in METHODS:
        raise TypicalityError(f"unknown sampling method {method!r}; choose from {METHODS}")
    if method == "auto":
        return "state" if d0 * n <= STATE_BUDGET else "spectral"
    return method


def chunk_rows(d0: int) -> int:
    return max(1, _CHUNK_AMPLITUDES // d0)


def iter_state_chunks(d0: int, n: int, master_seed: int, subkey: Sequence[int] = (), start: int = 0):
    """Yield ``(offset, states)`` blocks covering streams ``start .. start + n - 1``."""
    step = chunk_rows(d0)
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        yield lo, haar_states(d0, master_seed, range(start + lo, start + hi), subkey)


def expectation_samples(
    effect: Effect,
    n: int,
    master_seed: int,
    *,
    subkey: Sequence[int] = (),
    method: str = "auto",
    start: int = 0,
) -> np.ndarray:
    """Born probabilities of ``effect`` for ``n`` Haar states.

    Sample ``i`` uses stream ``start + i``; results land in slot ``i`` so the
    output is independent of chunking.
    """
    n = int(n)
    if n < 1:
        raise TypicalityError("n must be positive")
    d0 = effect.dim
    route = resolve_method(method, d0, n)
    out = np.empty(n)
    if route == "state":
        for lo, states in iter_state_chunks(d0, n, master_seed, subkey, start):
            out[lo : lo + states.shape[0]] = expectation_batch(states, effect)
        return out
    levels, counts = effect.levels()
    masses = dirichlet_block_masses(counts, master_seed, range(start, start + n), subkey)
    return np.clip(masses @ levels, 0.0, 1.0)
