"""Typicality bounds for Born probabilities of Haar states and their Monte Carlo checks.

For a self-adjoint B and Haar psi on a d0-dimensional subspace, all but a
fraction eps of states satisfy

    |<psi|B|psi> - tr(rho0 B)| <= ||B|| / sqrt(eps * d0),

and for an L-outcome POVM every outcome simultaneously stays within
sqrt(L / (eps * d0)).  ``tr(rho0 B)`` is also the exact Haar average of
``<psi|B|psi>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._numbers import exact, half
from .errors import DimensionMismatch, TypicalityError
from .linalg import Effect, MaxMixed, Rank1Effect, StateVector, ensemble_probability, expectation_batch
from .montecarlo import Estimate, expectation_samples, iter_state_chunks, mean_estimate, resolve_method

POVM_MARGIN = 100
QUANTILES = (0.5, 0.9, 0.99, 0.999)


def _check_epsilon(epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise TypicalityError(f"epsilon must lie strictly inside (0, 1), got {epsilon}")


def bound_single(op_norm: float, epsilon: float, d0) -> float:
    """``||B|| / sqrt(eps * d0)``."""
    _check_epsilon(epsilon)
    if op_norm < 0:
        raise TypicalityError("operator norm cannot be negative")
    if d0 < 1:
        raise TypicalityError("d0 must be at least 1")
    return op_norm / math.sqrt(epsilon * d0)


def log10_bound_single(op_norm: float, log10_epsilon, log10_d0):
    """Base-10 logarithm of :func:`bound_single` for parameters beyond float range.

    Integer or :class:`~fractions.Fraction` exponents give an exact rational
    result when ``op_norm`` is 0 or 1, e.g. ``d0 = 10**(10**80)``,
    ``eps = 1e-200`` yields exactly ``100 - 10**80 / 2``.
    """
    if not log10_epsilon < 0:
        raise TypicalityError("epsilon must be below 1, i.e. log10_epsilon < 0")
    if log10_d0 < 0:
        raise TypicalityError("d0 must be at least 1")
    if op_norm < 0:
        raise TypicalityError("operator norm cannot be negative")
    if op_norm == 0:
        return -math.inf
    lead = 0 if op_norm == 1 else math.log10(op_norm)
    return lead - half(log10_epsilon + log10_d0)


class PovmBound(NamedTuple):
    value: float
    condition_holds: bool
    margin: float  # d0 / (L / eps)


class LogPovmBound(NamedTuple):
    log10_value: object
    condition_holds: bool
    log10_margin: object


def bound_povm(n_outcomes: int, epsilon: float, d0) -> PovmBound:
    """``sqrt(L / (eps * d0))`` together with the large-dimension condition.

    The condition ``d0 >> L / eps`` is operationalized as ``d0 >= 100 L / eps``.
    """
    _check_epsilon(epsilon)
    if n_outcomes < 1:
        raise TypicalityError("a POVM has at least one outcome")
    if d0 < 1:
        raise TypicalityError("d0 must be at least 1")
    margin = d0 * epsilon / n_outcomes
    holds = exact(d0) * exact(epsilon) >= POVM_MARGIN * exact(n_outcomes)
    return PovmBound(math.sqrt(n_outcomes / (epsilon * d0)), bool(holds), float(margin))


def log10_bound_povm(n_outcomes: int, log10_epsilon, log10_d0) -> LogPovmBound:
    if not log10_epsilon < 0:
        raise TypicalityError("epsilon must be below 1, i.e. log10_epsilon < 0")
    if n_outcomes < 1:
        raise TypicalityError("a POVM has at least one outcome")
    log_l = math.log10(n_outcomes)
    value = half(log_l - log10_epsilon - log10_d0)
    margin = log10_d0 + log10_epsilon - log_l
    return LogPovmBound(value, bool(margin >= math.log10(POVM_MARGIN)), margin)


@dataclass(frozen=True)
class ConcentrationConfig:
    d0: int
    epsilon: float
    n_samples: int
    effect: Effect

    def __post_init__(self):
        _check_epsilon(self.epsilon)
        if self.d0 < 1:
            raise TypicalityError("d0 must be at least 1")
        if self.n_samples < 100:
            raise TypicalityError("statistical claims need n_samples >= 100")
        if self.effect.dim != self.d0:
            raise DimensionMismatch(f"effect has dimension {self.effect.dim}, config d0 = {self.d0}")


@dataclass
class DeviationStats:
    deviations: np.ndarray
    bound: float
    violation_count: int
    epsilon: float
    empirical_quantiles: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.deviations.size)

    @property
    def violation_fraction(self) -> float:
        return self.violation_count / self.n

    @property
    def allowed_fraction(self) -> float:
        """eps plus three binomial standard deviations, ``eps + 3 sqrt(eps / n)``."""
        return self.epsilon + 3.0 * math.sqrt(self.epsilon / self.n)

    @property
    def honored(self) -> bool:
        return self.violation_fraction <= self.allowed_fraction

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "bound": self.bound,
            "violation_count": self.violation_count,
            "violation_fraction": self.violation_fraction,
            "allowed_fraction": self.allowed_fraction,
            "max_deviation": float(self.deviations.max()),
            "empirical_quantiles": {str(q): v for q, v in self.empirical_quantiles.items()},
        }


def run_deviation_experiment(cfg: ConcentrationConfig, seed: int, *, method: str = "auto") -> DeviationStats:
    """Sample ``cfg.n_samples`` Haar states and count violations of the single-operator bound."""
    center = ensemble_probability(MaxMixed(cfg.d0), cfg.effect)
    bound = bound_single(cfg.effect.norm(), cfg.epsilon, cfg.d0)
    p = expectation_samples(cfg.effect, cfg.n_samples, seed, method=method)
    dev = np.abs(p - center)
    quant = {q: float(np.quantile(dev, q)) for q in QUANTILES}
    return DeviationStats(dev, bound, int(np.count_nonzero(dev > bound)), cfg.epsilon, quant)


@dataclass(frozen=True)
class MeanIdentityReport:
    estimate: Estimate
    expected: float

    @property
    def z_score(self) -> float:
        return self.estimate.z_score(self.expected)

    @property
    def passed(self) -> bool:
        return abs(self.z_score) < 3.0


def run_mean_identity_check(d0: int, effect: Effect, n_samples: int, seed: int, *, method: str = "auto") -> MeanIdentityReport:
    """Compare the Haar mean of ``<psi|E|psi>`` with ``tr(E) / d0``."""
    if effect.dim != d0:
        raise DimensionMismatch(f"effect has dimension {effect.dim}, expected {d0}")
    p = expectation_samples(effect, n_samples, seed, method=method)
    return MeanIdentityReport(mean_estimate(p), ensemble_probability(MaxMixed(d0), effect))


def rank1_scatter(d0_values, n_samples: int, seed: int, *, method: str = "state"):
    """Empirical stdev of ``|<psi|b_1>|^2`` per dimension and the log-log slope across them.

    The exact law is Beta(1, d0 - 1), whose stdev decays like 1/d0.
    """
    d0_values = [int(d) for d in d0_values]
    stdevs = []
    for k, d in enumerate(d0_values):
        e = Rank1Effect(StateVector.basis(d, 0))
        p = expectation_samples(e, n_samples, seed, method=method, subkey=(k,))
        stdevs.append(float(p.std(ddof=1)))
    slope = float(np.polyfit(np.log(d0_values), np.log(stdevs), 1)[0]) if len(d0_values) > 1 else math.nan
    return np.array(stdevs), slope


def run_deviation_grid(
    d0: int, effects: dict, epsilons, n_samples: int, seed: int, *, method: str = "auto"
) -> dict:
    """Deviation statistics for several effects and eps values from one set of Haar draws.

    Returns a dict keyed by ``(effect_name, eps)``.  On the full-state route the
    states are generated once and every effect is evaluated on them.
    """
    epsilons = [float(e) for e in epsilons]
    for eps in epsilons:
        _check_epsilon(eps)
    for e in effects.values():
        if e.dim != d0:
            raise DimensionMismatch(f"effect has dimension {e.dim}, expected {d0}")
    if resolve_method(method, d0, n_samples) == "state":
        probs = {name: np.empty(n_samples) for name in effects}
        for lo, states in iter_state_chunks(d0, n_samples, seed):
            for name, e in effects.items():
                probs[name][lo : lo + states.shape[0]] = expectation_batch(states, e)
    else:
        probs = {name: expectation_samples(e, n_samples, seed, method="spectral") for name, e in effects.items()}
    out = {}
    for name, e in effects.items():
        dev = np.abs(probs[name] - ensemble_probability(MaxMixed(d0), e))
        quant = {q: float(np.quantile(dev, q)) for q in QUANTILES}
        for eps in epsilons:
            bound = bound_single(e.norm(), eps, d0)
            out[(name, eps)] = DeviationStats(dev, bound, int(np.count_nonzero(dev > bound)), eps, quant)
    return out
