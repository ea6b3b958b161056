"""Bayesian updating of the Haar prior on an observed outcome.

Observing outcome z with effect E turns the uniform prior u0 into a posterior
with density

    f(psi) = <psi|E|psi> / tr(rho0 E)

relative to u0.  When ``d0 > 1/eps^5`` and ``tr(rho0 E) > eps``, f stays within
``(1 - eps, 1 + eps)`` for all but a fraction eps of states, and every set's
posterior probability lies in ``[prior - 2 eps, prior + 3 eps]``.  Small d0 or
improbable outcomes break this, and the functions here reproduce both failure
modes when called with ``ungated=True``.

The posterior is only ever represented through f; set probabilities are
importance-weighted averages over prior (Haar) samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy import stats

from ._numbers import exact
from .errors import DimensionMismatch, HypothesisError, TypicalityError
from .linalg import Effect, MaxMixed, Povm, StateVector, ensemble_probability, expectation, expectation_batch
from .montecarlo import (
    STATE_BUDGET,
    Estimate,
    binomial_sigma,
    expectation_samples,
    fraction_estimate,
    iter_state_chunks,
    mean_estimate,
    resolve_method,
)
from .sampler import haar_first_coordinates

LN_4_3 = math.log(4.0 / 3.0)
LN_4 = math.log(4.0)
GAUSSIAN_MIN_DIM = 256


@dataclass(frozen=True)
class PosteriorSpec:
    """Posterior after observing the outcome whose effect is ``effect``."""

    effect: Effect
    normalizer: float = field(init=False)
    d0: int = field(init=False)

    def __post_init__(self):
        p0 = ensemble_probability(MaxMixed(self.effect.dim), self.effect)
        if not p0 > 0.0:
            raise TypicalityError("posterior undefined: the outcome has zero prior probability")
        object.__setattr__(self, "normalizer", p0)
        object.__setattr__(self, "d0", self.effect.dim)


def posterior_density(spec: PosteriorSpec, psi: StateVector) -> float:
    """``f(psi) = <psi|E|psi> / tr(rho0 E)``."""
    return expectation(psi, spec.effect) / spec.normalizer


def posterior_density_batch(spec: PosteriorSpec, states: np.ndarray) -> np.ndarray:
    return expectation_batch(states, spec.effect) / spec.normalizer


def check_flatness_hypotheses(d0: int, effect: Effect, epsilon: float) -> None:
    """Raise :class:`HypothesisError` unless ``d0 > 1/eps^5`` and ``tr(rho0 E) > eps``.

    The dimension test is a strict rational comparison, so ``d0 = 10**5`` with
    ``eps = 0.1`` fails.
    """
    if not 0.0 < epsilon < 1.0:
        raise TypicalityError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not exact(d0) * exact(epsilon) ** 5 > 1:
        raise HypothesisError(
            "d0 > 1/eps^5",
            f"posterior flatness needs d0 > 1/eps^5 = {1 / epsilon**5:.6g}, got d0 = {d0}",
        )
    p0 = ensemble_probability(MaxMixed(d0), effect)
    if not p0 > epsilon:
        raise HypothesisError(
            "tr(rho0 E) > eps",
            f"posterior flatness needs tr(rho0 E) > eps = {epsilon}, got {p0:.6g}",
        )


def hypotheses_hold(d0: int, effect: Effect, epsilon: float) -> bool:
    try:
        check_flatness_hypotheses(d0, effect, epsilon)
    except HypothesisError:
        return False
    return True


@dataclass
class FlatnessReport:
    epsilon: float
    gated: bool  # both hypotheses hold
    coverage: Estimate
    required: float
    sigma: float
    f_values: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.coverage.value >= self.required - 3.0 * self.sigma

    def fraction_above(self, t: float) -> Estimate:
        return fraction_estimate(self.f_values > t)

    def fraction_below(self, t: float) -> Estimate:
        return fraction_estimate(self.f_values < t)


def flatness_experiment(
    d0: int,
    effect: Effect,
    epsilon: float,
    n_samples: int,
    seed: int,
    *,
    ungated: bool = False,
    method: str = "auto",
) -> FlatnessReport:
    """Fraction of Haar states with ``1 - eps < f(psi) < 1 + eps``.

    Raises :class:`HypothesisError` when the hypotheses fail, unless ``ungated``
    is set, in which case the f-values are still produced so that the failure
    of flatness can be measured.
    """
    if effect.dim != d0:
        raise DimensionMismatch(f"effect has dimension {effect.dim}, expected {d0}")
    gated = hypotheses_hold(d0, effect, epsilon)
    if not gated and not ungated:
        check_flatness_hypotheses(d0, effect, epsilon)
    spec = PosteriorSpec(effect)
    f = expectation_samples(effect, n_samples, seed, method=method) / spec.normalizer
    cov = fraction_estimate((f > 1.0 - epsilon) & (f < 1.0 + epsilon))
    required = 1.0 - epsilon
    return FlatnessReport(epsilon, gated, cov, required, binomial_sigma(required, n_samples), f)


def rank1_f_survival(d0: int, t: float) -> float:
    """``P(f > t)`` for a rank-one projector outcome, where ``f = d0 |<psi|v>|^2``.

    ``|<psi|v>|^2`` is Beta(1, d0 - 1), whose survival function is ``(1 - x)^(d0 - 1)``.
    """
    x = t / d0
    if x >= 1.0:
        return 0.0
    if x <= 0.0:
        return 1.0
    return math.exp((d0 - 1) * math.log1p(-x))


# --------------------------------------------------------------------------- set probabilities


class StateSet:
    """Subset of the unit sphere given by a vectorized membership test.

    Instances are also plain predicates on :class:`StateVector`.
    """

    def __init__(self, contains_batch: Callable[[np.ndarray], np.ndarray], name: str = "S"):
        self._contains_batch = contains_batch
        self.name = name

    def contains_batch(self, states: np.ndarray) -> np.ndarray:
        return np.asarray(self._contains_batch(np.atleast_2d(states)), dtype=bool)

    def __call__(self, psi: StateVector) -> bool:
        return bool(self.contains_batch(psi.amplitudes[None, :])[0])

    def __repr__(self):
        return f"StateSet({self.name})"


def overlap_above(index: int, threshold: float) -> StateSet:
    """``{psi : |<b_index|psi>|^2 > threshold}``."""
    return StateSet(lambda x: np.abs(x[:, index]) ** 2 > threshold, f"|psi_{index}|^2 > {threshold:g}")


def effect_above(effect: Effect, threshold: float) -> StateSet:
    """``{psi : <psi|E|psi> > threshold}``."""
    return StateSet(lambda x: effect.expect_batch(x) > threshold, f"<E> > {threshold:g}")


def real_part_positive(index: int = 0) -> StateSet:
    return StateSet(lambda x: x[:, index].real > 0, f"Re psi_{index} > 0")


Indicator = Union[StateSet, Callable[[StateVector], bool]]


@dataclass
class SetProbabilityReport:
    posterior: Estimate
    prior: Estimate
    shift: Estimate  # posterior - prior on the same samples
    epsilon: float | None
    hypotheses_hold: bool

    @property
    def sandwich(self) -> tuple[float, float] | None:
        """``[prior - 2 eps, prior + 3 eps]`` around the estimated prior."""
        if self.epsilon is None:
            return None
        return (self.prior.value - 2 * self.epsilon, self.prior.value + 3 * self.epsilon)

    @property
    def within_sandwich(self) -> bool | None:
        """Shift in ``[-2 eps - 3 sigma, 3 eps + 3 sigma]``; None unless the hypotheses hold."""
        if self.epsilon is None or not self.hypotheses_hold:
            return None
        s = 3.0 * self.shift.stderr
        return -2 * self.epsilon - s <= self.shift.value <= 3 * self.epsilon + s


def _membership(indicator: Indicator, states: np.ndarray) -> np.ndarray:
    if isinstance(indicator, StateSet):
        return indicator.contains_batch(states)
    return np.fromiter((bool(indicator(StateVector(row))) for row in states), dtype=bool, count=states.shape[0])


def posterior_set_probability(
    spec: PosteriorSpec, indicator: Indicator, n_samples: int, seed: int, *, epsilon: float | None = None
) -> SetProbabilityReport:
    """Importance-weighted ``P(Psi in S | Z = z) ~ (1/n) sum 1_S(psi_i) f(psi_i)`` over Haar ``psi_i``.

    Also returns the prior estimate ``(1/n) sum 1_S(psi_i)`` on the same
    samples.  When ``epsilon`` is given and the flatness hypotheses hold, the
    report can check the ``[-2 eps, +3 eps]`` shift bound.
    """
    if n_samples < 2:
        raise TypicalityError("need at least two samples")
    inside = np.empty(n_samples, dtype=bool)
    f = np.empty(n_samples)
    for lo, states in iter_state_chunks(spec.d0, n_samples, seed):
        sl = slice(lo, lo + states.shape[0])
        inside[sl] = _membership(indicator, states)
        f[sl] = posterior_density_batch(spec, states)
    w = np.where(inside, f, 0.0)
    holds = epsilon is not None and hypotheses_hold(spec.d0, spec.effect, epsilon)
    return SetProbabilityReport(
        mean_estimate(w),
        fraction_estimate(inside),
        mean_estimate(np.where(inside, f - 1.0, 0.0)),
        epsilon,
        holds,
    )


# --------------------------------------------------------------------------- improbable outcomes


def _variance_estimate(x: np.ndarray) -> Estimate:
    n = x.size
    m = x.mean()
    c = x - m
    var = float(np.mean(c**2) * n / (n - 1))
    m4 = float(np.mean(c**4))
    return Estimate(var, math.sqrt(max(m4 - var**2, 0.0) / n), n)


@dataclass
class GaussianOverlapReport:
    d0: int
    gaussian_regime: bool
    re_variance: Estimate
    im_variance: Estimate
    ks_statistic: float
    below_ln4_3: Estimate
    above_ln4: Estimate
    exact_below_ln4_3: float
    exact_above_ln4: float
    scaled_weights: np.ndarray = field(repr=False)


def gaussian_overlap_check(
    d0: int, n_samples: int, seed: int, *, allow_small: bool = False, method: str = "auto"
) -> GaussianOverlapReport:
    """Law of the rescaled overlap ``sqrt(d0) <b_1|psi>`` for Haar psi.

    For large d0 it is close to a standard complex Gaussian: real and imaginary
    parts have variance 1/2 and ``d0 |<b_1|psi>|^2`` is close to Exp(1), which
    puts mass 1/4 below ln(4/3) and 1/4 above ln 4.  Exact Beta(1, d0 - 1)
    values for both fractions are included for comparison at any d0.

    ``d0 < 256`` is refused unless ``allow_small``; the report then flags that
    the Gaussian approximation does not apply.
    """
    if d0 < GAUSSIAN_MIN_DIM and not allow_small:
        raise TypicalityError(f"Gaussian overlap check needs d0 >= {GAUSSIAN_MIN_DIM}, got {d0}")
    route = resolve_method(method, d0, n_samples)
    if route == "state":
        c = np.empty(n_samples, dtype=np.complex128)
        for lo, states in iter_state_chunks(d0, n_samples, seed):
            c[lo : lo + states.shape[0]] = states[:, 0]
    else:
        c = haar_first_coordinates(d0, seed, range(n_samples))
    scaled = math.sqrt(d0) * c
    weights = np.abs(scaled) ** 2
    return GaussianOverlapReport(
        d0,
        d0 >= GAUSSIAN_MIN_DIM,
        _variance_estimate(scaled.real),
        _variance_estimate(scaled.imag),
        float(stats.kstest(weights, "expon").statistic),
        fraction_estimate(weights < LN_4_3),
        fraction_estimate(weights > LN_4),
        1.0 - rank1_f_survival(d0, LN_4_3),
        rank1_f_survival(d0, LN_4),
        weights,
    )


@dataclass
class OutcomeCheck:
    label: object
    mean: Estimate
    expected: float
    relative_spread: float

    @property
    def z_score(self) -> float:
        return self.mean.z_score(self.expected)

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= 3.0


def mixed_vs_random_pure_check(d0: int, povm: Povm, n_samples: int, seed: int) -> list[OutcomeCheck]:
    """Per outcome, the Haar mean of ``<psi|E_z|psi>`` against ``tr(rho0 E_z)``.

    The two agree exactly in expectation for every d0, even when individual
    states scatter widely around the mean.
    """
    if povm.dim != d0:
        raise DimensionMismatch(f"POVM has dimension {povm.dim}, expected {d0}")
    if d0 * n_samples > STATE_BUDGET:
        raise TypicalityError("d0 * n_samples exceeds the state-sampling budget")
    values = np.empty((len(povm), n_samples))
    for lo, states in iter_state_chunks(d0, n_samples, seed):
        for k, e in enumerate(povm):
            values[k, lo : lo + states.shape[0]] = expectation_batch(states, e)
    checks = []
    rho0 = MaxMixed(d0)
    for k, (label, e) in enumerate(zip(povm.labels, povm)):
        est = mean_estimate(values[k])
        expected = ensemble_probability(rho0, e)
        spread = float(values[k].std(ddof=1) / expected) if expected > 0 else 0.0
        checks.append(OutcomeCheck(label, est, expected, spread))
    return checks
