"""Reliability and favoring-ratio analysis for distinguishing random states.

An effect E (1 - delta)-reliably distinguishes two densities when
``|tr(rho_A E) - tr(rho_B E)| >= 1 - delta``.  For Haar states on a large
subspace a *fixed* effect almost never does so, even though every individual
pair of nearly orthogonal states has its own effect that separates it well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numbers import exact
from .errors import HypothesisError, TypicalityError, UndefinedRatioError
from .linalg import (
    DensitySpec,
    Effect,
    MaxMixed,
    Povm,
    Pure,
    Rank1Effect,
    StateVector,
    complement,
    ensemble_probability,
)
from .montecarlo import Estimate, binomial_sigma, expectation_samples, fraction_estimate, iter_state_chunks, mean_estimate


@dataclass(frozen=True)
class ReliabilityResult:
    reliability: float
    delta_level: float
    distinguishes: bool


def reliability(e: Effect, rhoA: DensitySpec, rhoB: DensitySpec, delta: float = 0.5) -> ReliabilityResult:
    """``|tr(rho_A E) - tr(rho_B E)|`` and whether it reaches ``1 - delta``."""
    r = abs(ensemble_probability(rhoA, e) - ensemble_probability(rhoB, e))
    return ReliabilityResult(r, delta, r >= 1.0 - delta)


def optimal_discriminator(psiA: StateVector) -> Povm:
    """Two-outcome POVM ``{|psi_A><psi_A|, I - |psi_A><psi_A|}``.

    Against the maximally mixed state its first element has reliability exactly
    ``1 - 1/d0``.
    """
    if not isinstance(psiA, StateVector):
        psiA = StateVector(psiA)
    ea = Rank1Effect(psiA, 1.0)
    return Povm([ea, complement(ea)], labels=("A", "not A"))


def pair_reliable_fraction(
    d0: int, effect: Effect, delta: float, n_pairs: int, seed: int, *, method: str = "auto"
) -> Estimate:
    """Fraction of independent Haar pairs that ``effect`` (1 - delta)-reliably distinguishes."""
    if not 0.0 < delta < 1.0:
        raise TypicalityError(f"delta must lie in (0, 1), got {delta}")
    if effect.dim != d0:
        raise TypicalityError(f"effect has dimension {effect.dim}, expected {d0}")
    pa = expectation_samples(effect, n_pairs, seed, subkey=(0,), method=method)
    pb = expectation_samples(effect, n_pairs, seed, subkey=(1,), method=method)
    return fraction_estimate(np.abs(pa - pb) >= 1.0 - delta)


@dataclass(frozen=True)
class EpsilonThreshold:
    epsilon: float
    guaranteed_mass: float
    complement: float
    vacuous: bool
    log10_complement: float


def corollary1_epsilon_threshold(d0=None, pair: bool = False, *, log10_d0=None) -> EpsilonThreshold:
    """Smallest eps for which a fixed effect provably fails to 1/2-reliably distinguish.

    A single state against rho0 needs ``d0 > 4/eps``, a pair of states needs
    ``d0 > 16/eps``.  Returns eps, the guaranteed mass ``1 - eps`` or
    ``(1 - eps)^2``, and its complement.  The pair complement
    ``1 - (1 - eps)^2`` is evaluated as ``-expm1(2 log1p(-eps))`` so tiny eps
    does not cancel to zero; pass ``log10_d0`` for dimensions beyond float range.
    """
    c = 16.0 if pair else 4.0
    if log10_d0 is None:
        if d0 is None or d0 < 1:
            raise TypicalityError("d0 must be at least 1")
        log10_eps = math.log10(c) - math.log10(d0)
        eps = c / d0
    else:
        log10_eps = math.log10(c) - float(log10_d0)
        eps = 10.0**log10_eps if log10_eps > -320 else 0.0
    vacuous = eps >= 1.0
    eps = min(eps, 1.0)
    if pair:
        mass = (1.0 - eps) ** 2
        comp = -math.expm1(2.0 * math.log1p(-eps)) if eps < 1.0 else 1.0
        # 1 - (1 - eps)^2 = eps (2 - eps)
        log10_comp = log10_eps + math.log10(2.0 - eps) if not vacuous else 0.0
    else:
        mass = 1.0 - eps
        comp = eps
        log10_comp = log10_eps if not vacuous else 0.0
    return EpsilonThreshold(eps, mass, comp, vacuous, log10_comp)


@dataclass(frozen=True)
class FavoringResult:
    ratio: float
    band_lo: float
    band_hi: float

    @property
    def inside(self) -> bool:
        return self.band_lo <= self.ratio <= self.band_hi


def favoring_band(epsilon: float, d0: int, pair: bool) -> tuple[float, float]:
    """Band for the favoring ratio: ``1 +/- eta`` against rho0, ``[1 - 2 eta, 1 + 3 eta]`` for two pure states.

    ``eta = 1 / sqrt(eps^3 d0)``.
    """
    if not 0.0 < epsilon < 1.0:
        raise TypicalityError(f"epsilon must lie in (0, 1), got {epsilon}")
    eta = 1.0 / math.sqrt(epsilon**3 * d0)
    return (1.0 - 2.0 * eta, 1.0 + 3.0 * eta) if pair else (1.0 - eta, 1.0 + eta)


def favoring_ratio(e: Effect, rhoA: DensitySpec, rhoB: DensitySpec, *, epsilon: float) -> FavoringResult:
    """``tr(rho_A E) / tr(rho_B E)`` with the typicality band for the given eps.

    The single-state band applies when either density is maximally mixed, the
    pair band otherwise.
    """
    pb = ensemble_probability(rhoB, e)
    if pb == 0.0:
        raise UndefinedRatioError("undefined favoring ratio: tr(rho_B E) = 0")
    ratio = ensemble_probability(rhoA, e) / pb
    pair = not (isinstance(rhoA, MaxMixed) or isinstance(rhoB, MaxMixed))
    lo, hi = favoring_band(epsilon, e.dim, pair)
    return FavoringResult(ratio, lo, hi)


@dataclass
class FavoringCoverage:
    mode: str  # "pair" or "single"
    coverage: Estimate
    band: tuple[float, float]
    required: float
    sigma: float
    ratios: np.ndarray = field(repr=False)
    reliabilities: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.coverage.value >= self.required - 3.0 * self.sigma


def favoring_band_experiment(
    d0: int, effect: Effect, epsilon: float, n_pairs: int, seed: int, *, method: str = "auto"
) -> FavoringCoverage:
    """Fraction of sampled states or pairs whose favoring ratio stays in the band.

    Requires ``tr(rho0 E) > eps``.  With ``d0 > 9 / eps^3`` the pair claim is
    tested (coverage at least ``(1 - eps)^2``); otherwise the experiment falls
    back to single states against rho0 (coverage at least ``1 - eps``).
    """
    if not 0.0 < epsilon < 1.0:
        raise TypicalityError(f"epsilon must lie in (0, 1), got {epsilon}")
    p0 = ensemble_probability(MaxMixed(d0), effect)
    if not p0 > epsilon:
        raise HypothesisError(
            "tr(rho0 E) > eps",
            f"favoring band needs tr(rho0 E) > eps, got tr(rho0 E) = {p0:.6g} <= eps = {epsilon}",
        )
    pair = exact(d0) > 9 / exact(epsilon) ** 3
    pa = expectation_samples(effect, n_pairs, seed, subkey=(0,), method=method)
    if pair:
        pb = expectation_samples(effect, n_pairs, seed, subkey=(1,), method=method)
        required = (1.0 - epsilon) ** 2
    else:
        pb = np.full(n_pairs, p0)
        required = 1.0 - epsilon
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(pb > 0, pa / np.where(pb > 0, pb, 1.0), np.inf)
    lo, hi = favoring_band(epsilon, d0, pair)
    cov = fraction_estimate((ratios >= lo) & (ratios <= hi))
    return FavoringCoverage(
        "pair" if pair else "single",
        cov,
        (lo, hi),
        required,
        binomial_sigma(required, n_pairs),
        ratios,
        np.abs(pa - pb),
    )


@dataclass
class QuantifierContrast:
    d0: int
    same_pair: Estimate
    fresh_pair: Estimate
    versus_mixed: float
    expected_same: float
    fresh_bound: float
    same_values: np.ndarray = field(repr=False)
    fresh_values: np.ndarray = field(repr=False)


def quantifier_contrast_demo(d0: int, n_pairs: int, seed: int) -> QuantifierContrast:
    """Tailored discriminators work on their own pair and fail on fresh ones.

    For each pair ``(psi_A, psi_B)`` the effect ``|psi_A><psi_A|`` is built from
    ``psi_A``.  On the same pair its reliability is ``1 - |<psi_A|psi_B>|^2``;
    on an independent fresh pair ``(phi_A, phi_B)`` it is
    ``| |<psi_A|phi_A>|^2 - |<psi_A|phi_B>|^2 |``.
    """
    if d0 < 4:
        raise TypicalityError("quantifier contrast needs d0 >= 4")
    same = np.empty(n_pairs)
    fresh = np.empty(n_pairs)
    chunks = zip(
        iter_state_chunks(d0, n_pairs, seed, (0,)),
        iter_state_chunks(d0, n_pairs, seed, (1,)),
        iter_state_chunks(d0, n_pairs, seed, (2,)),
        iter_state_chunks(d0, n_pairs, seed, (3,)),
    )
    for (lo, a), (_, b), (_, fa), (_, fb) in chunks:
        sl = slice(lo, lo + a.shape[0])
        same[sl] = 1.0 - np.abs(np.einsum("ij,ij->i", a.conj(), b)) ** 2
        fresh[sl] = np.abs(
            np.abs(np.einsum("ij,ij->i", a.conj(), fa)) ** 2 - np.abs(np.einsum("ij,ij->i", a.conj(), fb)) ** 2
        )
    first = StateVector(next(iter_state_chunks(d0, 1, seed, (0,)))[1][0])
    vs_mixed = reliability(optimal_discriminator(first)[0], Pure(first), MaxMixed(d0)).reliability
    return QuantifierContrast(
        d0,
        mean_estimate(same),
        mean_estimate(fresh),
        vs_mixed,
        1.0 - 1.0 / d0,
        3.0 / math.sqrt(d0),
        same,
        fresh,
    )
