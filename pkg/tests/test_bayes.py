from __future__ import annotations

import math

import numpy as np
import pytest

import oracles
from typicality_lab import (
    BasisProjector,
    DiagonalEffect,
    HypothesisError,
    Povm,
    Rank1Effect,
    StateVector,
    TypicalityError,
)
from typicality_lab.bayes import (
    LN_4,
    LN_4_3,
    PosteriorSpec,
    check_flatness_hypotheses,
    flatness_experiment,
    gaussian_overlap_check,
    hypotheses_hold,
    mixed_vs_random_pure_check,
    overlap_above,
    posterior_density,
    posterior_set_probability,
    rank1_f_survival,
)
from typicality_lab.sampler import SeedSpec, random_povm

LEVELS = np.array([0.1, 0.3, 0.5, 0.7, 0.9])


def test_posterior_density_examples():
    spec = PosteriorSpec(Rank1Effect(StateVector.basis(2, 0)))
    plus = StateVector([1, 1], normalize=True)
    assert posterior_density(spec, plus) == pytest.approx(1.0)
    assert posterior_density(spec, StateVector.basis(2, 0)) == 2.0
    with pytest.raises(TypicalityError):
        PosteriorSpec(DiagonalEffect([0.0, 0.0]))


def test_hypothesis_gate_boundary_is_strict():
    e = DiagonalEffect(np.resize(LEVELS, 100_000))
    # 1 / 0.1^5 = 1e5 exactly, so d0 = 1e5 does not satisfy d0 > 1/eps^5
    with pytest.raises(HypothesisError) as info:
        check_flatness_hypotheses(100_000, e, 0.1)
    assert info.value.hypothesis == "d0 > 1/eps^5"
    assert hypotheses_hold(100_000, e, 0.101)


def test_gate_on_improbable_outcome():
    with pytest.raises(HypothesisError) as info:
        check_flatness_hypotheses(10**6, Rank1Effect(StateVector.basis(10**6, 0)), 0.1)
    assert info.value.hypothesis == "tr(rho0 E) > eps"


def test_flatness_gated_run():
    d0 = 100_000
    rep = flatness_experiment(d0, DiagonalEffect(np.resize(LEVELS, d0)), 0.101, 20_000, 1)
    assert rep.gated and rep.passed


def test_flatness_small_d0_counterexample():
    e = Rank1Effect(StateVector.basis(2, 0))
    with pytest.raises(HypothesisError):
        flatness_experiment(2, e, 0.1, 1000, 1)
    rep = flatness_experiment(2, e, 0.1, 100_000, 1, ungated=True)
    assert not rep.gated
    assert abs(rep.fraction_above(1.8).value - 0.1) <= 3 * math.sqrt(0.09 / 100_000)
    assert rank1_f_survival(2, 1.8) == pytest.approx(0.1)


def test_rank1_survival_matches_scipy():
    for d0 in (2, 17, 1024):
        for t in (0.1, LN_4_3, 1.0, LN_4, 1.8):
            assert rank1_f_survival(d0, t) == pytest.approx(oracles.beta_overlap(d0).sf(t / d0), rel=1e-10)
    assert 1 - rank1_f_survival(1024, LN_4_3) == pytest.approx(oracles.FROZEN["beta1023_below_ln4_3"])
    assert rank1_f_survival(1024, LN_4) == pytest.approx(oracles.FROZEN["beta1023_above_ln4"])


def test_set_probability_trivial_sets():
    spec = PosteriorSpec(DiagonalEffect(np.resize(LEVELS, 64)))
    every = posterior_set_probability(spec, lambda psi: True, 2000, 3)
    assert abs(every.posterior.value - 1.0) <= 3 * every.posterior.stderr
    never = posterior_set_probability(spec, lambda psi: False, 200, 3)
    assert never.posterior.value == 0.0 and never.prior.value == 0.0


def test_set_probability_sandwich_and_prior_oracle():
    d0, eps, n = 100_000, 0.101, 2000
    spec = PosteriorSpec(DiagonalEffect(np.resize(LEVELS, d0)))
    rep = posterior_set_probability(spec, overlap_above(0, 1.0 / d0), n, 5, epsilon=eps)
    prior_exact = oracles.beta_overlap(d0).sf(1.0 / d0)  # (1 - 1/d0)^(d0 - 1) ~ 1/e
    assert abs(rep.prior.value - prior_exact) <= 3 * math.sqrt(prior_exact * (1 - prior_exact) / n)
    assert rep.hypotheses_hold and rep.within_sandwich


def test_set_membership_callable_matches_batch():
    s = overlap_above(1, 0.5)
    assert s(StateVector.basis(3, 1)) and not s(StateVector.basis(3, 0))


def test_gaussian_overlap():
    rep = gaussian_overlap_check(1024, 50_000, 9)
    assert rep.gaussian_regime
    s = math.sqrt(0.25 * 0.75 / 50_000)
    assert abs(rep.below_ln4_3.value - 0.25) <= 3 * s
    assert abs(rep.above_ln4.value - 0.25) <= 3 * s
    assert rep.ks_statistic < 0.02
    lo, hi = oracles.exp1_fractions()
    assert (lo, hi) == pytest.approx((0.25, 0.25))


def test_gaussian_overlap_small_d0():
    with pytest.raises(TypicalityError):
        gaussian_overlap_check(16, 100, 1)
    rep = gaussian_overlap_check(16, 50_000, 1, allow_small=True)
    assert not rep.gaussian_regime
    assert abs(rep.above_ln4.value - rep.exact_above_ln4) <= 3 * rep.above_ln4.stderr + 1e-9


def test_mixed_vs_pure_checks():
    for d0 in (2, 64):
        checks = mixed_vs_random_pure_check(d0, random_povm(d0, 3, SeedSpec(d0)), 50_000, 2)
        assert all(c.passed for c in checks)
    one = mixed_vs_random_pure_check(8, Povm([DiagonalEffect(np.ones(8))]), 500, 1)
    assert one[0].mean.value == 1.0 and one[0].expected == 1.0


def test_basis_povm_scatter():
    d0 = 64
    povm = Povm([BasisProjector([k], d0) for k in range(d0)])
    checks = mixed_vs_random_pure_check(d0, povm, 20_000, 4)
    assert all(c.passed for c in checks)
    # relative spread of a Beta(1, 63) variable around its mean 1/64 is O(1)
    expected_spread = oracles.beta_overlap(d0).std() * d0
    assert checks[0].relative_spread == pytest.approx(expected_spread, rel=0.05)
