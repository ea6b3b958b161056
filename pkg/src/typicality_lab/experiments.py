"""Config-driven experiments.  Each one returns claim rows plus optional CSV files.

Every claim row is self-contained: its pass/fail follows from ``estimate``,
``bound``, ``relation`` and ``slack`` alone (see :class:`~typicality_lab.report.Claim`).
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from .bayes import (
    LN_4,
    LN_4_3,
    PosteriorSpec,
    check_flatness_hypotheses,
    effect_above,
    flatness_experiment,
    gaussian_overlap_check,
    hypotheses_hold,
    mixed_vs_random_pure_check,
    overlap_above,
    posterior_density,
    posterior_set_probability,
    rank1_f_survival,
)
from .concentration import log10_bound_single, run_deviation_grid
from .config import CONFIG_STREAM, ExperimentConfig, build_effect, default_config
from .discrimination import (
    corollary1_epsilon_threshold,
    favoring_band_experiment,
    optimal_discriminator,
    quantifier_contrast_demo,
    reliability,
)
from .errors import HypothesisError
from .linalg import (
    BasisProjector,
    DiagonalEffect,
    Effect,
    MaxMixed,
    Pure,
    Rank1Effect,
    StateVector,
    ensemble_probability,
)
from .montecarlo import binomial_sigma, expectation_samples, fraction_estimate, mean_estimate
from .qubits import spin_experiment
from .report import Claim, emit_histogram, within, write_csv, write_json
from .sampler import SeedSpec, random_povm, sample_uniform

OUTPUT_ENV = "TYPICALITY_LAB_OUTPUT_DIR"

A_BOUND = "|<psi|B|psi> - tr(rho0 B)| <= ||B|| / sqrt(eps d0) for (1-eps)-most psi"
A_SCATTER = "|<psi|v>|^2 ~ Beta(1, d0 - 1) for Haar psi and unit v"
A_MEAN = "Haar average of <psi|E|psi> equals tr(rho0 E)"
A_MIXED = "random-pure ensemble and rho0 give equal outcome probabilities"
A_DELTA2 = "d0 = 2, rank-one projector: P(|p_A - p_B| >= 1 - delta) = delta^2"
A_OPTIMAL = "{|psi_A><psi_A|, I - |psi_A><psi_A|} separates psi_A from rho0 with reliability 1 - 1/d0"
A_COR1_SINGLE = "fixed E, d0 > 4/eps: |tr(rho_psi E) - tr(rho0 E)| < 1/2 for (1-eps)-most psi"
A_COR1_PAIR = "fixed E, d0 > 16/eps: no 1/2-reliable distinction for (1-eps)^2-most pairs"
A_COR1_EXTRAP = "pair complement 1 - (1 - 16/d0)^2 at d0 = 1e100"
A_FAVOR_PAIR = "tr(rho_A E)/tr(rho_B E) in [1 - 2 eta, 1 + 3 eta], eta = (eps^3 d0)^(-1/2), for (1-eps)^2-most pairs"
A_FAVOR_SINGLE = "tr(rho_psi E)/tr(rho0 E) in [1 - eta, 1 + eta], eta = (eps^3 d0)^(-1/2), for (1-eps)-most psi"
A_QUANT_SAME = "tailored effect |psi_A><psi_A| on its own pair: reliability 1 - |<psi_A|psi_B>|^2"
A_QUANT_FRESH = "tailored effect on an independent pair: reliability O(d0^(-1/2))"
A_FLAT = "d0 > 1/eps^5, tr(rho0 E) > eps: 1 - eps < f(psi) < 1 + eps for (1-eps)-most psi"
A_FLAT_MEAN = "Haar average of f(psi) = <psi|E|psi> / tr(rho0 E) is 1"
A_F_SMALL = "d0 = 2, E = |b1><b1|: f = 2|<psi|b1>|^2 and P(f > 1.8) = 0.1"
A_F_PEAK = "f(b1) = d0 for E = |b1><b1|"
A_F_BETA = "E = |v><v|: P(f > t) = (1 - t/d0)^(d0 - 1)"
A_EXP = "d0 |<b_z|psi>|^2 ~ Exp(1) for large d0: P(f < ln 4/3) = P(f > ln 4) = 1/4"
A_GAUSS_VAR = "sqrt(d0) <b_z|psi> ~ complex Gaussian, Re and Im variance 1/2"
A_KS = "KS distance of d0 |<b_z|psi>|^2 from Exp(1) below 0.02"
A_SANDWICH = "flatness hypotheses: P_post(S) in [P_prior(S) - 2 eps, P_prior(S) + 3 eps]"
A_TOTAL = "posterior measure is normalized"
A_SPIN_P = "Haar spinor: P(up-probability >= 1 - p) = p"
A_PRODUCT = "product state: first-qubit up-probability >= 0.9 in 10% of draws"
A_HAAR_QUBIT = "Haar state on n qubits: first-qubit up-probability ~ Beta(2^(n-1), 2^(n-1)), near 1/2"
A_LOG_BOUND = "log10 of ||B|| / sqrt(eps d0) evaluated exactly in log space"

# canonical large-d0 parameters satisfying d0 > 1/eps^5 and d0 > 9/eps^3
CANON_D0 = 100_000
CANON_EPS = 0.101
CANON_LEVELS = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass
class RunContext:
    """Collects CSV outputs and free-form details while an experiment runs."""

    out_dir: Path | None
    bins: int = 200
    details: dict = field(default_factory=dict)
    files: list = field(default_factory=list)

    def csv(self, name: str, header, columns) -> None:
        if self.out_dir is None:
            return
        write_csv(self.out_dir / name, header, columns)
        self.files.append(name)

    def histogram(self, name: str, values, range=None) -> None:
        if self.out_dir is None:
            return
        emit_histogram(values, self.bins, self.out_dir / name, range=range)
        self.files.append(name)


def _sigma3(p: float, n: int) -> float:
    return 3.0 * binomial_sigma(p, n)


def _is_rank1_projector(e: Effect) -> bool:
    if isinstance(e, Rank1Effect):
        return e.weight == 1.0
    return isinstance(e, BasisProjector) and e.rank == 1


def _rank1_vector(e: Effect) -> StateVector:
    if isinstance(e, Rank1Effect):
        return e.vector
    return StateVector.basis(e.dim, int(e.indices[0]))


def _diag(levels, d0: int) -> DiagonalEffect:
    return DiagonalEffect(np.resize(np.asarray(levels, dtype=np.float64), d0))


# --------------------------------------------------------------------------- building blocks


def concentration_claims(d0, effects: dict, epsilons, n, seed, ctx: RunContext, *, method="auto", csv_name=None):
    grid = run_deviation_grid(d0, effects, epsilons, n, seed, method=method)
    claims = []
    for (name, eps), st in grid.items():
        claims.append(
            Claim(
                f"bound_violation_fraction[d0={d0},eps={eps:g},E={name}]",
                A_BOUND,
                st.violation_fraction,
                binomial_sigma(eps, n),
                eps,
                "<=",
                st.allowed_fraction - eps,
            )
        )
        ctx.details[f"deviation[d0={d0},eps={eps:g},E={name}]"] = st.as_dict()
    if csv_name is not None:
        first = next(iter(grid.values()))
        ctx.csv(csv_name, ["deviation"], [first.deviations])
    return claims, grid


def scatter_claims(d0_values, n, seed, *, rel_tol=0.05):
    claims = []
    for k, d in enumerate(d0_values):
        p = expectation_samples(Rank1Effect(StateVector.basis(d, 0)), n, seed, subkey=(k,), method="state")
        sd = float(p.std(ddof=1))
        oracle = float(stats.beta(1, d - 1).std())
        # relative error of a sample stdev is about sqrt((kurtosis - 1) / (4 n))
        claims.append(Claim(f"rank1_stdev[d0={d}]", A_SCATTER, sd, 0.0, oracle, "==", rel_tol * oracle))
    return claims


def povm_mean_claims(d0, n_povms, n_outcomes, n, seed, *, tag="mean", anchor=A_MEAN):
    claims = []
    for k in range(n_povms):
        povm = random_povm(d0, n_outcomes, SeedSpec(seed, CONFIG_STREAM + 100 + k))
        for c in mixed_vs_random_pure_check(d0, povm, n, (seed + k) % 2**64):
            claims.append(within(f"{tag}[d0={d0},povm={k},z={c.label}]", anchor, c.mean, c.expected))
    return claims


def delta_squared_claims(deltas, n, seed):
    e = BasisProjector([0], 2)
    pa = expectation_samples(e, n, seed, subkey=(0,), method="state")
    pb = expectation_samples(e, n, seed, subkey=(1,), method="state")
    gap = np.abs(pa - pb)
    out = []
    for delta in deltas:
        est = fraction_estimate(gap >= 1.0 - delta)
        out.append(
            Claim(f"delta_squared_law[delta={delta:g}]", A_DELTA2, est.value, est.stderr, delta**2, "==", _sigma3(delta**2, n))
        )
    return out, gap


def optimal_claims(d0_values, seed):
    out = []
    for d in d0_values:
        psi = sample_uniform(d, SeedSpec(seed, CONFIG_STREAM + 7))
        r = reliability(optimal_discriminator(psi)[0], Pure(psi), MaxMixed(d)).reliability
        out.append(Claim(f"optimal_discriminator[d0={d}]", A_OPTIMAL, r, 0.0, 1.0 - 1.0 / d, "==", 1e-12))
    return out


def cor1_single_claim(d0, effect, epsilon, n, seed, ctx, *, method="auto", ungated=False):
    if not d0 > 4.0 / epsilon:
        if ungated:
            return []
        raise HypothesisError("d0 > 4/eps", f"single-state reliability bound needs d0 > 4/eps = {4 / epsilon:g}, got d0 = {d0}")
    p = expectation_samples(effect, n, seed, method=method)
    p0 = ensemble_probability(MaxMixed(d0), effect)
    est = fraction_estimate(np.abs(p - p0) >= 0.5)
    ctx.details["single_reliable_fraction"] = est.as_dict()
    return [Claim(f"cor1_single_fraction[d0={d0},eps={epsilon:g}]", A_COR1_SINGLE, est.value, est.stderr, epsilon, "<=", _sigma3(epsilon, n))]


def cor1_pair_claim(d0, effect, epsilon, delta, n, seed, ctx, *, method="auto", ungated=False):
    reasons = []
    if not d0 > 16.0 / epsilon:
        reasons.append(("d0 > 16/eps", f"pair reliability bound needs d0 > 16/eps = {16 / epsilon:g}, got d0 = {d0}"))
    if not delta <= 0.5:
        reasons.append(("delta <= 1/2", f"pair reliability bound concerns (1 - delta)-reliability with delta <= 1/2, got {delta}"))
    pa = expectation_samples(effect, n, seed, subkey=(0,), method=method)
    pb = expectation_samples(effect, n, seed, subkey=(1,), method=method)
    gap = np.abs(pa - pb)
    est = fraction_estimate(gap >= 1.0 - delta)
    ctx.details["pair_reliable_fraction"] = est.as_dict()
    if reasons:
        if not ungated:
            raise HypothesisError(*reasons[0])
        return [], gap
    allowed = -math.expm1(2.0 * math.log1p(-epsilon))
    return [
        Claim(f"cor1_pair_fraction[d0={d0},eps={epsilon:g},delta={delta:g}]", A_COR1_PAIR, est.value, est.stderr, allowed, "<=", _sigma3(allowed, n))
    ], gap


def cor1_extrapolation_claim():
    th = corollary1_epsilon_threshold(log10_d0=100, pair=True)
    return Claim("cor1_pair_complement[d0=1e100]", A_COR1_EXTRAP, th.complement, 0.0, 3.2e-99, "==", 0.01 * 3.2e-99)


def favoring_claims(d0, effect, epsilon, n_pairs, seed, ctx, *, method="auto"):
    cov = favoring_band_experiment(d0, effect, epsilon, n_pairs, seed, method=method)
    anchor = A_FAVOR_PAIR if cov.mode == "pair" else A_FAVOR_SINGLE
    ctx.details[f"favoring[d0={d0},eps={epsilon:g}]"] = {"mode": cov.mode, "band": list(cov.band), "coverage": cov.coverage.as_dict()}
    claim = Claim(
        f"favoring_band_coverage[{cov.mode},d0={d0},eps={epsilon:g}]",
        anchor,
        cov.coverage.value,
        cov.coverage.stderr,
        cov.required,
        ">=",
        3.0 * cov.sigma,
    )
    return [claim], cov


def quantifier_claims(d0, n_pairs, seed):
    qc = quantifier_contrast_demo(d0, n_pairs, seed)
    claims = [within(f"same_pair_reliability_exact[d0={d0}]", A_QUANT_SAME, qc.same_pair, qc.expected_same)]
    if qc.expected_same >= 0.99:
        claims.append(Claim(f"same_pair_reliability_mean[d0={d0}]", A_QUANT_SAME, qc.same_pair.value, qc.same_pair.stderr, 0.99, ">=", 0.0))
    claims += [
        Claim(f"fresh_pair_reliability_mean[d0={d0}]", A_QUANT_FRESH, qc.fresh_pair.value, qc.fresh_pair.stderr, min(0.1, qc.fresh_bound), "<=", 0.0),
        Claim(f"tailored_vs_rho0[d0={d0}]", A_OPTIMAL, qc.versus_mixed, 0.0, qc.expected_same, "==", 1e-12),
    ]
    return claims, qc


def flatness_claims(d0, effect, epsilon, n, seed, ctx, *, ungated=False, method="auto"):
    rep = flatness_experiment(d0, effect, epsilon, n, seed, ungated=ungated, method=method)
    claims = [within(f"f_mean[d0={d0}]", A_FLAT_MEAN, mean_estimate(rep.f_values), 1.0)]
    ctx.details[f"flatness[d0={d0},eps={epsilon:g}]"] = {"gated": rep.gated, "coverage": rep.coverage.as_dict()}
    if rep.gated:
        claims.append(
            Claim(f"f_flat_fraction[d0={d0},eps={epsilon:g}]", A_FLAT, rep.coverage.value, rep.coverage.stderr, rep.required, ">=", 3.0 * rep.sigma)
        )
    if _is_rank1_projector(effect):
        spec = PosteriorSpec(effect)
        peak = posterior_density(spec, _rank1_vector(effect))
        claims.append(Claim(f"f_at_outcome_vector[d0={d0}]", A_F_PEAK, peak, 0.0, float(d0), "==", 1e-12 * d0))
        for t in (1.8, LN_4_3, LN_4):
            above = rep.fraction_above(t)
            p = rank1_f_survival(d0, t)
            anchor = A_F_SMALL if d0 == 2 and t == 1.8 else A_F_BETA
            claims.append(Claim(f"f_above[d0={d0},t={t:.6g}]", anchor, above.value, above.stderr, p, "==", _sigma3(p, n)))
    return claims, rep


def gaussian_claims(d0, n, seed, *, allow_small=False, method="auto"):
    rep = gaussian_overlap_check(d0, n, seed, allow_small=allow_small, method=method)
    if rep.gaussian_regime:
        pb, pa, anchor = 0.25, 0.25, A_EXP
    else:
        pb, pa, anchor = rep.exact_below_ln4_3, rep.exact_above_ln4, A_F_BETA
    claims = [
        Claim(f"f_below_ln4/3[d0={d0}]", anchor, rep.below_ln4_3.value, rep.below_ln4_3.stderr, pb, "==", _sigma3(pb, n)),
        Claim(f"f_above_ln4[d0={d0}]", anchor, rep.above_ln4.value, rep.above_ln4.stderr, pa, "==", _sigma3(pa, n)),
    ]
    if rep.gaussian_regime:
        claims += [
            Claim(f"ks_vs_exp1[d0={d0}]", A_KS, rep.ks_statistic, 0.0, 0.02, "<=", 0.0),
            within(f"re_variance[d0={d0}]", A_GAUSS_VAR, rep.re_variance, 0.5),
            within(f"im_variance[d0={d0}]", A_GAUSS_VAR, rep.im_variance, 0.5),
        ]
    return claims, rep


def set_claims(d0, effect, epsilon, n, seed, ctx, *, ungated=False):
    gated = hypotheses_hold(d0, effect, epsilon)
    if not gated and not ungated:
        check_flatness_hypotheses(d0, effect, epsilon)
    spec = PosteriorSpec(effect)
    half = BasisProjector(range(max(1, d0 // 2)), d0)
    sets = [
        overlap_above(0, 1.0 / d0),
        effect_above(half, 0.5),
        effect_above(effect, ensemble_probability(MaxMixed(d0), effect)),
    ]
    claims = []
    for k, s in enumerate(sets):
        rep = posterior_set_probability(spec, s, n, seed, epsilon=epsilon)
        ctx.details[f"set[{k}]"] = {
            "name": s.name,
            "prior": rep.prior.as_dict(),
            "posterior": rep.posterior.as_dict(),
            "shift": rep.shift.as_dict(),
        }
        if gated:
            lo, hi = rep.sandwich
            claims.append(
                Claim(f"posterior_sandwich[d0={d0},S{k}]", A_SANDWICH, rep.posterior.value, rep.shift.stderr, (lo, hi), "in", 3.0 * rep.shift.stderr)
            )
    total = posterior_set_probability(spec, lambda psi: True, 200, seed, epsilon=epsilon)
    claims.append(within(f"posterior_total_mass[d0={d0}]", A_TOTAL, total.posterior, 1.0))
    return claims


def spin_claims(n, seed, n_qubits, ctx):
    rep = spin_experiment(n, seed, n_qubits=n_qubits)
    claims = [
        Claim(f"spinor_fraction_p[p={p:g}]", A_SPIN_P, est.value, est.stderr, p, "==", _sigma3(p, n)) for p, est in rep.fraction_p.items()
    ]
    target = 1.0 - rep.threshold
    claims.append(
        Claim(f"product_first_qubit_high[n={n_qubits}]", A_PRODUCT, rep.product_high.value, rep.product_high.stderr, target, "==", _sigma3(target, n))
    )
    half = 2 ** (n_qubits - 1)
    law = stats.beta(half, half)
    tail = float(law.cdf(rep.band[0]) + law.sf(rep.band[1]))
    outside = rep.haar_outside_band
    name = f"haar_first_qubit_outside_band[n={n_qubits}]"
    claims.append(Claim(name + "[exact]", A_HAAR_QUBIT, outside.value, outside.stderr, tail, "==", _sigma3(tail, n)))
    if tail < 0.0005:
        # the exact law puts (far) less than 0.1% outside the band
        claims.append(Claim(name, A_HAAR_QUBIT, outside.value, outside.stderr, 0.001, "<=", 0.0))
    ctx.csv("spin.csv", ["n_z", "up_probability"], [rep.n_z, rep.up])
    return claims


def log_bound_claim():
    # eps = 1e-2, d0 = 10^(10^80): log10 bound = -(log10 eps + log10 d0) / 2
    got = log10_bound_single(1.0, -2, 10**80)
    return Claim("log10_bound[d0=10^(10^80),eps=0.01]", A_LOG_BOUND, float(got), 0.0, float(1 - 5 * 10**79), "==", 0.0)


# --------------------------------------------------------------------------- experiments


def _exp_concentration(cfg: ExperimentConfig, ctx):
    claims, _ = concentration_claims(cfg.d0, {cfg.effect: build_effect(cfg)}, [cfg.epsilon], cfg.n_samples, cfg.master_seed, ctx, method=cfg.method, csv_name="deviations.csv")
    return claims


def _exp_mean_identity(cfg, ctx):
    effect = build_effect(cfg)
    p = expectation_samples(effect, cfg.n_samples, cfg.master_seed, method=cfg.method)
    claims = [within(f"mean[d0={cfg.d0},E={cfg.effect}]", A_MEAN, mean_estimate(p), ensemble_probability(MaxMixed(cfg.d0), effect))]
    return claims + povm_mean_claims(cfg.d0, cfg.n_povms, cfg.n_outcomes, cfg.n_samples, cfg.master_seed)


def _exp_reliability(cfg, ctx):
    claims = optimal_claims([cfg.d0], cfg.master_seed)
    return claims + cor1_single_claim(cfg.d0, build_effect(cfg), cfg.epsilon, cfg.n_samples, cfg.master_seed, ctx, method=cfg.method, ungated=cfg.ungated)


def _exp_pair_fraction(cfg, ctx):
    effect = build_effect(cfg)
    if cfg.d0 == 2 and _is_rank1_projector(effect):
        claims, gap = delta_squared_claims([cfg.delta], cfg.n_samples, cfg.master_seed)
    else:
        claims, gap = cor1_pair_claim(cfg.d0, effect, cfg.epsilon, cfg.delta, cfg.n_samples, cfg.master_seed, ctx, method=cfg.method, ungated=cfg.ungated)
    ctx.histogram("pair_gap_histogram.csv", gap, range=(0.0, 1.0))
    return claims


def _exp_favoring(cfg, ctx):
    claims, cov = favoring_claims(cfg.d0, build_effect(cfg), cfg.epsilon, cfg.n_samples, cfg.master_seed, ctx, method=cfg.method)
    ctx.csv("pairs.csv", ["reliability", "ratio"], [cov.reliabilities, cov.ratios])
    return claims


def _exp_quantifier(cfg, ctx):
    claims, qc = quantifier_claims(cfg.d0, cfg.n_samples, cfg.master_seed)
    ctx.csv("pairs.csv", ["same_pair_reliability", "fresh_pair_reliability"], [qc.same_values, qc.fresh_values])
    return claims


def _exp_flatness(cfg, ctx):
    claims, rep = flatness_claims(cfg.d0, build_effect(cfg), cfg.epsilon, cfg.n_samples, cfg.master_seed, ctx, ungated=cfg.ungated, method=cfg.method)
    ctx.histogram("f_histogram.csv", rep.f_values, range=(0.0, float(rep.f_values.max())))
    return claims


def _exp_set(cfg, ctx):
    return set_claims(cfg.d0, build_effect(cfg), cfg.epsilon, cfg.n_samples, cfg.master_seed, ctx, ungated=cfg.ungated)


def _exp_gaussian(cfg, ctx):
    from .bayes import GAUSSIAN_MIN_DIM

    if cfg.d0 < GAUSSIAN_MIN_DIM and not cfg.ungated:
        raise HypothesisError(
            f"d0 >= {GAUSSIAN_MIN_DIM}",
            f"the Gaussian overlap law needs d0 >= {GAUSSIAN_MIN_DIM}, got {cfg.d0}; set ungated = true to compare with the exact law",
        )
    claims, rep = gaussian_claims(cfg.d0, cfg.n_samples, cfg.master_seed, allow_small=True, method=cfg.method)
    ctx.histogram("overlap_histogram.csv", rep.scaled_weights)
    return claims


def _exp_mixed(cfg, ctx):
    return povm_mean_claims(cfg.d0, cfg.n_povms, cfg.n_outcomes, cfg.n_samples, cfg.master_seed, tag="mixed_vs_pure", anchor=A_MIXED)


def _exp_spin(cfg, ctx):
    return spin_claims(cfg.n_samples, cfg.master_seed, cfg.n_qubits, ctx)


def _exp_full_suite(cfg, ctx):
    d0, eps, n, seed = cfg.d0, cfg.epsilon, cfg.n_samples, cfg.master_seed
    claims = []
    # Haar typicality at the configured size, three effect shapes from one set of draws
    effects = {
        "rank1": Rank1Effect(StateVector.basis(d0, 0)),
        "diagonal": _diag(CANON_LEVELS, d0),
        "projector": BasisProjector(range(d0 // 2), d0),
    }
    conc, grid = concentration_claims(d0, effects, [eps], n, seed, ctx, method=cfg.method)
    claims += conc
    proj_dev = grid[("projector", eps)].deviations
    if d0 > 4.0 / eps:
        est = fraction_estimate(proj_dev >= 0.5)
        claims.append(Claim(f"cor1_single_fraction[d0={d0},eps={eps:g}]", A_COR1_SINGLE, est.value, est.stderr, eps, "<=", _sigma3(eps, n)))
    claims += scatter_claims([64, 1024], n, seed)
    claims += povm_mean_claims(128, 5, 4, n, seed)
    claims += povm_mean_claims(2, 5, 4, n, seed, tag="mixed_vs_pure", anchor=A_MIXED)
    claims += povm_mean_claims(64, 5, 4, n, seed, tag="mixed_vs_pure", anchor=A_MIXED)
    # reliability and distinguishing
    dsq, _ = delta_squared_claims([0.1, 0.2, 0.3], n, seed)
    claims += dsq
    claims += optimal_claims(sorted({2, 1024, d0}), seed)
    pair, _ = cor1_pair_claim(d0, effects["projector"], eps, 0.5, n, seed, ctx, method="spectral", ungated=True)
    claims += pair
    claims.append(cor1_extrapolation_claim())
    fav, _ = favoring_claims(CANON_D0, _diag(CANON_LEVELS, CANON_D0), CANON_EPS, n // 10, seed, ctx, method="spectral")
    claims += fav
    fav, _ = favoring_claims(d0, effects["diagonal"], eps, n // 10, seed, ctx, method=cfg.method)
    claims += fav
    qc, _ = quantifier_claims(1024, n // 10, seed)
    claims += qc
    # Bayesian flatness, its counterexamples and the sandwich
    flat, _ = flatness_claims(CANON_D0, _diag(CANON_LEVELS, CANON_D0), CANON_EPS, n, seed, ctx, method="spectral")
    claims += flat
    small, _ = flatness_claims(2, Rank1Effect(StateVector.basis(2, 0)), CANON_EPS, n, seed, ctx, ungated=True)
    claims += small
    gauss, _ = gaussian_claims(1024, n, seed)
    claims += gauss
    claims += set_claims(CANON_D0, _diag(CANON_LEVELS, CANON_D0), CANON_EPS, 4000, seed, ctx)
    claims += spin_claims(n, seed, 10, RunContext(None))
    claims.append(log_bound_claim())
    return claims


RUNNERS = {
    "concentration": _exp_concentration,
    "mean-identity": _exp_mean_identity,
    "reliability": _exp_reliability,
    "pair-fraction": _exp_pair_fraction,
    "favoring": _exp_favoring,
    "quantifier-contrast": _exp_quantifier,
    "bayes-flatness": _exp_flatness,
    "bayes-set": _exp_set,
    "gaussian-overlap": _exp_gaussian,
    "mixed-vs-pure": _exp_mixed,
    "spin": _exp_spin,
    "full-suite": _exp_full_suite,
}

DESCRIPTIONS = {
    "concentration": "violations of the single-effect deviation bound",
    "mean-identity": "Haar means of Born probabilities against tr(rho0 E)",
    "reliability": "optimal discriminator and fixed-effect reliability against rho0",
    "pair-fraction": "fraction of Haar pairs a fixed effect distinguishes reliably",
    "favoring": "favoring-ratio band coverage",
    "quantifier-contrast": "tailored discriminators on their own pair and on fresh pairs",
    "bayes-flatness": "flatness of the posterior density f(psi), with small-d0 counterexamples",
    "bayes-set": "posterior versus prior probability of state sets",
    "gaussian-overlap": "law of sqrt(d0) <b_z|psi> and the improbable-outcome counterexample",
    "mixed-vs-pure": "random-pure ensembles against rho0 for random POVMs",
    "spin": "spinor, product-state and entangled-state up-probabilities",
    "full-suite": "every check above at fixed canonical sizes",
}


@dataclass
class RunResult:
    report: dict
    claims: list
    out_dir: Path

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.claims)


def resolve_output_dir(cfg: ExperimentConfig) -> Path:
    env = os.environ.get(OUTPUT_ENV)
    if env:
        return Path(env)
    return Path(cfg.output_dir or f"typicality-results/{cfg.experiment}")


def run_experiment(cfg: ExperimentConfig, out_dir: Path | None = None) -> RunResult:
    """Run ``cfg`` and write ``report.json`` plus CSV files into ``out_dir``.

    Raises :class:`~typicality_lab.errors.HypothesisError` when a gate fails and
    ``cfg.ungated`` is not set.
    """
    cfg.validate()
    out_dir = Path(out_dir) if out_dir is not None else resolve_output_dir(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    ctx = RunContext(out_dir, cfg.histogram_bins)
    t0 = time.perf_counter()
    claims = RUNNERS[cfg.experiment](cfg, ctx)
    elapsed = time.perf_counter() - t0
    n_pass = sum(c.passed for c in claims)
    report = {
        "artifact": "typicality-lab",
        "version": __version__,
        "experiment": cfg.experiment,
        "config": cfg.as_dict(),
        "claims": [c.as_dict() for c in claims],
        "summary": {"n_claims": len(claims), "n_passed": n_pass, "all_passed": n_pass == len(claims)},
        "details": ctx.details,
        "files": ctx.files,
        "wall_clock_seconds": elapsed,
    }
    write_json(report, out_dir / "report.json")
    return RunResult(report, claims, out_dir)


def describe(experiment: str) -> str:
    return DESCRIPTIONS[experiment]


__all__ = ["RUNNERS", "run_experiment", "default_config", "resolve_output_dir", "RunResult", "OUTPUT_ENV"]
