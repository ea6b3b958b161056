"""Acceptance criteria 1-15 at their stated sizes and tolerances.

Each test records one PASS/FAIL line (printed in the pytest terminal summary).
Run directly with ``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

sys.path.insert(0, str(Path(__file__).parent))
import oracles  # noqa: E402

from typicality_lab.bayes import (  # noqa: E402
    PosteriorSpec,
    effect_above,
    flatness_experiment,
    gaussian_overlap_check,
    mixed_vs_random_pure_check,
    overlap_above,
    posterior_density,
    posterior_set_probability,
    real_part_positive,
)
from typicality_lab.cli import main as cli_main  # noqa: E402
from typicality_lab.concentration import run_deviation_grid  # noqa: E402
from typicality_lab.config import default_config, render_config  # noqa: E402
from typicality_lab.discrimination import (  # noqa: E402
    corollary1_epsilon_threshold,
    favoring_band_experiment,
    optimal_discriminator,
    quantifier_contrast_demo,
    reliability,
)
from typicality_lab.experiments import run_experiment  # noqa: E402
from typicality_lab.linalg import (  # noqa: E402
    BasisProjector,
    DiagonalEffect,
    MaxMixed,
    Pure,
    Rank1Effect,
    StateVector,
)
from typicality_lab.montecarlo import binomial_sigma, expectation_samples, fraction_estimate  # noqa: E402
from typicality_lab.qubits import spin_experiment  # noqa: E402
from typicality_lab.sampler import SeedSpec, random_povm, sample_uniform  # noqa: E402

SEED = 42
LEVELS = np.array([0.1, 0.3, 0.5, 0.7, 0.9])

pytestmark = pytest.mark.slow


def _diag(d0):
    return DiagonalEffect(np.resize(LEVELS, d0))


def test_c01_concentration_bound(record_criterion):
    n = 100_000
    worst = []
    ok = True
    for d0 in (256, 1024, 4096):
        effects = {
            "rank1": Rank1Effect(StateVector.basis(d0, 0)),
            "diagonal": _diag(d0),
            "projector": BasisProjector(range(d0 // 2), d0),
        }
        # full-state route: the oracle is the Beta law, not the sampler's own spectral law
        grid = run_deviation_grid(d0, effects, (0.01, 0.1), n, SEED, method="state")
        for (name, eps), st in grid.items():
            allowed = eps + 3.0 * math.sqrt(eps / n)
            ok &= st.violation_fraction <= allowed
            worst.append(st.violation_fraction / allowed)
    record_criterion(1, ok, f"18 cells, max violation/allowed = {max(worst):.3g}")
    assert ok


def test_c02_scatter_scaling(record_criterion):
    n = 100_000
    rel = {}
    for k, d0 in enumerate((64, 1024)):
        p = expectation_samples(Rank1Effect(StateVector.basis(d0, 0)), n, SEED, subkey=(k,), method="state")
        oracle = oracles.beta_overlap(d0).std()
        rel[d0] = abs(p.std(ddof=1) / oracle - 1.0)
    ok = all(r <= 0.05 for r in rel.values())
    record_criterion(2, ok, "relative stdev error " + ", ".join(f"d0={d}: {r:.4f}" for d, r in rel.items()))
    assert ok


def test_c03_mean_identity(record_criterion):
    d0, n = 128, 100_000
    z = []
    for k in range(5):
        povm = random_povm(d0, 4, SeedSpec(SEED, 10_000 + k))
        z += [c.z_score for c in mixed_vs_random_pure_check(d0, povm, n, SEED + k)]
    ok = all(abs(v) <= 3.0 for v in z)
    record_criterion(3, ok, f"{len(z)} outcomes, max |z| = {max(map(abs, z)):.3f}")
    assert ok


def test_c04_delta_squared_law(record_criterion):
    n = 1_000_000
    e = BasisProjector([0], 2)
    pa = expectation_samples(e, n, SEED, subkey=(0,), method="state")
    pb = expectation_samples(e, n, SEED, subkey=(1,), method="state")
    gap = np.abs(pa - pb)
    parts, ok = [], True
    for delta in (0.1, 0.2, 0.3):
        target = oracles.uniform_pair_gap_tail(delta)
        assert target == pytest.approx(delta**2, abs=1e-12)
        est = fraction_estimate(gap >= 1.0 - delta)
        z = (est.value - target) / binomial_sigma(target, n)
        ok &= abs(z) <= 3.0
        parts.append(f"delta={delta}: {est.value:.5f} (z={z:+.2f})")
    record_criterion(4, ok, "; ".join(parts))
    assert ok


def test_c05_optimal_discriminator(record_criterion):
    errs = {}
    for d0 in (2, 1024):
        psi = sample_uniform(d0, SeedSpec(SEED, 5))
        povm = optimal_discriminator(psi)
        r = reliability(povm[0], Pure(psi), MaxMixed(d0)).reliability
        errs[d0] = abs(r - (1.0 - 1.0 / d0))
    ok = all(e <= 1e-12 for e in errs.values())
    record_criterion(5, ok, ", ".join(f"d0={d}: |err| = {e:.2e}" for d, e in errs.items()))
    assert ok


def test_c06_corollary1_extrapolation(record_criterion):
    th = corollary1_epsilon_threshold(log10_d0=100, pair=True)
    target = oracles.FROZEN["cor1_pair_1e100"]
    rel = abs(th.complement / target - 1.0)
    # the float-d0 entry point must agree with the log-space path
    th_float = corollary1_epsilon_threshold(1e100, pair=True)
    ok = rel <= 0.01 and th_float.complement == pytest.approx(th.complement, rel=1e-12)
    record_criterion(6, ok, f"complement = {th.complement:.4e}, relative error {rel:.2e}")
    assert ok


def test_c07_favoring_band(record_criterion):
    d0, eps, n = 100_000, 0.101, 10_000
    effect = _diag(d0)
    assert effect.trace() / d0 == pytest.approx(0.5)
    cov = favoring_band_experiment(d0, effect, eps, n, SEED)
    eta = 1.0 / math.sqrt(eps**3 * d0)
    assert cov.mode == "pair"
    assert cov.band == pytest.approx((1 - 2 * eta, 1 + 3 * eta))
    required = (1 - eps) ** 2
    ok = cov.coverage.value >= required - 3.0 * binomial_sigma(required, n)
    record_criterion(7, ok, f"coverage {cov.coverage.value:.4f} vs required {required:.4f} - 3 sigma, band [{cov.band[0]:.4f}, {cov.band[1]:.4f}]")
    assert ok


def test_c08_quantifier_contrast(record_criterion):
    qc = quantifier_contrast_demo(1024, 10_000, SEED)
    ok = qc.same_pair.value >= 0.99 and qc.fresh_pair.value <= 0.1
    record_criterion(8, ok, f"same-pair mean {qc.same_pair.value:.5f}, fresh-pair mean {qc.fresh_pair.value:.5f}")
    assert ok


def test_c09_posterior_flatness(record_criterion):
    d0, eps, n = 100_000, 0.101, 100_000
    rep = flatness_experiment(d0, _diag(d0), eps, n, SEED)
    sigma = binomial_sigma(1 - eps, n)
    ok = rep.gated and rep.coverage.value >= 1 - eps - 3 * sigma
    record_criterion(9, ok, f"fraction with f in (1-eps, 1+eps) = {rep.coverage.value:.5f}, gated = {rep.gated}")
    assert ok


def test_c10_counterexample_small_d0(record_criterion):
    n = 100_000
    e = Rank1Effect(StateVector.basis(2, 0))
    rep = flatness_experiment(2, e, 0.1, n, SEED, ungated=True, method="state")
    above = rep.fraction_above(1.8)
    target = float(oracles.beta_overlap(2).sf(0.9))  # f = 2|<psi|b1>|^2, uniform overlap
    z = (above.value - target) / binomial_sigma(target, n)
    peak = posterior_density(PosteriorSpec(e), StateVector.basis(2, 0))
    ok = abs(z) <= 3.0 and peak == 2.0 and not rep.gated
    record_criterion(10, ok, f"P(f > 1.8) = {above.value:.5f} (oracle {target:.3f}, z={z:+.2f}), f(b1) = {peak!r}")
    assert ok


def test_c11_counterexample_improbable_outcome(record_criterion):
    n = 100_000
    rep = gaussian_overlap_check(1024, n, SEED, method="state")
    below_target, above_target = 0.25, 0.25
    s = binomial_sigma(0.25, n)
    zb = (rep.below_ln4_3.value - below_target) / s
    za = (rep.above_ln4.value - above_target) / s
    ks = stats.kstest(rep.scaled_weights, "expon").statistic
    ok = abs(zb) <= 3 and abs(za) <= 3 and ks < 0.02
    record_criterion(11, ok, f"below ln(4/3): {rep.below_ln4_3.value:.4f} (z={zb:+.2f}); above ln 4: {rep.above_ln4.value:.4f} (z={za:+.2f}); KS {ks:.4f}")
    assert ok


def test_c12_bayesian_sandwich(record_criterion):
    d0, eps, n = 100_000, 0.101, 4_000
    spec = PosteriorSpec(_diag(d0))
    sets = [
        overlap_above(0, 1.0 / d0),
        effect_above(BasisProjector(range(d0 // 2), d0), 0.5),
        real_part_positive(0),
    ]
    parts, ok = [], True
    for k, s in enumerate(sets):
        rep = posterior_set_probability(spec, s, n, SEED + k, epsilon=eps)
        sig = rep.shift.stderr
        good = rep.hypotheses_hold and rep.prior.value - 2 * eps - 3 * sig <= rep.posterior.value <= rep.prior.value + 3 * eps + 3 * sig
        ok &= good
        parts.append(f"S{k}: post {rep.posterior.value:.4f} prior {rep.prior.value:.4f}")
    record_criterion(12, ok, "; ".join(parts))
    assert ok


def test_c13_spin_laws(record_criterion):
    n = 100_000
    rep = spin_experiment(n, SEED, n_qubits=10)
    parts, ok = [], True
    for p, est in rep.fraction_p.items():
        z = (est.value - p) / binomial_sigma(p, n)
        ok &= abs(z) <= 3
        parts.append(f"p={p}: z={z:+.2f}")
    zprod = (rep.product_high.value - 0.1) / binomial_sigma(0.1, n)
    ok &= abs(zprod) <= 3
    ok &= rep.haar_outside_band.value <= 0.001
    parts.append(f"product {rep.product_high.value:.4f} (z={zprod:+.2f})")
    parts.append(f"Haar outside [0.4, 0.6]: {rep.haar_outside_band.value:.2e} (Beta(512,512) oracle {oracles.FROZEN['beta512_outside_0.4_0.6']:.1e})")
    record_criterion(13, ok, "; ".join(parts))
    assert ok


def test_c14_mixed_vs_random_pure(record_criterion):
    n = 100_000
    z = []
    for d0 in (2, 64):
        for k in range(5):
            povm = random_povm(d0, 4, SeedSpec(SEED, 20_000 + 10 * d0 + k))
            z += [c.z_score for c in mixed_vs_random_pure_check(d0, povm, n, SEED + 100 + k)]
    ok = all(abs(v) <= 3.0 for v in z)
    record_criterion(14, ok, f"{len(z)} outcomes, max |z| = {max(map(abs, z)):.3f}")
    assert ok


def _strip_clock(path: Path) -> dict:
    report = json.loads(path.read_text())
    report.pop("wall_clock_seconds")
    return report


def test_c15_full_suite_reproducible(record_criterion, tmp_path, monkeypatch):
    cfg_path = tmp_path / "full.cfg"
    cfg_path.write_text(render_config(default_config("full-suite")))
    monkeypatch.setenv("TYPICALITY_LAB_OUTPUT_DIR", str(tmp_path / "a"))
    status = cli_main(["run", "-q", str(cfg_path)])
    monkeypatch.delenv("TYPICALITY_LAB_OUTPUT_DIR")
    run_experiment(default_config("full-suite"), tmp_path / "b")
    a_bytes = (tmp_path / "a" / "report.json").read_bytes()
    b_bytes = (tmp_path / "b" / "report.json").read_bytes()
    a, b = _strip_clock(tmp_path / "a" / "report.json"), _strip_clock(tmp_path / "b" / "report.json")
    # byte-level comparison with the clock line removed
    strip = lambda raw: b"\n".join(l for l in raw.split(b"\n") if b"wall_clock_seconds" not in l)  # noqa: E731
    n_pass = a["summary"]["n_passed"]
    ok = status == 0 and a == b and strip(a_bytes) == strip(b_bytes) and n_pass >= 12
    record_criterion(15, ok, f"status {status}, {n_pass}/{a['summary']['n_claims']} claims pass, reports identical = {strip(a_bytes) == strip(b_bytes)}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
