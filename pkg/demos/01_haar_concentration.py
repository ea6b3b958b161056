"""
Born probabilities of random states concentrate
================================================

Draw Haar-random states in growing dimensions and watch <psi|E|psi> pile up
around tr(rho0 E), well inside the deviation bound ||E|| / sqrt(eps d0).
"""

import numpy as np

from typicality_lab import BasisProjector
from typicality_lab.concentration import ConcentrationConfig, bound_single, run_deviation_experiment
from typicality_lab.montecarlo import expectation_samples

# a projector onto half of the basis: tr(rho0 E) = 1/2 in every dimension
for d0 in (16, 256, 4096):
    e = BasisProjector(range(d0 // 2), d0)
    p = expectation_samples(e, 5000, master_seed=1)
    print(f"d0={d0:5d}  mean={p.mean():.4f}  stdev={p.std():.5f}  bound(eps=0.01)={bound_single(1.0, 0.01, d0):.4f}")

# the bound is a Chebyshev-type estimate, so real violations are rarer than eps
cfg = ConcentrationConfig(d0=1024, epsilon=0.01, n_samples=20_000, effect=BasisProjector(range(512), 1024))
stats = run_deviation_experiment(cfg, seed=2)
print("violation fraction:", stats.violation_fraction, "allowed:", round(stats.allowed_fraction, 4))
print("99.9% quantile of |deviation|:", round(stats.empirical_quantiles[0.999], 4), "bound:", round(stats.bound, 4))

# large dimensions never touch a d0-vector: the spectral route samples the same law
big = expectation_samples(BasisProjector(range(10**7 // 2), 10**7), 2000, master_seed=3, method="spectral")
print("d0=1e7 stdev:", np.std(big), "(Beta(d0/2, d0/2) predicts", 0.5 / np.sqrt(10**7 + 1), ")")
