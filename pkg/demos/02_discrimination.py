"""
Telling random states apart
===========================

A measurement tailored to one state separates it from the maximally mixed
state almost perfectly, yet no *fixed* measurement separates typical pairs of
random states.  The favoring ratio of any fixed outcome stays close to 1.
"""

import numpy as np

from typicality_lab import BasisProjector, DiagonalEffect, MaxMixed, Pure
from typicality_lab.discrimination import (
    corollary1_epsilon_threshold,
    favoring_band_experiment,
    optimal_discriminator,
    pair_reliable_fraction,
    quantifier_contrast_demo,
    reliability,
)
from typicality_lab.sampler import SeedSpec, sample_uniform

d0 = 1024
psi = sample_uniform(d0, SeedSpec(7))
povm = optimal_discriminator(psi)
print("tailored effect vs rho0:", reliability(povm[0], Pure(psi), MaxMixed(d0)).reliability)

# in two dimensions a fixed projector distinguishes a delta^2 fraction of pairs
for delta in (0.1, 0.2, 0.3):
    frac = pair_reliable_fraction(2, BasisProjector([0], 2), delta, 50_000, seed=1)
    print(f"d0=2 delta={delta}: fraction {frac.value:.4f}")

# in 1024 dimensions essentially never
print("d0=1024:", pair_reliable_fraction(d0, BasisProjector(range(512), d0), 0.49, 20_000, seed=1).value)

# order of quantifiers: for every pair there is a good effect, but not one effect for all pairs
qc = quantifier_contrast_demo(d0, 2000, seed=3)
print(f"own pair {qc.same_pair.value:.4f}   fresh pair {qc.fresh_pair.value:.5f}")

# guarantees extrapolate to huge dimensions through logarithms
print("d0=1e100, pair complement:", corollary1_epsilon_threshold(log10_d0=100, pair=True).complement)

# favoring ratios of a fixed outcome sit in a narrow band around 1
cov = favoring_band_experiment(100_000, DiagonalEffect(np.resize([0.2, 0.8], 100_000)), 0.101, 5000, seed=4)
print(f"favoring band {cov.band[0]:.3f}..{cov.band[1]:.3f}, coverage {cov.coverage.value:.4f} ({cov.mode} mode)")
