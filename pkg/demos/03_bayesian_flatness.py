"""
Flat posteriors over random states
==================================

Observing an outcome E reweights the Haar prior by f(psi) = <psi|E|psi> / tr(rho0 E).
In large dimensions f is nearly constant, so the posterior hardly moves; in
two dimensions, or for improbable outcomes, it is anything but flat.
"""

import math

import numpy as np

from typicality_lab import DiagonalEffect, HypothesisError, Rank1Effect, StateVector
from typicality_lab.bayes import (
    PosteriorSpec,
    flatness_experiment,
    gaussian_overlap_check,
    overlap_above,
    posterior_set_probability,
)

d0, eps = 100_000, 0.101  # d0 > 1/eps^5
e = DiagonalEffect(np.resize([0.1, 0.3, 0.5, 0.7, 0.9], d0))
rep = flatness_experiment(d0, e, eps, 20_000, seed=1)
print(f"flat fraction {rep.coverage.value:.4f} (need at least {1 - eps:.3f}); f ranges {rep.f_values.min():.4f}..{rep.f_values.max():.4f}")

# posterior probability of a set of states barely differs from its prior
post = posterior_set_probability(PosteriorSpec(e), overlap_above(0, 1 / d0), 1000, seed=2, epsilon=eps)
print(f"prior {post.prior.value:.3f}  posterior {post.posterior.value:.3f}  sandwich {post.sandwich}")

# the hypotheses matter: a qubit is far from flat
qubit = Rank1Effect(StateVector.basis(2, 0))
try:
    flatness_experiment(2, qubit, 0.1, 1000, seed=3)
except HypothesisError as exc:
    print("gate:", exc.hypothesis)
small = flatness_experiment(2, qubit, 0.1, 50_000, seed=3, ungated=True)
print("d0=2: P(f > 1.8) =", small.fraction_above(1.8).value)

# and so is an improbable outcome in a big space: f is roughly Exp(1)
g = gaussian_overlap_check(1024, 50_000, seed=4)
print(f"d0=1024 basis outcome: P(f < ln 4/3) = {g.below_ln4_3.value:.3f}, P(f > ln 4) = {g.above_ln4.value:.3f}")
print("ln(4/3) =", round(math.log(4 / 3), 4))
