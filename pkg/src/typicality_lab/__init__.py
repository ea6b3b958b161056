"""Numerical laboratory for typicality of Haar-random quantum states.

Haar sampling on high-dimensional subspaces, Born probabilities of POVM
effects, concentration bounds, reliability and favoring ratios for state
discrimination, Bayesian posterior flatness, and spin-1/2 examples.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import DimensionMismatch, HypothesisError, InvalidOperator, TypicalityError, UndefinedRatioError
from .linalg import (
    BasisProjector,
    ComplementEffect,
    DenseDensity,
    DenseEffect,
    DiagonalEffect,
    Effect,
    MaxMixed,
    Povm,
    Pure,
    Rank1Effect,
    StateVector,
    complement,
    compress_to_subspace,
    ensemble_probability,
    expectation,
    expectation_batch,
    operator_norm,
)
from .sampler import SeedSpec, haar_unitary, random_povm, sample_pair, sample_product_state, sample_uniform

__all__ = [
    "__version__",
    "TypicalityError",
    "DimensionMismatch",
    "InvalidOperator",
    "UndefinedRatioError",
    "HypothesisError",
    "StateVector",
    "Effect",
    "DenseEffect",
    "Rank1Effect",
    "DiagonalEffect",
    "BasisProjector",
    "ComplementEffect",
    "complement",
    "Povm",
    "MaxMixed",
    "Pure",
    "DenseDensity",
    "expectation",
    "expectation_batch",
    "ensemble_probability",
    "operator_norm",
    "compress_to_subspace",
    "SeedSpec",
    "sample_uniform",
    "sample_pair",
    "sample_product_state",
    "haar_unitary",
    "random_povm",
]
