"""Independent reference values, computed without the package under test.

Closed forms come from scipy distributions or brute-force arithmetic, never
from typicality_lab itself.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, stats


def beta_overlap(d0: int):
    """Law of |<psi|v>|^2 for Haar psi in C^d0: Beta(1, d0 - 1)."""
    return stats.beta(1, d0 - 1)


def rank1_violation_probability(d0: int, epsilon: float) -> float:
    """P(| |<psi|v>|^2 - 1/d0 | > 1/sqrt(eps d0)) from the Beta CDF."""
    b = 1.0 / math.sqrt(epsilon * d0)
    law = beta_overlap(d0)
    return float(law.sf(1.0 / d0 + b) + law.cdf(max(0.0, 1.0 / d0 - b)))


def half_projector_law(d0: int):
    """Law of the mass a Haar state puts on d0/2 basis vectors: Beta(d0/2, d0/2)."""
    return stats.beta(d0 // 2, d0 - d0 // 2)


def uniform_pair_gap_tail(delta: float) -> float:
    """P(|U - V| >= 1 - delta) for independent uniforms, by numerical integration."""
    val, _ = integrate.dblquad(lambda v, u: 1.0, 0.0, 1.0, lambda u: 0.0, lambda u: max(0.0, u - (1.0 - delta)))
    return 2.0 * val


def exp1_fractions() -> tuple[float, float]:
    """Exp(1) mass below ln(4/3) and above ln 4."""
    e = stats.expon()
    return float(e.cdf(math.log(4.0 / 3.0))), float(e.sf(math.log(4.0)))


def brute_expectation(psi, matrix) -> float:
    psi = np.asarray(psi, dtype=complex)
    m = np.asarray(matrix, dtype=complex)
    return float(np.real(psi.conj() @ m @ psi))


# values frozen before the build (computed with scipy 1.15 and checked by hand)
FROZEN = {
    # 1/sqrt(0.01 * 4096); the rank-1 Beta(1, 4095) tail beyond it is below 1e-300
    "bound_4096_0.01": 0.15625,
    # 1 - (1 - 1.6e-99)^2 = 3.2e-99 to 99 digits
    "cor1_pair_1e100": 3.2e-99,
    # 1 + / - eta with eta = 1/sqrt(0.1^3 * 1e6) = 1/sqrt(1000)
    "favor_pair_band_0.1_1e6": (1.0 - 2.0 / math.sqrt(1000.0), 1.0 + 3.0 / math.sqrt(1000.0)),
    # Beta(1, 1023) survival at ln(4)/1024 and CDF at ln(4/3)/1024
    "beta1023_above_ln4": (1.0 - math.log(4.0) / 1024) ** 1023,
    "beta1023_below_ln4_3": 1.0 - (1.0 - math.log(4.0 / 3.0) / 1024) ** 1023,
    # Beta(512, 512) two-sided tail outside [0.4, 0.6]
    "beta512_outside_0.4_0.6": 2.0 * float(stats.beta(512, 512).cdf(0.4)),
}
