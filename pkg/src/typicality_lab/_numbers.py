from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def exact(x) -> Fraction:
    """Rational value of a number as the user wrote it.

    Floats go through their shortest repr, so ``0.1`` becomes exactly 1/10.
    Strict inequalities such as ``d0 > 1/eps**5`` then behave at the boundary
    the way they read on paper instead of depending on binary rounding.
    """
    if isinstance(x, Rational):
        return Fraction(x)
    return Fraction(repr(float(x)))


def half(x):
    """x / 2, staying exact for integers and fractions."""
    if isinstance(x, Rational):
        return Fraction(x) / 2
    return x / 2
