"""Working-precision policy for the floating-point layer.

Order decisions run on exact rationals and never touch this module; only
the analytic layer (power sums, jets, complete-monotonicity scans, integral
residuals) needs binary floating point. Everything here funnels through
gmpy2 contexts so precision is an explicit, per-call choice.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

import gmpy2

DEFAULT_PRECISION_BITS = 128
MIN_PRECISION_BITS = 53

Rational = Union[int, Fraction]
RealLike = Union[int, float, str, Fraction, "gmpy2.mpfr"]


def working_precision(bits: int):
    """Context manager: all mpfr arithmetic inside runs at `bits` precision."""
    if bits < MIN_PRECISION_BITS:
        raise ValueError(f"precision must be >= {MIN_PRECISION_BITS} bits, got {bits}")
    return gmpy2.context(precision=bits)


def to_mpfr(x: RealLike) -> "gmpy2.mpfr":
    """Convert to mpfr at the active context precision.

    Fractions and decimal strings convert without an intermediate double,
    so user-supplied values keep their full precision.
    """
    if isinstance(x, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
    return gmpy2.mpfr(x)


def to_fraction(x: RealLike) -> Fraction:
    """Exact rational value of `x`; floats/mpfrs convert by their exact binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


def comparison_tolerance(precision_bits: int, slack_bits: int = 16) -> "gmpy2.mpfr":
    """Tolerance 2^-(p - slack) used to band sign decisions at p bits."""
    return gmpy2.mpfr(2) ** (-(precision_bits - slack_bits))
