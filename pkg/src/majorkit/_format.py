"""Deterministic rendering of numbers and reports.

Reports must be byte-identical across runs and parallelism widths, so every
number is rendered by a fixed rule with no locale, hash-order, or timestamp
dependence:

  * Fractions whose denominator is 2^a * 5^b render as the exact decimal
    with trailing zeros stripped; anything else renders as "p/q".
  * mpfr values render via gmpy2's repr digits, which round-trip at the
    precision they were computed at.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import gmpy2


def fraction_to_str(x: Fraction) -> str:
    """Exact decimal string when one exists, else 'p/q'."""
    n, d = x.numerator, x.denominator
    if d == 1:
        return str(n)
    sign = "-" if n < 0 else ""
    n = abs(n)
    twos = fives = 0
    rest = d
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{x.numerator}/{x.denominator}"
    exp = max(twos, fives)
    scaled = n * 10**exp // d  # exact: d divides 10^exp
    digits = str(scaled).rjust(exp + 1, "0")
    whole, frac = digits[:-exp], digits[-exp:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def mpfr_to_str(x) -> str:
    """Decimal string that round-trips to the same mpfr at its own precision."""
    if gmpy2.is_nan(x):
        return "nan"
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    return str(x)


def real_to_str(x: Any) -> str:
    if isinstance(x, Fraction):
        return fraction_to_str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return mpfr_to_str(x)


def jsonable(obj: Any) -> Any:
    """Recursively convert report values into JSON-safe primitives.

    Numbers become strings under the deterministic rules above; ints and
    bools pass through.
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, (Fraction, float)) or type(obj).__name__ == "mpfr":
        return real_to_str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot render {type(obj)!r} into a report")


def canonical_json(obj: Any) -> str:
    """Sorted keys, fixed separators, trailing newline: byte-stable output."""
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"
