"""Exact step-function and piecewise-linear algebra over rationals.

Counting functions (how many entries are >= x) are compactly supported
integer step functions; partial-mass functions t -> sum (x_j - t)+ are
convex piecewise-linear ones. Both are represented by exact breakpoint
data so sign questions are decided without tolerance.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple

from .sequences import as_fraction


@dataclass(frozen=True)
class StepFn:
    """Right-continuous-from-the-left integer step function on (0, inf).

    value(x) = values[i] for x in (breakpoints[i-1], breakpoints[i]] with the
    convention breakpoints[-1] = 0; identically values[-1] = 0 beyond the
    last breakpoint. Non-increasing and compactly supported.
    """
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[int, ...]  # len(values) == len(breakpoints) + 1, last == 0

    def __post_init__(self):
        bps = tuple(as_fraction(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(self.values) != len(bps) + 1:
            raise ValueError("need one value per segment (len(breakpoints)+1)")
        if any(b <= 0 for b in bps):
            raise ValueError("breakpoints must be positive")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v1 < v2 for v1, v2 in zip(self.values, self.values[1:])):
            raise ValueError("step values must be non-increasing")
        if self.values and self.values[-1] != 0:
            raise ValueError("step function must vanish beyond its last breakpoint")

    def value(self, x) -> int:
        x = as_fraction(x)
        if x <= 0:
            raise ValueError("counting functions are defined for x > 0")
        return self.values[bisect_left(self.breakpoints, x)]

    def segments(self) -> Iterator[Tuple[Fraction, Fraction, int]]:
        """(lo, hi, value) with value held on (lo, hi]; first lo is 0."""
        lo = Fraction(0)
        for hi, v in zip(self.breakpoints, self.values):
            yield lo, hi, v
            lo = hi

    def integral_above(self, t) -> Fraction:
        """Exact integral of the step function over [t, inf)."""
        t = as_fraction(t)
        if t < 0:
            raise ValueError("t must be >= 0")
        total = Fraction(0)
        for lo, hi, v in self.segments():
            if hi <= t:
                continue
            total += v * (hi - max(lo, t))
        return total


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Continuous piecewise-linear function, identically 0 beyond the last
    breakpoint. breakpoints[0] must be 0; left_values[i] is the value at
    breakpoints[i]; slopes[i] applies on [breakpoints[i], breakpoints[i+1])."""
    breakpoints: Tuple[Fraction, ...]
    left_values: Tuple[Fraction, ...]
    slopes: Tuple[Fraction, ...]

    def __post_init__(self):
        bps = tuple(as_fraction(b) for b in self.breakpoints)
        vals = tuple(as_fraction(v) for v in self.left_values)
        slps = tuple(as_fraction(s) for s in self.slopes)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "left_values", vals)
        object.__setattr__(self, "slopes", slps)
        if not bps or bps[0] != 0:
            raise ValueError("breakpoints must start at 0")
        if any(b1 >= b2 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(vals) != len(bps) or len(slps) != len(bps) - 1:
            raise ValueError("inconsistent breakpoint/value/slope lengths")
        for i in range(len(slps)):
            if vals[i] + slps[i] * (bps[i + 1] - bps[i]) != vals[i + 1]:
                raise ValueError(f"discontinuity at breakpoint {i + 1}")
        if vals[-1] != 0:
            raise ValueError("function must vanish at its last breakpoint")

    @staticmethod
    def from_breakpoint_values(breakpoints, values) -> "PiecewiseLinearFn":
        """Interpolant through (b_i, v_i), 0 beyond the last breakpoint."""
        bps = tuple(as_fraction(b) for b in breakpoints)
        vals = tuple(as_fraction(v) for v in values)
        slopes = tuple(
            (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i]) for i in range(len(bps) - 1)
        )
        return PiecewiseLinearFn(bps, vals, slopes)

    def eval(self, t) -> Fraction:
        t = as_fraction(t)
        if t < 0:
            raise ValueError("t must be >= 0")
        if t >= self.breakpoints[-1]:
            return Fraction(0)
        i = bisect_right(self.breakpoints, t) - 1
        return self.left_values[i] + self.slopes[i] * (t - self.breakpoints[i])

    def segments(self) -> Iterator[Tuple[Fraction, Fraction, Fraction, Fraction]]:
        """(lo, hi, value_at_lo, slope) for each linear piece."""
        for i in range(len(self.slopes)):
            yield (
                self.breakpoints[i],
                self.breakpoints[i + 1],
                self.left_values[i],
                self.slopes[i],
            )

    def sub(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        """Exact pointwise difference self - other."""
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        vals = [self.eval(b) - other.eval(b) for b in bps]
        return PiecewiseLinearFn.from_breakpoint_values(tuple(bps), tuple(vals))

    def min_at_breakpoints(self) -> Tuple[Fraction, Fraction]:
        """(min value, smallest breakpoint attaining it). Since the function
        is linear between breakpoints and 0 beyond (and 0 is itself a
        breakpoint), this is the global min over [0, inf)."""
        best_v = min(self.left_values)  # <= 0: the last value is 0
        for b, v in zip(self.breakpoints, self.left_values):
            if v == best_v:
                return best_v, b
        raise AssertionError("unreachable")

    def negative_witness(self) -> Optional[Tuple[Fraction, Fraction]]:
        """A point t > 0 with value < 0, or None if the function is >= 0
        everywhere. Deterministic: the smallest positive breakpoint attaining
        the minimum; if only t=0 attains it, the midpoint of the negative
        stretch that follows."""
        best_v, _ = self.min_at_breakpoints()
        if best_v >= 0:
            return None
        for b, v in zip(self.breakpoints, self.left_values):
            if v == best_v and b > 0:
                return b, v
        # minimum only at t=0: value climbs on [0, b1]; stay inside the
        # negative part of the first segment
        b1 = self.breakpoints[1]
        v0, v1 = self.left_values[0], self.left_values[1]
        if v1 < 0:
            return b1, v1
        cross = b1 * v0 / (v0 - v1)  # v0 < 0 <= v1
        t = cross / 2
        return t, self.eval(t)
