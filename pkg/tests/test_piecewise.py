from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from majorkit.piecewise import PiecewiseLinearFn, StepFn

F = Fraction


def step_example() -> StepFn:
    # counting-style: 3 on (0, 1/10], 2 on (1/10, 1/5], 1 on (1/5, 2/5], 0 after
    return StepFn((F(1, 10), F(1, 5), F(2, 5)), (3, 2, 1, 0))


class TestStepFn:
    def test_values_between_breakpoints(self):
        s = step_example()
        assert s.value(F(1, 20)) == 3
        assert s.value(F(1, 10)) == 3  # right-continuous from the left block
        assert s.value(F(3, 20)) == 2
        assert s.value(F(1)) == 0

    def test_segments_cover_from_zero(self):
        s = step_example()
        segs = list(s.segments())
        assert segs[0][0] == 0
        # the region past the last breakpoint is the implicit zero tail
        assert s.value(segs[-1][1]) == 1 and s.value(segs[-1][1] + 1) == 0
        # contiguous
        for (lo, hi, _), (lo2, hi2, _) in zip(segs, segs[1:]):
            assert hi == lo2

    def test_integral_above(self):
        s = step_example()
        # integral of the step function on (t, inf), summed per segment
        # from t=0: 3*(1/10) + 2*(1/10) + 1*(1/5) = 7/10
        assert s.integral_above(F(0)) == F(7, 10)
        # from t=3/20: 2*(1/20) + 1*(1/5) = 3/10
        assert s.integral_above(F(3, 20)) == F(3, 10)
        assert s.integral_above(F(1)) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            StepFn((F(1, 2), F(1, 4)), (2, 1, 0))  # not increasing
        with pytest.raises(ValueError):
            StepFn((F(1, 2),), (1, 2))  # not non-increasing values
        with pytest.raises(ValueError):
            StepFn((F(1, 2),), (1, 1))  # must end at 0


def pl_example() -> PiecewiseLinearFn:
    # hockey-stick-like: value 1 at 0, kinks at 1/2 and 1, zero beyond 1
    return PiecewiseLinearFn.from_breakpoint_values(
        (F(0), F(1, 2), F(1)), (F(1), F(1, 4), F(0))
    )


class TestPiecewiseLinear:
    def test_interpolation(self):
        f = pl_example()
        assert f.eval(F(0)) == 1
        assert f.eval(F(1, 4)) == F(5, 8)
        assert f.eval(F(3, 4)) == F(1, 8)
        assert f.eval(F(2)) == 0

    def test_sub_exact(self):
        f = pl_example()
        g = PiecewiseLinearFn.from_breakpoint_values((F(0), F(1)), (F(1), F(0)))
        d = f.sub(g)
        for t in (F(0), F(1, 4), F(1, 2), F(3, 4), F(1), F(3, 2)):
            assert d.eval(t) == f.eval(t) - g.eval(t)

    def test_min_at_breakpoints(self):
        f = pl_example()
        g = PiecewiseLinearFn.from_breakpoint_values((F(0), F(1)), (F(1), F(0)))
        d = f.sub(g)  # f - g dips below 0 between the kinks
        value, where = d.min_at_breakpoints()
        assert value == d.eval(where)
        # linear pieces: a dense sample never beats the breakpoint minimum
        assert all(d.eval(F(i, 64)) >= value for i in range(129))

    def test_negative_witness(self):
        f = pl_example()
        g = PiecewiseLinearFn.from_breakpoint_values((F(0), F(1)), (F(1), F(0)))
        d = f.sub(g)
        witness = d.negative_witness()
        assert witness is not None
        t, v = witness
        assert t > 0 and v < 0 and d.eval(t) == v

    def test_negative_witness_none_when_nonnegative(self):
        f = pl_example()
        assert f.sub(f).negative_witness() is None

    def test_vanishes_past_last_breakpoint(self):
        with pytest.raises(ValueError):
            PiecewiseLinearFn.from_breakpoint_values((F(0), F(1)), (F(1), F(1, 2)))


fractions01 = st.fractions(min_value=0, max_value=2, max_denominator=32)


@given(
    st.lists(st.fractions(min_value=Fraction(1, 16), max_value=2, max_denominator=16),
             min_size=1, max_size=5, unique=True),
    fractions01,
)
def test_integral_above_matches_brute_force(bps, t):
    bps = sorted(bps)
    values = tuple(range(len(bps), -1, -1))
    s = StepFn(tuple(bps), values)
    total = Fraction(0)
    for lo, hi, v in s.segments():
        lo = max(lo, t)
        if lo < hi:
            total += v * (hi - lo)
    assert s.integral_above(t) == total
