"""Exact majorization decisions.

Two independent characterizations of a < b (majorization):

  * partial sums: every top-k sum of a, sorted non-increasing, is bounded by
    the top-k sum of b, and total masses agree;
  * hockey-stick domination: sum_j (b_j - t)+ >= sum_j (a_j - t)+ for every
    threshold t > 0, and total masses agree.

Both run on exact rationals. For pairs of geometric tails the partial-sum
quantifier over infinitely many k collapses to finitely many exact
comparisons plus a single geometric-dominance predicate, so even that case
is decided exactly whenever the crossover index is small enough to verify.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import gmpy2

from .piecewise import PiecewiseLinearFn, StepFn
from .precision import to_mpfr
from .sequences import (
    Ell1Seq,
    GeometricTail,
    Verdict,
    ZeroTail,
    as_fraction,
    require_valid,
    total_mass,
)

# largest index at which geometric-vs-geometric comparisons are verified in
# exact rational arithmetic; beyond it, certified directed rounding takes over
EXACT_POW_CAP = 200_000
_CERTIFY_BITS = (256, 1024, 4096)

DEFAULT_TAIL_TRUNCATION = 64


# ---------------------------------------------------------------------------
# counting and hockey-stick functions

@dataclass(frozen=True)
class CountingResult:
    """Counting function x -> #{entries >= x} plus truncation certificate.

    The step function is exact on (exact_above, inf); entries dropped by
    truncation all lie in (0, exact_above] and their total is dropped_mass.
    Zero tails are exact everywhere (exact_above = 0).
    """
    step: StepFn
    exact_above: Fraction
    dropped_mass: Fraction


@dataclass(frozen=True)
class HockeyCurve:
    """Piecewise-linear t -> sum (x_j - t)+ plus truncation certificate.

    Exact on [exact_above, inf); below that the truncated curve undershoots
    the true one by at most remainder_bound.
    """
    fn: PiecewiseLinearFn
    exact_above: Fraction
    remainder_bound: Fraction


def _materialized_entries(s: Ell1Seq, truncation: int) -> Tuple[list, Fraction, Fraction]:
    """Positive entries to work with, plus (exact_above, dropped_mass)."""
    entries = [x for x in s.prefix if x > 0]
    if isinstance(s.tail, GeometricTail):
        if truncation < 1:
            raise ValueError("geometric tails need a positive truncation")
        entries.extend(itertools.islice(s.tail.terms(), truncation))
        eps = s.tail.term(truncation)
        return entries, eps, eps / (1 - s.tail.ratio)
    return entries, Fraction(0), Fraction(0)


def counting_function(s: Ell1Seq, truncation: int = DEFAULT_TAIL_TRUNCATION) -> CountingResult:
    """Step function counting entries >= x, exact above the truncation level."""
    require_valid(s)
    entries, eps, dropped = _materialized_entries(s, truncation)
    entries.sort()
    bps = sorted(set(entries))
    n = len(entries)
    values = []
    lo = 0  # index of first entry >= current breakpoint
    for b in bps:
        while entries[lo] < b:
            lo += 1
        values.append(n - lo)
    values.append(0)
    return CountingResult(StepFn(tuple(bps), tuple(values)), eps, dropped)


def hockey_stick(s: Ell1Seq, t) -> Fraction:
    """Exact sum of (x - t)+ over all entries; geometric tails contribute
    only their finitely many terms above t."""
    require_valid(s)
    t = as_fraction(t)
    if t <= 0:
        raise ValueError("threshold t must be > 0")
    acc = sum(((x - t) for x in s.prefix if x > t), Fraction(0))
    if isinstance(s.tail, GeometricTail):
        for term in s.tail.terms():
            if term <= t:
                break
            acc += term - t
    return acc


def hockey_stick_fn(s: Ell1Seq, truncation: int = DEFAULT_TAIL_TRUNCATION) -> HockeyCurve:
    """The whole map t -> sum (x_j - t)+ as exact piecewise-linear data."""
    require_valid(s)
    entries, eps, dropped = _materialized_entries(s, truncation)
    bps = [Fraction(0)] + sorted(set(entries))
    vals = []
    for b in bps:
        if b == 0:
            vals.append(sum(entries, Fraction(0)))
        else:
            vals.append(sum((x - b for x in entries if x > b), Fraction(0)))
    return HockeyCurve(
        PiecewiseLinearFn.from_breakpoint_values(tuple(bps), tuple(vals)), eps, dropped
    )


# ---------------------------------------------------------------------------
# partial-sum majorization

def _mass_verdict(a: Ell1Seq, b: Ell1Seq) -> Tuple[Optional[Verdict], Fraction, Fraction]:
    ma, mb = total_mass(a), total_mass(b)
    if ma != mb:
        return (
            Verdict.fails(kind="mass_mismatch", mass_a=ma, mass_b=mb, difference=mb - ma),
            ma,
            mb,
        )
    return None, ma, mb


def _scan_partial_sums(a: Ell1Seq, b: Ell1Seq, k_max: int) -> Optional[Verdict]:
    """Exact comparison of top-k sums for k = 1..k_max; None if all pass."""
    sa = sb = Fraction(0)
    ita, itb = a.entries_desc(), b.entries_desc()
    for k in range(1, k_max + 1):
        sa += next(ita, Fraction(0))
        sb += next(itb, Fraction(0))
        if sa > sb:
            return Verdict.fails(kind="partial_sum", k=k, lhs=sa, rhs=sb)
    return None


@dataclass(frozen=True)
class _TailGeometry:
    """Partial sums of a geometric-tailed sequence become mass - coeff*ratio^k
    once all prefix entries are consumed (k > settled_k)."""
    settled_k: int
    coeff: Fraction
    ratio: Fraction


def _tail_geometry(s: Ell1Seq) -> _TailGeometry:
    tail = s.tail
    assert isinstance(tail, GeometricTail)
    pref = s.positive_prefix_desc()
    j = 0
    cur = tail.first
    for p in pref:
        while cur > p:
            j += 1
            cur *= tail.ratio
    settled = len(pref) + j
    coeff = tail.first * tail.ratio ** (j - settled) / (1 - tail.ratio)
    return _TailGeometry(settled, coeff, tail.ratio)


def _certified_exceeds(cb: Fraction, rb: Fraction, ca: Fraction, ra: Fraction, k: int):
    """Does cb*rb^k > ca*ra^k? True/False when directed rounding separates
    the sides, None when it cannot at the highest precision tried."""
    for bits in _CERTIFY_BITS:
        with gmpy2.context(precision=bits, round=gmpy2.RoundDown):
            lhs_lo = to_mpfr(cb) * to_mpfr(rb) ** k
            rhs_lo = to_mpfr(ca) * to_mpfr(ra) ** k
        with gmpy2.context(precision=bits, round=gmpy2.RoundUp):
            lhs_hi = to_mpfr(cb) * to_mpfr(rb) ** k
            rhs_hi = to_mpfr(ca) * to_mpfr(ra) ** k
        if lhs_lo > rhs_hi:
            return True
        if lhs_hi <= rhs_lo:
            return False
    return None


def _tail_dominance(ga: _TailGeometry, gb: _TailGeometry, k0: int, mass: Fraction) -> Verdict:
    """Decide cb*rb^k <= ca*ra^k for every k > k0 (both sides positive),
    knowing the comparison holds at k = k0."""
    ca, ra = ga.coeff, ga.ratio
    cb, rb = gb.coeff, gb.ratio

    def exceeds(k: int):
        if k <= EXACT_POW_CAP:
            return cb * rb**k > ca * ra**k
        return _certified_exceeds(cb, rb, ca, ra, k)

    def fail_at(k: int) -> Verdict:
        if k <= EXACT_POW_CAP:
            return Verdict.fails(
                kind="partial_sum", k=k, lhs=mass - ca * ra**k, rhs=mass - cb * rb**k
            )
        return Verdict.fails(kind="partial_sum", k=k)

    if rb == ra:
        if cb <= ca:
            return Verdict.holds()
        return fail_at(k0 + 1)
    if rb < ra:
        # violation ratio (cb/ca)*(rb/ra)^k is decreasing: k0+1 decides all
        res = exceeds(k0 + 1)
        if res is None:
            return Verdict.inconclusive(gap=None, kind="tail_comparison_unresolved", k=k0 + 1)
        if res:
            return fail_at(k0 + 1)
        return Verdict.holds()

    # rb > ra: the violation ratio grows without bound, so a violation exists;
    # locate the smallest violating k by monotone search
    with gmpy2.context(precision=128):
        num = gmpy2.log(to_mpfr(ca)) - gmpy2.log(to_mpfr(cb))
        den = gmpy2.log(to_mpfr(rb)) - gmpy2.log(to_mpfr(ra))
        est = int(gmpy2.floor(num / den)) if gmpy2.is_finite(num / den) else k0
    lo = k0  # known: no violation at k0
    hi = max(k0 + 1, est + 2)
    for _ in range(200):
        res = exceeds(hi)
        if res:
            break
        if res is None:
            return Verdict.inconclusive(gap=None, kind="tail_comparison_unresolved", k=hi)
        lo = hi
        hi *= 2
    else:
        return Verdict.inconclusive(gap=None, kind="tail_search_budget", k=hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        res = exceeds(mid)
        if res is None:
            return Verdict.inconclusive(gap=None, kind="tail_comparison_unresolved", k=mid)
        if res:
            hi = mid
        else:
            lo = mid
    return fail_at(hi)


def majorize_partial_sums(a: Ell1Seq, b: Ell1Seq) -> Verdict:
    """Exact partial-sum majorization check: a < b.

    Holds iff total masses agree and every top-k sum of a is bounded by the
    top-k sum of b. The failing witness is the smallest violating k, or the
    mass mismatch.
    """
    require_valid(a, b)
    mass_fail, _, _ = _mass_verdict(a, b)
    if mass_fail is not None:
        return mass_fail

    a_finite, b_finite = a.finitely_supported, b.finitely_supported
    if a_finite and b_finite:
        return _scan_partial_sums(a, b, max(a.support_size(), b.support_size())) or Verdict.holds()
    if a_finite and not b_finite:
        # equal masses but b never attains its mass at finite k: a violation
        # is guaranteed by k = |support(a)|
        v = _scan_partial_sums(a, b, a.support_size())
        assert v is not None
        return v
    if not a_finite and b_finite:
        return _scan_partial_sums(a, b, b.support_size()) or Verdict.holds()

    ga, gb = _tail_geometry(a), _tail_geometry(b)
    k0 = max(ga.settled_k, gb.settled_k, 1)
    v = _scan_partial_sums(a, b, k0)
    if v is not None:
        return v
    return _tail_dominance(ga, gb, k0, total_mass(a))


# ---------------------------------------------------------------------------
# hockey-stick majorization

def majorize_hockey_stick(
    a: Ell1Seq, b: Ell1Seq, truncation: int = DEFAULT_TAIL_TRUNCATION
) -> Verdict:
    """Hockey-stick majorization check: a < b.

    Finitely supported pairs are decided exactly: the gap g(t) =
    sum (b_j - t)+ - sum (a_j - t)+ is piecewise linear, so its sign on
    (0, inf) is settled by the union of breakpoints. With geometric tails a
    negative value is still a certain failure (pointwise evaluation is
    exact); absence of one only supports Inconclusive, because breakpoints
    below the truncation level go unexamined.
    """
    require_valid(a, b)
    mass_fail, _, _ = _mass_verdict(a, b)
    if mass_fail is not None:
        return mass_fail

    curve_a = hockey_stick_fn(a, truncation)
    curve_b = hockey_stick_fn(b, truncation)
    exact = a.finitely_supported and b.finitely_supported

    if exact:
        gap = curve_b.fn.sub(curve_a.fn)
        witness = gap.negative_witness()
        if witness is None:
            return Verdict.holds()
        t, value = witness
        return Verdict.fails(kind="hockey_stick", t=t, value=value)

    # tailed case: evaluate the TRUE gap exactly at every candidate breakpoint
    candidates = sorted(
        (set(curve_a.fn.breakpoints) | set(curve_b.fn.breakpoints)) - {Fraction(0)}
    )
    best: Optional[Tuple[Fraction, Fraction]] = None
    for t in candidates:
        g = hockey_stick(b, t) - hockey_stick(a, t)
        if g < 0 and (best is None or g < best[1]):
            best = (t, g)
    if best is not None:
        return Verdict.fails(kind="hockey_stick", t=best[0], value=best[1])
    slack = max(curve_a.remainder_bound, curve_b.remainder_bound)
    return Verdict.inconclusive(gap=slack, kind="tail_region_unchecked",
                                below=max(curve_a.exact_above, curve_b.exact_above))
