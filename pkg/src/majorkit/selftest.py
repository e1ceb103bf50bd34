"""Seeded property suites runnable from the CLI.

Each suite draws its cases from a deterministic RNG, so a fixed seed and
case count reproduce the identical case list, failure list, and report
bytes. The suites mirror the library's contract invariants; pytest wraps
them too.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, List, Optional

import gmpy2

from .catalysis import CatalystSearchConfig, catalyst_search, trump_check
from .orderings import (
    counting_function,
    hockey_stick,
    hockey_stick_fn,
    majorize_hockey_stick,
    majorize_partial_sums,
)
from .precision import working_precision
from .sequences import Ell1Seq, GeometricTail, ZeroTail, k_largest, tensor, total_mass
from .series import (
    CMConfig,
    SequencePair,
    cm_test,
    gap_jet,
    mellin_gap_jet,
    mellin_identity_check,
    power_sum,
    stieltjes_identity_check,
)

_DENOMS = (8, 10, 16, 20, 25, 32, 40, 64, 100)


def random_entry(rng: random.Random, denoms=_DENOMS) -> Fraction:
    d = rng.choice(denoms)
    return Fraction(rng.randint(1, 2 * d), 2 * d)


def random_seq(rng: random.Random, max_dim: int = 8, tail_chance: float = 0.0) -> Ell1Seq:
    dim = rng.randint(1, max_dim)
    prefix = tuple(random_entry(rng) for _ in range(dim))
    if tail_chance and rng.random() < tail_chance:
        first = Fraction(rng.randint(1, 20), 40)
        ratio = Fraction(rng.randint(2, 15), 16)
        return Ell1Seq(prefix, GeometricTail(first, ratio))
    return Ell1Seq(prefix, ZeroTail())


def random_equal_mass_pair(rng: random.Random, max_dim: int = 12) -> SequencePair:
    """Random pair rescaled to share the exact total mass."""
    a = random_seq(rng, max_dim)
    b = random_seq(rng, max_dim)
    ma, mb = total_mass(a), total_mass(b)
    return SequencePair(a, b.scaled(ma / mb))


def random_majorizing_pair(rng: random.Random, max_dim: int = 10) -> SequencePair:
    """a < b by construction: b concentrates a's mass through transfers that
    move mass from smaller entries onto larger ones."""
    a = random_seq(rng, max_dim)
    entries = list(a.prefix)
    for _ in range(rng.randint(1, 3)):
        if len(entries) < 2:
            break
        i, j = rng.sample(range(len(entries)), 2)
        if entries[i] < entries[j]:
            i, j = j, i
        # move a fraction of the smaller entry onto the larger one
        delta = entries[j] * Fraction(rng.randint(0, 4), 4)
        entries[i] += delta
        entries[j] -= delta
    b = Ell1Seq(tuple(entries), ZeroTail())
    return SequencePair(a, b)


class SuiteResult(dict):
    @property
    def ok(self) -> bool:
        return not self["failures"]


def _run_cases(name: str, cases: int, one_case: Callable[[random.Random, int], Optional[str]],
               rng: random.Random) -> SuiteResult:
    failures: List[str] = []
    for i in range(cases):
        msg = one_case(rng, i)
        if msg is not None:
            failures.append(f"case {i}: {msg}")
    return SuiteResult(name=name, cases=cases, failures=failures)


# ---------------------------------------------------------------------------
# suites

def suite_sequences(rng: random.Random, cases: int) -> SuiteResult:
    def one(rng: random.Random, i: int) -> Optional[str]:
        s = random_seq(rng, tail_chance=0.3)
        k = rng.randint(1, 12)
        top = k_largest(s, k)
        if any(x < y for x, y in zip(top, top[1:])):
            return f"k_largest not sorted: {s} -> {top}"
        if s.finitely_supported:
            pool = sorted((x for x in s.prefix if x > 0), reverse=True)
            pool += [Fraction(0)] * (k - len(pool))
            if list(top) != pool[:k]:
                return f"k_largest not the k largest entries: {s} -> {top}"
            shuffled = list(s.prefix)
            rng.shuffle(shuffled)
            if k_largest(Ell1Seq(tuple(shuffled)), k) != top:
                return f"k_largest not permutation-invariant: {s}"
        if s.finitely_supported:
            c = random_seq(rng, max_dim=3)
            if total_mass(tensor(s, c)) != total_mass(s) * total_mass(c):
                return f"tensor mass mismatch: {s} x {c}"
        else:
            # truncated tail mass + closed-form remainder == closed-form total
            tail = s.tail
            m = rng.randint(1, 40)
            partial = sum(tail.first * tail.ratio**j for j in range(m))
            remainder = tail.first * tail.ratio**m / (1 - tail.ratio)
            if partial + remainder != tail.mass():
                return f"geometric mass split failed: {tail}"
        return None

    return _run_cases("sequences", cases, one, rng)


def suite_orders(rng: random.Random, cases: int) -> SuiteResult:
    def one(rng: random.Random, i: int) -> Optional[str]:
        style = i % 3
        if style == 0:
            pair = random_equal_mass_pair(rng)
        elif style == 1:
            pair = random_majorizing_pair(rng)
        else:
            pair = SequencePair(random_seq(rng), random_seq(rng))
        a, b = pair.a, pair.b

        v1 = majorize_partial_sums(a, b)
        v2 = majorize_hockey_stick(a, b)
        if v1.kind != v2.kind:
            return f"characterizations disagree on {a} vs {b}: {v1.kind} != {v2.kind}"
        if style == 1 and not v1.is_holds:
            return f"constructed majorizing pair rejected: {a} vs {b}: {v1}"

        curve = hockey_stick_fn(a)
        for _ in range(3):
            t = random_entry(rng)
            if curve.fn.eval(t) != hockey_stick(a, t):
                return f"hockey curve vs pointwise mismatch at t={t}: {a}"
        step = counting_function(a).step
        t = random_entry(rng)
        if step.integral_above(t) != hockey_stick(a, t):
            return f"integral of counting function != hockey stick at t={t}: {a}"

        if not majorize_partial_sums(a, a).is_holds:
            return f"reflexivity failed: {a}"
        d = rng.randint(1, 6)
        m = total_mass(b)
        if m > 0 and b.finitely_supported and b.support_size() <= d:
            uniform = Ell1Seq((m / d,) * d)
            if not majorize_partial_sums(uniform, b).is_holds:
                return f"uniform sequence must be majorized: {uniform} vs {b}"
        return None

    return _run_cases("orders", cases, one, rng)


def suite_series(rng: random.Random, cases: int) -> SuiteResult:
    s_values = (Fraction(3, 2), Fraction(2), Fraction(5), Fraction(10))

    def one(rng: random.Random, i: int) -> Optional[str]:
        pair = random_majorizing_pair(rng, max_dim=6)
        a, b = pair.a, pair.b
        p = 128
        sv = s_values[i % len(s_values)]

        res = stieltjes_identity_check(a, sv, precision_bits=p)
        bound = gmpy2.mpfr(2) ** (-(p - 20))
        if not res.relative <= bound:
            return f"stieltjes residual {res.relative} > {bound} for {a} at s={sv}"
        res = mellin_identity_check(pair, sv, precision_bits=p)
        if not res.relative <= bound:
            return f"mellin residual {res.relative} > {bound} for {a},{b} at s={sv}"

        report = cm_test(pair, CMConfig(order_max=8, grid_points=16))
        if report.verdict.is_fails:
            return f"cm violation on a majorizing pair {a} vs {b}: {report.verdict}"

        # jets vs central finite differences, orders 1..3
        with working_precision(p):
            h = gmpy2.mpfr(2) ** -25
            s0 = gmpy2.mpfr(2)
            vals = [mellin_gap_jet(pair, s0 + k * h, 0, p).value for k in (-2, -1, 0, 1, 2)]
            jet = mellin_gap_jet(pair, s0, 3, p)
            fd = (
                (vals[3] - vals[1]) / (2 * h),
                (vals[3] - 2 * vals[2] + vals[1]) / h**2,
                (vals[4] - 2 * vals[3] + 2 * vals[1] - vals[0]) / (2 * h**3),
            )
            for order in (1, 2, 3):
                jv = jet.derivative(order)
                ref = fd[order - 1]
                scale = max(abs(jv), abs(ref), gmpy2.mpfr(2) ** -40)
                if not abs(jv - ref) / scale <= gmpy2.mpfr("1e-6"):
                    return f"jet/fd mismatch at order {order}: {jv} vs {ref} ({a},{b})"

        # permutation and zero-padding invariance
        perm = list(a.prefix)
        rng.shuffle(perm)
        padded = Ell1Seq(tuple(perm) + (Fraction(0),) * 2)
        g1 = gap_jet(pair, 2, 2)
        g2 = gap_jet(SequencePair(padded, b), 2, 2)
        if any(x != y for x, y in zip(g1.coeffs, g2.coeffs)):
            return f"gap jet not invariant under permutation/padding: {a}"
        return None

    return _run_cases("series", cases, one, rng)


def suite_trumping(rng: random.Random, cases: int) -> SuiteResult:
    def one(rng: random.Random, i: int) -> Optional[str]:
        pair = random_majorizing_pair(rng, max_dim=5)
        x, y = pair.a, pair.b
        c = Ell1Seq(tuple(random_entry(rng) for _ in range(rng.randint(1, 3))))

        ident = trump_check(x, y, Ell1Seq((Fraction(1),)))
        plain = majorize_partial_sums(x, y)
        if ident.kind != plain.kind:
            return f"identity catalyst changes the verdict: {x} vs {y}"
        if plain.is_holds and not trump_check(x, y, c).is_holds:
            return f"tensoring broke majorization: {x} vs {y} with {c}"
        scaled = c.scaled(Fraction(rng.randint(1, 5), rng.randint(1, 5)))
        if trump_check(x, y, c).kind != trump_check(x, y, scaled).kind:
            return f"catalyst scaling changed the verdict: {c}"
        return None

    return _run_cases("trumping", cases, one, rng)


def suite_determinism(rng: random.Random, cases: int, parallelism: int = 1) -> SuiteResult:
    x = Ell1Seq((Fraction(2, 5), Fraction(2, 5), Fraction(1, 10), Fraction(1, 10)))
    y = Ell1Seq((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
    widths = sorted({2, 3, max(1, parallelism)})

    def one(rng: random.Random, i: int) -> Optional[str]:
        cfg1 = CatalystSearchConfig(grid_step=Fraction(1, 20), parallelism=1)
        cfg2 = CatalystSearchConfig(grid_step=Fraction(1, 20),
                                    parallelism=widths[i % len(widths)])
        r1 = catalyst_search(x, y, cfg1)
        r2 = catalyst_search(x, y, cfg2)
        if r1.to_report() != r2.to_report():
            return f"catalyst search not deterministic across widths: {r1} vs {r2}"
        return None

    return _run_cases("determinism", min(cases, 4), one, rng)


ALL_SUITES = (
    suite_sequences,
    suite_orders,
    suite_series,
    suite_trumping,
    suite_determinism,
)


def run_selftest(seed: int, cases: int, parallelism: int = 1) -> dict:
    """Run every suite at the given seed and case count. Deterministic:
    the report does not depend on the parallelism width (that is one of
    the properties under test)."""
    suites = []
    failures_total = 0
    for index, suite in enumerate(ALL_SUITES):
        # independent stream per suite, stable across processes
        rng = random.Random(seed * 1000003 + index)
        if suite is suite_determinism:
            result = suite(rng, cases, parallelism)
        else:
            result = suite(rng, cases)
        failures_total += len(result["failures"])
        suites.append(dict(result))
    return {
        "seed": seed,
        "cases_per_suite": cases,
        "failures_total": failures_total,
        "suites": suites,
        "ok": failures_total == 0,
    }
