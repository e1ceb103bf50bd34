"""Acceptance gate: one test per shipped guarantee, one printed line each.

Every test prints "[criterion N] name: PASS/FAIL" on the live terminal so a
full run reads as a checklist. Tolerances and budgets are pinned here on
purpose; loosening them is a release decision, not a test fix.
"""
import json
import random
import time
from fractions import Fraction
from pathlib import Path

import gmpy2
import pytest

from majorkit._format import canonical_json
from majorkit.catalysis import CatalystSearchConfig, catalyst_search, trump_check
from majorkit.orderings import majorize_hockey_stick, majorize_partial_sums
from majorkit.precision import working_precision
from majorkit.selftest import (
    random_equal_mass_pair,
    random_majorizing_pair,
    random_seq,
    run_selftest,
)
from majorkit.sequences import Ell1Seq, GeometricTail, seq, seq_from_obj, total_mass
from majorkit.series import (
    SequencePair,
    cm_refute_adaptive,
    cm_test,
    mellin_gap_jet,
    mellin_identity_check,
    power_sum,
    stieltjes_identity_check,
)

F = Fraction
DATA = Path(__file__).parent / "data" / "refutations.json"


def announce(capsys, number: int, name: str, ok: bool, detail: str = "") -> None:
    suffix = f"  ({detail})" if detail else ""
    with capsys.disabled():
        print(f"\n[criterion {number}] {name}: {'PASS' if ok else 'FAIL'}{suffix}")


def test_criterion_1_three_way_equivalence(capsys):
    # 10^4 seeded pairs, dims <= 12, half equal-mass by construction; the two
    # exact checks must agree on every single one, and the monotonicity scan
    # must never certify a violation on an equal-mass pair that holds
    started = time.monotonic()
    disagreements = 0
    cm_checked = 0
    cm_false_alarms = 0
    for i in range(10_000):
        rng = random.Random(100_003 + i)
        style = i % 4
        if style == 0:
            pair = random_majorizing_pair(rng, max_dim=12)
        elif style == 1:
            pair = random_equal_mass_pair(rng, max_dim=12)
        else:
            pair = SequencePair(random_seq(rng, max_dim=12), random_seq(rng, max_dim=12))
        partial = majorize_partial_sums(pair.a, pair.b)
        hockey = majorize_hockey_stick(pair.a, pair.b)
        if partial.kind != hockey.kind:
            disagreements += 1
            continue
        if partial.is_holds and total_mass(pair.a) == total_mass(pair.b):
            cm_checked += 1
            if cm_test(pair).verdict.is_fails:
                cm_false_alarms += 1
    elapsed = time.monotonic() - started
    ok = disagreements == 0 and cm_false_alarms == 0 and elapsed <= 300
    announce(capsys, 1, "three-way equivalence", ok,
             f"10000 pairs, {cm_checked} monotonicity scans, {elapsed:.0f}s")
    assert disagreements == 0
    assert cm_false_alarms == 0
    assert elapsed <= 300


def test_criterion_2_refutation_soundness(capsys):
    data = json.loads(DATA.read_text())
    pairs = data["pairs"]
    assert len(pairs) == 50
    margin = F(1, 100)
    refuted = 0
    for rec in pairs:
        pair = SequencePair(seq_from_obj(rec["a"]), seq_from_obj(rec["b"]))
        # re-verify the curation claims exactly before trusting the record
        hockey = majorize_hockey_stick(pair.a, pair.b)
        assert hockey.is_fails
        assert -hockey.witness["value"] >= margin
        report = cm_refute_adaptive(pair)
        assert report.verdict.is_fails, rec
        w = report.verdict.witness
        # stay inside the advertised budget
        assert w["n"] <= 64
        assert report.precision_bits <= 512
        with working_precision(64):
            assert gmpy2.mpfr(w["s"]) <= 10_000
        # independent recheck at doubled precision
        p2 = report.precision_bits * 2
        with working_precision(p2):
            d = mellin_gap_jet(pair, gmpy2.mpfr(w["s"], p2), w["n"], p2).derivative(w["n"])
            signed = d if w["n"] % 2 == 0 else -d
            assert signed < 0
        refuted += 1
    ok = refuted == 50
    announce(capsys, 2, "refutation soundness", ok, f"{refuted}/50 witnesses rechecked")
    assert ok


def test_criterion_3_integral_identity_oracles(capsys):
    started = time.monotonic()
    p = 256
    bound = gmpy2.mpfr(2) ** -(p - 20)
    s_values = (F(3, 2), F(2), F(5), F(10), F(50))
    worst = gmpy2.mpfr(0)
    for i in range(100):
        rng = random.Random(200_003 + i)
        a = random_seq(rng, max_dim=10)
        pair = random_equal_mass_pair(rng, max_dim=10)
        for sv in s_values:
            r1 = stieltjes_identity_check(a, sv, precision_bits=p)
            r2 = mellin_identity_check(pair, sv, precision_bits=p)
            worst = max(worst, r1.relative, r2.relative)
    elapsed = time.monotonic() - started
    ok = worst <= bound and elapsed <= 60
    announce(capsys, 3, "integral-identity oracles", ok,
             f"max relative residual 2^{float(gmpy2.log2(worst)) if worst else -9999:.0f}, {elapsed:.1f}s")
    assert worst <= bound
    assert elapsed <= 60


def _fd_derivatives(value_at, s0, h):
    vm2, vm1, v0, vp1, vp2 = (value_at(s0 + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (vp1 - vm1) / (2 * h)
    d2 = (vp1 - 2 * v0 + vm1) / h ** 2
    d3 = (vp2 - 2 * vp1 + 2 * vm1 - vm2) / (2 * h ** 3)
    return d1, d2, d3


def _rel_err(got, ref):
    scale = max(abs(got), abs(ref))
    if scale < gmpy2.mpfr(2) ** -40:
        return gmpy2.mpfr(0)  # both numerically zero at this h
    return abs(got - ref) / scale


def test_criterion_4_jet_correctness(capsys):
    p = 256
    tol = gmpy2.mpfr("1e-6")
    s_choices = (F(3, 2), F(2), F(3), F(5), F(10))
    worst = gmpy2.mpfr(0)
    checked = 0
    for i in range(100):
        rng = random.Random(300_007 + i)
        s0_frac = rng.choice(s_choices)
        with working_precision(p):
            h = gmpy2.mpfr(2) ** -40
            s0 = gmpy2.mpfr(s0_frac)
            if i % 2 == 0:
                target = random_seq(rng, max_dim=8, tail_chance=0.4)
                jet = power_sum(target, s0, 3, p)
                fd = _fd_derivatives(lambda s: power_sum(target, s, 0, p).value, s0, h)
            else:
                pair = random_equal_mass_pair(rng, max_dim=8)
                jet = mellin_gap_jet(pair, s0, 3, p)
                fd = _fd_derivatives(lambda s: mellin_gap_jet(pair, s, 0, p).value, s0, h)
            for order in (1, 2, 3):
                worst = max(worst, _rel_err(jet.derivative(order), fd[order - 1]))
                checked += 1
    ok = worst <= tol
    announce(capsys, 4, "jet correctness", ok,
             f"{checked} derivative comparisons, worst rel err {float(worst):.2e}")
    assert ok


def test_criterion_5_catalysis_fixture(capsys):
    x = seq(0.4, 0.4, 0.1, 0.1)
    y = seq(0.5, 0.25, 0.25)
    plain = majorize_partial_sums(x, y)
    catalyzed = trump_check(x, y, seq(0.6, 0.4))
    cfg = CatalystSearchConfig(dim_min=2, dim_max=2, grid_step=F(1, 20))
    found = catalyst_search(x, y, cfg)
    rerun = catalyst_search(x, y, cfg)
    ok = (plain.is_fails
          and catalyzed.is_holds
          and found.verdict.is_holds
          and trump_check(x, y, found.catalyst).is_holds
          and canonical_json(found.to_report()) == canonical_json(rerun.to_report()))
    announce(capsys, 5, "catalysis fixture", ok,
             f"catalyst {tuple(str(c) for c in found.catalyst.prefix)}")
    assert plain.is_fails
    assert catalyzed.is_holds
    assert found.verdict.is_holds
    assert trump_check(x, y, found.catalyst).is_holds
    assert canonical_json(found.to_report()) == canonical_json(rerun.to_report())


def test_criterion_6_geometric_tail_consistency(capsys):
    p = 256
    n_terms = 10_000
    worst_slack = None
    for i in range(20):
        rng = random.Random(400_009 + i)
        prefix = tuple(F(rng.randint(1, 16), 32) for _ in range(rng.randint(0, 4)))
        tail = GeometricTail(F(rng.randint(1, 20), 40), F(rng.randint(2, 15), 16))
        target = Ell1Seq(prefix, tail)

        # mass: exact closed form vs truncation plus certified remainder
        mass_exact = total_mass(target)
        partial = sum(prefix, F(0)) + tail.first * (1 - tail.ratio ** n_terms) / (1 - tail.ratio)
        remainder = tail.first * tail.ratio ** n_terms / (1 - tail.ratio)
        assert mass_exact - partial == remainder  # telescopes exactly

        # power sum at two exponents: closed form vs 10^4-term float truncation
        for sv in (F(2), F(7, 2)):
            closed = power_sum(target, sv, 0, p).value
            with working_precision(p):
                s0 = gmpy2.mpfr(sv)
                acc = gmpy2.mpfr(0)
                for e in prefix:
                    acc += gmpy2.mpfr(e) ** s0
                term = gmpy2.mpfr(tail.first)
                ratio = gmpy2.mpfr(tail.ratio)
                for _ in range(n_terms):
                    acc += term ** s0
                    term *= ratio
                bound = term ** s0 / (1 - ratio ** s0)
                slack = bound + abs(closed) * gmpy2.mpfr(2) ** -(p - 60)
                gap = abs(closed - acc)
                assert gap <= slack, (i, sv, float(gap), float(slack))
                margin = float(gap / slack) if slack > 0 else 0.0
            if worst_slack is None or margin > worst_slack:
                worst_slack = margin
    announce(capsys, 6, "geometric-tail consistency", True,
             f"20 sequences, worst gap at {worst_slack:.3f} of the certified bound")


def test_criterion_7_determinism_across_parallelism(capsys):
    self_reports = {
        width: canonical_json(run_selftest(seed=3, cases=4, parallelism=width))
        for width in (1, 2, 4)
    }
    selftest_ok = len(set(self_reports.values())) == 1

    x = seq(0.4, 0.4, 0.1, 0.1)
    y = seq(0.5, 0.25, 0.25)
    search_reports = []
    for width in (1, 2):
        cfg = CatalystSearchConfig(dim_min=2, dim_max=3, grid_step=F(1, 30),
                                   parallelism=width)
        search_reports.append(canonical_json(catalyst_search(x, y, cfg).to_report()))
    repeat = canonical_json(catalyst_search(
        x, y, CatalystSearchConfig(dim_min=2, dim_max=3, grid_step=F(1, 30),
                                   parallelism=2)).to_report())
    search_ok = search_reports[0] == search_reports[1] == repeat

    ok = selftest_ok and search_ok
    announce(capsys, 7, "determinism across parallelism", ok,
             "selftest widths 1/2/4, search widths 1/2")
    assert selftest_ok
    assert search_ok
