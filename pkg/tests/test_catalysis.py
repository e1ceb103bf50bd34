import json
from fractions import Fraction

import pytest

from majorkit._format import canonical_json
from majorkit.catalysis import (
    CatalystSearchConfig,
    catalyst_search,
    conjecture_probe,
    trump_check,
    _partitions_desc,
)
from majorkit.orderings import majorize_partial_sums
from majorkit.sequences import Ell1Seq, GeometricTail, seq
from majorkit.series import SequencePair

F = Fraction

# the running example: not majorized plainly, trumped by a 2-entry catalyst
X = seq(0.4, 0.4, 0.1, 0.1)
Y = seq(0.5, 0.25, 0.25)


class TestTrumpCheck:
    def test_plain_comparison_fails(self):
        v = majorize_partial_sums(X, Y)
        assert v.is_fails
        assert v.witness["k"] == 2
        assert v.witness["lhs"] == F(4, 5) and v.witness["rhs"] == F(3, 4)

    def test_catalyst_makes_it_hold(self):
        assert trump_check(X, Y, seq(0.6, 0.4)).is_holds

    def test_identity_catalyst_reduces_to_plain(self):
        one = seq(1)
        assert trump_check(X, Y, one).kind == majorize_partial_sums(X, Y).kind
        assert trump_check(seq(0.5, 0.5), seq(1), one).is_holds

    def test_catalyst_scaling_is_irrelevant(self):
        c = seq(0.6, 0.4)
        assert trump_check(X, Y, c.scaled(F(7, 3))).is_holds

    def test_rejects_tailed_catalyst(self):
        g = Ell1Seq((), GeometricTail(F(1, 2), F(1, 2)))
        with pytest.raises(ValueError):
            trump_check(X, Y, g)

    def test_rejects_zero_entries(self):
        with pytest.raises(ValueError):
            trump_check(X, Y, Ell1Seq((F(1, 2), F(0), F(1, 2))))


class TestPartitions:
    def test_descending_order(self):
        parts = list(_partitions_desc(20, 2))
        assert parts[0] == (19, 1)
        assert parts[-1] == (10, 10)
        assert len(parts) == 10

    def test_three_parts(self):
        assert list(_partitions_desc(5, 3)) == [(3, 1, 1), (2, 2, 1)]

    def test_each_partition_sums_and_sorts(self):
        for p in _partitions_desc(12, 4):
            assert sum(p) == 12
            assert all(a >= b for a, b in zip(p, p[1:]))
            assert p[-1] >= 1


class TestSearch:
    def test_finds_first_catalyst_in_canonical_order(self):
        rep = catalyst_search(X, Y, CatalystSearchConfig(grid_step=F(1, 20)))
        assert rep.verdict.is_holds
        assert rep.catalyst.prefix == (F(3, 5), F(2, 5))
        assert rep.candidates_tried == 8
        # the pair sits on the boundary: the worst partial-sum slack is zero
        assert rep.details["min_slack"] == 0
        assert rep.details["min_slack_k"] == 4

    def test_found_catalyst_rechecks(self):
        rep = catalyst_search(X, Y, CatalystSearchConfig(grid_step=F(1, 20)))
        assert trump_check(X, Y, rep.catalyst).is_holds

    def test_identity_shortcut(self):
        rep = catalyst_search(seq(0.5, 0.5), seq(1))
        assert rep.verdict.is_holds
        assert rep.catalyst.prefix == (F(1),)
        assert rep.candidates_tried == 1
        assert rep.details == {"identity_catalyst": True}

    def test_unequal_masses_fail_without_searching(self):
        rep = catalyst_search(seq(0.5), seq(1))
        assert rep.verdict.is_fails
        assert rep.verdict.witness["kind"] == "mass_mismatch"
        assert rep.candidates_tried == 0 and rep.catalyst is None

    def test_zero_budget_is_inconclusive(self):
        rep = catalyst_search(X, Y, CatalystSearchConfig(budget=0))
        assert rep.verdict.is_inconclusive
        assert rep.verdict.witness["kind"] == "catalyst_not_found"
        assert rep.candidates_tried == 0

    def test_refinement_recovers_from_coarse_grid(self):
        # step 1/2 only offers (1/2,1/2), which does not work; halving twice
        # reaches (5/8,3/8), which does
        rep = catalyst_search(X, Y, CatalystSearchConfig(grid_step=F(1, 2), refine_steps=3))
        assert rep.verdict.is_holds
        assert rep.catalyst.prefix == (F(5, 8), F(3, 8))
        assert rep.candidates_tried == 6

    def test_refinement_respects_budget(self):
        rep = catalyst_search(X, Y, CatalystSearchConfig(grid_step=F(1, 2),
                                                         refine_steps=5, budget=2))
        assert rep.candidates_tried <= 2

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CatalystSearchConfig(dim_min=1)
        with pytest.raises(ValueError):
            CatalystSearchConfig(grid_step=F(2, 3))
        with pytest.raises(ValueError):
            CatalystSearchConfig(parallelism=0)


class TestDeterminism:
    def test_reports_identical_across_parallelism(self):
        # enough candidates (90) to engage the worker pool at width 2
        reports = []
        for width in (1, 2):
            cfg = CatalystSearchConfig(dim_min=2, dim_max=3, grid_step=F(1, 30),
                                       parallelism=width)
            reports.append(canonical_json(catalyst_search(X, Y, cfg).to_report()))
        assert reports[0] == reports[1]
        assert '"candidates_tried":12' in reports[0]


class TestConjectureProbe:
    def test_consistent_record(self):
        rec = conjecture_probe(SequencePair(X, Y),
                               CatalystSearchConfig(grid_step=F(1, 20)))
        assert rec["flag"] == "consistent"
        assert rec["mass_balanced"] is True
        assert rec["candidates_tried"] == 8
        assert rec["catalyst"]["prefix"] == ["0.6", "0.4"]
        assert rec["positivity"]["verdict"] == "holds"
        assert rec["slope_at_one"] > 0
        assert rec["product_cm"]["verdict"]["verdict"] == "holds"

    def test_hypothesis_unmet_by_negative_gap(self):
        # masses agree but the gap dips negative near s=1, so the conjectured
        # hypothesis fails and no search is attempted
        rec = conjecture_probe(SequencePair(seq(0.51, 0.49), seq(0.7, 0.2, 0.1)))
        assert rec["flag"] == "hypothesis-unmet"
        assert rec["positivity"]["verdict"] == "fails"
        assert rec["positivity"]["witness"]["kind"] == "gap_negative"
        assert rec["slope_at_one"] < 0
        assert rec["candidates_tried"] == 0 and rec["catalyst"] is None

    def test_hypothesis_unmet_by_mass_mismatch(self):
        rec = conjecture_probe(SequencePair(seq(0.5), seq(1)))
        assert rec["flag"] == "hypothesis-unmet"
        assert rec["mass_balanced"] is False
        assert rec["candidates_tried"] == 0

    def test_counterexample_candidate_on_exhausted_budget(self):
        rec = conjecture_probe(SequencePair(X, Y), CatalystSearchConfig(budget=3))
        assert rec["flag"] == "counterexample-candidate"
        assert rec["candidates_tried"] == 3
        assert rec["catalyst"] is None and rec["product_cm"] is None

    def test_log_appends_one_json_line_per_probe(self, tmp_path):
        path = tmp_path / "probes.jsonl"
        conjecture_probe(SequencePair(X, Y), CatalystSearchConfig(budget=3),
                         log_path=str(path))
        conjecture_probe(SequencePair(X, Y), CatalystSearchConfig(budget=3),
                         log_path=str(path))
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0] == lines[1]
        parsed = json.loads(lines[0])
        assert parsed["flag"] == "counterexample-candidate"
