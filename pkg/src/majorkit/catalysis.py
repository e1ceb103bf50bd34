"""Catalysis (trumping) checks and catalyst search.

x is trumped by y when some catalyst c with all-positive entries makes
tensor(x, c) majorized by tensor(y, c). The search enumerates probability
simplex grid points in a canonical order (dimension ascending, then
lexicographically descending partitions), so reports are reproducible under
any parallelism width.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .orderings import majorize_partial_sums
from .sequences import (
    Ell1Seq,
    Verdict,
    as_fraction,
    require_valid,
    seq_to_obj,
    tensor,
    total_mass,
)
from .series import CMConfig, SequencePair, cm_test, gap_positivity, gap_slope_at_one, mass_balance


def trump_check(x: Ell1Seq, y: Ell1Seq, c: Ell1Seq) -> Verdict:
    """Majorization of tensor(x, c) by tensor(y, c).

    The catalyst must be finitely supported with all entries positive;
    zero entries are rejected (they only pad the products with zeros but
    violate the all-positive-components contract).
    """
    require_valid(x, y, c)
    if not c.finitely_supported:
        raise ValueError("catalysts must be finitely supported")
    if not c.prefix or any(e <= 0 for e in c.prefix):
        raise ValueError("catalysts need all-positive entries")
    return majorize_partial_sums(tensor(x, c), tensor(y, c))


# ---------------------------------------------------------------------------
# canonical candidate enumeration

def _partitions_desc(total: int, parts: int, cap: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of `total` into exactly `parts` positive integers, each
    <= cap, non-increasing, in lexicographically descending order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = total - (parts - 1)
    if cap is not None:
        hi = min(hi, cap)
    lo = -(-total // parts)  # ceil: first part is at least the average
    for head in range(hi, lo - 1, -1):
        for rest in _partitions_desc(total - head, parts - 1, head):
            yield (head,) + rest


@dataclass(frozen=True)
class CatalystSearchConfig:
    """Search space: catalysts of dimension dim_min..dim_max whose entries
    are multiples of grid_step on the mass-1 simplex, sorted non-increasing,
    strictly positive. refine_steps halves the step around the most nearly
    working candidate when the coarse pass fails."""
    dim_min: int = 2
    dim_max: int = 2
    grid_step: Fraction = Fraction(1, 20)
    refine_steps: int = 0
    parallelism: int = 1
    budget: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, "grid_step", as_fraction(self.grid_step))
        if self.dim_min < 2 or self.dim_max < self.dim_min:
            raise ValueError("need 2 <= dim_min <= dim_max")
        step_inv = Fraction(1) / self.grid_step
        if step_inv.denominator != 1 or step_inv < 2:
            raise ValueError("grid_step must be 1/M for an integer M >= 2")
        if self.parallelism < 1 or self.budget < 0:
            raise ValueError("parallelism >= 1 and budget >= 0 required")

    @property
    def resolution(self) -> int:
        return int(Fraction(1) / self.grid_step)


def _candidates(config: CatalystSearchConfig) -> Iterator[Tuple[Fraction, ...]]:
    m = config.resolution
    for dim in range(config.dim_min, config.dim_max + 1):
        if dim > m:
            continue  # cannot split M units into more than M positive parts
        for part in _partitions_desc(m, dim):
            yield tuple(Fraction(p, m) for p in part)


@dataclass(frozen=True)
class TrumpReport:
    """Search outcome. Holds carries the catalyst (first success in the
    canonical order) plus recheckable majorization data; candidates_tried is
    the canonical index of the success, or the number examined before giving
    up."""
    verdict: Verdict
    catalyst: Optional[Ell1Seq]
    candidates_tried: int
    details: dict = field(default_factory=dict)

    def to_report(self) -> dict:
        out = {
            "verdict": self.verdict.to_report(),
            "catalyst": seq_to_obj(self.catalyst) if self.catalyst is not None else None,
            "candidates_tried": self.candidates_tried,
        }
        if self.details:
            out["details"] = dict(self.details)
        return out


def _holds_for(args) -> bool:
    x, y, cand = args
    c = Ell1Seq(cand)
    return majorize_partial_sums(tensor(x, c), tensor(y, c)).is_holds


def _first_violation_excess(x: Ell1Seq, y: Ell1Seq, cand: Tuple[Fraction, ...]) -> Fraction:
    c = Ell1Seq(cand)
    v = majorize_partial_sums(tensor(x, c), tensor(y, c))
    if v.is_holds:
        return Fraction(0)
    w = v.witness or {}
    if w.get("kind") == "partial_sum" and "lhs" in w:
        return w["lhs"] - w["rhs"]
    return Fraction(1)  # mass mismatch cannot happen here; be defensive


def _majorization_slack(x: Ell1Seq, y: Ell1Seq, c: Ell1Seq) -> dict:
    xc, yc = tensor(x, c), tensor(y, c)
    sa = sb = Fraction(0)
    best = None
    n = max(xc.support_size(), yc.support_size())
    ita, itb = xc.entries_desc(), yc.entries_desc()
    for k in range(1, n + 1):
        sa += next(ita, Fraction(0))
        sb += next(itb, Fraction(0))
        slack = sb - sa
        if best is None or slack < best[1]:
            best = (k, slack)
    return {"min_slack_k": best[0], "min_slack": best[1]} if best else {}


def _scan_candidates(
    x: Ell1Seq,
    y: Ell1Seq,
    cands: List[Tuple[Fraction, ...]],
    parallelism: int,
) -> Optional[int]:
    """Index of the first working candidate in list order, or None."""
    if parallelism <= 1 or len(cands) < 64:
        for i, cand in enumerate(cands):
            if _holds_for((x, y, cand)):
                return i
        return None
    with concurrent.futures.ProcessPoolExecutor(max_workers=parallelism) as pool:
        args = ((x, y, cand) for cand in cands)
        chunk = max(16, len(cands) // (parallelism * 8))
        for i, ok in enumerate(pool.map(_holds_for, args, chunksize=chunk)):
            if ok:
                return i
    return None


def catalyst_search(x: Ell1Seq, y: Ell1Seq,
                    config: CatalystSearchConfig = CatalystSearchConfig()) -> TrumpReport:
    """Deterministic catalyst search.

    Equal masses are required for any catalyst to exist (tensoring scales
    both masses by the catalyst mass), so unequal masses fail immediately.
    If x is already majorized by y the identity catalyst is returned. The
    canonical enumeration order makes the returned catalyst independent of
    parallelism.
    """
    require_valid(x, y)
    if total_mass(x) != total_mass(y):
        return TrumpReport(
            verdict=Verdict.fails(kind="mass_mismatch", mass_x=total_mass(x), mass_y=total_mass(y)),
            catalyst=None,
            candidates_tried=0,
        )
    plain = majorize_partial_sums(x, y)
    if plain.is_holds:
        identity = Ell1Seq((Fraction(1),))
        return TrumpReport(
            verdict=Verdict.holds(),
            catalyst=identity,
            candidates_tried=1,
            details={"identity_catalyst": True},
        )

    cands = list(_candidates(config))[: config.budget]
    tried = len(cands)
    found = _scan_candidates(x, y, cands, config.parallelism)
    if found is not None:
        c = Ell1Seq(cands[found])
        return TrumpReport(
            verdict=Verdict.holds(),
            catalyst=c,
            candidates_tried=found + 1,
            details=_majorization_slack(x, y, c),
        )

    # optional local refinement around the most nearly working candidate
    step = config.grid_step
    budget_left = max(config.budget - tried, 0)
    center = None
    if config.refine_steps and cands:
        excesses = [_first_violation_excess(x, y, cand) for cand in cands]
        center = cands[min(range(len(cands)), key=lambda i: (excesses[i], i))]
    for _ in range(config.refine_steps):
        if center is None or budget_left <= 0:
            break
        step = step / 2
        window = 2 * step
        m = int(Fraction(1) / step)
        local: List[Tuple[Fraction, ...]] = []
        for part in _partitions_desc(m, len(center)):
            cand = tuple(Fraction(p, m) for p in part)
            if all(abs(ci - wi) <= window for ci, wi in zip(cand, center)):
                local.append(cand)
        local = local[:budget_left]
        budget_left -= len(local)
        tried += len(local)
        found = _scan_candidates(x, y, local, config.parallelism)
        if found is not None:
            c = Ell1Seq(local[found])
            return TrumpReport(
                verdict=Verdict.holds(),
                catalyst=c,
                candidates_tried=tried - len(local) + found + 1,
                details=_majorization_slack(x, y, c),
            )
        excesses = [_first_violation_excess(x, y, cand) for cand in local]
        if excesses:
            center = local[min(range(len(local)), key=lambda i: (excesses[i], i))]

    return TrumpReport(
        verdict=Verdict.inconclusive(kind="catalyst_not_found", gap=None),
        catalyst=None,
        candidates_tried=tried,
    )


# ---------------------------------------------------------------------------
# conjecture probing

def conjecture_probe(
    pair: SequencePair,
    search_config: CatalystSearchConfig = CatalystSearchConfig(),
    cm_config: CMConfig = CMConfig(),
    log_path: Optional[str] = None,
) -> dict:
    """One evidence record for the conjectured characterization of trumping
    by the gap series: a simple zero at s = 1 plus positivity on (1, inf).

    Pipeline: (1) grid positivity of the gap; (2) catalyst search (skipped
    when positivity certifiably fails, since the conjectured hypothesis is
    already unmet); (3) for a found catalyst c, a complete-monotonicity scan
    of the product pair (a (x) c, b (x) c), whose gap factors as the pair's
    gap times the catalyst's own power sum.

    Flags: "hypothesis-unmet" when positivity fails; "counterexample-
    candidate" when positivity holds but the (incomplete) search exhausts
    its budget; "consistent" otherwise. A candidate is never a refutation:
    the search space is finite-dimensional grids only.
    """
    balanced = mass_balance(pair)
    record: dict = {
        "pair": {"a": seq_to_obj(pair.a), "b": seq_to_obj(pair.b)},
        "mass_balanced": balanced.is_holds,
        "slope_at_one": gap_slope_at_one(pair, cm_config.precision_bits),
    }
    positivity = gap_positivity(pair, cm_config)
    record["positivity"] = positivity.to_report()

    if positivity.is_fails or not balanced.is_holds:
        # the conjectured hypothesis (zero gap at s=1, positive beyond) is
        # already unmet: no point searching
        record["catalyst"] = None
        record["candidates_tried"] = 0
        record["product_cm"] = None
        record["flag"] = "hypothesis-unmet"
    else:
        search = catalyst_search(pair.a, pair.b, search_config)
        record["catalyst"] = seq_to_obj(search.catalyst) if search.catalyst else None
        record["candidates_tried"] = search.candidates_tried
        if search.verdict.is_holds:
            product = SequencePair(tensor(pair.a, search.catalyst),
                                   tensor(pair.b, search.catalyst))
            product_report = cm_test(product, cm_config)
            record["product_cm"] = product_report.to_report()
            record["flag"] = "consistent"
        else:
            record["product_cm"] = None
            record["flag"] = (
                "counterexample-candidate" if positivity.is_holds else "consistent"
            )

    if log_path is not None:
        from ._format import canonical_json

        with open(log_path, "a", encoding="utf-8") as fh:
            fh.write(canonical_json(record))
    return record
