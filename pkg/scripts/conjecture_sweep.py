#!/usr/bin/env python3
"""Sweep seeded random pairs through the conjecture probe and log evidence.

Each probed pair has exactly equal masses. Three generation styles rotate:
already-majorizing pairs (the probe should find the identity catalyst and a
clean monotonicity scan), flattened pairs (the right side is strictly less
spread out, so positivity fails and the hypothesis is unmet), and free
equal-mass pairs (anything can happen; these are the interesting rows).

Appends one JSON line per probe to --out and prints a flag histogram plus
any counterexample candidates, which deserve a human look: positivity held
on the grid but the bounded catalyst search came back empty.
"""
import argparse
import collections
import json
import sys
from fractions import Fraction
from pathlib import Path
from random import Random

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from majorkit.catalysis import CatalystSearchConfig, conjecture_probe
from majorkit.selftest import random_equal_mass_pair, random_majorizing_pair, random_seq
from majorkit.sequences import Ell1Seq, total_mass
from majorkit.series import CMConfig, SequencePair


def flattened_pair(rng: Random) -> SequencePair:
    a = random_seq(rng, max_dim=6)
    entries = list(a.prefix)
    lam = Fraction(rng.choice((1, 2)), 4)
    mean = sum(entries, Fraction(0)) / len(entries)
    b = Ell1Seq(tuple((1 - lam) * e + lam * mean for e in entries))
    return SequencePair(a, b)


def make_pair(rng: Random, style: int) -> SequencePair:
    if style == 0:
        return random_majorizing_pair(rng, max_dim=6)
    if style == 1:
        return flattened_pair(rng)
    return random_equal_mass_pair(rng, max_dim=6)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--probes", type=int, default=40)
    parser.add_argument("--budget", type=int, default=400)
    parser.add_argument("--grid-step", type=Fraction, default=Fraction(1, 10))
    parser.add_argument("--out", default="conjecture_sweep.jsonl")
    args = parser.parse_args()

    search_cfg = CatalystSearchConfig(dim_min=2, dim_max=3,
                                      grid_step=args.grid_step, budget=args.budget)
    cm_cfg = CMConfig(order_max=12, grid_points=32)

    flags = collections.Counter()
    candidates = []
    for i in range(args.probes):
        rng = Random(args.seed * 1_000_003 + i)
        pair = make_pair(rng, i % 3)
        assert total_mass(pair.a) == total_mass(pair.b)
        record = conjecture_probe(pair, search_cfg, cm_cfg, log_path=args.out)
        flags[record["flag"]] += 1
        if record["flag"] == "counterexample-candidate":
            candidates.append(record["pair"])
        if record["product_cm"] is not None:
            # a certified violation after a successful search would refute
            # the conjecture outright; stop and shout
            if record["product_cm"]["verdict"]["verdict"] == "fails":
                print("REFUTATION? certified violation on a catalyzed pair:")
                print(json.dumps(record["pair"]))
                return 1

    print(f"{args.probes} probes appended to {args.out}")
    for flag in ("consistent", "hypothesis-unmet", "counterexample-candidate"):
        print(f"  {flag:26s} {flags.get(flag, 0)}")
    if candidates:
        print("candidates needing a wider search:")
        for pair in candidates:
            print("  " + json.dumps(pair))
    return 0


if __name__ == "__main__":
    sys.exit(main())
