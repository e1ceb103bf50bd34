#!/usr/bin/env python3
"""Build the curated refutation set used by the acceptance tests.

Each record is an equal-mass pair (a, b) with all entries in (0, 1] where b
does NOT majorize a, and the failure is quantitatively comfortable: the
hockey-stick gap dips at least `--margin` below zero, verified by the exact
breakpoint check. Two construction styles alternate:

  flatten   b = (1-lam) a + lam * uniform  (mass preserved, strictly less
            spread out than a whenever a is not uniform)
  random    independent a and b, b rescaled to a's mass

Deterministic for a fixed seed; rerunning rewrites the same bytes.
"""
import argparse
import sys
from fractions import Fraction
from pathlib import Path
from random import Random

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from majorkit._format import canonical_json
from majorkit.orderings import majorize_hockey_stick, majorize_partial_sums
from majorkit.sequences import Ell1Seq, seq_to_obj, total_mass

DENOMS = (8, 10, 16, 20, 25, 32, 40, 64, 100)


def random_entries(rng: Random, dim: int) -> list:
    d = rng.choice(DENOMS)
    return [Fraction(rng.randint(1, d), d) for _ in range(dim)]


def flatten_pair(rng: Random, dim: int):
    entries = random_entries(rng, dim)
    if len(set(entries)) == 1:
        return None  # uniform flattens to itself
    lam = Fraction(rng.choice((1, 2, 3)), 4)
    mean = sum(entries, Fraction(0)) / dim
    flattened = [(1 - lam) * e + lam * mean for e in entries]
    return Ell1Seq(tuple(entries)), Ell1Seq(tuple(flattened))


def random_pair(rng: Random, dim: int):
    a = Ell1Seq(tuple(random_entries(rng, dim)))
    b_entries = random_entries(rng, rng.randint(2, dim + 2))
    scale = total_mass(a) / sum(b_entries, Fraction(0))
    b_entries = [e * scale for e in b_entries]
    if max(b_entries) > 1:
        return None  # keep every entry inside (0, 1]
    return a, Ell1Seq(tuple(b_entries))


def build(seed: int, count: int, margin: Fraction) -> dict:
    rng = Random(seed)
    pairs = []
    seen = set()
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > 100_000:
            raise RuntimeError("generator stalled; loosen the margin or reseed")
        dim = rng.randint(2, 8)
        made = flatten_pair(rng, dim) if attempts % 2 else random_pair(rng, dim)
        if made is None:
            continue
        a, b = made
        key = (a.prefix, b.prefix)
        if key in seen:
            continue
        if total_mass(a) != total_mass(b):
            continue
        hockey = majorize_hockey_stick(a, b)
        if not hockey.is_fails or hockey.witness.get("kind") != "hockey_stick":
            continue
        depth = -hockey.witness["value"]
        if depth < margin:
            continue
        assert majorize_partial_sums(a, b).is_fails
        seen.add(key)
        pairs.append({
            "a": seq_to_obj(a),
            "b": seq_to_obj(b),
            "margin": depth,
            "witness_t": hockey.witness["t"],
        })
    return {
        "seed": seed,
        "count": count,
        "margin_threshold": margin,
        "pairs": pairs,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--count", type=int, default=50)
    parser.add_argument("--margin", type=Fraction, default=Fraction(1, 100))
    parser.add_argument("--out", default=str(
        Path(__file__).resolve().parents[1] / "tests" / "data" / "refutations.json"))
    args = parser.parse_args()

    data = build(args.seed, args.count, args.margin)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(canonical_json(data), encoding="utf-8")
    depths = [Fraction(p["margin"]) if not isinstance(p["margin"], Fraction) else p["margin"]
              for p in data["pairs"]]
    print(f"wrote {len(data['pairs'])} pairs to {out}"
          f" (min margin {float(min(depths)):.4f}, max {float(max(depths)):.4f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
