"""Summable nonnegative sequences with explicit tail models.

A sequence is a finite prefix plus a tail that is either identically zero or
geometric (first * ratio^k, 0 < ratio < 1). Entries are stored as exact
`fractions.Fraction` values: every order-theoretic decision downstream runs
in exact rational arithmetic, so verdicts cannot flip with precision.

Floats passed to constructors are read through `repr`, i.e. 0.4 means 2/5,
matching the decimal-text semantics of the JSON schema. Pass strings or
Fractions to control the value exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union


def as_fraction(x) -> Fraction:
    """Exact rational from int/str/Fraction; floats via their shortest decimal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a sequence entry")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact rational")


# ---------------------------------------------------------------------------
# verdicts

@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of a decision procedure.

    kind is one of "holds", "fails", "inconclusive". A failing verdict always
    carries a witness payload concrete enough to recheck independently; an
    inconclusive one carries the margin that precision could not separate.
    """
    kind: str
    witness: Optional[dict] = None
    gap: Optional[Fraction] = None

    @staticmethod
    def holds() -> "Verdict":
        return Verdict("holds")

    @staticmethod
    def fails(**witness) -> "Verdict":
        return Verdict("fails", witness=witness)

    @staticmethod
    def inconclusive(gap=None, **witness) -> "Verdict":
        return Verdict("inconclusive", witness=witness or None, gap=gap)

    @property
    def is_holds(self) -> bool:
        return self.kind == "holds"

    @property
    def is_fails(self) -> bool:
        return self.kind == "fails"

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == "inconclusive"

    def to_report(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.witness:
            out["witness"] = dict(self.witness)
        if self.gap is not None:
            out["gap"] = self.gap
        return out


# ---------------------------------------------------------------------------
# tail models

@dataclass(frozen=True)
class ZeroTail:
    kind: str = field(default="zero", init=False)

    def mass(self) -> Fraction:
        return Fraction(0)


@dataclass(frozen=True)
class GeometricTail:
    """Entries first * ratio^k for k = 0, 1, 2, ... (all positive)."""
    first: Fraction
    ratio: Fraction
    kind: str = field(default="geometric", init=False)

    def __post_init__(self):
        object.__setattr__(self, "first", as_fraction(self.first))
        object.__setattr__(self, "ratio", as_fraction(self.ratio))

    def mass(self) -> Fraction:
        if not (0 < self.ratio < 1):
            raise ValueError("geometric tail mass needs 0 < ratio < 1")
        return self.first / (1 - self.ratio)

    def terms(self) -> Iterator[Fraction]:
        cur = self.first
        while True:
            yield cur
            cur *= self.ratio

    def term(self, k: int) -> Fraction:
        return self.first * self.ratio**k


Tail = Union[ZeroTail, GeometricTail]


# ---------------------------------------------------------------------------
# sequences

@dataclass(frozen=True)
class Ell1Seq:
    """Nonnegative summable sequence: finite prefix + tail model.

    Canonical form strips trailing zero prefix entries when the tail is zero;
    the stripped and unstripped forms denote the same sequence.
    """
    prefix: tuple
    tail: Tail = field(default_factory=ZeroTail)

    def __post_init__(self):
        entries = tuple(as_fraction(x) for x in self.prefix)
        if isinstance(self.tail, ZeroTail):
            n = len(entries)
            while n > 0 and entries[n - 1] == 0:
                n -= 1
            entries = entries[:n]
        object.__setattr__(self, "prefix", entries)

    # -- structure ----------------------------------------------------------

    @property
    def finitely_supported(self) -> bool:
        return isinstance(self.tail, ZeroTail)

    def positive_prefix_desc(self) -> tuple:
        return tuple(sorted((x for x in self.prefix if x > 0), reverse=True))

    def support_size(self) -> int:
        """Number of positive entries; only defined for zero tails."""
        if not self.finitely_supported:
            raise ValueError("geometric tails have infinite support")
        return sum(1 for x in self.prefix if x > 0)

    def entries_desc(self) -> Iterator[Fraction]:
        """All positive entries in non-increasing order (infinite for tails).

        Ties between a prefix entry and a tail term yield the prefix entry
        first; any consistent tie rule gives the same value stream.
        """
        pref = self.positive_prefix_desc()
        if isinstance(self.tail, ZeroTail):
            yield from pref
            return
        i = 0
        for t in self.tail.terms():
            while i < len(pref) and pref[i] >= t:
                yield pref[i]
                i += 1
            yield t

    def scaled(self, factor) -> "Ell1Seq":
        f = as_fraction(factor)
        if f <= 0:
            raise ValueError("scale factor must be positive")
        if isinstance(self.tail, GeometricTail):
            tail: Tail = GeometricTail(self.tail.first * f, self.tail.ratio)
        else:
            tail = ZeroTail()
        return Ell1Seq(tuple(x * f for x in self.prefix), tail)

    def normalized(self) -> "Ell1Seq":
        m = total_mass(self)
        if m == 0:
            raise ValueError("cannot normalize a zero-mass sequence")
        return self.scaled(Fraction(1) / m)


def seq(*entries, tail: Optional[Tail] = None) -> Ell1Seq:
    """Convenience constructor: seq(0.5, 0.25, '0.25')."""
    return Ell1Seq(tuple(entries), tail if tail is not None else ZeroTail())


# ---------------------------------------------------------------------------
# core operations

def validate(s: Ell1Seq) -> Verdict:
    """Check the representation invariants; the verdict encodes any failure."""
    for i, x in enumerate(s.prefix):
        if x < 0:
            return Verdict.fails(kind="negative_entry", index=i, value=x)
    if isinstance(s.tail, GeometricTail):
        if s.tail.first <= 0:
            return Verdict.fails(kind="tail_first_not_positive", value=s.tail.first)
        if not (0 < s.tail.ratio < 1):
            return Verdict.fails(kind="tail_ratio_out_of_range", value=s.tail.ratio)
    return Verdict.holds()


def require_valid(*seqs: Ell1Seq) -> None:
    for s in seqs:
        v = validate(s)
        if not v.is_holds:
            raise ValueError(f"invalid sequence: {v.witness}")


def total_mass(s: Ell1Seq) -> Fraction:
    """Exact sum of all entries."""
    require_valid(s)
    return sum(s.prefix, Fraction(0)) + s.tail.mass()


def k_largest(s: Ell1Seq, k: int) -> tuple:
    """The k largest entries in non-increasing order, zero-padded if needed."""
    if k < 1:
        raise ValueError("k must be >= 1")
    require_valid(s)
    out = list(itertools.islice(s.entries_desc(), k))
    out.extend([Fraction(0)] * (k - len(out)))
    return tuple(out)


def tensor(x: Ell1Seq, c: Ell1Seq) -> Ell1Seq:
    """All pairwise products, sorted non-increasing. Finite supports only."""
    if not (x.finitely_supported and c.finitely_supported):
        raise ValueError("tensor product is only representable for zero-tail operands")
    require_valid(x, c)
    products = sorted((a * b for a in x.prefix for b in c.prefix), reverse=True)
    return Ell1Seq(tuple(products), ZeroTail())


# ---------------------------------------------------------------------------
# JSON schema

class SeqParseError(ValueError):
    """Raised on malformed sequence objects; .location names the bad field."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def _parse_number(value, location: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str, Fraction)):
        raise SeqParseError(location, f"expected a number or decimal string, got {type(value).__name__}")
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SeqParseError(location, f"not a valid number: {value!r} ({exc})") from None


def seq_from_obj(obj, where: str = "$") -> Ell1Seq:
    """Build a sequence from the JSON schema:

        {"prefix": [...], "tail": {"kind": "zero"}}
        {"prefix": [...], "tail": {"kind": "geometric", "first": ..., "ratio": ...}}

    Numbers may be decimal strings; they parse exactly. A missing "tail"
    defaults to the zero tail. Raises SeqParseError with the offending field.
    """
    if not isinstance(obj, dict):
        raise SeqParseError(where, "expected an object with a 'prefix' field")
    if "prefix" not in obj:
        raise SeqParseError(f"{where}.prefix", "missing required field")
    raw_prefix = obj["prefix"]
    if not isinstance(raw_prefix, (list, tuple)):
        raise SeqParseError(f"{where}.prefix", "expected an array")
    entries = tuple(
        _parse_number(v, f"{where}.prefix[{i}]") for i, v in enumerate(raw_prefix)
    )
    tail_obj = obj.get("tail", {"kind": "zero"})
    if not isinstance(tail_obj, dict) or "kind" not in tail_obj:
        raise SeqParseError(f"{where}.tail", "expected an object with a 'kind' field")
    kind = tail_obj["kind"]
    if kind == "zero":
        tail: Tail = ZeroTail()
    elif kind == "geometric":
        for fld in ("first", "ratio"):
            if fld not in tail_obj:
                raise SeqParseError(f"{where}.tail.{fld}", "missing required field")
        tail = GeometricTail(
            _parse_number(tail_obj["first"], f"{where}.tail.first"),
            _parse_number(tail_obj["ratio"], f"{where}.tail.ratio"),
        )
    else:
        raise SeqParseError(f"{where}.tail.kind", f"unknown tail kind {kind!r}")
    s = Ell1Seq(entries, tail)
    v = validate(s)
    if not v.is_holds:
        w = dict(v.witness or {})
        loc = f"{where}.prefix[{w['index']}]" if w.get("kind") == "negative_entry" else f"{where}.tail"
        raise SeqParseError(loc, f"invalid sequence: {w}")
    return s


def seq_to_obj(s: Ell1Seq) -> dict:
    from ._format import fraction_to_str

    out = {"prefix": [fraction_to_str(x) for x in s.prefix]}
    if isinstance(s.tail, GeometricTail):
        out["tail"] = {
            "kind": "geometric",
            "first": fraction_to_str(s.tail.first),
            "ratio": fraction_to_str(s.tail.ratio),
        }
    else:
        out["tail"] = {"kind": "zero"}
    return out
