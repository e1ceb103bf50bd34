"""Truncated Taylor-series (jet) arithmetic for high-order differentiation.

A jet stores c_k = f^(k)(s0)/k! for k = 0..N. Ring operations follow the
truncated power-series rules; division requires a nonzero constant term.
All coefficient arithmetic happens in whichever gmpy2 context is active, so
callers choose the precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import gmpy2

from .precision import to_mpfr


@dataclass(frozen=True)
class TaylorJet:
    center: object  # mpfr
    coeffs: Tuple[object, ...]  # mpfr, length order+1

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, k: int):
        """f^(k)(center) = k! * c_k, at the coefficient's own precision."""
        if not 0 <= k <= self.order:
            raise ValueError(f"derivative order {k} outside jet order {self.order}")
        c = self.coeffs[k]
        with gmpy2.context(precision=getattr(c, "precision", 53)):
            return gmpy2.fac(k) * c

    # -- constructors --------------------------------------------------------

    @staticmethod
    def variable(center, order: int) -> "TaylorJet":
        c0 = to_mpfr(center)
        coeffs = [c0] + [gmpy2.mpfr(0)] * order
        if order >= 1:
            coeffs[1] = gmpy2.mpfr(1)
        return TaylorJet(c0, tuple(coeffs))

    @staticmethod
    def constant(v, center, order: int) -> "TaylorJet":
        coeffs = [to_mpfr(v)] + [gmpy2.mpfr(0)] * order
        return TaylorJet(to_mpfr(center), tuple(coeffs))

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "TaylorJet") -> None:
        if self.order != other.order or self.center != other.center:
            raise ValueError("jet arithmetic needs matching center and order")

    def __add__(self, other: "TaylorJet") -> "TaylorJet":
        self._check(other)
        return TaylorJet(self.center, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TaylorJet") -> "TaylorJet":
        self._check(other)
        return TaylorJet(self.center, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TaylorJet":
        return TaylorJet(self.center, tuple(-x for x in self.coeffs))

    def scale(self, factor) -> "TaylorJet":
        f = to_mpfr(factor)
        return TaylorJet(self.center, tuple(f * x for x in self.coeffs))

    def __mul__(self, other: "TaylorJet") -> "TaylorJet":
        self._check(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = gmpy2.mpfr(0)
            for j in range(k + 1):
                acc += a[j] * b[k - j]
            out.append(acc)
        return TaylorJet(self.center, tuple(out))

    def recip(self) -> "TaylorJet":
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("jet reciprocal needs a nonzero constant term")
        n = self.order
        u = self.coeffs
        inv0 = 1 / u[0]
        out = [inv0]
        for k in range(1, n + 1):
            acc = gmpy2.mpfr(0)
            for j in range(1, k + 1):
                acc += u[j] * out[k - j]
            out.append(-inv0 * acc)
        return TaylorJet(self.center, tuple(out))

    def __truediv__(self, other: "TaylorJet") -> "TaylorJet":
        self._check(other)
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("jet division needs a nonzero constant term")
        n = self.order
        num, den = self.coeffs, other.coeffs
        inv0 = 1 / den[0]
        out = [num[0] * inv0]
        for k in range(1, n + 1):
            acc = num[k]
            for j in range(1, k + 1):
                acc -= den[j] * out[k - j]
            out.append(acc * inv0)
        return TaylorJet(self.center, tuple(out))

    def exp(self) -> "TaylorJet":
        n = self.order
        u = self.coeffs
        out = [gmpy2.exp(u[0])]
        for k in range(1, n + 1):
            acc = gmpy2.mpfr(0)
            for j in range(1, k + 1):
                acc += j * u[j] * out[k - j]
            out.append(acc / k)
        return TaylorJet(self.center, tuple(out))
