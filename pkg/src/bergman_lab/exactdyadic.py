"""Exact arithmetic for the shrinking-family verifier.

Quantities have the form F + c1*S + c2*S^2 with F, c1, c2 rational and
S = 2^(-2^(j/3)) the family shrink at step j. For j divisible by 3, S is an
exact dyadic rational; otherwise its exponent is irrational and comparisons
are decided by bracketing S in [2^-ceil(e), 2^-floor(e)] where e = 2^(j/3).
floor/ceil reduce to exact integer comparisons (m <= 2^(j/3) iff m^3 <= 2^j),
so every verdict is exact; an undecidable bracket raises instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


class UndecidableComparisonError(ArithmeticError):
    """The bracket does not separate the two sides."""


@lru_cache(maxsize=64)
def _exponent_bounds(j: int) -> tuple[int, int]:
    """floor and ceil of e = 2^(j/3) via integer cube comparisons."""
    m = max(1, int(round(2.0 ** (j / 3.0))))
    while (m + 1) ** 3 <= 2**j:
        m += 1
    while m**3 > 2**j:
        m -= 1
    lo = m
    hi = m if m**3 == 2**j else m + 1
    return lo, hi


@lru_cache(maxsize=64)
def _shrink_bracket(j: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(S_lo, S_hi, S_lo^2, S_hi^2)."""
    lo_e, hi_e = _exponent_bounds(j)
    s_lo, s_hi = Fraction(1, 2**hi_e), Fraction(1, 2**lo_e)
    return s_lo, s_hi, s_lo * s_lo, s_hi * s_hi


@dataclass(frozen=True)
class DyadicShrink:
    """F + c1*S + c2*S^2 with S = 2^(-2^(j/3))."""

    j: int
    frac: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    @staticmethod
    def of(j: int, value) -> "DyadicShrink":
        return DyadicShrink(j, Fraction(value))

    @staticmethod
    def shrink(j: int) -> "DyadicShrink":
        return DyadicShrink(j, c1=Fraction(1))

    # -- ring operations ----------------------------------------------------
    def _coerce(self, other) -> "DyadicShrink":
        if isinstance(other, DyadicShrink):
            if other.j != self.j:
                raise ValueError("mixing shrink indices")
            return other
        return DyadicShrink(self.j, Fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return DyadicShrink(self.j, self.frac + o.frac, self.c1 + o.c1, self.c2 + o.c2)

    __radd__ = __add__

    def __neg__(self):
        return DyadicShrink(self.j, -self.frac, -self.c1, -self.c2)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        deg3 = self.c1 * o.c2 + self.c2 * o.c1
        deg4 = self.c2 * o.c2
        if deg3 != 0 or deg4 != 0:
            raise ValueError("product exceeds degree 2 in the shrink")
        return DyadicShrink(
            self.j,
            self.frac * o.frac,
            self.frac * o.c1 + self.c1 * o.frac,
            self.frac * o.c2 + self.c1 * o.c1 + self.c2 * o.frac,
        )

    __rmul__ = __mul__

    def square(self) -> "DyadicShrink":
        return self * self

    # -- comparisons ----------------------------------------------------------
    def interval(self) -> tuple[Fraction, Fraction]:
        if not self.c1 and not self.c2:
            return self.frac, self.frac
        s_lo, s_hi, s2_lo, s2_hi = _shrink_bracket(self.j)
        lo = hi = self.frac
        if self.c1:
            a, b = self.c1 * s_lo, self.c1 * s_hi
            lo, hi = (lo + a, hi + b) if a <= b else (lo + b, hi + a)
        if self.c2:
            a, b = self.c2 * s2_lo, self.c2 * s2_hi
            lo, hi = (lo + a, hi + b) if a <= b else (lo + b, hi + a)
        return lo, hi

    def sign(self) -> int:
        neg = (self.frac < 0) + (self.c1 < 0) + (self.c2 < 0)
        pos = (self.frac > 0) + (self.c1 > 0) + (self.c2 > 0)
        if pos == 0 and neg == 0:
            return 0
        if neg == 0:
            return 1
        if pos == 0:
            return -1
        lo, hi = self.interval()
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == 0 and hi == 0:
            return 0
        raise UndecidableComparisonError(f"cannot separate {self} from zero")

    def _cmp(self, other) -> int:
        return (self - self._coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def equals(self, other) -> bool:
        return self._cmp(other) == 0

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __float__(self) -> float:
        s = 2.0 ** (-(2.0 ** (self.j / 3.0)))
        return float(self.frac) + float(self.c1) * s + float(self.c2) * s * s


def exact_min(values):
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    if best is None:
        raise ValueError("empty minimum")
    return best


def exact_max(values):
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    if best is None:
        raise ValueError("empty maximum")
    return best
