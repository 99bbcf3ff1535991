"""Exact rational arithmetic, truncated power series, Bernoulli polynomials,
and Newton-identity conversions between Chern characters and Chern classes.

Rationals are plain :class:`fractions.Fraction` values: always reduced,
positive denominator, exact arithmetic.  They serialize as ``p/q`` (or ``p``
when the denominator is 1), which is what ``str`` already produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

Rational = Fraction

#: Largest Bernoulli index computed by default.  Exceeding it is an error,
#: never a silent truncation.
BERNOULLI_CAP = 32

#: Default truncation degree for power series built by convenience helpers.
SERIES_CAP = 16


class DegreeCapError(ValueError):
    """A degree/index exceeded its configured cap."""


class CapMismatchError(ValueError):
    """Two truncated series with different caps were combined."""


class NonInvertibleError(ZeroDivisionError):
    """Multiplicative inverse of a series with zero constant term."""


@lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """m-th Bernoulli number with the convention B_1 = -1/2."""
    if m < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if m > BERNOULLI_CAP:
        raise DegreeCapError(f"Bernoulli index {m} exceeds cap {BERNOULLI_CAP}")
    if m == 0:
        return Fraction(1)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    acc = Fraction(0)
    for j in range(m):
        acc += comb(m + 1, j) * bernoulli_number(j)
    return -acc / (m + 1)


def bernoulli_polynomial(m: int, x: Rational) -> Fraction:
    """Exact value of the Bernoulli polynomial B_m(x), with B_1(x) = x - 1/2.

    This convention makes B_{m+1}(2)/(m+1)! the kappa-class coefficient in
    the log-cotangent Chern character (13/12 at m=1, 1/2 at m=2).
    """
    if m < 0:
        raise ValueError("Bernoulli degree must be non-negative")
    if m > BERNOULLI_CAP:
        raise DegreeCapError(f"Bernoulli degree {m} exceeds cap {BERNOULLI_CAP}")
    x = Fraction(x)
    return sum(
        (comb(m, k) * bernoulli_number(k) * x ** (m - k) for k in range(m + 1)),
        Fraction(0),
    )


@dataclass(frozen=True)
class TruncatedSeries:
    """Univariate power series over Fraction, truncated at a fixed degree.

    ``coeffs[i]`` is the coefficient of H^i; ``len(coeffs) == cap + 1``.
    Operations never read beyond the cap.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def cap(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_list(cls, values: Sequence, cap: int) -> "TruncatedSeries":
        vals = [Fraction(v) for v in values[: cap + 1]]
        vals += [Fraction(0)] * (cap + 1 - len(vals))
        return cls(tuple(vals))

    @classmethod
    def one(cls, cap: int) -> "TruncatedSeries":
        return cls.from_list([1], cap)

    @classmethod
    def monomial(cls, coeff, degree: int, cap: int) -> "TruncatedSeries":
        if degree > cap:
            raise DegreeCapError(f"monomial degree {degree} exceeds cap {cap}")
        vals = [Fraction(0)] * (cap + 1)
        vals[degree] = Fraction(coeff)
        return cls(tuple(vals))

    def _check(self, other: "TruncatedSeries"):
        if self.cap != other.cap:
            raise CapMismatchError(f"cap mismatch: {self.cap} != {other.cap}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            n = self.cap
            out = [Fraction(0)] * (n + 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
            return TruncatedSeries(tuple(out))
        return TruncatedSeries(tuple(Fraction(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        """Series inverse; requires a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise NonInvertibleError("constant term is zero")
        n = self.cap
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / c0
        for k in range(1, n + 1):
            acc = Fraction(0)
            for i in range(1, k + 1):
                acc += self.coeffs[i] * out[k - i]
            out[k] = -acc / c0
        return TruncatedSeries(tuple(out))

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = TruncatedSeries.one(self.cap)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def coefficient(self, k: int) -> Fraction:
        if k > self.cap:
            raise DegreeCapError(f"coefficient {k} beyond cap {self.cap}")
        return self.coeffs[k]

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*H")
            else:
                parts.append(f"{c}*H^{i}")
        return " + ".join(parts) if parts else "0"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_inv(a: TruncatedSeries) -> TruncatedSeries:
    return a.inverse()


def geometric(coeff, cap: int) -> TruncatedSeries:
    """1/(1 - coeff*H) up to the cap."""
    return TruncatedSeries.from_list(
        [Fraction(coeff) ** k for k in range(cap + 1)], cap
    )


def line_bundle_series(degrees: Sequence[int], cap: int) -> TruncatedSeries:
    """Total Chern series prod_i (1 + d_i H) of a sum of line bundles."""
    out = TruncatedSeries.one(cap)
    for d in degrees:
        out = out * TruncatedSeries.from_list([1, d], cap)
    return out


@dataclass(frozen=True)
class ChernCharVector:
    """Chern characters ch_1..ch_k as abstract ring elements.

    Entry m must be homogeneous of degree m in whatever graded ring the
    caller works in; the conversion routines only assume ``+``, ``*`` and
    multiplication by Fraction.
    """

    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, m: int):
        # 1-indexed by degree, matching ch_m notation
        if not 1 <= m <= len(self.entries):
            raise DegreeCapError(f"ch_{m} not populated")
        return self.entries[m - 1]


def chern_from_ch(ch, k: int) -> list:
    """Chern classes c_1..c_k from Chern characters via Newton's identities.

    ``ch`` is a ChernCharVector or a plain sequence of ch_1..ch_k.  Entries
    live in any commutative Q-algebra.  For k=3 this reproduces the closed
    form c_3 = ch_1^3/6 - ch_1 ch_2 + 2 ch_3.
    """
    entries = ch.entries if isinstance(ch, ChernCharVector) else tuple(ch)
    if len(entries) < k:
        raise DegreeCapError(f"need ch_1..ch_{k}, got {len(entries)} entries")
    # power sums p_m = m! ch_m
    p = [None] + [Fraction(factorial(m)) * entries[m - 1] for m in range(1, k + 1)]
    e: list = [None]
    for m in range(1, k + 1):
        acc = p[m]
        sign = -1
        for i in range(1, m):
            acc = acc + Fraction(sign) * (e[i] * p[m - i])
            sign = -sign
        e.append(Fraction((-1) ** (m - 1), m) * acc)
    return e[1:]


def ch_from_chern(c, k: int) -> list:
    """Inverse of :func:`chern_from_ch`: ch_1..ch_k from c_1..c_k."""
    cs = tuple(c)
    if len(cs) < k:
        raise DegreeCapError(f"need c_1..c_{k}, got {len(cs)} entries")
    e = [None] + list(cs[:k])
    p: list = [None]
    for m in range(1, k + 1):
        acc = Fraction((-1) ** (m - 1) * m) * e[m]
        sign = 1
        for i in range(1, m):
            acc = acc + Fraction(sign) * (e[i] * p[m - i])
            sign = -sign
        p.append(acc)
    return [Fraction(1, factorial(m)) * p[m] for m in range(1, k + 1)]
