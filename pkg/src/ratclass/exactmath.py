"""Exact scalar and truncated power-series arithmetic.

Rationals are :class:`fractions.Fraction` throughout; every quantity that
enters an identity check stays exact. Floats only appear in asymptotic
reports such as :func:`stirling_ratio`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

__all__ = [
    "Q",
    "to_q",
    "q_str",
    "binom_general",
    "binom_int",
    "TruncatedSeries",
    "series_add",
    "series_mul",
    "series_reciprocal",
    "series_pow",
    "stirling_ratio",
]

Q = Fraction


def to_q(value) -> Fraction:
    """Parse an exact rational from int, Fraction or a string like ``"-3/2"``.

    Floats are refused: they are not exact inputs.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if "." in text or "e" in text.lower():
            raise ValueError(f"rational strings must be decimal-free: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot build an exact rational from {type(value).__name__}")


def q_str(q: Fraction) -> str:
    """Lossless ``"p/q"`` (or ``"p"``) rendering."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def binom_general(x, k: int) -> Fraction:
    """x(x-1)...(x-k+1)/k! for any rational x; zero when k < 0."""
    if k < 0:
        return Fraction(0)
    x = Fraction(x)
    num = Fraction(1)
    for i in range(k):
        num *= x - i
    return num / math.factorial(k)


def binom_int(n: int, k: int) -> int:
    """Integer-upper-index binomial with the same conventions as binom_general.

    Negative ``n`` uses C(n, k) = (-1)^k C(k-n-1, k).
    """
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k) if k <= n else 0
    c = math.comb(k - n - 1, k)
    return -c if k & 1 else c


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_N of a power series known exactly up to z^N."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = tuple(Fraction(c) for c in coeffs)
        if order is not None:
            if order < 0:
                raise ValueError("truncation order must be nonnegative")
            if len(cs) > order + 1:
                cs = cs[: order + 1]
            else:
                # a finite polynomial: higher coefficients are genuinely zero
                cs = cs + (Fraction(0),) * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "TruncatedSeries":
        return cls([c], order)

    def __getitem__(self, i: int) -> Fraction:
        if not 0 <= i <= self.order:
            raise IndexError(f"coefficient {i} is beyond truncation order {self.order}")
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_add(self, other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)

    def __pow__(self, n: int) -> "TruncatedSeries":
        return series_pow(self, n)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def is_unit(self) -> bool:
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def __repr__(self) -> str:
        return f"TruncatedSeries([{', '.join(q_str(c) for c in self.coeffs)}], order={self.order})"


def _check_orders(a: TruncatedSeries, b: TruncatedSeries) -> int:
    if a.order != b.order:
        raise ValueError(f"truncation orders differ: {a.order} vs {b.order}")
    return a.order


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_orders(a, b)
    return TruncatedSeries([x + y for x, y in zip(a.coeffs, b.coeffs)])


def _lift(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    n = _check_orders(a, b)
    # convolve over a common integer denominator; normalizing once per
    # coefficient is much cheaper than Fraction arithmetic in the inner loop
    ia, da = _lift(a.coeffs)
    ib, db = _lift(b.coeffs)
    nz_b = [(j, v) for j, v in enumerate(ib) if v]
    out = [0] * (n + 1)
    for i, x in enumerate(ia):
        if not x:
            continue
        for j, y in nz_b:
            if i + j > n:
                break
            out[i + j] += x * y
    den = da * db
    return TruncatedSeries([Fraction(v, den) for v in out])


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    a0 = a.coeffs[0]
    if a0 == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    n = a.order
    b = [Fraction(0)] * (n + 1)
    b[0] = 1 / a0
    for k in range(1, n + 1):
        s = sum((a.coeffs[i] * b[k - i] for i in range(1, k + 1)), Fraction(0))
        b[k] = -s / a0
    return TruncatedSeries(b)


def series_pow(a: TruncatedSeries, n: int) -> TruncatedSeries:
    """a**n by repeated squaring; exact and truncated at a.order."""
    if n < 0:
        raise ValueError("only nonnegative powers are supported")
    result = TruncatedSeries.constant(1, a.order)
    base = a
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def stirling_ratio(n: int) -> float:
    """2^{-2n} C(2n, n) sqrt(pi n), which tends to 1."""
    if n < 1:
        raise ValueError("n must be positive")
    central = Fraction(math.comb(2 * n, n), 4**n)
    return float(central) * math.sqrt(math.pi * n)
