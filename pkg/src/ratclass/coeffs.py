"""Taylor coefficients c_i^n of (z + 1/(z+2))^n and the identities around them.

Closed forms are checked against the brute-force series expansion from
:mod:`ratclass.exactmath`. The coefficient index is always absolute: c_closed(n, i)
is the coefficient of z^i, whichever of the three formulas is used internally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .exactmath import TruncatedSeries, binom_general, binom_int, q_str, series_mul, series_pow, series_reciprocal

__all__ = [
    "CoeffTable",
    "base_series",
    "c_oracle",
    "c_oracle_sweep",
    "c_closed",
    "T_closed",
    "S_head",
    "fthton_check",
    "ident_check",
    "vander1",
    "vander2",
    "vander_checks",
    "cnnlo_value",
    "cnnlo_check",
    "R_series",
    "R_partial",
    "AsymptoticsReport",
    "asymptotics_report",
]


@dataclass(frozen=True)
class CoeffTable:
    n: int
    values: dict = field(compare=True)
    source: str = "oracle"

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def rows(self):
        for i in sorted(self.values):
            yield self.n, i, self.values[i]


def base_series(order: int) -> TruncatedSeries:
    """z + 1/(2+z) truncated at z^order."""
    recip = series_reciprocal(TruncatedSeries([2, 1], order))
    z = TruncatedSeries([0, 1], order)
    return z + recip


def c_oracle(n: int, N: int) -> CoeffTable:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if N < n:
        raise ValueError("truncation order must be at least n")
    s = series_pow(base_series(N), n)
    return CoeffTable(n, dict(enumerate(s.coeffs)), "oracle")


def c_oracle_sweep(n_max: int, extra: int) -> Iterator[CoeffTable]:
    """Oracle tables for n = 0..n_max, each truncated at n + extra.

    One multiplication per n at the largest order; truncating a correct series
    of higher order is exact.
    """
    order = n_max + extra
    base = base_series(order)
    power = TruncatedSeries.constant(1, order)
    for n in range(n_max + 1):
        if n:
            power = series_mul(power, base)
        yield CoeffTable(n, dict(enumerate(power.coeffs[: n + extra + 1])), "oracle")


@lru_cache(maxsize=64)
def _central_row(n: int) -> tuple[int, ...]:
    """C(2n, 0..2n)."""
    row = [1]
    for b in range(2 * n):
        row.append(row[-1] * (2 * n - b) // (b + 1))
    return tuple(row)


def _c2n(n: int, j: int) -> int:
    if j < 0 or j > 2 * n:
        return 0
    return _central_row(n)[j]


def _head_numerator(n: int, l: int) -> int:
    """2^{2n-l} c_{n-l}^n for 0 <= l <= n."""
    total = 0
    comb_a_l = 1  # C(a, l) starting at a = l
    for a in range(l, n + 1):
        total += comb_a_l * _c2n(n, n + a)
        comb_a_l = comb_a_l * (a + 1) // (a + 1 - l)
    return total


def c_closed(n: int, i: int) -> Fraction:
    if n < 0 or i < 0:
        raise ValueError("n and i must be nonnegative")
    if i == n:
        return Fraction(1, 2) + Fraction(_c2n(n, n), 2 ** (2 * n + 1))
    if i < n:
        l = n - i
        return Fraction(_head_numerator(n, l), 2 ** (2 * n - l))
    l = i - n - 1
    total = sum(
        (-1 if a & 1 else 1) * math.comb(l, a) * _c2n(n, n - 1 - a) for a in range(l + 1)
    )
    if l & 1:
        total = -total
    return Fraction(total, 2 ** (2 * n + l + 1))


def T_closed(n: int) -> Fraction:
    """Tail sum over i > n, in the finite binomial form."""
    if n < 1:
        raise ValueError("n must be positive")
    total = sum(_c2n(n, b) * 3**b for b in range(n))
    return Fraction(total, 4**n * 3**n)


def S_head(n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be positive")
    # c_l^n for l < n over the common denominator 4^n
    return Fraction(sum(_head_numerator(n, n - l) << (n - l) for l in range(n)), 4**n)


def fthton_check(n: int) -> bool:
    """S_n + c_n^n + T_n == (4/3)^n exactly."""
    return S_head(n) + c_closed(n, n) + T_closed(n) == Fraction(4, 3) ** n


def ident_check(n: int, a: int) -> bool:
    lhs = Fraction(binom_int(2 * n, n + a) * (-1 if a & 1 else 1), 4**n)
    rhs = sum(
        (Fraction(binom_int(n, b) * binom_int(2 * b, b + a) * (-1 if b & 1 else 1), 4**b) for b in range(n + 1)),
        Fraction(0),
    )
    return lhs == rhs


def vander1(b: int, l: int) -> bool:
    """C(2b+l, b+l+1) = sum_{a=0}^{l} C(l, a) C(2b, b+a+1), for l >= 0."""
    if l < 0:
        raise ValueError("vander1 needs l >= 0")
    lhs = binom_general(2 * b + l, b + l + 1)
    rhs = sum((binom_general(l, a) * binom_general(2 * b, b + a + 1) for a in range(l + 1)), Fraction(0))
    return lhs == rhs


def vander2(b: int, l: int) -> bool:
    """C(2b-l, b-l+1) = sum_a C(-l, a-l) C(2b, b-a+1), for l > 0; a runs over l..b+1."""
    if l <= 0:
        raise ValueError("vander2 needs l > 0")
    lhs = binom_general(2 * b - l, b - l + 1)
    rhs = sum((binom_general(-l, a - l) * binom_general(2 * b, b - a + 1) for a in range(l, b + 2)), Fraction(0))
    return lhs == rhs


def vander_checks(b: int, l: int) -> bool:
    """Signed shift: l >= 0 checks vander1(b, l) (and vander2(b, l) when l > 0);
    l < 0 checks vander2(b, -l)."""
    if l < 0:
        return vander2(b, -l)
    ok = vander1(b, l)
    if l > 0:
        ok = ok and vander2(b, l)
    return ok


def cnnlo_value(n: int, l: int) -> Fraction:
    """c_{n+l+1}^n from the single-sum formula valid for every integer l."""
    total = Fraction(0)
    for b in range(n + 1):
        sign = -1 if (b + l + 1) & 1 else 1
        total += Fraction(binom_int(n, b) * binom_int(2 * b + l, b + l + 1) * sign) / Fraction(2) ** (2 * b + l + 1)
    return total


def cnnlo_check(n: int, l: int, table: CoeffTable | None = None) -> bool:
    i = n + l + 1
    if i < 0:
        raise ValueError("need n + l + 1 >= 0")
    if table is None:
        table = c_oracle(n, max(n, i))
    return cnnlo_value(n, l) == table[i]


def R_series(n: int) -> Fraction:
    """R_n = sum_m 3^{-m} prod_{j=1}^{m} (n-j)/(n+1+j) (finite: terms vanish for m >= n).

    Term m equals C(2n, n-1-m) / (3^m C(2n, n-1)); summed over a common
    denominator to stay in integers.
    """
    if n < 1:
        raise ValueError("n must be positive")
    num = sum(_c2n(n, n - 1 - m) * 3 ** (n - 1 - m) for m in range(n))
    return Fraction(num, 3 ** (n - 1) * _c2n(n, n - 1))


def R_partial(n: int, terms: int) -> tuple[Fraction, Fraction]:
    """First ``terms`` terms of R_n and the geometric tail bound (3/2) 3^{-terms}."""
    if n < 1 or terms < 0:
        raise ValueError("need n >= 1 and terms >= 0")
    top = _c2n(n, n - 1)
    partial = Fraction(0)
    for m in range(min(terms, n)):
        partial += Fraction(_c2n(n, n - 1 - m), 3**m * top)
    return partial, Fraction(3, 2) / 3**terms


@dataclass(frozen=True)
class AsymptoticsReport:
    n: int
    cnn_gap_ratio: float
    T_ratio: float
    S_gap_ratio: float
    R_n: Fraction
    R_bound: Fraction = Fraction(3, 2)

    @property
    def R_within_bound(self) -> bool:
        return self.R_n <= self.R_bound

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cnn_gap_ratio": self.cnn_gap_ratio,
            "T_ratio": self.T_ratio,
            "S_gap_ratio": self.S_gap_ratio,
            "R_n": q_str(self.R_n),
            "R_n_float": float(self.R_n),
            "R_bound": q_str(self.R_bound),
            "R_within_bound": self.R_within_bound,
        }


def asymptotics_report(n: int) -> AsymptoticsReport:
    """Ratios that tend to 1; each is formed exactly and converted to float once."""
    if n < 1:
        raise ValueError("n must be positive")
    root = math.sqrt(math.pi * n)
    cnn = c_closed(n, n)
    T = T_closed(n)
    S = S_head(n)
    gap = Fraction(4, 3) ** n - Fraction(1, 2) - S
    return AsymptoticsReport(
        n=n,
        cnn_gap_ratio=float(cnn - Fraction(1, 2)) * 2 * root,
        T_ratio=float(T) * 2 * root,
        S_gap_ratio=float(gap) * root,
        R_n=R_series(n),
    )
