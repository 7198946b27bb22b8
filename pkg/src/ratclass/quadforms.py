"""Symmetric rational matrices, exact positive-definiteness and the window W_delta.

W_delta is the set of symmetric positive definite C with ||C|| < 1/delta and
||C^{-1}|| < 1/delta, i.e. every eigenvalue strictly inside (delta, 1/delta).
All tests here are exact; nothing calls a floating-point eigensolver.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .exactmath import q_str, to_q

__all__ = [
    "SymRationalMatrix",
    "leading_minors",
    "is_positive_definite",
    "in_W_delta",
    "check_delta",
    "eigen_window",
    "quadform_eval",
]


@dataclass(frozen=True)
class SymRationalMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(to_q(v) for v in row) for row in self.entries)
        d = len(rows)
        if d == 0:
            raise ValueError("matrix dimension must be at least 1")
        if any(len(row) != d for row in rows):
            raise ValueError("matrix must be square")
        for i in range(d):
            for j in range(i + 1, d):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SymRationalMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def diag(cls, *values) -> "SymRationalMatrix":
        d = len(values)
        return cls(tuple(tuple(values[i] if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def identity(cls, d: int) -> "SymRationalMatrix":
        return cls.diag(*([1] * d))

    @classmethod
    def scalar(cls, c) -> "SymRationalMatrix":
        return cls(((c,),))

    @classmethod
    def from_json(cls, data) -> "SymRationalMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_rows(data)

    def to_json(self) -> list[list[str]]:
        return [[q_str(v) for v in row] for row in self.entries]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def shift(self, t) -> "SymRationalMatrix":
        """self - t*I"""
        t = Fraction(t)
        return SymRationalMatrix(
            tuple(tuple(v - t if i == j else v for j, v in enumerate(row)) for i, row in enumerate(self.entries))
        )

    def __neg__(self) -> "SymRationalMatrix":
        return SymRationalMatrix(tuple(tuple(-v for v in row) for row in self.entries))

    def perturbed(self, k: int, l: int, h) -> "SymRationalMatrix":
        """Copy with h added to entry (k, l) and, off the diagonal, to (l, k)."""
        h = Fraction(h)
        rows = [list(row) for row in self.entries]
        rows[k][l] += h
        if k != l:
            rows[l][k] += h
        return SymRationalMatrix.from_rows(rows)

    def as_float(self):
        import numpy as np

        return np.array([[float(v) for v in row] for row in self.entries])

    def __repr__(self) -> str:
        return f"SymRationalMatrix({self.to_json()})"


def leading_minors(M: SymRationalMatrix) -> list[Fraction]:
    """Leading principal minors via fraction-free (Bareiss) elimination.

    Stops early after the first zero minor, since later ones would need pivoting.
    """
    d = M.dim
    den = reduce(math.lcm, (v.denominator for row in M.entries for v in row), 1)
    a = [[int(v * den) for v in row] for row in M.entries]
    minors: list[Fraction] = []
    prev = 1
    for k in range(d):
        pivot = a[k][k]
        minors.append(Fraction(pivot, den ** (k + 1)))
        if pivot == 0:
            break
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return minors


def is_positive_definite(M: SymRationalMatrix) -> bool:
    """Sylvester criterion: all d leading principal minors strictly positive."""
    minors = leading_minors(M)
    return len(minors) == M.dim and all(m > 0 for m in minors)


def check_delta(delta) -> Fraction:
    delta = to_q(delta) if not isinstance(delta, Fraction) else delta
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return delta


def in_W_delta(C: SymRationalMatrix, delta) -> bool:
    delta = check_delta(delta)
    return is_positive_definite(C.shift(delta)) and is_positive_definite((-C).shift(-1 / delta))


def _gershgorin(C: SymRationalMatrix) -> tuple[Fraction, Fraction]:
    lo = hi = None
    for i, row in enumerate(C.entries):
        radius = sum(abs(v) for j, v in enumerate(row) if j != i)
        a, b = row[i] - radius, row[i] + radius
        lo = a if lo is None else min(lo, a)
        hi = b if hi is None else max(hi, b)
    return lo, hi


def eigen_window(C: SymRationalMatrix, tol) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Exact brackets [lo, hi] of width <= tol around lambda_min and lambda_max."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not is_positive_definite(C):
        raise ValueError("eigen_window needs a positive definite matrix")
    g_lo, g_hi = _gershgorin(C)

    # lambda_min: C - tI is PD exactly when t < lambda_min
    lo, hi = g_lo - 1, g_hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if is_positive_definite(C.shift(mid)):
            lo = mid
        else:
            hi = mid
    lam_min = (lo, hi)

    # lambda_max: tI - C is PD exactly when t > lambda_max
    lo, hi = g_lo, g_hi + 1
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if is_positive_definite((-C).shift(-mid)):
            hi = mid
        else:
            lo = mid
    return lam_min, (lo, hi)


def quadform_eval(C: SymRationalMatrix, x: Sequence) -> Fraction:
    if len(x) != C.dim:
        raise ValueError(f"vector of length {len(x)} does not match dimension {C.dim}")
    xs = [Fraction(v) for v in x]
    return sum(
        (C.entries[i][j] * xs[i] * xs[j] for i in range(C.dim) for j in range(C.dim)),
        Fraction(0),
    )
