"""Partial fractions for 1/((1-z)^m (1+z)^n), z^{2k}/(1-z^2)^k and z^{2k}/(1+Cz^2)^k.

The last expansion has poles at +-z_C with z_C = i/sqrt(C). Its coefficients
are kept as q * z_C^p with q rational, so every identity and every bound
comparison stays inside the rationals: identities are checked in Q(w) with
w^2 = -1/C, and absolute values are compared after squaring.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath import binom_int, q_str, to_q
from .quadforms import check_delta

__all__ = [
    "PMExpansion",
    "AlphaExpansion",
    "FieldElem",
    "QuadPoleExpansion",
    "QuadExt",
    "decomp_pm",
    "pm_recombine_check",
    "decomp_alphas",
    "alphas_recombine_check",
    "alpha_vs_c_check",
    "decomp_quad_pole",
    "quad_pole_recombine_check",
    "quad_pole_symbolic_check",
    "quad_pole_bound_holds",
    "sqrt_sum_le",
]


@dataclass(frozen=True)
class PMExpansion:
    """a[j-1] multiplies (1-z)^{-j}, b[i-1] multiplies (1+z)^{-i}."""

    m: int
    n: int
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def total(self) -> Fraction:
        return sum(self.a, Fraction(0)) + sum(self.b, Fraction(0))

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "a": [q_str(v) for v in self.a], "b": [q_str(v) for v in self.b]}


def decomp_pm(m: int, n: int) -> PMExpansion:
    """Closed-form coefficients: a_{m-k} = C(n+k-1, k)/2^{n+k}, symmetric for b."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    a = [Fraction(0)] * m
    for k in range(m):
        a[m - k - 1] = Fraction(binom_int(n + k - 1, k), 2 ** (n + k))
    b = [Fraction(0)] * n
    for i in range(n):
        b[n - i - 1] = Fraction(binom_int(m + i - 1, i), 2 ** (m + i))
    return PMExpansion(m, n, tuple(a), tuple(b))


def pm_recombine_check(e: PMExpansion, z) -> bool:
    z = Fraction(z)
    if z in (1, -1):
        raise ValueError("z = +-1 is a pole")
    lhs = 1 / ((1 - z) ** e.m * (1 + z) ** e.n)
    rhs = sum((aj / (1 - z) ** j for j, aj in enumerate(e.a, 1)), Fraction(0))
    rhs += sum((bi / (1 + z) ** i for i, bi in enumerate(e.b, 1)), Fraction(0))
    return lhs == rhs


@dataclass(frozen=True)
class AlphaExpansion:
    """z^{2k}/(1-z^2)^k = (-1)^k + sum_j alphas[j-1] [(1-z)^{-j} + (1+z)^{-j}]."""

    k: int
    alphas: tuple[Fraction, ...]

    @property
    def constant(self) -> int:
        return -1 if self.k & 1 else 1

    def weight(self) -> Fraction:
        """1 + 2 sum |alpha_j|."""
        return 1 + 2 * sum((abs(a) for a in self.alphas), Fraction(0))

    def crude_bound_holds(self) -> bool:
        return self.weight() <= 2**self.k

    def improved_bound_holds(self) -> bool:
        return self.weight() <= 2 * Fraction(4, 3) ** self.k

    def to_json(self) -> dict:
        return {"k": self.k, "constant": self.constant, "alphas": [q_str(a) for a in self.alphas]}


def decomp_alphas(k: int) -> AlphaExpansion:
    """Expand z^{2k} = [(z^2-1)+1]^k and split each (1-z^2)^{j-k} with decomp_pm."""
    if k < 1:
        raise ValueError("k must be positive")
    alphas = [Fraction(0)] * k
    for j in range(k):
        weight = binom_int(k, j) * (-1 if j & 1 else 1)
        pm = decomp_pm(k - j, k - j)
        if pm.a != pm.b:  # z -> -z symmetry
            raise AssertionError(f"asymmetric split for m = n = {k - j}")
        for v, coef in enumerate(pm.a, 1):
            alphas[v - 1] += weight * coef
    return AlphaExpansion(k, tuple(alphas))


def alphas_recombine_check(e: AlphaExpansion, z) -> bool:
    z = Fraction(z)
    if z in (1, -1):
        raise ValueError("z = +-1 is a pole")
    lhs = z ** (2 * e.k) / (1 - z * z) ** e.k
    rhs = Fraction(e.constant) + sum(
        (a * (1 / (1 - z) ** j + 1 / (1 + z) ** j) for j, a in enumerate(e.alphas, 1)), Fraction(0)
    )
    return lhs == rhs


def alpha_vs_c_check(k: int) -> bool:
    """alpha_{k-j} = (-1)^j c_j^k for j < k, and every such c_j^k is positive."""
    from .coeffs import c_closed

    e = decomp_alphas(k)
    for j in range(k):
        c = c_closed(k, j)
        if c <= 0:
            return False
        if e.alphas[k - j - 1] != (c if j % 2 == 0 else -c):
            return False
    return True


# --- poles at +-i/sqrt(C) -----------------------------------------------------------


@dataclass(frozen=True)
class FieldElem:
    """q * z_C^p with z_C = i/sqrt(C)."""

    q: Fraction
    p: int

    def abs_squared(self, C: Fraction) -> Fraction:
        return self.q * self.q / C**self.p

    def to_complex(self, C: Fraction) -> complex:
        zc = 1j / math.sqrt(C)
        return float(self.q) * zc**self.p

    def to_json(self) -> dict:
        return {"q": q_str(self.q), "p": self.p}


@dataclass(frozen=True)
class QuadExt:
    """a + b*w in Q(w) with w^2 = s."""

    a: Fraction
    b: Fraction
    s: Fraction

    def __add__(self, o: "QuadExt") -> "QuadExt":
        return QuadExt(self.a + o.a, self.b + o.b, self.s)

    def __sub__(self, o: "QuadExt") -> "QuadExt":
        return QuadExt(self.a - o.a, self.b - o.b, self.s)

    def __mul__(self, o) -> "QuadExt":
        if not isinstance(o, QuadExt):
            o = Fraction(o)
            return QuadExt(self.a * o, self.b * o, self.s)
        return QuadExt(self.a * o.a + self.b * o.b * self.s, self.a * o.b + self.b * o.a, self.s)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @classmethod
    def w_power(cls, p: int, s: Fraction, q=1) -> "QuadExt":
        scale = Fraction(q) * s ** (p // 2)
        return cls(Fraction(0), scale, s) if p % 2 else cls(scale, Fraction(0), s)


def _poly_mul(f: Sequence[QuadExt], g: Sequence[QuadExt]) -> list[QuadExt]:
    s = f[0].s
    out = [QuadExt(Fraction(0), Fraction(0), s) for _ in range(len(f) + len(g) - 1)]
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_pow(f: Sequence[QuadExt], n: int) -> list[QuadExt]:
    s = f[0].s
    out = [QuadExt(Fraction(1), Fraction(0), s)]
    for _ in range(n):
        out = _poly_mul(out, f)
    return out


def _poly_add(f: list[QuadExt], g: Sequence[QuadExt]) -> list[QuadExt]:
    s = (f or g)[0].s
    n = max(len(f), len(g))
    zero = QuadExt(Fraction(0), Fraction(0), s)
    return [(f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) for i in range(n)]


@dataclass(frozen=True)
class QuadPoleExpansion:
    """z^{2k}/(1+Cz^2)^k = C^{-k} + sum_v A_v/(z - z_C)^v + B_v/(z + z_C)^v."""

    k: int
    C: Fraction
    delta: Fraction
    A: tuple[FieldElem, ...]
    B: tuple[FieldElem, ...]

    @property
    def constant(self) -> Fraction:
        return 1 / self.C**self.k

    @property
    def z_C(self) -> complex:
        return 1j / math.sqrt(self.C)

    def complex_A(self) -> list[complex]:
        return [x.to_complex(self.C) for x in self.A]

    def complex_B(self) -> list[complex]:
        return [x.to_complex(self.C) for x in self.B]

    def coefficient_mass(self) -> float:
        """1/C^k + sum |A_v| + |B_v| in floats (reporting only)."""
        return float(self.constant) + sum(abs(a) for a in self.complex_A()) + sum(abs(b) for b in self.complex_B())

    def bound(self) -> float:
        return 2**self.k * float(self.delta) ** (-1.5 * self.k)

    def evaluate_lhs(self, z: complex) -> complex:
        C = float(self.C)
        return z ** (2 * self.k) / (1 + C * z * z) ** self.k

    def evaluate_rhs(self, z: complex) -> complex:
        zc = self.z_C
        out = complex(float(self.constant))
        for v, (a, b) in enumerate(zip(self.complex_A(), self.complex_B()), 1):
            out += a / (z - zc) ** v + b / (z + zc) ** v
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "C": q_str(self.C),
            "delta": q_str(self.delta),
            "constant": q_str(self.constant),
            "A": [x.to_json() for x in self.A],
            "B": [x.to_json() for x in self.B],
            "A_complex": [[a.real, a.imag] for a in self.complex_A()],
            "B_complex": [[b.real, b.imag] for b in self.complex_B()],
        }


def decomp_quad_pole(k: int, C, delta) -> QuadPoleExpansion:
    """A_v = (-1)^v alpha_v z_C^{2k+v}, B_v = alpha_v z_C^{2k+v}.

    Substituting xi = z/z_C turns the left side into (-C)^{-k} xi^{2k}/(1-xi^2)^k,
    and (xi - 1)^{-v} = (-1)^v (1 - xi)^{-v} fixes the sign on A.
    """
    C, delta = to_q(C), check_delta(delta)
    if not delta < C < 1 / delta:
        raise ValueError(f"C = {C} lies outside ({delta}, {1 / delta})")
    alphas = decomp_alphas(k).alphas
    A = tuple(FieldElem(a if v % 2 == 0 else -a, 2 * k + v) for v, a in enumerate(alphas, 1))
    B = tuple(FieldElem(a, 2 * k + v) for v, a in enumerate(alphas, 1))
    return QuadPoleExpansion(k, C, delta, A, B)


def quad_pole_recombine_check(e: QuadPoleExpansion, samples: int = 50, seed: int = 0) -> float:
    """Max |lhs - rhs| over random real z in [-10, 10]."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        z = rng.uniform(-10, 10)
        worst = max(worst, abs(e.evaluate_lhs(z) - e.evaluate_rhs(z)))
    return worst


def quad_pole_symbolic_check(e: QuadPoleExpansion) -> bool:
    """Exact identity after clearing (1+Cz^2)^k = C^k (z-w)^k (z+w)^k in Q(w), w^2 = -1/C.

    Polynomials in z are coefficient lists, lowest degree first.
    """
    C, k = e.C, e.k
    s = -1 / C
    one = QuadExt(Fraction(1), Fraction(0), s)
    zero = QuadExt(Fraction(0), Fraction(0), s)
    w = QuadExt(Fraction(0), Fraction(1), s)
    z_minus_w = [zero - w, one]
    z_plus_w = [w, one]

    rhs = [x * (1 / C**k) for x in _poly_pow([one, zero, one * C], k)]
    ck = C**k
    for v in range(1, k + 1):
        Av = QuadExt.w_power(e.A[v - 1].p, s, e.A[v - 1].q)
        Bv = QuadExt.w_power(e.B[v - 1].p, s, e.B[v - 1].q)
        tA = _poly_mul(_poly_pow(z_minus_w, k - v), _poly_pow(z_plus_w, k))
        tB = _poly_mul(_poly_pow(z_minus_w, k), _poly_pow(z_plus_w, k - v))
        rhs = _poly_add(rhs, [x * Av * ck for x in tA])
        rhs = _poly_add(rhs, [x * Bv * ck for x in tB])
    lhs = [zero] * (2 * k) + [one]
    diff = _poly_add(lhs, [zero - x for x in rhs])
    return all(x.is_zero() for x in diff)


def sqrt_sum_le(a: Fraction, b: Fraction, c: Fraction, d: Fraction, e: Fraction) -> bool:
    """Exact test of a + b*sqrt(c) <= d*sqrt(e) for a, b, d >= 0 and c, e > 0."""
    if min(a, b, d) < 0 or c <= 0 or e <= 0:
        raise ValueError("sqrt_sum_le needs nonnegative coefficients and positive radicands")
    m = d * d * e - a * a - b * b * c
    if m < 0:
        return False
    return 4 * a * a * b * b * c <= m * m


def quad_pole_bound_holds(e: QuadPoleExpansion, *, delta_constant: bool = False) -> bool:
    """1/C^k + sum(|A_v| + |B_v|) <= 2^k delta^{-3k/2}, decided exactly.

    |q z_C^p| = |q| C^{-p/2}; odd p contribute a multiple of sqrt(1/C). With
    ``delta_constant`` the constant is replaced by its worst case delta^{-k}.
    """
    C, k, delta = e.C, e.k, e.delta
    rational = delta**-k if delta_constant else e.constant
    irrational = Fraction(0)
    for x in e.A + e.B:
        mag = abs(x.q) / C ** (x.p // 2)
        if x.p % 2:
            irrational += mag
        else:
            rational += mag
    d = Fraction(2**k) / delta ** ((3 * k) // 2)
    radicand = 1 / delta if (3 * k) % 2 else Fraction(1)
    return sqrt_sum_le(rational, irrational, 1 / C, d, radicand)
