"""Semipole limits and coefficient recovery from black-box evaluation.

A point iy is a semipole of order r of g when t^r g(iy + t) has a nonzero
limit as t decreases to 0 along the reals. For a finite sum of pole terms that
limit is the order-r coefficient at iy; lower orders are peeled off by
subtracting the recovered terms and repeating. Directions alpha in [1, 2]^d
reduce a combination in d variables to a function of one variable t -> f(t alpha).
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .quadforms import SymRationalMatrix, check_delta, in_W_delta, quadform_eval
from .ratfun import MonicMonomial, RatClassTerm, RatCombo

__all__ = [
    "PoleProximityError",
    "GenericityError",
    "FiniteMeromorphicSum",
    "eval_sum",
    "default_schedule",
    "LimitEstimate",
    "semipole_limit",
    "recover_coefficients",
    "SliceTerm",
    "RaySlice",
    "ray_restrict",
    "genericity_check",
    "random_direction",
    "verify_counterexample",
    "NormTwoWitness",
    "norm_two_witness",
    "difference_combo",
    "random_meromorphic_sum",
    "ERROR_BAR_LIMIT",
    "POLE_GUARD",
]

POLE_GUARD = 1e-12
ERROR_BAR_LIMIT = 1e-4


class PoleProximityError(ValueError):
    pass


class GenericityError(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteMeromorphicSum:
    """sum_s a_s / (z - z_s)^{k_s}; the pairs (k_s, z_s) are distinct."""

    terms: tuple[tuple[complex, complex, int], ...] = ()

    def __post_init__(self):
        terms = tuple((complex(a), complex(z), int(k)) for a, z, k in self.terms)
        if any(k < 1 for _, _, k in terms):
            raise ValueError("pole orders must be positive")
        keys = [(k, z) for _, z, k in terms]
        if len(set(keys)) != len(keys):
            raise ValueError("pairs (k_s, z_s) must be distinct")
        object.__setattr__(self, "terms", terms)

    def __call__(self, z: complex) -> complex:
        return eval_sum(self, z)

    def coefficient(self, z0: complex, k: int) -> complex:
        return sum((a for a, z, kk in self.terms if z == z0 and kk == k), 0j)


def eval_sum(f: FiniteMeromorphicSum, z: complex) -> complex:
    out = 0j
    for a, zs, k in f.terms:
        if abs(z - zs) < POLE_GUARD:
            raise PoleProximityError(f"z = {z} is within {POLE_GUARD} of the pole {zs}")
        out += a / (z - zs) ** k
    return out


def default_schedule() -> list[float]:
    return [2.0**-j for j in range(4, 21)]


def _extrapolate_to_zero(ts: Sequence[float], gs: Sequence[complex]) -> complex:
    """Value at t = 0 of the interpolating polynomial (Neville)."""
    p = list(gs)
    n = len(ts)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (ts[i + m] * p[i] - ts[i] * p[i + 1]) / (ts[i + m] - ts[i])
    return p[0]


@dataclass(frozen=True)
class LimitEstimate:
    value: complex
    error: float

    @property
    def reliable(self) -> bool:
        return self.error <= ERROR_BAR_LIMIT


def semipole_limit(
    f: Callable[[complex], complex],
    y: float,
    r: int,
    schedule: Sequence[float] | None = None,
    order: int = 4,
) -> LimitEstimate:
    """lim_{t -> 0+} t^r f(iy + t) by Richardson extrapolation along the schedule.

    Each window of ``order + 1`` consecutive samples is extrapolated to t = 0.
    Round-off eventually dominates for tiny t, so the estimate reported is the
    one whose change from its predecessor is smallest; that change is the error bar.
    """
    ts = list(default_schedule() if schedule is None else schedule)
    if len(ts) < 4:
        raise ValueError("schedule needs at least 4 points")
    if any(t <= 0 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("schedule must be positive and strictly decreasing")
    order = min(order, len(ts) - 2)
    z0 = 1j * y
    gs = [t**r * f(z0 + t) for t in ts]
    ests = [_extrapolate_to_zero(ts[i : i + order + 1], gs[i : i + order + 1]) for i in range(len(ts) - order)]
    deltas = [abs(b - a) for a, b in zip(ests, ests[1:])]
    best = min(range(len(deltas)), key=deltas.__getitem__)
    return LimitEstimate(ests[best + 1], deltas[best])


def recover_coefficients(
    f: Callable[[complex], complex],
    y: float,
    max_order: int,
    schedule: Sequence[float] | None = None,
    order: int = 4,
) -> list[LimitEstimate]:
    """Coefficients [c_r, ..., c_1] of (z - iy)^{-j} in f, highest order first."""
    z0 = 1j * y
    found: list[tuple[int, complex]] = []
    out: list[LimitEstimate] = []
    for j in range(max_order, 0, -1):
        peeled = tuple(found)

        def g(z, peeled=peeled):
            return f(z) - sum(c / (z - z0) ** m for m, c in peeled)

        est = semipole_limit(g, y, j, schedule, order)
        out.append(est)
        found.append((j, est.value))
    return out


# --- directions --------------------------------------------------------------------


@dataclass(frozen=True)
class SliceTerm:
    lam: object
    numerator: Fraction  # P_s(alpha)
    degree: int  # 2 * (number of factors)
    scalars: tuple[Fraction, ...]  # alpha' C_sv alpha


@dataclass(frozen=True)
class RaySlice:
    alpha: tuple[Fraction, ...]
    terms: tuple[SliceTerm, ...]
    generic: bool

    def __call__(self, t) -> Fraction:
        """Exact value of t -> f(t alpha) at rational t."""
        t = Fraction(t)
        out = Fraction(0)
        t2 = t * t
        for st in self.terms:
            den = Fraction(1)
            for q in st.scalars:
                den *= 1 + t2 * q
            out += st.lam * st.numerator * t**st.degree / den
        return out

    def eval_complex(self, t: complex) -> complex:
        t2 = t * t
        out = 0j
        for st in self.terms:
            den = 1 + 0j
            for q in st.scalars:
                den *= 1 + t2 * float(q)
            out += float(st.lam) * float(st.numerator) * t**st.degree / den
        return out

    def pole_y(self, M: SymRationalMatrix) -> float:
        """Imaginary part of the upper pole contributed by denominator M on this ray."""
        return 1 / math.sqrt(quadform_eval(M, self.alpha))


def _distinct_matrices(combo: RatCombo) -> list[SymRationalMatrix]:
    seen: list[SymRationalMatrix] = []
    for _, t in combo.terms:
        for C in t.denoms:
            if C not in seen:
                seen.append(C)
    return seen


def genericity_check(alpha: Sequence, combo: RatCombo) -> bool:
    """Distinct matrices give distinct alpha'C alpha, and no numerator vanishes at alpha."""
    alpha = tuple(Fraction(a) for a in alpha)
    values = [quadform_eval(C, alpha) for C in _distinct_matrices(combo)]
    if len(set(values)) != len(values):
        return False
    return all(t.P(alpha) != 0 for _, t in combo.terms)


def ray_restrict(combo: RatCombo, alpha: Sequence) -> RaySlice:
    alpha = tuple(Fraction(a) for a in alpha)
    if len(alpha) != combo.dim:
        raise ValueError("direction dimension does not match the combination")
    if any(not 1 <= a <= 2 for a in alpha):
        raise ValueError("direction entries must lie in [1, 2]")
    terms = tuple(
        SliceTerm(lam, t.P(alpha), t.P.degree, tuple(quadform_eval(C, alpha) for C in t.denoms))
        for lam, t in combo.terms
    )
    return RaySlice(alpha, terms, genericity_check(alpha, combo))


DIRECTION_GRID = 10**4


def random_direction(d: int, seed=None, rng: random.Random | None = None) -> tuple[Fraction, ...]:
    """Entries drawn uniformly from {1 + m/10^4 : 0 <= m <= 10^4}."""
    if rng is None:
        rng = random.Random(seed)
    return tuple(Fraction(DIRECTION_GRID + rng.randint(0, DIRECTION_GRID), DIRECTION_GRID) for _ in range(d))


# --- explicit identities and witnesses -----------------------------------------------


def _poly_in_u(*factors: Sequence[int]) -> list[int]:
    out = [1]
    for f in factors:
        prod = [0] * (len(out) + len(f) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(f):
                prod[i + j] += a * b
        out = prod
    return out


def verify_counterexample() -> bool:
    """2/((1+u)(1+3u)) - 1/((1+u)(1+2u)) == 1/((1+2u)(1+3u)) with u = x^2.

    Over the common denominator (1+u)(1+2u)(1+3u) the numerators must agree
    coefficientwise: 2(1+2u) - (1+3u) = 1 + u. Spot values at x = 0 and 1 are
    rechecked as rationals.
    """
    lhs = [2 * c for c in _poly_in_u((1, 2))]
    lhs = [a - b for a, b in zip(lhs, _poly_in_u((1, 3)))]
    if lhs != _poly_in_u((1, 1)):
        return False
    for x in (Fraction(0), Fraction(1), Fraction(1, 3)):
        u = x * x
        left = Fraction(2) / ((1 + u) * (1 + 3 * u)) - Fraction(1) / ((1 + u) * (1 + 2 * u))
        if left != 1 / ((1 + 2 * u) * (1 + 3 * u)):
            return False
    return True


@dataclass(frozen=True)
class NormTwoWitness:
    alpha: tuple[Fraction, ...]
    y_C: float
    y_D: float
    c_at_C: LimitEstimate
    c_at_D: LimitEstimate
    unit_at_C: LimitEstimate
    unit_at_D: LimitEstimate

    @property
    def normalized_C(self) -> complex:
        """Top coefficient at the C pole in units of a single +P/h_C^r term."""
        return self.c_at_C.value / self.unit_at_C.value

    @property
    def normalized_D(self) -> complex:
        return self.c_at_D.value / self.unit_at_D.value

    @property
    def opposite_signs(self) -> bool:
        a, b = self.normalized_C, self.normalized_D
        return abs(a) > 0 and abs(b) > 0 and a.real > 0 > b.real

    def to_json(self) -> dict:
        def cj(z):
            return [z.real, z.imag]

        return {
            "alpha": [str(a) for a in self.alpha],
            "y_C": self.y_C,
            "y_D": self.y_D,
            "c_at_C": cj(self.c_at_C.value),
            "c_at_C_error": self.c_at_C.error,
            "c_at_D": cj(self.c_at_D.value),
            "c_at_D_error": self.c_at_D.error,
            "normalized_C": cj(self.normalized_C),
            "normalized_D": cj(self.normalized_D),
            "opposite_signs": self.opposite_signs,
        }


def difference_combo(P: MonicMonomial, C: SymRationalMatrix, D: SymRationalMatrix, r: int, delta) -> RatCombo:
    """P/h_C^r - P/h_D^r."""
    return RatCombo((
        (Fraction(1), RatClassTerm(P, (C,) * r, delta)),
        (Fraction(-1), RatClassTerm(P, (D,) * r, delta)),
    ))


def norm_two_witness(
    P: MonicMonomial,
    C: SymRationalMatrix,
    D: SymRationalMatrix,
    r: int,
    delta,
    seed: int = 0,
    max_draws: int = 50,
) -> NormTwoWitness:
    """Recover the order-r semipole coefficients of P/h_C^r - P/h_D^r on a generic ray.

    Each is also divided by the coefficient of the lone term P/h_M^r at the
    same pole, which is how the +1 and -1 show up.
    """
    delta = check_delta(delta)
    if C == D:
        raise ValueError("C and D must differ")
    if P.degree != 2 * r:
        raise ValueError(f"numerator degree {P.degree} must equal 2r = {2 * r}")
    for M in (C, D):
        if not in_W_delta(M, delta):
            raise ValueError("both matrices must lie in W_delta")
    combo = difference_combo(P, C, D, r, delta)
    rng = random.Random(seed)
    for _ in range(max_draws):
        alpha = random_direction(P.dim, rng=rng)
        if genericity_check(alpha, combo):
            break
    else:
        raise GenericityError(f"no generic direction found in {max_draws} draws")

    sl = ray_restrict(combo, alpha)
    unit_C = ray_restrict(RatCombo(combo.terms[:1]), alpha)
    unit_D = ray_restrict(RatCombo(((Fraction(1), combo.terms[1][1]),)), alpha)
    yC, yD = sl.pole_y(C), sl.pole_y(D)
    return NormTwoWitness(
        alpha=alpha,
        y_C=yC,
        y_D=yD,
        c_at_C=semipole_limit(sl.eval_complex, yC, r),
        c_at_D=semipole_limit(sl.eval_complex, yD, r),
        unit_at_C=semipole_limit(unit_C.eval_complex, yC, r),
        unit_at_D=semipole_limit(unit_D.eval_complex, yD, r),
    )


def random_meromorphic_sum(rng: random.Random, *, max_order: int = 3, separation: float = 0.1) -> FiniteMeromorphicSum:
    """Poles on the imaginary axis with |Im| in [0.3, 2], pairwise >= separation apart."""
    while True:
        ys = sorted(rng.uniform(-2, 2) for _ in range(rng.randint(1, 4)))
        ys = [y for y in ys if abs(y) >= 0.3]
        if ys and all(b - a >= separation for a, b in zip(ys, ys[1:])):
            break
    terms = []
    for y in ys:
        orders = [k for k in range(1, max_order + 1) if rng.random() < 0.6] or [rng.randint(1, max_order)]
        for k in orders:
            mag = 10 ** rng.uniform(-1, 1)
            terms.append((mag * cmath.exp(1j * rng.uniform(0, 2 * math.pi)), 1j * y, k))
    return FiniteMeromorphicSum(tuple(terms))
