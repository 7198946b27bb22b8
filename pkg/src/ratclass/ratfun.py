"""The rational function classes P(x) / prod_s (1 + x'C_s x).

A :class:`RatClassTerm` with r denominator factors and a monic monomial
numerator of degree 2r is one member of F_{delta,r}; it lies in F^(j) when its
factors take at most j distinct matrix values. G_{delta,r} is the union of
F_{delta,v} for v <= r. A :class:`RatCombo` is a finite linear combination of
terms; the sum of its absolute coefficients is an upper bound for the
decomposition norm whenever every term is a class member.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .exactmath import q_str, to_q
from .quadforms import SymRationalMatrix, check_delta, in_W_delta, quadform_eval

__all__ = [
    "MonicMonomial",
    "RatClassTerm",
    "RatCombo",
    "ClassMembershipError",
    "h_eval",
    "term_eval",
    "class_check",
    "SupBounds",
    "sup_bounds",
    "combo_sup",
    "FiniteDiffResult",
    "sample_grid",
    "difference_decompose",
    "partial_derivative_term",
    "finite_diff_check",
    "norm_certificate",
    "two_term_split",
    "two_term_target",
    "monomial_count",
    "enumerate_monomials",
    "random_W_matrix",
    "random_monomial",
    "random_point",
]

Coefficient = Union[Fraction, float]


class ClassMembershipError(ValueError):
    """A term handed to a certificate is not in the claimed class."""


@dataclass(frozen=True)
class MonicMonomial:
    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if not exps:
            raise ValueError("monomial needs at least one variable")
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "exponents", exps)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.dim:
            raise ValueError(f"point of length {len(x)} for a monomial in {self.dim} variables")
        out = Fraction(1)
        for xi, e in zip(x, self.exponents):
            if e:
                out *= Fraction(xi) ** e
        return out

    def times(self, k: int, l: int) -> "MonicMonomial":
        """x_k * x_l * self."""
        exps = list(self.exponents)
        exps[k] += 1
        exps[l] += 1
        return MonicMonomial(tuple(exps))


@dataclass(frozen=True)
class RatClassTerm:
    """P(x) / prod_s h_{C_s}(x) with deg P = 2 * len(denoms).

    Structural validity (dimensions, degree) is enforced here; membership in
    W_delta and the distinct-denominator count are left to :func:`class_check`.
    """

    P: MonicMonomial
    denoms: tuple[SymRationalMatrix, ...]
    delta: Fraction

    def __post_init__(self):
        denoms = tuple(self.denoms)
        if not denoms:
            raise ValueError("a class term needs at least one denominator factor")
        d = self.P.dim
        if any(C.dim != d for C in denoms):
            raise ValueError("denominator dimension does not match the monomial")
        if self.P.degree != 2 * len(denoms):
            raise ValueError(
                f"numerator degree {self.P.degree} must equal 2r = {2 * len(denoms)}"
            )
        object.__setattr__(self, "denoms", denoms)
        object.__setattr__(self, "delta", check_delta(self.delta))

    @property
    def r(self) -> int:
        return len(self.denoms)

    @property
    def dim(self) -> int:
        return self.P.dim

    def distinct_denoms(self) -> list[SymRationalMatrix]:
        seen: list[SymRationalMatrix] = []
        for C in self.denoms:
            if C not in seen:
                seen.append(C)
        return seen

    def to_json(self, lam: Coefficient | None = None) -> dict:
        out = {
            "P": list(self.P.exponents),
            "denoms": [C.to_json() for C in self.denoms],
            "delta": q_str(self.delta),
        }
        if lam is not None:
            out["lambda"] = q_str(lam) if isinstance(lam, Fraction) else lam
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RatClassTerm":
        return cls(
            MonicMonomial(tuple(data["P"])),
            tuple(SymRationalMatrix.from_rows(C) for C in data["denoms"]),
            to_q(data["delta"]),
        )


def _coef_from_json(v) -> Coefficient:
    if isinstance(v, float):
        return v
    return to_q(v)


@dataclass(frozen=True)
class RatCombo:
    terms: tuple[tuple[Coefficient, RatClassTerm], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((lam, t) for lam, t in self.terms))
        dims = {t.dim for _, t in self.terms}
        if len(dims) > 1:
            raise ValueError("all terms in a combination must share the dimension")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim

    def __call__(self, x: Sequence):
        return sum((lam * term_eval(t, x) for lam, t in self.terms), Fraction(0))

    def eval_float(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(X.shape[0])
        for lam, t in self.terms:
            out += float(lam) * _term_eval_float(t, X)
        return out

    def abs_sum(self) -> Coefficient:
        return sum((abs(lam) for lam, _ in self.terms), Fraction(0))

    def to_json(self) -> list[dict]:
        return [t.to_json(lam) for lam, t in self.terms]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "RatCombo":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            data = data["terms"]
        return cls(tuple((_coef_from_json(item.get("lambda", "1")), RatClassTerm.from_json(item)) for item in data))


def h_eval(C: SymRationalMatrix, x: Sequence) -> Fraction:
    """h_C(x) = 1 + x'Cx."""
    return 1 + quadform_eval(C, x)


def term_eval(f: RatClassTerm, x: Sequence) -> Fraction:
    den = Fraction(1)
    for C in f.denoms:
        den *= h_eval(C, x)
    return f.P(x) / den


def _term_eval_float(f: RatClassTerm, X: np.ndarray) -> np.ndarray:
    num = np.prod(X ** np.array(f.P.exponents, dtype=float), axis=1)
    den = np.ones(X.shape[0])
    for C in f.denoms:
        A = C.as_float()
        den *= 1.0 + np.einsum("ni,ij,nj->n", X, A, X)
    return num / den


def class_check(f: RatClassTerm, j: int, r: int | None = None, delta=None) -> bool:
    """Membership in F^(j)_{delta, f.r}, or in G^(j)_{delta, r} when r is given."""
    delta = f.delta if delta is None else check_delta(delta)
    if f.P.degree != 2 * f.r:
        return False
    if r is not None and f.r > r:
        return False
    distinct = f.distinct_denoms()
    if len(distinct) > j:
        return False
    return all(in_W_delta(C, delta) for C in distinct)


# --- sup norm -----------------------------------------------------------------

RAY_SCALES = (1.0, 10.0, 100.0, 1000.0)


def sample_grid(d: int, *, box: float = 10.0, resolution: int = 41, n_random: int = 4000, seed: int = 0) -> np.ndarray:
    """Box grid for d <= 2, uniform random points in the box otherwise, plus diagonal rays."""
    if d <= 2:
        axis = np.linspace(-box, box, resolution)
        pts = np.array(list(itertools.product(axis, repeat=d)))
    else:
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-box, box, size=(n_random, d))
    rays = np.array([[m] * d for m in RAY_SCALES])
    return np.vstack([pts, rays])


@dataclass(frozen=True)
class SupBounds:
    empirical_sup: float
    upper: Fraction
    lower: Fraction

    @property
    def consistent(self) -> bool:
        return float(self.lower) * (1 - 1e-9) <= self.empirical_sup <= float(self.upper) * (1 + 1e-12)


def sup_bounds(f: RatClassTerm, grid: np.ndarray | None = None, *, seed: int = 0) -> SupBounds:
    """Sampled sup |f| together with delta^{-r} above and (delta/d)^r below."""
    if grid is None:
        grid = sample_grid(f.dim, seed=seed)
    emp = float(np.max(np.abs(_term_eval_float(f, grid))))
    return SupBounds(emp, f.delta ** -f.r, (f.delta / f.dim) ** f.r)


def combo_sup(combo: RatCombo, grid: np.ndarray | None = None, *, seed: int = 0) -> float:
    if grid is None:
        grid = sample_grid(combo.dim, seed=seed)
    return float(np.max(np.abs(combo.eval_float(grid))))


# --- decompositions ---------------------------------------------------------------


def difference_decompose(P: MonicMonomial, C: SymRationalMatrix, D: SymRationalMatrix, r: int, delta) -> RatCombo:
    """f_{P,D,r} - f_{P,C,r} as a combination of r*d(d+1)/2 terms of level r + 1.

    Term (k, l, j) is x_k x_l P(x) h_C^{j-r} h_D^{-j-1} with coefficient
    -(D_kl - C_kl)(2 - [k == l]); zero coefficients are kept so the term count
    is fixed.
    """
    delta = check_delta(delta)
    if P.degree != 2 * r:
        raise ValueError(f"numerator degree {P.degree} must equal 2r = {2 * r}")
    if not (C.dim == D.dim == P.dim):
        raise ValueError("dimension mismatch")
    terms = []
    d = P.dim
    for k in range(d):
        for l in range(k, d):
            coef = -(D[k, l] - C[k, l]) * (1 if k == l else 2)
            num = P.times(k, l)
            for j in range(r):
                denoms = (C,) * (r - j) + (D,) * (j + 1)
                terms.append((coef, RatClassTerm(num, denoms, delta)))
    return RatCombo(tuple(terms))


def _norm_index(k: int, l: int, d: int) -> tuple[int, int]:
    if not (0 <= k < d and 0 <= l < d):
        raise IndexError(f"entry ({k}, {l}) out of range for dimension {d}")
    return (k, l) if k <= l else (l, k)


def partial_derivative_term(P: MonicMonomial, C: SymRationalMatrix, r: int, k: int, l: int, delta) -> tuple[Fraction, RatClassTerm]:
    """d/dC_kl of P/h_C^r as coefficient * (x_k x_l P / h_C^{r+1}).

    Indices are 0-based; (k, l) and (l, k) name the same symmetric entry.
    """
    k, l = _norm_index(k, l, C.dim)
    if P.degree != 2 * r:
        raise ValueError(f"numerator degree {P.degree} must equal 2r = {2 * r}")
    coef = Fraction(-r * (1 if k == l else 2))
    return coef, RatClassTerm(P.times(k, l), (C,) * (r + 1), delta)


@dataclass(frozen=True)
class FiniteDiffResult:
    analytic: float
    numeric: float
    rel_err: float


def finite_diff_check(P: MonicMonomial, C: SymRationalMatrix, r: int, k: int, l: int, x: Sequence, h: float = 1e-5, delta=None) -> FiniteDiffResult:
    """Central difference in C_kl against the closed-form derivative.

    Both perturbed matrices are built exactly from the binary value of h, so the
    only error left is the O(h^2) truncation of the difference quotient.
    """
    k, l = _norm_index(k, l, C.dim)
    if delta is None:
        raise ValueError("delta is required to validate the perturbed matrices")
    delta = check_delta(delta)
    hq = Fraction(h)
    plus, minus = C.perturbed(k, l, hq), C.perturbed(k, l, -hq)
    for M in (C, plus, minus):
        if not in_W_delta(M, delta):
            raise ValueError("perturbed matrix leaves W_delta; use a smaller h")
    coef, term = partial_derivative_term(P, C, r, k, l, delta)
    analytic = coef * term_eval(term, x)
    phi_plus = term_eval(RatClassTerm(P, (plus,) * r, delta), x)
    phi_minus = term_eval(RatClassTerm(P, (minus,) * r, delta), x)
    numeric = (phi_plus - phi_minus) / (2 * hq)
    rel = abs(analytic - numeric) / max(Fraction(1), abs(analytic))
    return FiniteDiffResult(float(analytic), float(numeric), float(rel))


def norm_certificate(combo: RatCombo, delta, r: int, j: int) -> Coefficient:
    """Sum of |lambda_s|, an upper bound for the (j)-norm at level r.

    Raises ClassMembershipError naming the first term outside G^(j)_{delta,r}.
    """
    delta = check_delta(delta)
    for idx, (lam, t) in enumerate(combo.terms):
        if not class_check(t, j, r=r, delta=delta):
            raise ClassMembershipError(
                f"term {idx} (P={list(t.P.exponents)}, {t.r} factors, "
                f"{len(t.distinct_denoms())} distinct) is not in G^({j})_(delta={delta}, r={r})"
            )
    return combo.abs_sum()


def two_term_split(alpha, delta) -> RatCombo:
    """x^4/((1+a x^2)(1+x^2/a)) rewritten with two single-factor terms.

    Coefficients are +-a/(1-a^2), so the certificate is 2a/(1-a^2).
    """
    alpha, delta = to_q(alpha), check_delta(delta)
    if not delta < alpha < 1:
        raise ValueError("need 0 < delta < alpha < 1")
    lam = alpha / (1 - alpha**2)
    x2 = MonicMonomial((2,))
    return RatCombo((
        (lam, RatClassTerm(x2, (SymRationalMatrix.scalar(alpha),), delta)),
        (-lam, RatClassTerm(x2, (SymRationalMatrix.scalar(1 / alpha),), delta)),
    ))


def two_term_target(alpha, delta) -> RatClassTerm:
    alpha = to_q(alpha)
    return RatClassTerm(
        MonicMonomial((4,)),
        (SymRationalMatrix.scalar(alpha), SymRationalMatrix.scalar(1 / alpha)),
        delta,
    )


def monomial_count(r: int, d: int) -> int:
    """Number of monic monomials of degree 2r in d variables."""
    return math.comb(2 * r + d - 1, d - 1)


def enumerate_monomials(degree: int, d: int) -> Iterable[MonicMonomial]:
    if d == 1:
        yield MonicMonomial((degree,))
        return
    for first in range(degree, -1, -1):
        for rest in enumerate_monomials(degree - first, d - 1):
            yield MonicMonomial((first,) + rest.exponents)


# --- random instances ---------------------------------------------------------------


def random_W_matrix(rng: random.Random, d: int, delta: Fraction, *, max_tries: int = 200) -> SymRationalMatrix:
    """Random rational matrix with spectrum inside (delta, 1/delta).

    Built as a diagonal of eigenvalues drawn from the inner half of the window,
    plus a small symmetric perturbation; rejection keeps only W_delta members.
    """
    lo, hi = delta, 1 / delta
    span = hi - lo
    for _ in range(max_tries):
        diag = [lo + span * Fraction(rng.randint(10, 90), 100) for _ in range(d)]
        rows = [[Fraction(0)] * d for _ in range(d)]
        for i in range(d):
            rows[i][i] = diag[i]
            for j in range(i + 1, d):
                v = Fraction(rng.randint(-20, 20), 100) * min(diag[i], diag[j])
                rows[i][j] = rows[j][i] = v
        M = SymRationalMatrix.from_rows(rows)
        if in_W_delta(M, delta):
            return M
    raise RuntimeError("could not draw a matrix inside W_delta")


def random_monomial(rng: random.Random, degree: int, d: int) -> MonicMonomial:
    exps = [0] * d
    for _ in range(degree):
        exps[rng.randrange(d)] += 1
    return MonicMonomial(tuple(exps))


def random_point(rng: random.Random, d: int, *, bound: int = 3, den: int = 7) -> tuple[Fraction, ...]:
    out = []
    for _ in range(d):
        q = rng.randint(1, den)
        out.append(Fraction(rng.randint(-bound * q, bound * q), q))
    return tuple(out)
