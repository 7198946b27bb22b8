"""Verification sweeps shared by ``ratclass verify-all`` and the acceptance tests.

Each sweep returns a :class:`CheckResult` listing every failed case. Profiles
fix the sweep ranges: ``full`` runs the stated ranges, ``quick`` caps them.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .coeffs import (
    S_head,
    T_closed,
    R_series,
    asymptotics_report,
    c_closed,
    c_oracle_sweep,
    cnnlo_value,
    fthton_check,
    ident_check,
    vander_checks,
)
from .exactmath import q_str
from .partialfrac import (
    alpha_vs_c_check,
    alphas_recombine_check,
    decomp_alphas,
    decomp_pm,
    decomp_quad_pole,
    pm_recombine_check,
    quad_pole_bound_holds,
    quad_pole_recombine_check,
    quad_pole_symbolic_check,
)
from .quadforms import SymRationalMatrix
from .ratfun import (
    RatClassTerm,
    RatCombo,
    class_check,
    combo_sup,
    difference_decompose,
    finite_diff_check,
    norm_certificate,
    random_monomial,
    random_point,
    random_W_matrix,
    sample_grid,
    sup_bounds,
    term_eval,
    two_term_split,
)
from .semipole import norm_two_witness, random_meromorphic_sum, recover_coefficients, verify_counterexample

__all__ = [
    "Failure",
    "CheckResult",
    "PROFILES",
    "CRITERIA",
    "run_criterion",
    "run_all",
    "sweep_fthton",
    "sweep_ident",
    "sweep_vander",
    "sweep_cnnlo",
    "check_corrupted",
]

DELTAS = (Fraction(1, 2), Fraction(2, 5), Fraction(1, 3), Fraction(1, 4), Fraction(1, 5))


@dataclass
class Failure:
    case: str
    expected: str
    actual: str

    def to_json(self) -> dict:
        return {"case": self.case, "expected": self.expected, "actual": self.actual}


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failures: list[Failure] = field(default_factory=list)
    elapsed_s: float = 0.0
    budget_s: float | None = None

    def check(self, ok: bool, case: str, expected="true", actual="false") -> bool:
        if ok:
            self.passed += 1
        else:
            self.failures.append(Failure(case, str(expected), str(actual)))
        return ok

    @property
    def failed(self) -> int:
        return len(self.failures)

    @property
    def within_budget(self) -> bool:
        return self.budget_s is None or self.elapsed_s <= self.budget_s

    @property
    def ok(self) -> bool:
        return not self.failures and self.within_budget

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        budget = f"/{self.budget_s:.0f}s" if self.budget_s else ""
        return f"[{status}] {self.name}: {self.passed} passed, {self.failed} failed ({self.elapsed_s:.1f}s{budget})"


PROFILES: dict[str, dict] = {
    "full": dict(
        oracle_n=200, oracle_extra=40,
        fthton_n=200,
        ident_n=40, vander_b=40, vander_l=10, cnnlo_n=40, cnnlo_l=10,
        pm_max=30, pm_points=10, alpha_k=60, quad_symbolic_k=6, quad_bound_k=10, quad_C_per_k=10,
        diff_configs=100, diff_points=20,
        deriv_configs=50,
        sup_terms=100,
        semipole_sums=100, witnesses=20,
        asym_n=(100, 1000), R_max=1000,
    ),
    "quick": dict(
        oracle_n=50, oracle_extra=40,
        fthton_n=50,
        ident_n=20, vander_b=20, vander_l=10, cnnlo_n=20, cnnlo_l=10,
        pm_max=12, pm_points=4, alpha_k=20, quad_symbolic_k=4, quad_bound_k=6, quad_C_per_k=4,
        diff_configs=25, diff_points=8,
        deriv_configs=20,
        sup_terms=30,
        semipole_sums=30, witnesses=8,
        asym_n=(100, 1000), R_max=200,
    ),
}

# asymptotic windows per n: (lo, hi)
ASYMPTOTIC_WINDOWS = {100: (0.85, 1.15), 1000: (0.95, 1.05)}


def _rand_q(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 9) -> Fraction:
    q = rng.randint(1, den)
    return Fraction(rng.randint(lo * q, hi * q), q)


# --- criteria --------------------------------------------------------------------------


def check_coeff_oracle(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("coefficient oracle equivalence", budget_s=120)
    for table in c_oracle_sweep(p["oracle_n"], p["oracle_extra"]):
        for i, v in table.values.items():
            c = c_closed(table.n, i)
            res.check(c == v, f"c_closed({table.n},{i})", q_str(v), q_str(c))
            if i <= table.n:
                res.check(c > 0, f"c_closed({table.n},{i}) > 0", "> 0", q_str(c))
    return res


def sweep_fthton(res: CheckResult, n_max: int) -> None:
    for n in range(1, n_max + 1):
        res.check(fthton_check(n), f"fthton n={n}")


def sweep_ident(res: CheckResult, n_max: int) -> None:
    for n in range(n_max + 1):
        for a in range(-(n + 2), n + 3):
            res.check(ident_check(n, a), f"ident n={n} a={a}")


def sweep_vander(res: CheckResult, b_max: int, l_max: int) -> None:
    for b in range(b_max + 1):
        for l in range(-l_max, l_max + 1):
            res.check(vander_checks(b, l), f"vander b={b} l={l}")


def sweep_cnnlo(res: CheckResult, n_max: int, l_max: int) -> None:
    """l runs over -n..l_max; one oracle sweep serves every n."""
    for table in c_oracle_sweep(n_max, l_max + 1):
        n = table.n
        for l in range(-n, l_max + 1):
            v = cnnlo_value(n, l)
            expected = table[n + l + 1]
            res.check(v == expected, f"cnnlo n={n} l={l}", q_str(expected), q_str(v))


def check_telescoping(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("telescoping identity (4/3)^n", budget_s=30)
    sweep_fthton(res, p["fthton_n"])
    return res


def check_aux_identities(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("auxiliary identities", budget_s=60)
    sweep_ident(res, p["ident_n"])
    sweep_vander(res, p["vander_b"], p["vander_l"])
    sweep_cnnlo(res, p["cnnlo_n"], p["cnnlo_l"])
    return res


def check_partial_fractions(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("partial fractions", budget_s=120)
    rng = random.Random(seed)
    for m in range(1, p["pm_max"] + 1):
        for n in range(1, p["pm_max"] + 1):
            e = decomp_pm(m, n)
            res.check(all(v > 0 for v in e.a + e.b), f"pm({m},{n}) positivity")
            res.check(e.total() == 1, f"pm({m},{n}) sum", "1", q_str(e.total()))
            for _ in range(p["pm_points"]):
                z = _rand_q(rng)
                while z in (1, -1):
                    z = _rand_q(rng)
                res.check(pm_recombine_check(e, z), f"pm({m},{n}) recombine z={z}")
    for k in range(1, p["alpha_k"] + 1):
        e = decomp_alphas(k)
        res.check(e.crude_bound_holds(), f"alphas k={k} <= 2^k", f"<= {2**k}", q_str(e.weight()))
        res.check(e.improved_bound_holds(), f"alphas k={k} <= 2(4/3)^k")
        res.check(alpha_vs_c_check(k), f"alpha_vs_c k={k}")
        res.check(alphas_recombine_check(e, Fraction(1, 3)), f"alphas k={k} recombine")
        # 1 + 2 S_k + (2 c_k^k - 1) = 2 (4/3)^k - 2 T_k, with S_k = sum |alpha_j|
        S = sum((abs(a) for a in e.alphas), Fraction(0))
        res.check(S == S_head(k), f"alphas k={k} sum equals S_k")
        lhs = 1 + 2 * S + (2 * c_closed(k, k) - 1)
        res.check(lhs == 2 * Fraction(4, 3) ** k - 2 * T_closed(k), f"alphas/coeffs link k={k}")
    for k in range(1, p["quad_bound_k"] + 1):
        for idx in range(p["quad_C_per_k"]):
            delta = DELTAS[idx % len(DELTAS)]
            C = delta + (1 / delta - delta) * Fraction(rng.randint(1, 99), 100)
            e = decomp_quad_pole(k, C, delta)
            res.check(quad_pole_bound_holds(e), f"quadpole bound k={k} C={C} delta={delta}")
            res.check(quad_pole_bound_holds(e, delta_constant=True), f"quadpole bound (delta^-k constant) k={k} C={C}")
            if k <= p["quad_symbolic_k"]:
                res.check(quad_pole_symbolic_check(e), f"quadpole symbolic k={k} C={C}")
                err = quad_pole_recombine_check(e, samples=20, seed=idx)
                scale = max(1.0, e.coefficient_mass())
                res.check(err <= 1e-10 * scale, f"quadpole numeric k={k} C={C}", "<= 1e-10 rel", err)
    return res


def _random_W_pair(rng: random.Random, d: int, delta: Fraction):
    C = random_W_matrix(rng, d, delta)
    D = random_W_matrix(rng, d, delta)
    while D == C:
        D = random_W_matrix(rng, d, delta)
    return C, D


def check_difference(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("difference decomposition", budget_s=60)
    rng = random.Random(seed)
    for cfg in range(p["diff_configs"]):
        d, r = rng.randint(1, 3), rng.randint(1, 4)
        delta = rng.choice(DELTAS)
        P = random_monomial(rng, 2 * r, d)
        C, D = _random_W_pair(rng, d, delta)
        combo = difference_decompose(P, C, D, r, delta)
        res.check(len(combo) == r * d * (d + 1) // 2, f"cfg {cfg} term count")
        for idx, (_, t) in enumerate(combo.terms):
            res.check(t.r == r + 1 and class_check(t, 2), f"cfg {cfg} term {idx} in F^(2)_(delta,r+1)")
        f = RatClassTerm(P, (C,) * r, delta)
        g = RatClassTerm(P, (D,) * r, delta)
        for _ in range(p["diff_points"]):
            x = random_point(rng, d)
            lhs = term_eval(g, x) - term_eval(f, x)
            rhs = combo(x)
            res.check(lhs == rhs, f"cfg {cfg} x={[str(v) for v in x]}", q_str(lhs), q_str(rhs))
    return res


def check_derivative(p: dict, seed: int = 0, h: float = 1e-5, tol: float = 1e-6) -> CheckResult:
    res = CheckResult("derivative vs central differences", budget_s=10)
    rng = random.Random(seed)
    for cfg in range(p["deriv_configs"]):
        d, r = rng.randint(1, 3), rng.randint(1, 3)
        delta = rng.choice(DELTAS)
        P = random_monomial(rng, 2 * r, d)
        C = random_W_matrix(rng, d, delta)
        k = rng.randrange(d)
        l = rng.randrange(k, d)
        x = random_point(rng, d)
        out = finite_diff_check(P, C, r, k, l, x, h=h, delta=delta)
        res.check(out.rel_err <= tol, f"cfg {cfg} d={d} r={r} (k,l)=({k},{l})", f"<= {tol}", out.rel_err)
    return res


def _random_class_term(rng: random.Random) -> RatClassTerm:
    d, r = rng.randint(1, 3), rng.randint(1, 3)
    delta = rng.choice(DELTAS)
    pool = [random_W_matrix(rng, d, delta) for _ in range(rng.randint(1, r))]
    denoms = tuple(rng.choice(pool) for _ in range(r))
    return RatClassTerm(random_monomial(rng, 2 * r, d), denoms, delta)


def check_sup_sandwich(p: dict, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    res = CheckResult("sup-norm sandwich and certificates", budget_s=60)
    rng = random.Random(seed)
    grids = {d: sample_grid(d, seed=seed) for d in (1, 2, 3)}
    for idx in range(p["sup_terms"]):
        t = _random_class_term(rng)
        b = sup_bounds(t, grids[t.dim])
        lo_ok = float(b.lower) * (1 - tol) <= b.empirical_sup
        hi_ok = b.empirical_sup <= float(b.upper) * (1 + tol)
        res.check(lo_ok and hi_ok, f"term {idx} d={t.dim} r={t.r}", f"[{float(b.lower)}, {float(b.upper)}]", b.empirical_sup)
        combo = RatCombo(((Fraction(1), t),))
        cert = norm_certificate(combo, t.delta, t.r, len(t.distinct_denoms()))
        sup = combo_sup(combo, grids[t.dim])
        res.check(sup <= float(cert / t.delta**t.r) * (1 + tol), f"term {idx} certificate")

    # combinations: difference decompositions and the two-term split
    combos: list[tuple[str, RatCombo, Fraction, int, int]] = []
    for idx in range(max(1, p["sup_terms"] // 5)):
        d, r = rng.randint(1, 2), rng.randint(1, 3)
        delta = rng.choice(DELTAS)
        C, D = _random_W_pair(rng, d, delta)
        combos.append((f"diff {idx}", difference_decompose(random_monomial(rng, 2 * r, d), C, D, r, delta), delta, r + 1, 2))
    for alpha, delta in ((Fraction(1, 2), Fraction(1, 4)), (Fraction(1, 10), Fraction(1, 20)), (Fraction(3, 4), Fraction(1, 2))):
        combos.append((f"two-term alpha={alpha}", two_term_split(alpha, delta), delta, 2, 2))
    for name, combo, delta, r, j in combos:
        cert = norm_certificate(combo, delta, r, j)
        sup = combo_sup(combo, grids[combo.dim])
        res.check(sup <= float(cert / delta**r) * (1 + tol), f"{name} certificate", f"<= {float(cert / delta**r)}", sup)
    return res


def check_semipole(p: dict, seed: int = 0, tol: float = 1e-5) -> CheckResult:
    res = CheckResult("semipole recovery", budget_s=60)
    rng = random.Random(seed)
    for idx in range(p["semipole_sums"]):
        f = random_meromorphic_sum(rng)
        for y in sorted({z.imag for _, z, _ in f.terms}):
            scale = max(abs(a) for a, z, _ in f.terms if z == 1j * y)
            for est, j in zip(recover_coefficients(f, y, 3), (3, 2, 1)):
                c = f.coefficient(1j * y, j)
                err = abs(est.value - c) / (abs(c) if c else scale)
                res.check(err <= tol, f"sum {idx} y={y:.4f} order {j}", f"{c:.6g}", f"{est.value:.6g} (rel {err:.2e})")
    for idx in range(p["witnesses"]):
        d, r = rng.randint(1, 3), rng.randint(1, 3)
        delta = rng.choice(DELTAS)
        C, D = _random_W_pair(rng, d, delta)
        w = norm_two_witness(random_monomial(rng, 2 * r, d), C, D, r, delta, seed=idx)
        res.check(w.opposite_signs, f"witness {idx} d={d} r={r}", "(+,-)", f"({w.normalized_C:.4g}, {w.normalized_D:.4g})")
    return res


def check_counterexample(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("counterexample identity", budget_s=5)
    res.check(verify_counterexample(), "2/((1+x^2)(1+3x^2)) - 1/((1+x^2)(1+2x^2)) = 1/((1+2x^2)(1+3x^2))")
    return res


def check_asymptotics(p: dict, seed: int = 0) -> CheckResult:
    res = CheckResult("asymptotics", budget_s=60)
    for n in p["asym_n"]:
        lo, hi = ASYMPTOTIC_WINDOWS[n]
        rep = asymptotics_report(n)
        for name in ("S_gap_ratio", "T_ratio", "cnn_gap_ratio"):
            v = getattr(rep, name)
            res.check(lo <= v <= hi, f"{name} n={n}", f"[{lo}, {hi}]", v)
    for n in range(1, p["R_max"] + 1):
        R = R_series(n)
        res.check(R <= Fraction(3, 2), f"R_{n} <= 3/2", "<= 3/2", float(R))
    return res


def check_corrupted(p: dict, seed: int = 0) -> CheckResult:
    """Harness self-test: compares against a deliberately wrong expected value."""
    res = CheckResult("self-test (corrupted expectation)")
    total = S_head(1) + c_closed(1, 1) + T_closed(1)
    wrong = Fraction(4, 3) + 1
    res.check(total == wrong, "fthton n=1 against corrupted (4/3)+1", q_str(wrong), q_str(total))
    return res


CRITERIA: list[tuple[int, Callable[..., CheckResult]]] = [
    (1, check_coeff_oracle),
    (2, check_telescoping),
    (3, check_aux_identities),
    (4, check_partial_fractions),
    (5, check_difference),
    (6, check_derivative),
    (7, check_sup_sandwich),
    (8, check_semipole),
    (9, check_counterexample),
    (10, check_asymptotics),
]


def run_criterion(fn: Callable[..., CheckResult], profile: str = "full", seed: int = 0) -> CheckResult:
    start = time.perf_counter()
    res = fn(PROFILES[profile], seed=seed)
    res.elapsed_s = time.perf_counter() - start
    return res


def run_all(profile: str = "quick", seed: int = 0, corrupt: bool = False, log: Callable[[str], None] | None = None) -> list[CheckResult]:
    results = []
    fns = [fn for _, fn in CRITERIA] + ([check_corrupted] if corrupt else [])
    for fn in fns:
        r = run_criterion(fn, profile, seed)
        if log:
            log(r.line())
        results.append(r)
    return results
