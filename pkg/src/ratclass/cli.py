"""Command-line front end: ``ratclass <command> [options]``.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
parameter error. Exact quantities are always written as "p/q" strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import checks
from .checks import CheckResult
from .coeffs import asymptotics_report, c_closed, c_oracle_sweep
from .exactmath import q_str, to_q
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
from .quadforms import SymRationalMatrix, check_delta, in_W_delta
from .ratfun import (
    ClassMembershipError,
    MonicMonomial,
    RatClassTerm,
    RatCombo,
    class_check,
    combo_sup,
    difference_decompose,
    norm_certificate,
    random_point,
    sample_grid,
    sup_bounds,
    term_eval,
)
from .semipole import (
    GenericityError,
    genericity_check,
    norm_two_witness,
    random_direction,
    ray_restrict,
    recover_coefficients,
    verify_counterexample,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    parameters: dict = field(default_factory=dict)
    checks_passed: int = 0
    checks_failed: int = 0
    failures: list[dict] = field(default_factory=list)
    wall_time_ms: int = 0

    def record(self, ok: bool, case: str, expected="true", actual="false") -> bool:
        if ok:
            self.checks_passed += 1
        else:
            self.checks_failed += 1
            self.failures.append({"case": case, "expected": str(expected), "actual": str(actual)})
        return ok

    def absorb(self, res: CheckResult, prefix: str = "") -> None:
        self.checks_passed += res.passed
        for f in res.failures:
            self.checks_failed += 1
            self.failures.append({"case": prefix + f.case, "expected": f.expected, "actual": f.actual})

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.checks_failed == 0 else EXIT_CHECK

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "checks_passed": self.checks_passed,
            "checks_failed": self.checks_failed,
            "failures": self.failures,
            "wall_time_ms": self.wall_time_ms,
        }

    @classmethod
    def from_json(cls, data) -> "RunReport":
        if isinstance(data, str):
            data = json.loads(data)
        rep = cls(**data)
        if rep.checks_failed != len(rep.failures):
            raise ValueError("checks_failed must equal the number of failures")
        return rep

    def summary(self) -> str:
        status = "PASS" if self.exit_code == 0 else "FAIL"
        return f"{status} {self.command}: {self.checks_passed} passed, {self.checks_failed} failed in {self.wall_time_ms} ms"


@dataclass
class Output:
    """What a command produces besides its report."""

    data: object = None
    rows: list[dict] = field(default_factory=list)
    text: list[str] = field(default_factory=list)


# --- parsing helpers ----------------------------------------------------------------


def _q(text: str) -> Fraction:
    try:
        return to_q(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _load_json(text: str):
    """Inline JSON, ``@path``, or a path to an existing file."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _matrix(text: str) -> SymRationalMatrix:
    data = _load_json(text)
    if isinstance(data, (int, str)):
        return SymRationalMatrix.scalar(to_q(data))
    if isinstance(data, float):
        raise UsageError(f"matrix entries must be exact rationals, got {text!r}")
    return SymRationalMatrix.from_rows(data)


def _monomial(text: str) -> MonicMonomial:
    try:
        return MonicMonomial(tuple(int(v) for v in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"monomial exponents must be comma-separated integers: {text!r}") from exc


def _combo(text: str) -> RatCombo:
    return RatCombo.from_json(_load_json(text))


def _require_W(delta: Fraction, **mats: SymRationalMatrix) -> None:
    for name, M in mats.items():
        if not in_W_delta(M, delta):
            raise UsageError(f"{name} = {M.to_json()} is not in W_delta for delta = {q_str(delta)}")


def _cplx(z: complex) -> list[float]:
    return [z.real, z.imag]


# --- commands -----------------------------------------------------------------------


def cmd_coeffs(args, rep: RunReport) -> Output:
    if args.n_max < 0 or args.extra < 0:
        raise UsageError("n-max and extra must be nonnegative")
    rep.parameters.update(n_max=args.n_max, extra=args.extra)
    out = Output()
    for table in c_oracle_sweep(args.n_max, args.extra):
        for _, i, oracle in table.rows():
            closed = c_closed(table.n, i)
            ok = rep.record(closed == oracle, f"c_closed({table.n},{i})", q_str(oracle), q_str(closed))
            if closed == 0 and oracle == 0:
                continue  # identically zero rows are checked but not listed
            out.rows.append({"n": table.n, "i": i, "closed": q_str(closed), "oracle": q_str(oracle), "match": ok})
    out.data = out.rows
    out.text = [f"c_{r['i']}^{r['n']} = {r['closed']}" + ("" if r["match"] else f"  MISMATCH oracle {r['oracle']}") for r in out.rows]
    return out


IDENTITY_SWEEPS = ("fthton", "ident", "vander", "cnnlo")


def cmd_identities(args, rep: RunReport) -> Output:
    only = IDENTITY_SWEEPS if args.only is None else tuple(s.strip() for s in args.only.split(","))
    unknown = set(only) - set(IDENTITY_SWEEPS)
    if unknown:
        raise UsageError(f"unknown identity sweep(s): {', '.join(sorted(unknown))}")
    rep.parameters.update(
        only=list(only), fthton_n=args.fthton_n, ident_n=args.ident_n, vander_b=args.vander_b,
        vander_l=args.vander_l, cnnlo_n=args.cnnlo_n, cnnlo_l=args.cnnlo_l, corrupt=args.corrupt,
    )
    runs: dict[str, Callable[[CheckResult], None]] = {
        "fthton": lambda r: checks.sweep_fthton(r, args.fthton_n),
        "ident": lambda r: checks.sweep_ident(r, args.ident_n),
        "vander": lambda r: checks.sweep_vander(r, args.vander_b, args.vander_l),
        "cnnlo": lambda r: checks.sweep_cnnlo(r, args.cnnlo_n, args.cnnlo_l),
    }
    out = Output()
    for name in only:
        res = CheckResult(name)
        runs[name](res)
        rep.absorb(res)
        out.rows.append({"identity": name, "passed": res.passed, "failed": res.failed})
    if args.corrupt:
        res = checks.check_corrupted({})
        rep.absorb(res)
        out.rows.append({"identity": "corrupted-self-test", "passed": res.passed, "failed": res.failed})
    out.data = out.rows
    out.text = [f"{r['identity']}: {r['passed']} passed, {r['failed']} failed" for r in out.rows]
    return out


def cmd_pfrac(args, rep: RunReport) -> Output:
    out = Output()
    if args.kind == "pm":
        if args.m is None or args.n is None or args.m < 1 or args.n < 1:
            raise UsageError("pm needs --m and --n, both positive")
        rep.parameters.update(kind="pm", m=args.m, n=args.n)
        e = decomp_pm(args.m, args.n)
        rep.record(all(v > 0 for v in e.a + e.b), "all coefficients positive")
        rep.record(e.total() == 1, "coefficients sum to 1", "1", q_str(e.total()))
        for z in (Fraction(0), Fraction(1, 3), Fraction(-5, 2), Fraction(7)):
            rep.record(pm_recombine_check(e, z), f"recombination at z={z}")
        out.data = {"m": e.m, "n": e.n, "a": [q_str(v) for v in e.a], "b": [q_str(v) for v in e.b]}
        out.rows = [{"side": "a", "j": j, "value": q_str(v)} for j, v in enumerate(e.a, 1)]
        out.rows += [{"side": "b", "j": j, "value": q_str(v)} for j, v in enumerate(e.b, 1)]
    elif args.kind == "alphas":
        if args.k is None or args.k < 1:
            raise UsageError("alphas needs a positive --k")
        rep.parameters.update(kind="alphas", k=args.k)
        e = decomp_alphas(args.k)
        w = e.weight()
        rep.record(e.crude_bound_holds(), "1 + 2 sum|alpha| <= 2^k", f"<= {2**args.k}", q_str(w))
        rep.record(e.improved_bound_holds(), "1 + 2 sum|alpha| <= 2 (4/3)^k", f"<= {q_str(2 * Fraction(4, 3) ** args.k)}", q_str(w))
        rep.record(alpha_vs_c_check(args.k), "alpha_{k-j} = (-1)^j c_j^k")
        for z in (Fraction(0), Fraction(1, 3), Fraction(5, 2)):
            rep.record(alphas_recombine_check(e, z), f"recombination at z={z}")
        out.data = dict(e.to_json(), weight=q_str(w))
        out.rows = [{"j": j, "alpha": q_str(v)} for j, v in enumerate(e.alphas, 1)]
    else:
        if args.k is None or args.k < 1 or args.C is None or args.delta is None:
            raise UsageError("quadpole needs a positive --k, --C and --delta")
        delta = check_delta(args.delta)
        if not delta < args.C < 1 / delta:
            raise UsageError(f"C = {q_str(args.C)} lies outside ({q_str(delta)}, {q_str(1 / delta)})")
        rep.parameters.update(kind="quadpole", k=args.k, C=q_str(args.C), delta=q_str(delta))
        e = decomp_quad_pole(args.k, args.C, delta)
        mass = e.coefficient_mass()
        rep.record(quad_pole_bound_holds(e), "1/C^k + sum |A_v| + |B_v| <= 2^k delta^(-3k/2)", f"<= {e.bound():.6g}", f"{mass:.6g}")
        rep.record(quad_pole_symbolic_check(e), "exact recombination in Q(sqrt(-1/C))")
        err = quad_pole_recombine_check(e, samples=20, seed=args.seed)
        rep.record(err <= 1e-10 * max(1.0, mass), "numeric recombination", "<= 1e-10 rel", f"{err:.3g}")
        out.data = dict(e.to_json(), coefficient_mass=mass, bound=e.bound())
        out.rows = [{"v": v, "A": json.dumps(_cplx(a)), "B": json.dumps(_cplx(b))} for v, (a, b) in enumerate(zip(e.complex_A(), e.complex_B()), 1)]
    out.text = [json.dumps(out.data)]
    return out


def cmd_decompose_diff(args, rep: RunReport) -> Output:
    delta = check_delta(args.delta)
    P, C, D = _monomial(args.P), _matrix(args.C), _matrix(args.D)
    if args.r < 1 or P.degree != 2 * args.r:
        raise UsageError(f"numerator degree {P.degree} must equal 2r with r >= 1")
    if not C.dim == D.dim == P.dim:
        raise UsageError("P, C and D dimensions differ")
    _require_W(delta, C=C, D=D)
    rep.parameters.update(P=list(P.exponents), C=C.to_json(), D=D.to_json(), r=args.r, delta=q_str(delta), points=args.points, seed=args.seed)
    combo = difference_decompose(P, C, D, args.r, delta)
    d = P.dim
    rep.record(len(combo) == args.r * d * (d + 1) // 2, "term count r d(d+1)/2", args.r * d * (d + 1) // 2, len(combo))
    flags = []
    for idx, (_, t) in enumerate(combo.terms):
        ok = rep.record(class_check(t, 2, r=args.r + 1, delta=delta), f"term {idx} in F^(2)_(delta,r+1)")
        flags.append(ok)
    f = RatClassTerm(P, (C,) * args.r, delta)
    g = RatClassTerm(P, (D,) * args.r, delta)
    rng = random.Random(args.seed)
    for _ in range(args.points):
        x = random_point(rng, d)
        lhs, rhs = term_eval(g, x) - term_eval(f, x), combo(x)
        rep.record(lhs == rhs, f"pointwise at x={[q_str(v) for v in x]}", q_str(lhs), q_str(rhs))
    out = Output()
    out.data = {"combo": combo.to_json(), "in_class": flags, "certificate": q_str(combo.abs_sum())}
    out.rows = [
        {"term": idx, "lambda": q_str(lam), "P": json.dumps(list(t.P.exponents)), "factors": t.r, "distinct": len(t.distinct_denoms()), "in_class": flags[idx]}
        for idx, (lam, t) in enumerate(combo.terms)
    ]
    out.text = [f"{r['lambda']} * x^{r['P']} / ({r['factors']} factors, {r['distinct']} distinct)" for r in out.rows]
    return out


def _estimate_json(j: int, est) -> dict:
    return {"order": j, "value": _cplx(est.value), "error": est.error, "reliable": est.reliable}


def cmd_recover(args, rep: RunReport) -> Output:
    out = Output()
    if args.mode == "counterexample":
        rep.record(verify_counterexample(), "2/((1+x^2)(1+3x^2)) - 1/((1+x^2)(1+2x^2)) = 1/((1+2x^2)(1+3x^2))")
        out.data = {"identity": "2/((1+x^2)(1+3x^2)) - 1/((1+x^2)(1+2x^2)) = 1/((1+2x^2)(1+3x^2))", "verified": rep.checks_failed == 0}
        out.text = [out.data["identity"] + ("  verified" if out.data["verified"] else "  FAILED")]
        return out

    if args.mode == "witness":
        if None in (args.P, args.C, args.D, args.r, args.delta):
            raise UsageError("witness needs --P, --C, --D, --r and --delta")
        delta = check_delta(args.delta)
        P, C, D = _monomial(args.P), _matrix(args.C), _matrix(args.D)
        if P.degree != 2 * args.r or not C.dim == D.dim == P.dim:
            raise UsageError("need deg P = 2r and matching dimensions")
        if C == D:
            raise UsageError("C and D must differ")
        _require_W(delta, C=C, D=D)
        rep.parameters.update(mode="witness", P=list(P.exponents), C=C.to_json(), D=D.to_json(), r=args.r, delta=q_str(delta), seed=args.seed)
        w = norm_two_witness(P, C, D, args.r, delta, seed=args.seed)
        for name, est in (("C", w.c_at_C), ("D", w.c_at_D), ("unit C", w.unit_at_C), ("unit D", w.unit_at_D)):
            rep.record(est.reliable, f"error bar at {name} pole", f"<= {1e-4}", f"{est.error:.3g}")
        rep.record(w.opposite_signs, "top coefficients have opposite signs", "(+,-)", f"({w.normalized_C.real:.6g}, {w.normalized_D.real:.6g})")
        out.data = w.to_json()
        sign = lambda z: "+" if z.real > 0 else "-"
        out.text = [
            f"direction alpha = {[q_str(a) for a in w.alpha]}",
            f"pole at C: y = {w.y_C:.10g}, normalized top coefficient {w.normalized_C.real:.10g} ({sign(w.normalized_C)})",
            f"pole at D: y = {w.y_D:.10g}, normalized top coefficient {w.normalized_D.real:.10g} ({sign(w.normalized_D)})",
        ]
        out.rows = [
            {"pole": "C", "y": w.y_C, "normalized": w.normalized_C.real, "sign": sign(w.normalized_C)},
            {"pole": "D", "y": w.y_D, "normalized": w.normalized_D.real, "sign": sign(w.normalized_D)},
        ]
        return out

    if args.combo is None:
        raise UsageError("raw recovery needs --combo")
    combo = _combo(args.combo)
    if args.alpha is not None:
        alpha = tuple(_q(a) for a in args.alpha.split(","))
        if not genericity_check(alpha, combo):
            raise GenericityError(f"direction {args.alpha} is not generic for this combination")
    else:
        rng = random.Random(args.seed)
        for _ in range(50):
            alpha = random_direction(combo.dim, rng=rng)
            if genericity_check(alpha, combo):
                break
        else:
            raise GenericityError("no generic direction found in 50 draws")
    sl = ray_restrict(combo, alpha)
    max_order = args.max_order or max(t.r for _, t in combo.terms)
    if args.y is not None:
        ys = [args.y]
    else:
        mats: list[SymRationalMatrix] = []
        for _, t in combo.terms:
            mats += [M for M in t.denoms if M not in mats]
        ys = sorted({sl.pole_y(M) for M in mats})
    rep.parameters.update(mode="raw", alpha=[q_str(a) for a in alpha], y=ys, max_order=max_order, seed=args.seed)
    poles = []
    for y in ys:
        ests = recover_coefficients(sl.eval_complex, y, max_order)
        for j, est in zip(range(max_order, 0, -1), ests):
            rep.record(est.reliable, f"error bar y={y:.10g} order {j}", f"<= {1e-4}", f"{est.error:.3g}")
            out.rows.append({"y": y, "order": j, "re": est.value.real, "im": est.value.imag, "error": est.error})
        poles.append({"y": y, "coefficients": [_estimate_json(j, e) for j, e in zip(range(max_order, 0, -1), ests)]})
    out.data = {"alpha": [q_str(a) for a in alpha], "poles": poles}
    out.text = [f"y={r['y']:.10g} order {r['order']}: {r['re']:.10g}{r['im']:+.10g}i (+-{r['error']:.2g})" for r in out.rows]
    return out


def cmd_bounds(args, rep: RunReport) -> Output:
    combo = _combo(args.combo)
    if not combo.terms:
        raise UsageError("empty combination")
    delta = check_delta(args.delta) if args.delta is not None else min(t.delta for _, t in combo.terms)
    r = args.r or max(t.r for _, t in combo.terms)
    j = args.j or max(len(t.distinct_denoms()) for _, t in combo.terms)
    rep.parameters.update(delta=q_str(delta), r=r, j=j, seed=args.seed)
    grid = sample_grid(combo.dim, seed=args.seed)
    out = Output()
    for idx, (lam, t) in enumerate(combo.terms):
        b = sup_bounds(t, grid)
        rep.record(b.consistent, f"term {idx} sandwich", f"[{float(b.lower):.6g}, {float(b.upper):.6g}]", f"{b.empirical_sup:.6g}")
        out.rows.append({"term": idx, "lambda": q_str(lam) if isinstance(lam, Fraction) else lam, "lower": q_str(b.lower), "empirical_sup": b.empirical_sup, "upper": q_str(b.upper)})
    try:
        cert = norm_certificate(combo, delta, r, j)
    except ClassMembershipError as exc:
        raise UsageError(str(exc)) from exc
    sup = combo_sup(combo, grid)
    limit = float(cert / delta**r) if isinstance(cert, Fraction) else cert / float(delta) ** r
    rep.record(sup <= limit * (1 + 1e-9), "sup |g| <= certificate / delta^r", f"<= {limit:.6g}", f"{sup:.6g}")
    cert_s = q_str(cert) if isinstance(cert, Fraction) else cert
    out.data = {"terms": out.rows, "certificate": cert_s, "combo_sup": sup, "sup_limit": limit}
    out.text = [f"term {r_['term']}: {r_['lower']} <= {r_['empirical_sup']:.6g} <= {r_['upper']}" for r_ in out.rows]
    out.text.append(f"certificate {cert_s}; sampled sup {sup:.6g} <= {limit:.6g}")
    return out


def cmd_asymptotics(args, rep: RunReport) -> Output:
    if args.n < 1:
        raise UsageError("n must be positive")
    rep.parameters.update(n=args.n)
    a = asymptotics_report(args.n)
    lo, hi = checks.ASYMPTOTIC_WINDOWS.get(args.n, (None, None))
    if lo is not None:
        for name in ("cnn_gap_ratio", "T_ratio", "S_gap_ratio"):
            v = getattr(a, name)
            rep.record(lo <= v <= hi, f"{name} in [{lo}, {hi}]", f"[{lo}, {hi}]", v)
    rep.record(a.R_within_bound, "R_n <= 3/2", "<= 3/2", q_str(a.R_n))
    out = Output(data=a.to_json())
    out.rows = [out.data]
    out.text = [f"{k} = {v}" for k, v in out.data.items() if k != "R_n"]
    return out


def cmd_verify_all(args, rep: RunReport) -> Output:
    rep.parameters.update(profile=args.profile, seed=args.seed, corrupt=args.corrupt)
    out = Output()
    log = (lambda line: print(line, file=sys.stderr)) if args.format == "text" and args.out is None and args.verbose else None
    for res in checks.run_all(args.profile, seed=args.seed, corrupt=args.corrupt, log=log):
        rep.absorb(res, prefix=f"{res.name}: ")
        if not res.within_budget:
            rep.record(False, f"{res.name}: runtime budget", f"<= {res.budget_s} s", f"{res.elapsed_s:.1f} s")
        out.rows.append({"criterion": res.name, "passed": res.passed, "failed": res.failed, "seconds": round(res.elapsed_s, 3), "ok": res.ok})
    out.data = out.rows
    out.text = [f"[{'PASS' if r['ok'] else 'FAIL'}] {r['criterion']}: {r['passed']} passed, {r['failed']} failed ({r['seconds']:.1f}s)" for r in out.rows]
    return out


COMMANDS: dict[str, Callable] = {
    "coeffs": cmd_coeffs,
    "identities": cmd_identities,
    "pfrac": cmd_pfrac,
    "decompose-diff": cmd_decompose_diff,
    "recover": cmd_recover,
    "bounds": cmd_bounds,
    "asymptotics": cmd_asymptotics,
    "verify-all": cmd_verify_all,
}


# --- argument parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="ratclass", description="Exact verification of rational-function class decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="coefficients c_i^n, closed form vs series oracle")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--extra", type=int, default=10, help="list i up to n + extra")

    p = sub.add_parser("identities", parents=[common], help="binomial and coefficient identity sweeps")
    p.add_argument("--only", help=f"comma list from {','.join(IDENTITY_SWEEPS)}")
    p.add_argument("--fthton-n", type=int, default=200)
    p.add_argument("--ident-n", type=int, default=40)
    p.add_argument("--vander-b", type=int, default=40)
    p.add_argument("--vander-l", type=int, default=10)
    p.add_argument("--cnnlo-n", type=int, default=40)
    p.add_argument("--cnnlo-l", type=int, default=10)
    p.add_argument("--corrupt", action="store_true", help="add a deliberately failing check (harness self-test)")

    p = sub.add_parser("pfrac", parents=[common], help="closed-form partial fraction expansions")
    p.add_argument("kind", choices=("pm", "alphas", "quadpole"))
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--C", type=_q)
    p.add_argument("--delta", type=_q)

    p = sub.add_parser("decompose-diff", parents=[common], help="split P/h_D^r - P/h_C^r into level r+1 terms")
    p.add_argument("--P", required=True, help="monomial exponents, e.g. 1,1")
    p.add_argument("--C", required=True, help="matrix as JSON rows or a scalar")
    p.add_argument("--D", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--delta", type=_q, required=True)
    p.add_argument("--points", type=int, default=20)

    p = sub.add_parser("recover", parents=[common], help="semipole coefficient recovery along a ray")
    p.add_argument("mode", choices=("raw", "witness", "counterexample"))
    p.add_argument("--combo", help="combination JSON, inline or @file")
    p.add_argument("--alpha", help="direction, comma list of rationals in [1, 2]")
    p.add_argument("--y", type=float, help="probe only this pole height")
    p.add_argument("--max-order", type=int)
    p.add_argument("--P")
    p.add_argument("--C")
    p.add_argument("--D")
    p.add_argument("--r", type=int)
    p.add_argument("--delta", type=_q)

    p = sub.add_parser("bounds", parents=[common], help="sup-norm sandwich and norm certificate of a combination")
    p.add_argument("--combo", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--delta", type=_q)

    p = sub.add_parser("asymptotics", parents=[common], help="first-order asymptotic ratios and R_n")
    p.add_argument("--n", type=int, default=1000)

    p = sub.add_parser("verify-all", parents=[common], help="run every acceptance sweep")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--corrupt", action="store_true", help="add a deliberately failing check (harness self-test)")
    p.add_argument("-v", "--verbose", action="store_true", help="stream per-sweep lines to stderr")
    return parser


# --- rendering ----------------------------------------------------------------------


def render(fmt: str, rep: RunReport, out: Output) -> str:
    if fmt == "json":
        return json.dumps({"report": rep.to_json(), "result": out.data}, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if out.rows:
            writer = csv.DictWriter(buf, fieldnames=list(out.rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(out.rows)
        return buf.getvalue()
    lines = list(out.text)
    lines += [f"  failed: {f['case']} (expected {f['expected']}, got {f['actual']})" for f in rep.failures[:20]]
    if len(rep.failures) > 20:
        lines.append(f"  ... {len(rep.failures) - 20} more failures")
    lines.append(rep.summary())
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    rep = RunReport(args.command)
    start = time.perf_counter()
    try:
        out = COMMANDS[args.command](args, rep)
    except GenericityError as exc:
        print(f"ratclass: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (UsageError, ValueError, TypeError, KeyError, ZeroDivisionError, OSError) as exc:
        print(f"ratclass {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep.wall_time_ms = int((time.perf_counter() - start) * 1000)
    text = render(args.format, rep, out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.format == "csv":
        print(rep.summary(), file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
