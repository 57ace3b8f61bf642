"""Command-line entry point: ``neglecton <command> [options]``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or guard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .anyondata import compare_tables
from .compile import (ALT_ROOT_CLOSED, DEFAULT_BRACKETS, NC1_ROOT_CLOSED, THETA_BAR_CLOSED,
                      alt_phase_gate, entangling_check, find_decoupling_alpha,
                      predicted_offdiag, reichardt_step, step1_signed, universality_check)
from .errors import (IntegerAlpha, InvalidLabel, InvalidWord, LeakyGate, NeglectonError,
                     UnsupportedN)
from .intertwine import pentagon_residual, supported_tuples
from .qubits import (build_alt_space, build_space, generator_matrix, indefinite_unitarity_residual,
                     leakage, normalize, word_matrix)
from .repcore import (Neglecton, RootData, Simple, check_alpha, module, quantum_dimension,
                      yang_baxter_residual, zigzag_residuals)

DEFAULT_TOL = {"relations": 1e-10, "pentagon": 1e-8, "yangbaxter": 1e-9, "unitarity": 1e-8,
               "braidrelations": 1e-8, "trace": 1e-10, "recursion": 1e-9}
GUARD_ERRORS = (InvalidLabel, IntegerAlpha, InvalidWord, UnsupportedN)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- config

def parse_alpha(text: str):
    """'2.3' -> 2.3, '23/10' -> Fraction(23, 10)."""
    try:
        if "/" in text:
            return Fraction(text.strip())
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse alpha {text!r}") from exc


def tolerances(override: float | None) -> dict:
    env = os.environ.get("NEGLECTON_TOL")
    value = override if override is not None else (float(env) if env else None)
    if value is None:
        return dict(DEFAULT_TOL)
    if value < 1e-14:
        raise UsageError("tolerance overrides must be >= 1e-14")
    return {k: value for k in DEFAULT_TOL}


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): to_jsonable(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def envelope(args, data) -> dict:
    return {"meta": {"r": args.r, "alpha": args.alpha_raw, "tolerances": args.tol,
                     "version": __version__},
            "data": data}


def emit(args, payload: dict, rows: list | None = None) -> None:
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(to_jsonable(payload), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_alpha(args) -> float:
    if args.alpha is None:
        raise UsageError("--alpha is required for this command")
    a = float(args.alpha)
    check_alpha(a, args.rd)
    return a


def _fmt(z) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else f"{z.real!r}{z.imag:+}j"


# ---------------------------------------------------------------- commands

def cmd_tables(args) -> int:
    a = _need_alpha(args)
    if abs(a - round(a)) < 1e-12:
        raise IntegerAlpha(f"integer alpha {a} is not allowed")
    t = compare_tables(a, args.rd)
    data = {"f_symbols": {}, "r_symbols": t.r_symbols, "bubbles": t.bubbles, "flagged": t.flagged,
            "max_deviation": {"R": t.max_deviation("R"), "B": t.max_deviation("B")}}
    for key, rep in t.f_symbols.items():
        data["f_symbols"][key] = {k: rep[k] for k in ("rows", "cols", "solver", "closed", "ratio",
                                                      "column_ratio_std", "rank1_defect", "max_abs_dev",
                                                      "solver_order", "solver_cols")}
    rows = [["kind", "key", "solver", "closed", "deviation"]]
    for key, rep in t.f_symbols.items():
        rows.append(["F", "|".join(key), json.dumps(to_jsonable(rep["solver"])),
                     json.dumps(to_jsonable(rep["closed"])), repr(rep["column_ratio_std"])])
    for key, e in t.r_symbols.items():
        rows.append(["R", "|".join(key), _fmt(e["solver"]), _fmt(e["closed"]), repr(e["rel_dev"])])
    for key, e in t.bubbles.items():
        rows.append(["B", "|".join(key), repr(e["solver"]), repr(e["closed"]), repr(e["rel_dev"])])
    for name, msg in t.flagged.items():
        rows.append(["flag", name, "", "", msg])
    emit(args, envelope(args, data), rows)
    return 0


def _check(name, residual, tol, **extra):
    return {"check": name, "residual": float(residual), "tol": tol, "ok": bool(residual < tol), **extra}


def suite_relations(a, rd, tol):
    out = []
    labels = [Simple(n) for n in range(rd.r)] + [Neglecton(a)]
    for lab in labels:
        for k, v in module(lab, rd).relation_residuals().items():
            out.append(_check(f"{lab}:{k}", v, tol))
    return out


def suite_pentagon(a, rd, tol):
    out, skipped = [], 0
    for tup in supported_tuples(a, 4, rd=rd):
        try:
            res = pentagon_residual(*tup, rd=rd)
        except NeglectonError:
            skipped += 1
            continue
        out.append(_check("pentagon:" + ",".join(map(str, tup)), res, tol))
    out.append({"check": "pentagon:skipped_projective", "residual": 0.0, "tol": tol, "ok": True,
                "count": skipped})
    return out


def suite_yangbaxter(a, rd, tol):
    pool = [module(Simple(n), rd) for n in range(rd.r)] + [module(Neglecton(a), rd)]
    return [_check(f"yb:{U.label},{V.label},{W.label}", yang_baxter_residual(U, V, W), tol)
            for U, V, W in itertools.product(pool, repeat=3)]


def suite_unitarity(a, rd, tol):
    out = []
    for n in (1, 2):
        sp = build_space(n, a, rd)
        sig = "".join("+" if s > 0 else "-" for s in sp.signature)
        for i in range(1, 2 * n + 1):
            M = normalize(sp, generator_matrix(sp, i))
            out.append(_check(f"H{n}:gen{i}", indefinite_unitarity_residual(sp, M), tol,
                              signature=sig, definite=bool(len(set(sig)) == 1)))
    return out


def suite_braidrelations(a, rd, tol):
    sp = build_space(2, a, rd)
    g = {i: normalize(sp, generator_matrix(sp, i)) for i in (1, 2, 3, 4)}
    J1 = g[1]
    out = []
    for i in (2, 3):
        j = i + 1
        out.append(_check(f"b{i}b{j}b{i}", np.abs(g[i] @ g[j] @ g[i] - g[j] @ g[i] @ g[j]).max(), tol))
    out.append(_check("[b2,b4]", np.abs(g[2] @ g[4] - g[4] @ g[2]).max(), tol))
    for i in (3, 4):
        out.append(_check(f"[J1,b{i}]", np.abs(J1 @ g[i] - g[i] @ J1).max(), tol))
    out.append(_check("affine", np.abs(g[2] @ J1 @ g[2] @ J1 - J1 @ g[2] @ J1 @ g[2]).max(), tol))
    return out


def suite_trace(a, rd, tol):
    out = []
    for lab in [Simple(n) for n in range(rd.r)] + [Neglecton(a)]:
        V = module(lab, rd)
        z1, z2 = zigzag_residuals(V)
        out.append(_check(f"{lab}:zigzag", max(z1, z2), tol))
    for lab in (Simple(rd.r - 1), Neglecton(a)):
        out.append(_check(f"{lab}:qdim", abs(quantum_dimension(module(lab, rd))), tol))
    return out


def suite_recursion(a, rd, tol, seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        th = rng.uniform(-math.pi, math.pi)
        x = rng.uniform(0.0, 0.95)
        ph = np.exp(1j * rng.uniform(0, 2 * math.pi, 3))
        c = math.sqrt(1 - x * x)
        U = np.array([[c * ph[0], x * ph[1]], [-x * np.conj(ph[1]) * ph[2], c * np.conj(ph[0]) * ph[2]]])
        D = np.diag([np.exp(0.5j * th), np.exp(-0.5j * th)])
        got = abs(reichardt_step(U, D)[0, 1])
        worst = max(worst, abs(got - predicted_offdiag(U, th)) / max(got, 1e-300))
    return [_check("recursion:step1_formula", worst, tol, seed=seed)]


SUITES = {"relations": suite_relations, "pentagon": suite_pentagon, "yangbaxter": suite_yangbaxter,
          "unitarity": suite_unitarity, "braidrelations": suite_braidrelations, "trace": suite_trace}


def cmd_verify(args) -> int:
    a = _need_alpha(args)
    names = list(SUITES) + ["recursion"] if args.suite == "all" else [args.suite]
    report = {}
    for name in names:
        if name == "recursion":
            report[name] = suite_recursion(a, args.rd, args.tol[name], args.seed)
        else:
            report[name] = SUITES[name](a, args.rd, args.tol[name])
    ok = all(c["ok"] for checks in report.values() for c in checks)
    summary = {name: {"checks": len(c), "failed": sum(not x["ok"] for x in c),
                      "max_residual": max((x["residual"] for x in c), default=0.0)}
               for name, c in report.items()}
    rows = [["suite", "check", "residual", "tol", "ok"]]
    rows += [[name, c["check"], repr(c["residual"]), repr(c["tol"]), c["ok"]]
             for name, checks in report.items() for c in checks]
    emit(args, envelope(args, {"ok": ok, "summary": summary, "checks": report}), rows)
    return 0 if ok else 1


def cmd_braid(args) -> int:
    a = _need_alpha(args)
    if args.encoding == "alt":
        sp = build_alt_space(args.n, a, args.rd)
    else:
        sp = build_space(args.n, a, args.rd)
    M = word_matrix(sp, args.word or "")
    data = {"basis": [str(t) for t in sp.basis], "gram": sp.gram, "matrix": M,
            "leakage": leakage(sp, M), "indefinite_unitarity_residual": indefinite_unitarity_residual(sp, M)}
    if args.n == 2 and args.encoding == "standard":
        comp = sp.comp_index
        try:
            data["entangling"] = entangling_check(M[np.ix_(comp, comp)], data["leakage"])
        except LeakyGate as exc:
            data["entangling"] = None
            data["entangling_note"] = str(exc)
    rows = [["row"] + [str(t) for t in sp.basis]]
    rows += [[str(t)] + [_fmt(z) for z in M[k]] for k, t in enumerate(sp.basis)]
    emit(args, envelope(args, data), rows)
    return 0


def _sweep_value(obs, a, rd):
    if obs == "norms":
        g = build_space(1, a, rd).gram
        return [float(g[0]), float(g[1])]
    if obs == "signature":
        sp = build_space(2, a, rd)
        return ["".join("+" if s > 0 else "-" for s in sp.signature[sp.comp_index])]
    if obs == "leakage":
        s = step1_signed("NC1", a, "angle", rd)
        return [abs(s), s]
    if obs == "verdict":
        v = universality_check(a, rd)
        return [v.verdict]
    raise UsageError(f"unknown observable {obs}")


SWEEP_HEADERS = {"norms": ["g0", "g1"], "signature": ["comp_signature"],
                 "leakage": ["step1_offdiag", "step1_signed"], "verdict": ["universal"]}


def cmd_sweep(args) -> int:
    lo, hi = args.start, args.stop
    if args.step <= 0 or hi <= lo:
        raise UsageError("need start < stop and step > 0")
    n = int(math.floor((hi - lo) / args.step + 1e-9))
    records, skipped = [], []
    for k in range(n + 1):
        a = round(lo + k * args.step, 12)
        try:
            check_alpha(a, args.rd)
            if abs(a - round(a)) < 1e-9:
                raise IntegerAlpha(str(a))
            records.append([a] + _sweep_value(args.observable, a, args.rd))
        except (InvalidLabel, IntegerAlpha):
            skipped.append(a)
    header = ["alpha"] + SWEEP_HEADERS[args.observable]
    payload = envelope(args, {"observable": args.observable, "columns": header, "records": records,
                              "skipped": skipped})
    emit(args, payload, [header] + records)
    return 0


def _parse_bracket(text):
    if text is None:
        return None
    lo, hi = (float(x) for x in text.split(","))
    return (lo, hi)


def cmd_roots(args) -> int:
    data = {}
    try:
        r = find_decoupling_alpha("NC1", _parse_bracket(args.nc1_bracket), rd=args.rd)
        data["NC1"] = {"root": r, "closed_form": NC1_ROOT_CLOSED, "residual": abs(r - NC1_ROOT_CLOSED)}
    except NeglectonError as exc:
        data["NC1"] = {"error": type(exc).__name__, "message": str(exc)}
    try:
        r = find_decoupling_alpha("alt", _parse_bracket(args.alt_bracket), rd=args.rd)
        gate, tb, leak, _ = alt_phase_gate(r, args.rd)
        entry = {"root": r, "closed_form": ALT_ROOT_CLOSED, "residual": abs(r - ALT_ROOT_CLOSED),
                 "theta_bar": tb, "theta_bar_closed": THETA_BAR_CLOSED, "leakage": leak}
        neg = (-r) % 8
        _, tbn, leakn, _ = alt_phase_gate(neg, args.rd)
        entry["negative_branch"] = {"alpha": neg, "step1_signed": step1_signed("alt", neg, rd=args.rd),
                                    "theta_bar": tbn, "leakage": leakn}
        data["alt"] = entry
    except NeglectonError as exc:
        data["alt"] = {"error": type(exc).__name__, "message": str(exc)}
    rows = [["block", "root", "closed_form", "residual"]]
    rows += [[k, v.get("root", ""), v.get("closed_form", ""), v.get("residual", v.get("error", ""))]
             for k, v in data.items()]
    emit(args, envelope(args, data), rows)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=str, default=None, help="real or p/q")
    common.add_argument("--r", type=int, default=4)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="neglecton", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("tables", parents=[common])
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--suite", default="all", choices=list(SUITES) + ["recursion", "all"])
    b = sub.add_parser("braid", parents=[common])
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--word", default="")
    b.add_argument("--encoding", choices=("standard", "alt"), default="standard")
    s = sub.add_parser("sweep", parents=[common])
    s.add_argument("--observable", choices=tuple(SWEEP_HEADERS), default="norms")
    s.add_argument("--start", type=float, default=0.0)
    s.add_argument("--stop", type=float, default=4.0)
    s.add_argument("--step", type=float, default=0.01)
    r = sub.add_parser("roots", parents=[common])
    r.add_argument("--nc1-bracket", default=None, help=f"lo,hi (default {DEFAULT_BRACKETS['NC1']})")
    r.add_argument("--alt-bracket", default=None, help=f"lo,hi (default {DEFAULT_BRACKETS['alt']})")
    return p


COMMANDS = {"tables": cmd_tables, "verify": cmd_verify, "braid": cmd_braid, "sweep": cmd_sweep,
            "roots": cmd_roots}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.alpha_raw = args.alpha
        args.alpha = parse_alpha(args.alpha) if args.alpha is not None else None
        if isinstance(args.alpha, Fraction):
            args.alpha_raw = f"{args.alpha.numerator}/{args.alpha.denominator}"
        elif args.alpha is not None:
            args.alpha_raw = args.alpha
        args.tol = tolerances(args.tol)
        args.rd = RootData(r=args.r)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except GUARD_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
