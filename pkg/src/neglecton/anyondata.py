"""Closed-form F, R and bubble data for the Ising sector with one neglecton leg.

Keys use symbolic labels: "0".."3" for simples and "a", "a+1", "a-2", ...
for neglectons relative to the parameter alpha.  ``compare_tables`` runs
the numerical solvers on the same keys and reports the deviations; it
never decides which side is right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IntegerAlpha, InvalidLabel, NeglectonError, UnknownKey
from .hermite import bubble_pop
from .intertwine import f_symbol, r_symbol
from .repcore import DEFAULT_ROOT, Neglecton, RootData, Simple

SQ2 = math.sqrt(2.0)


def resolve(sym: str, alpha: float):
    """Turn "a-1" into Neglecton(alpha - 1), "2" into Simple(2)."""
    sym = sym.replace(" ", "")
    if sym.startswith("a"):
        off = int(sym[1:]) if len(sym) > 1 else 0
        return Neglecton(alpha + off)
    return Simple(int(sym))


def _window_sign(alpha: float, period: float, plus: list) -> int:
    if abs(alpha - round(alpha)) < 1e-12:
        raise IntegerAlpha(f"sign function undefined at integer alpha={alpha}")
    x = alpha % period
    return 1 if any(lo < x < hi for lo, hi in plus) else -1


def s_alpha(alpha: float) -> int:
    return _window_sign(alpha, 8.0, [(0, 1), (5, 8)])


def t_alpha(alpha: float) -> int:
    return _window_sign(alpha, 4.0, [(0, 1), (2, 4)])


# ---------------------------------------------------------------- F

def _f_table(alpha: float, rd: RootData):
    q = rd.q
    Q = rd.qpow(2 * alpha)
    q2 = q * q
    cot = 1.0 / math.tan(math.pi * alpha / 4)
    return {
        ("1", "1", "1", "1"): (("0", "2"), ("0", "2"),
                               np.array([[1, 1], [1, -1]]) / SQ2),
        ("a", "1", "1", "a"): (("0", "2"), ("a+1", "a-1"),
                               np.array([[q * (Q + q2), -(Q - 1)],
                                         [Q - q2, q * (Q - 1)]]) / (SQ2 * (Q - 1))),
        ("a", "2", "1", "a+1"): (("1", "3"), ("a", "a+2"),
                                 np.array([[(q2 - 1) * (Q + q2), (q2 + 1) * (Q + 1)],
                                           [(q2 + 1) * (Q + q2), Q - q2]]) / (Q + q2)),
        ("a", "2", "1", "a-1"): (("1", "3"), ("a", "a-2"),
                                 np.array([[(q2 + 1) * (Q + q2), -2 * (Q - q2)],
                                           [Q + 1, q2 * (Q - q2)]]) / (Q - q2)),
        ("a", "1", "2", "a+1"): (("1", "3"), ("a+1", "a-1"),
                                 np.array([[q2 * (Q + 1), -q * (Q - 1)],
                                           [SQ2 * (Q - q2), q2 * (Q - 1)]]) / (Q - 1)),
        ("a", "1", "2", "a-1"): (("1", "3"), ("a+1", "a-1"),
                                 np.array([[q * (q2 + 1) * (Q + q2), -(Q - 1)],
                                           [Q + 1, q * (Q - 1)]]) / (Q - 1)),
        # the cot parametrization of F^{a11}_a
        ("a", "1", "1", "a", "example"): (("0", "2"), ("a+1", "a-1"),
                                          np.array([[0.5 * (cot + 1), -1 / SQ2],
                                                    [-0.5 * q * (cot - 1), 0.5 + 0.5j]])),
    }


F_KEYS = (("1", "1", "1", "1"), ("a", "1", "1", "a"), ("a", "2", "1", "a+1"),
          ("a", "2", "1", "a-1"), ("a", "1", "2", "a+1"), ("a", "1", "2", "a-1"),
          ("a", "1", "1", "a", "example"))


def closed_form_f(key: tuple, alpha: float, rd: RootData = DEFAULT_ROOT):
    """Return (row labels, column labels, matrix) for a tabulated F-symbol."""
    table = _f_table(alpha, rd)
    if tuple(key) not in table:
        raise UnknownKey(f"no closed form for F{key}")
    return table[tuple(key)]


# ---------------------------------------------------------------- R

def ising_r(a: int, b: int, c: int) -> complex:
    base = 1j * np.exp(1j * np.pi / 8)
    return complex((-1) ** ((a + b - c) // 2) * base ** (-(a * (a + 2) + b * (b + 2) - c * (c + 2)) / 2))


def _r_table(alpha: float, rd: RootData):
    qp = rd.qpow
    a = alpha
    s = lambda: s_alpha(a)  # noqa: E731
    t = lambda: t_alpha(a)  # noqa: E731
    return {
        ("a", "2", "a+2"): lambda: qp(3 + a),
        ("2", "a", "a+2"): lambda: qp(3 + a),
        ("a", "1", "a+1"): lambda: qp((3 + a) / 2),
        ("1", "a", "a+1"): lambda: qp((3 + a) / 2),
        ("a", "2", "a"): lambda: s() * qp(1 - a),
        ("2", "a", "a"): lambda: s() * qp(3 + a),
        ("a", "1", "a-1"): lambda: s() * qp(-(1 + 3 * a) / 2),
        ("1", "a", "a-1"): lambda: s() * qp((7 + a) / 2),
        ("a", "2", "a-2"): lambda: t() * qp(1 - 3 * a),
        ("2", "a", "a-2"): lambda: t() * qp(5 + a),
        ("2", "1", "3"): lambda: qp(1),
        ("1", "2", "3"): lambda: qp(1),
        ("2", "1", "1"): lambda: qp(1),
        ("1", "2", "1"): lambda: qp(3),
        ("1", "1", "2"): lambda: qp(0.5),
        ("1", "1", "0"): lambda: qp(2.5),
    }


R_KEYS = tuple(_r_table(0.5, DEFAULT_ROOT).keys())


def closed_form_r(key: tuple, alpha: float, rd: RootData = DEFAULT_ROOT) -> complex:
    table = _r_table(alpha, rd)
    if tuple(key) not in table:
        raise UnknownKey(f"no closed form for R{key}")
    return complex(table[tuple(key)]())


# ---------------------------------------------------------------- bubbles

def _b_table(alpha: float):
    x = math.pi * alpha / 4
    cot = lambda: 1.0 / math.tan(x)  # noqa: E731
    tan = lambda: math.tan(x)  # noqa: E731
    one = lambda: 1.0  # noqa: E731
    return {
        ("a", "0", "a"): one,
        ("a", "1", "a+1"): one,
        ("a", "2", "a+2"): one,
        ("1", "1", "2"): one,
        ("2", "1", "3"): one,
        ("1", "2", "3"): one,
        # 1 x 1 has no channel 1, so this entry is B^{11}_0
        ("1", "1", "0"): lambda: -SQ2,
        ("2", "1", "1"): lambda: -1 / SQ2,
        ("1", "2", "1"): lambda: -SQ2,
        ("a", "1", "a-1"): lambda: SQ2 / (-1 + cot()),
        ("a+2", "2", "a"): lambda: 2 * cot(),
        ("a", "2", "a"): lambda: SQ2 * math.cos(2 * x) / (1 - math.sin(2 * x)),
        ("a", "3", "a+1"): lambda: SQ2 / (1 - tan()),
        ("a", "3", "a-1"): lambda: (2 + 2 * tan()) / (-1 + cot()),
    }


B_KEYS = tuple(_b_table(0.5).keys())


def closed_form_bubble(key: tuple, alpha: float) -> float:
    table = _b_table(alpha)
    if tuple(key) not in table:
        raise UnknownKey(f"no closed form for B{key}")
    return float(table[tuple(key)]())


# ---------------------------------------------------------------- comparison

def gauge_report(solver_rows, solver_cols, solver_mat, rows, cols, closed) -> dict:
    """Align by label and describe solver/closed ratios.

    column_ratio_std: spread of the ratio inside each column (0 means the two
    agree up to rescaling the left-tree vertices).  rank1_defect: how far the
    ratio matrix is from x_n * y_m (0 means agreement up to rescaling both
    trees' vertices).
    """
    P = np.array([[solver_mat[solver_rows.index(n), solver_cols.index(m)] for m in cols] for n in rows])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = P / closed
    finite = np.isfinite(ratio)
    col_std = 0.0
    for j in range(ratio.shape[1]):
        col = ratio[finite[:, j], j]
        if col.size > 1:
            col_std = max(col_std, float(np.std(col) / max(np.abs(np.mean(col)), 1e-300)))
    rank1 = 0.0
    if finite.all() and ratio.shape == (2, 2):
        rank1 = float(abs(ratio[0, 0] * ratio[1, 1] - ratio[0, 1] * ratio[1, 0])
                      / max(abs(ratio[0, 0] * ratio[1, 1]), 1e-300))
    return {"ratio": ratio, "column_ratio_std": col_std, "rank1_defect": rank1,
            "max_abs_dev": float(np.abs(P - closed).max())}


@dataclass
class AnyonTables:
    alpha: float
    f_symbols: dict = field(default_factory=dict)
    r_symbols: dict = field(default_factory=dict)
    bubbles: dict = field(default_factory=dict)
    flagged: dict = field(default_factory=dict)

    def max_deviation(self, kind: str) -> float:
        table = {"R": self.r_symbols, "B": self.bubbles}[kind]
        devs = [e["rel_dev"] for e in table.values()]
        return max(devs) if devs else 0.0


def compare_tables(alpha: float, rd: RootData = DEFAULT_ROOT) -> AnyonTables:
    out = AnyonTables(alpha)
    for key in F_KEYS:
        name = "F" + ",".join(key)
        try:
            rows, cols, C = closed_form_f(key, alpha, rd)
            F = f_symbol(*(resolve(k, alpha) for k in key[:4]), rd=rd)
            rep = gauge_report(F.rows, F.cols, F.matrix,
                               [resolve(x, alpha) for x in rows], [resolve(x, alpha) for x in cols], C)
            rep.update(solver=F.matrix, closed=C, rows=rows, cols=cols, residual=F.residual,
                       solver_order=[str(x) for x in F.rows], solver_cols=[str(x) for x in F.cols])
            out.f_symbols[key] = rep
        except NeglectonError as exc:
            out.flagged[name] = f"{type(exc).__name__}: {exc}"
    for key in R_KEYS:
        try:
            closed = closed_form_r(key, alpha, rd)
            R = r_symbol(*(resolve(k, alpha) for k in key), rd=rd)
            out.r_symbols[key] = {"solver": R.value, "raw": R.raw, "closed": closed,
                                  "rel_dev": abs(R.value - closed) / abs(closed)}
        except NeglectonError as exc:
            out.flagged["R" + ",".join(key)] = f"{type(exc).__name__}: {exc}"
    for key in B_KEYS:
        try:
            closed = closed_form_bubble(key, alpha)
            B = bubble_pop(*(resolve(k, alpha) for k in key), rd=rd)
            out.bubbles[key] = {"solver": B, "closed": closed,
                                "rel_dev": abs(B - closed) / max(abs(closed), 1e-300)}
        except (NeglectonError, InvalidLabel, ZeroDivisionError) as exc:
            out.flagged["B" + ",".join(key)] = f"{type(exc).__name__}: {exc}"
    return out
