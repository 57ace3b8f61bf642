"""Leakage suppression, decoupling roots, universality and gate certification.

The recursion is U_{k+1} = U_k D U_k^-1 D U_k D^-2 with D = diag(e^{i t/2}, e^{-i t/2}).
For a 2x2 U (unitary or indefinite unitary) one step gives

    U'_{01} = -e^{i t} U_{01} ((2 - 2 cos t) |U_00|^2 / |det U| - 1),

so the leakage vanishes when (2 - 2 cos t)|U_00|^2 = |det U|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .errors import (InvalidRotation, LeakyGate, NoRootInBracket,
                     OffDiagTooLarge)
from .qubits import (alt_generator, build_alt_space, build_space, generator_matrix,
                     normalize, su_rescaled_single_qubit, word_matrix)
from .repcore import DEFAULT_ROOT, RootData, check_alpha

SQ7 = math.sqrt(7.0)
NC1_ROOT_CLOSED = 2 - (2 / math.pi) * math.asin((1 - math.sqrt(17)) / 8)
ALT_ROOT_CLOSED = 0.5 + (2 / math.pi) * math.atan(5 / SQ7)
THETA_BAR_CLOSED = -math.pi / 4 + math.atan(5 / SQ7) - 0.5 * math.atan((64 + 11 * SQ7) / 57)

# braid words as signed generator indices, read left to right as matrix products
J_WORDS = {1: [1, 1], 2: [2, 1, 1, 2], 3: [3, 2, 1, 1, 2, 3]}
# J_3 on the alternative encoding: (b1 b2)^-3 (b1 b2 t b2 b1)(b2 t b2 t), t = generator 3
ALT_J3_WORD = [-2, -1] * 3 + [1, 2, 3, 2, 1] + [2, 3, 2, 3]


def invert_word(word):
    return None if word is None else [-g for g in reversed(word)]


def d_theta(theta: float) -> np.ndarray:
    return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])


def rotation_angle(D: np.ndarray, pair=(0, 1)) -> float:
    i, j = pair
    return float(np.angle(D[i, i] / D[j, j]))


def _sub(U, pair):
    return U[np.ix_(pair, pair)]


def predicted_offdiag(U: np.ndarray, theta: float) -> float:
    """Closed-form |U'_{01}| after one step, for 2x2 U."""
    c = 2 - 2 * math.cos(theta)
    det = abs(np.linalg.det(U))
    return float(abs(U[0, 1]) * abs(c * abs(U[0, 0]) ** 2 / det - 1))


def _step(U, D):
    return U @ D @ np.linalg.inv(U) @ D @ U @ np.linalg.inv(D @ D)


def reichardt_step(U: np.ndarray, D: np.ndarray) -> np.ndarray:
    U = np.asarray(U, complex)
    D = np.asarray(D, complex)
    if U.shape == (2, 2) and abs(U[0, 1]) >= 1:
        raise OffDiagTooLarge(f"|U_01| = {abs(U[0, 1]):.6g} >= 1")
    return _step(U, D)


def signed_step_offdiag(U: np.ndarray, D: np.ndarray, pair=(0, 1)) -> float:
    """One-step off-diagonal on ``pair`` with the sign of the bracket factor.

    Equals -/+ |U'_{01}|; it changes sign where the step decouples the pair.
    No |U_01| < 1 precondition: root brackets may reach into strong mixing.
    """
    i, j = pair
    V = _step(np.asarray(U, complex), np.asarray(D, complex))
    t = rotation_angle(D, pair)
    ref = U[i, j] * np.exp(1j * t)
    if abs(ref) == 0:
        return 0.0
    return float(-np.real(V[i, j] * np.conj(ref)) / abs(ref))


@dataclass
class StepRecord:
    k: int
    matrix: np.ndarray
    offdiag: float
    predicted: float | None
    word_length: int | None = None


@dataclass
class RecursionTrace:
    iterations: list = field(default_factory=list)
    theta: float = 0.0
    converged: bool = False
    monotone: bool = True
    contracting: bool = False
    word: list | None = None
    diverged: bool = False

    @property
    def final(self) -> np.ndarray:
        return self.iterations[-1].matrix

    def offdiags(self) -> list:
        return [it.offdiag for it in self.iterations]


def _contracting_angle(theta: float) -> bool:
    t = math.remainder(theta, 2 * math.pi)
    return 0 < abs(t) < math.pi / 2


def run_recursion(U, D, k_max: int = 12, tol: float = 1e-10, pair=(0, 1),
                  u_word=None, d_word=None) -> RecursionTrace:
    """Iterate the step until the ``pair`` off-diagonal drops below tol.

    U and D may be larger than 2x2 as long as they are block diagonal with
    ``pair`` as one block; only that block is used for the prediction.
    """
    U = np.asarray(U, complex)
    D = np.asarray(D, complex)
    theta = rotation_angle(D, pair)
    if abs(math.remainder(theta, 2 * math.pi)) < 1e-12:
        raise InvalidRotation("the rotation angle must be nonzero")
    i, j = pair
    tr = RecursionTrace(theta=theta, contracting=_contracting_angle(theta))
    word = list(u_word) if u_word is not None else None
    tr.iterations.append(StepRecord(0, U, float(abs(U[i, j])), None, len(word) if word else None))
    for k in range(1, k_max + 1):
        if tr.iterations[-1].offdiag < tol:
            tr.converged = True
            break
        pred = predicted_offdiag(_sub(U, pair), theta)
        if tr.iterations[-1].offdiag >= 1 or not np.isfinite(tr.iterations[-1].offdiag):
            # past the contraction regime; report instead of raising
            tr.diverged = True
            break
        U = _step(U, D)
        if word is not None and d_word is not None:
            word = word + d_word + invert_word(word) + d_word + word + invert_word(d_word) * 2
        off = float(abs(U[i, j]))
        tr.iterations.append(StepRecord(k, U, off, pred, len(word) if word is not None and d_word else None))
        if not np.isfinite(off):
            break
    else:
        tr.converged = tr.iterations[-1].offdiag < tol
    offs = tr.offdiags()
    tr.monotone = all(b <= a * (1 + 1e-12) for a, b in zip(offs, offs[1:]))
    tr.word = word if d_word is not None else None
    return tr


# ---------------------------------------------------------------- concrete blocks

def _two_qubit_generators(alpha, rd):
    sp = build_space(2, alpha, rd)
    g = {i: normalize(sp, generator_matrix(sp, i)) for i in (1, 2, 3)}
    J2 = g[2] @ g[1] @ g[2]
    J3 = g[3] @ J2 @ g[3]
    return sp, g, J2, J3


def nc1_indices(sp):
    return (sp.index((1, 0, 1, 0)), sp.index((1, 2, 1, 0)))


def nc2_indices(sp):
    return (sp.index((-1, 0, -1, 0)), sp.index((-1, -2, -1, 0)))


def nc1_block(alpha: float, variant: str = "angle", rd: RootData = DEFAULT_ROOT):
    """(U, D, u_word, d_word) on span{|00>, NC_1} of the two-qubit space.

    variant 'angle' uses D(pi alpha); 'braid' the restriction of (J_2 J_3^-1)^2;
    'braid_half' the restriction of J_2 J_3^-1.
    """
    sp, g, J2, J3 = _two_qubit_generators(alpha, rd)
    pair = list(nc1_indices(sp))
    U = _sub(g[3], pair)
    j2j3 = J2 @ np.linalg.inv(J3)
    w = J_WORDS[2] + invert_word(J_WORDS[3])
    if variant == "angle":
        return U, d_theta(math.pi * alpha), [3], None
    if variant == "braid":
        return U, _sub(j2j3 @ j2j3, pair), [3], w * 2
    if variant == "braid_half":
        return U, _sub(j2j3, pair), [3], w
    raise ValueError(f"unknown variant {variant!r}")


def full_two_qubit_recursion_inputs(alpha: float, rd: RootData = DEFAULT_ROOT):
    """b_3 and a diagonal D on the whole two-qubit space.

    D carries e^{+i pi alpha/2} on |00>, |11> and e^{-i pi alpha/2} on NC_1, NC_2,
    so each two-dimensional block of b_3 sees D(pi alpha).
    """
    sp, g, _, _ = _two_qubit_generators(alpha, rd)
    D = np.eye(sp.dim, dtype=complex)
    for c, n in (nc1_indices(sp), nc2_indices(sp)):
        D[c, c] = np.exp(0.5j * math.pi * alpha)
        D[n, n] = np.exp(-0.5j * math.pi * alpha)
    return sp, g[3], D


def alt_block(alpha: float, rd: RootData = DEFAULT_ROOT):
    """(U, D) = (generator 3, J_3) normalized on the 3-dim alternative space."""
    sp = build_alt_space(1, alpha, rd)
    U = normalize(sp, alt_generator(sp, 3))
    D = normalize(sp, alt_generator(sp, "J3"))
    return sp, U, D


def step1_signed(block: str, alpha: float, variant: str = "angle", rd: RootData = DEFAULT_ROOT) -> float:
    if block in ("NC1", "NC1_block"):
        U, D, _, _ = nc1_block(alpha, variant, rd)
        return signed_step_offdiag(U, D)
    if block in ("alt", "alt_encoding_block"):
        _, U, D = alt_block(alpha, rd)
        return signed_step_offdiag(U, D, pair=(1, 2))
    raise ValueError(f"unknown block {block!r}")


DEFAULT_BRACKETS = {"NC1": (2.0, 2.5), "alt": (1.05, 1.5)}


ENDPOINT_NUDGE = 1e-3


def _inside(x: float, toward: float, rd: RootData) -> float:
    # labels alpha-2, alpha-1 ... sit next to integers too; keep well clear
    if abs(x - round(x)) < ENDPOINT_NUDGE:
        return round(x) + math.copysign(ENDPOINT_NUDGE, toward - x)
    check_alpha(x, rd)
    return x


def find_decoupling_alpha(block: str = "NC1", bracket=None, variant: str = "angle",
                          rd: RootData = DEFAULT_ROOT, xtol: float = 1e-14) -> float:
    key = "NC1" if block.startswith("NC1") else "alt"
    lo, hi = bracket if bracket is not None else DEFAULT_BRACKETS[key]
    lo, hi = _inside(lo, hi, rd), _inside(hi, lo, rd)
    f = lambda a: step1_signed(key, a, variant, rd)  # noqa: E731
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise NoRootInBracket(f"step-1 leakage has the same sign at {lo} and {hi}")
    return float(brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))


def alt_phase_gate(alpha: float, rd: RootData = DEFAULT_ROOT, k_max: int = 1, tol: float = 1e-10):
    """Run the recursion on the alternative space and read off the qubit gate.

    Returns (gate on span{(0,1),(2,1)}, theta_bar, leakage, trace) where
    gate ~ diag(e^{i theta_bar}, e^{-i theta_bar}) up to a global phase.
    """
    _, U, D = alt_block(alpha, rd)
    tr = run_recursion(U, D, k_max=k_max, tol=tol, pair=(1, 2), u_word=[3], d_word=ALT_J3_WORD)
    V = tr.final
    gate = V[:2, :2]
    theta_bar = 0.5 * float(np.angle(gate[0, 0] / gate[1, 1]))
    leak = float(np.abs(V[2, :2]).max())
    return gate, theta_bar, leak, tr


# ---------------------------------------------------------------- universality

def _as_alpha(alpha):
    if isinstance(alpha, str):
        return Fraction(alpha) if "/" in alpha else float(alpha)
    return alpha


def _fold(x: float) -> float:
    """Map an eigenphase exponent (units of pi) into [0, 1]."""
    x = x % 2
    return x if x <= 1 else 2 - x


def _small_fraction(phi, exact: bool, tol: float = 1e-9):
    if exact:
        f = Fraction(phi)
        return (f.numerator, f.denominator) if f.denominator <= 6 and f < 1 else None
    for n in range(1, 7):
        for m in range(n):
            if abs(phi - m / n) < tol:
                return (m, n)
    return None


@dataclass
class UniversalityVerdict:
    alpha: float
    noncommuting: bool
    phases_not_half: bool
    phase_exclusion: bool
    witness: tuple | None
    phi_a: float
    phi_b: float
    unitary_window: bool

    @property
    def verdict(self) -> bool:
        return self.noncommuting and self.phases_not_half and self.phase_exclusion


def unitary_window(alpha: float) -> bool:
    x = float(alpha) % 4
    return 1 < x < 2 or 2 < x < 3


def universality_check(alpha, rd: RootData = DEFAULT_ROOT) -> UniversalityVerdict:
    """Density test for the one-qubit pair (J_1, b_2), both rescaled into SU(2).

    Condition 3 is exact for Fraction input and a 1e-9 search otherwise.
    """
    alpha = _as_alpha(alpha)
    exact = isinstance(alpha, Fraction)
    a = float(alpha)
    sp = build_space(1, a, rd)
    A, B = su_rescaled_single_qubit(sp)
    noncomm = bool(np.abs(A @ B - B @ A).max() > 1e-8)
    if exact:
        x = (alpha / 4) % 2
        phi_a = x if x <= 1 else 2 - x
    else:
        phi_a = _fold(float(np.angle(np.linalg.eigvals(A)[0])) / math.pi)
    phi_b = _fold(float(np.angle(np.linalg.eigvals(B)[0])) / math.pi)
    not_half = abs(float(phi_a) - 0.5) > 1e-9 and abs(phi_b - 0.5) > 1e-9
    wa = _small_fraction(phi_a, exact)
    wb = _small_fraction(phi_b, False)
    excl = wa is None or wb is None
    return UniversalityVerdict(a, noncomm, not_half, excl, None if excl else wa,
                               float(phi_a), phi_b, unitary_window(a))


# ---------------------------------------------------------------- entangling

PROBES = {
    "00": np.array([1, 0, 0, 0], complex),
    "01": np.array([0, 1, 0, 0], complex),
    "10": np.array([0, 0, 1, 0], complex),
    "11": np.array([0, 0, 0, 1], complex),
    "++": np.full(4, 0.5, complex),
}


def schmidt_probes(U: np.ndarray) -> dict:
    """Second (normalized) Schmidt coefficient of U|probe> for each probe."""
    out = {}
    for name, v in PROBES.items():
        w = U @ v
        s = np.linalg.svd(w.reshape(2, 2), compute_uv=False)
        out[name] = float(s[1] / np.linalg.norm(s)) if np.linalg.norm(s) > 0 else 0.0
    return out


def entangling_check(U: np.ndarray, leakage: float = 0.0, threshold: float = 1e-4,
                     schmidt_tol: float = 1e-3) -> bool:
    if leakage > threshold:
        raise LeakyGate(f"leakage {leakage:.3g} exceeds {threshold:.1g}")
    return max(schmidt_probes(np.asarray(U, complex)).values()) > schmidt_tol


def compile_entangler(alpha: float = NC1_ROOT_CLOSED, k_max: int = 20, tol: float = 1e-8,
                      rd: RootData = DEFAULT_ROOT):
    """Run the recursion on the whole two-qubit space; return (gate, leakage, steps)."""
    sp, U, D = full_two_qubit_recursion_inputs(alpha, rd)
    comp, nc = sp.comp_index, sp.nc_index
    V = U
    leak = float(np.abs(V[np.ix_(nc, comp)]).max())
    steps = 0
    while leak > tol and steps < k_max:
        V = reichardt_step(V, D)
        steps += 1
        leak = float(np.abs(V[np.ix_(nc, comp)]).max())
    return V[np.ix_(comp, comp)], leak, steps


# ---------------------------------------------------------------- Clifford suite

_H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
PAULI = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
         "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
CLIFFORD_WORDS = {
    "H": ("1 2 1", _H),
    "S": ("1^-1", np.diag([1, 1j])),
    "X": ("2^2", PAULI["X"]),
    "Y": ("1^2 2^-2", PAULI["Y"]),
    "Z": ("1^2", PAULI["Z"]),
}
ISING_BLOCKS = {
    "1": np.exp(1j * math.pi / 8) * np.diag([-1, 1j]),
    "2": np.exp(-1j * math.pi / 8) / math.sqrt(2) * np.array([[1, 1j], [1j, 1]]),
}


def phase_aligned_deviation(M: np.ndarray, target: np.ndarray) -> float:
    """max |e^{i phi} M - target| with phi fixed by target's largest entry."""
    k = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    if abs(M[k]) == 0:
        return float(np.abs(target).max())
    ph = target[k] / M[k]
    ph /= abs(ph)
    return float(np.abs(ph * M - target).max())


def clifford_deviation(G: np.ndarray) -> float:
    """How far G X G^-1 is from a phase-aligned Pauli (0 for a Clifford G)."""
    C = G @ PAULI["X"] @ np.linalg.inv(G)
    return min(phase_aligned_deviation(C, P) for P in PAULI.values())


def clifford_suite(alpha: float, rd: RootData = DEFAULT_ROOT) -> dict:
    sp = build_alt_space(1, alpha, rd)
    comp = sp.comp_index
    rep = {"words": {}, "ising": {}}
    for name, (word, target) in CLIFFORD_WORDS.items():
        M = word_matrix(sp, word)
        rep["words"][name] = {"word": word, "matrix": M[np.ix_(comp, comp)],
                              "deviation": phase_aligned_deviation(M[np.ix_(comp, comp)], target),
                              "leakage": float(np.abs(M[np.ix_(sp.nc_index, comp)]).max())}
    for name, target in ISING_BLOCKS.items():
        M = normalize(sp, alt_generator(sp, int(name)))[np.ix_(comp, comp)]
        rep["ising"][name] = phase_aligned_deviation(M, target)
    return rep


def non_clifford_report(alpha: float = ALT_ROOT_CLOSED, rd: RootData = DEFAULT_ROOT) -> dict:
    gate, tb, leak, tr = alt_phase_gate(alpha, rd)
    return {"alpha": alpha, "gate": gate, "theta_bar": tb, "closed_form": THETA_BAR_CLOSED,
            "leakage": leak, "clifford_deviation": clifford_deviation(gate),
            "word_length": tr.iterations[-1].word_length}
