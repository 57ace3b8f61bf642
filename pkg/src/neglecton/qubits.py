"""Encoded spaces Hom(alpha, alpha x 1^{2n}) and their braid-group action.

A basis tree is the label path u_0 = alpha, u_1, ..., u_{2n} = alpha with
steps of +-1 (stored as integer offsets from alpha).  Generator 1 is the
flagpole double braid J_1; for i >= 2, b_i crosses leaves i-1 and i and
only changes u_{i-1}:

    b_i = F^-1 diag(R^{11}_n) F,   F = F^{u_{i-2} 1 1}_{u_i}.

Computational trees have u_{2k} = alpha for every k; qubit k reads
u_{2k-1} = alpha+1 as |0> and alpha-1 as |1>.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import InvalidWord, NonDiagonalJM, UnsupportedN
from .hermite import TraceConfig, bubble_pop, modified_dimension, tree_norm
from .intertwine import f_symbol, r_symbol
from .repcore import DEFAULT_ROOT, Neglecton, RootData, Simple, check_alpha


@dataclass(frozen=True)
class FusionTree:
    alpha: float
    offsets: tuple  # u_1 - alpha, ..., u_{2n} - alpha

    @property
    def labels(self) -> tuple:
        return tuple(self.alpha + o for o in self.offsets)

    @property
    def computational(self) -> bool:
        return all(o == 0 for o in self.offsets[1::2])

    def bits(self) -> str | None:
        if not self.computational:
            return None
        return "".join("0" if o == 1 else "1" for o in self.offsets[0::2])

    def __str__(self):
        b = self.bits()
        if b is not None:
            return f"|{b}>"
        return "(" + ",".join(f"a{o:+d}" if o else "a" for o in self.offsets) + ")"


def enumerate_paths(n: int) -> list[tuple]:
    """All +-1 offset paths of length 2n returning to 0."""
    out = []

    def rec(prefix, cur):
        if len(prefix) == 2 * n:
            if cur == 0:
                out.append(tuple(prefix))
            return
        remaining = 2 * n - len(prefix)
        for step in (1, -1):
            nxt = cur + step
            if abs(nxt) <= remaining - 1:
                rec(prefix + [nxt], nxt)

    rec([], 0)
    return out


def _order_key(offsets: tuple):
    comp = all(o == 0 for o in offsets[1::2])
    if comp:
        return (0, tuple(0 if o == 1 else 1 for o in offsets[0::2]))
    return (1, tuple(-o for o in offsets))


@dataclass(frozen=True, eq=False)
class HilbertSpace:
    n: int
    alpha: float
    basis: tuple
    gram: np.ndarray
    rd: RootData
    kind: str = "standard"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def signature(self) -> np.ndarray:
        return np.sign(self.gram)

    @property
    def M(self) -> np.ndarray:
        return np.diag(np.sqrt(self.gram.astype(complex)))

    @property
    def comp_index(self) -> np.ndarray:
        return np.array([i for i, t in enumerate(self.basis) if t.computational])

    @property
    def nc_index(self) -> np.ndarray:
        return np.array([i for i, t in enumerate(self.basis) if not t.computational], dtype=int)

    def index(self, offsets) -> int:
        for i, t in enumerate(self.basis):
            if t.offsets == tuple(offsets):
                return i
        raise KeyError(offsets)


@lru_cache(maxsize=None)
def build_space(n: int, alpha: float, rd: RootData = DEFAULT_ROOT,
                tc: TraceConfig = TraceConfig()) -> HilbertSpace:
    check_alpha(alpha, rd)
    paths = sorted(enumerate_paths(n), key=_order_key)
    basis = tuple(FusionTree(alpha, p) for p in paths)
    gram = np.array([tree_norm((alpha,) + t.labels, tc=tc, rd=rd) for t in basis])
    gram.setflags(write=False)
    return HilbertSpace(n, alpha, basis, gram, rd)


def space_dimension(n: int) -> int:
    return comb(2 * n, n)


def _R(a, b, c, rd):
    return r_symbol(a, b, c, rd).value


def _j1_entry(alpha, u1, rd):
    A, U = Neglecton(alpha), Neglecton(u1)
    return _R(A, Simple(1), U, rd) * _R(Simple(1), A, U, rd)


@lru_cache(maxsize=None)
def _local_braid(left: float, right: float, rd: RootData):
    """Return (middle labels, matrix) of F^-1 diag(R^{11}) F on Hom(right, left x 1 x 1)."""
    F = f_symbol(Neglecton(left), Simple(1), Simple(1), Neglecton(right), rd)
    Rdiag = np.diag([_R(Simple(1), Simple(1), n, rd) for n in F.rows])
    mids = tuple(m.alpha for m in F.cols)
    return mids, np.linalg.solve(F.matrix, Rdiag @ F.matrix)


def generator_matrix(space: HilbertSpace, i: int) -> np.ndarray:
    """b_i (i >= 2) or J_1 (i = 1) in the unnormalized tree basis."""
    if space.kind != "standard":
        return alt_generator(space, i)
    n2 = 2 * space.n
    if not 1 <= i <= n2:
        raise InvalidWord(f"generator index {i} outside 1..{n2}")
    a, rd = space.alpha, space.rd
    out = np.zeros((space.dim, space.dim), complex)
    if i == 1:
        for k, t in enumerate(space.basis):
            out[k, k] = _j1_entry(a, t.labels[0], rd)
        return out
    for k, t in enumerate(space.basis):
        u = (0,) + t.offsets
        mids, loc = _local_braid(a + u[i - 2], a + u[i], rd)
        col = [round(m - a) for m in mids].index(u[i - 1])
        for row, m in enumerate(mids):
            target = list(t.offsets)
            target[i - 2] = round(m - a)
            out[space.index(target), k] = loc[row, col]
    return out


def normalize(space: HilbertSpace, mat: np.ndarray) -> np.ndarray:
    M = np.sqrt(space.gram.astype(complex))
    return (M[:, None] * mat) / M[None, :]


def jucys_murphy(space: HilbertSpace, i: int, tol: float = 1e-8) -> np.ndarray:
    J = generator_matrix(space, 1)
    for k in range(2, i + 1):
        b = generator_matrix(space, k)
        J = b @ J @ b
    off = J - np.diag(np.diag(J))
    if np.abs(off).max() > tol * max(1.0, np.abs(J).max()):
        raise NonDiagonalJM(f"J_{i} is not diagonal (off-diagonal {np.abs(off).max():.2e})")
    return J


def indefinite_unitarity_residual(space: HilbertSpace, mat: np.ndarray) -> float:
    """max |U^H D U - D| for an already normalized matrix U."""
    D = np.diag(space.signature).astype(complex)
    return float(np.abs(mat.conj().T @ D @ mat - D).max())


def leakage(space: HilbertSpace, mat: np.ndarray) -> float:
    """Largest computational -> noncomputational amplitude of a normalized matrix."""
    nc, comp = space.nc_index, space.comp_index
    if nc.size == 0:
        return 0.0
    return float(np.abs(mat[np.ix_(nc, comp)]).max())


def su_rescaled_single_qubit(space: HilbertSpace):
    """The phase-rescaled one-qubit gates -q J_1 and q^{-3/2} b_2 (normalized)."""
    q = space.rd.q
    J1 = normalize(space, generator_matrix(space, 1))
    b2 = normalize(space, generator_matrix(space, 2))
    return -q * J1, space.rd.qpow(-1.5) * b2


# ---------------------------------------------------------------- words

_TOKEN = re.compile(r"^(\d+)(?:\^(-?\d+))?$")


def parse_word(word: str) -> list[tuple[int, int]]:
    """'1^2 3^-1 2' -> [(1, 2), (3, -1), (2, 1)]."""
    out = []
    for tok in re.split(r"[\s,]+", word.strip()):
        if not tok:
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise InvalidWord(f"bad token {tok!r}")
        out.append((int(m.group(1)), int(m.group(2) or 1)))
    return out


def word_matrix(space: HilbertSpace, word, normalized: bool = True) -> np.ndarray:
    """Left-to-right product of generator powers; generator 1 is J_1 = b_1^2."""
    if isinstance(word, str):
        word = parse_word(word)
    out = np.eye(space.dim, dtype=complex)
    cache = {}
    for i, e in word:
        if space.kind == "standard" and i == 1:
            if e % 2:
                raise InvalidWord("the flagpole generator only enters as even powers")
            e //= 2
        if i not in cache:
            cache[i] = generator_matrix(space, i)
        out = out @ np.linalg.matrix_power(cache[i], e)
    return normalize(space, out) if normalized else out


# ---------------------------------------------------------------- alternative encoding

ALT_BASIS = ((0, 1), (2, 1), (2, 3))
# trees with v1 = 2 are taken with the opposite sign of the Y^{11}_2 vertex, so
# the Ising crossings on span{(0,1),(2,1)} take their textbook form
ALT_SIGNS = np.array([1.0, -1.0, -1.0])


@dataclass(frozen=True)
class AltTree:
    alpha: float
    v1: int
    v1p: int

    @property
    def computational(self) -> bool:
        return self.v1p == 1

    @property
    def offsets(self) -> tuple:
        return (self.v1, self.v1p)

    def __str__(self):
        return f"({self.v1},{self.v1p})"


@lru_cache(maxsize=None)
def build_alt_space(n: int, alpha: float, rd: RootData = DEFAULT_ROOT,
                    tc: TraceConfig = TraceConfig()) -> HilbertSpace:
    """Hom(alpha+1, 1 x 1 x 1 x alpha) with basis (v1, v1') = (0,1), (2,1), (2,3)."""
    if n != 1:
        raise UnsupportedN("the alternative encoding is only defined for one qubit")
    check_alpha(alpha, rd)
    basis = tuple(AltTree(alpha, v1, v1p) for v1, v1p in ALT_BASIS)
    root = Neglecton(alpha + 1)
    gram = np.array([
        bubble_pop(Simple(1), Simple(1), Simple(t.v1), rd)
        * bubble_pop(Simple(t.v1), Simple(1), Simple(t.v1p), rd)
        * bubble_pop(Simple(t.v1p), Neglecton(alpha), root, rd)
        * modified_dimension(root, tc, rd)
        for t in basis])
    gram.setflags(write=False)
    return HilbertSpace(1, alpha, basis, gram, rd, kind="alt")


def alt_generator(space: HilbertSpace, i) -> np.ndarray:
    """Generators on the alternative encoding (unnormalized basis)."""
    M = _alt_generator_raw(space, i)
    return ALT_SIGNS[:, None] * M * ALT_SIGNS[None, :]


def _alt_generator_raw(space: HilbertSpace, i) -> np.ndarray:
    """Generators in the plain tree basis.

    1, 2: Ising crossings of the three 1-leaves.  3: the third leaf taken
    once around the alpha leg (see ``alt_crossing``).  'J3': the alpha leg
    wrapped around all three 1-leaves.
    """
    rd, a = space.rd, space.alpha
    S1 = Simple(1)
    out = np.zeros((3, 3), complex)
    if i == 1:
        for k, t in enumerate(space.basis):
            out[k, k] = _R(S1, S1, Simple(t.v1), rd)
        return out
    if i == 2:
        for v1p in (1, 3):
            F = f_symbol(S1, S1, S1, Simple(v1p), rd)
            loc = np.linalg.solve(F.matrix, np.diag([_R(S1, S1, x, rd) for x in F.rows]) @ F.matrix)
            cols = [c.n for c in F.cols]
            for ci, m in enumerate(cols):
                for ri, m2 in enumerate(cols):
                    out[ALT_BASIS.index((m2, v1p)), ALT_BASIS.index((m, v1p))] = loc[ri, ci]
        return out
    if i == "J3":
        A, root = Neglecton(a), Neglecton(a + 1)
        for k, t in enumerate(space.basis):
            X = Simple(t.v1p)
            out[k, k] = _R(X, A, root, rd) * _R(A, X, root, rd)
        return out
    if i == 3:
        return alt_crossing(space)
    raise InvalidWord(f"unknown alternative-encoding generator {i}")


def alt_crossing(space: HilbertSpace) -> np.ndarray:
    """Monodromy of the third 1-leaf around alpha.

    A single crossing of the last 1 with alpha leaves Hom(alpha+1, 1 1 1 alpha),
    so the generator acting on this space is the full double braid
    F^-1 diag(R^{1a}_x R^{a1}_x) F with F = F^{v1 1 a}_{a+1}.
    """
    rd, a = space.rd, space.alpha
    S1, A, root = Simple(1), Neglecton(a), Neglecton(a + 1)
    out = np.zeros((3, 3), complex)
    for v1 in (0, 2):
        F = f_symbol(Simple(v1), S1, A, root, rd)
        d = np.diag([_R(S1, A, x, rd) * _R(A, S1, x, rd) for x in F.rows])
        loc = np.linalg.solve(F.matrix, d @ F.matrix)
        cols = [c.n for c in F.cols]
        for ci, m in enumerate(cols):
            for ri, m2 in enumerate(cols):
                out[ALT_BASIS.index((v1, m2)), ALT_BASIS.index((v1, m))] = loc[ri, ci]
    return out
