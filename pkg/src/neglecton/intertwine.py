"""Fusion channels, splitting vertices Y, F-symbols, R-symbols and the pentagon.

Highest-weight vectors are taken from the kernel of E inside an H
eigenspace, discarding anything already in the image of F (those are
descendants, not tops of summands).  A vertex Y^{ab}_c : c -> a x b sends
the basis vector F^k v_0 of c to D(F)^k w where w is the normalized top.

Symbols are memoized with ``functools.lru_cache``.  Cached values are
immutable, and the cache itself is only filled from the calling thread;
concurrent callers should give each thread its own process or accept
duplicate work (the values are deterministic either way).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (AmbiguousChannel, InconsistentScalar, InvalidLabel,
                     NoHighestWeight, SingularSystem, UnsupportedFusion)
from .repcore import (DEFAULT_ROOT, GUARD_EPS, Morphism, Neglecton, RootData,
                      Simple, WeightModule, as_label, braiding, highest_weight,
                      kron, module, tensor)

NULL_TOL = 1e-9
WEIGHT_TOL = 1e-8


def _orth_basis(A: np.ndarray, rtol: float) -> np.ndarray:
    """Orthonormal basis of the column space of A."""
    if A.size == 0:
        return np.zeros((A.shape[0], 0), complex)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((A.shape[0], 0), complex)
    return U[:, s > rtol * max(s[0], 1.0)]


def _null_basis(A: np.ndarray, scale: float) -> np.ndarray:
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(A)
    rank = int(np.sum(s > NULL_TOL * scale))
    return Vh[rank:].conj().T


def top_vectors(M: WeightModule, lam: float) -> np.ndarray:
    """Vectors of weight lam killed by E and not in the image of F (columns)."""
    idx = np.flatnonzero(np.abs(M.weights - lam) < WEIGHT_TOL)
    if idx.size == 0:
        return np.zeros((M.dim, 0), complex)
    scale = max(np.abs(M.E).max(), 1.0)
    ker = _null_basis(M.E[:, idx], scale)
    above = np.flatnonzero(np.abs(M.weights - (lam + 2)) < WEIGHT_TOL)
    img = _orth_basis(M.F[np.ix_(idx, above)], NULL_TOL)
    if img.shape[1]:
        resid = ker - img @ (img.conj().T @ ker)
        U, s, Vh = np.linalg.svd(resid, full_matrices=False)
        keep = s > 1e-7
        ker = ker @ Vh[keep].conj().T
    out = np.zeros((M.dim, ker.shape[1]), complex)
    out[idx] = ker
    return out


def _normalize_top(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    first = int(np.flatnonzero(mags > 1e-10 * mags.max())[0])
    return v / v[first]


def _chain(M: WeightModule, v: np.ndarray, max_len: int) -> np.ndarray:
    cols = [v]
    ref = np.linalg.norm(v)
    for _ in range(max_len):
        nxt = M.F @ cols[-1]
        if np.linalg.norm(nxt) < 1e-8 * ref:
            break
        cols.append(nxt)
    return np.column_stack(cols)


def label_for(lam: float, length: int, rd: RootData = DEFAULT_ROOT):
    """Name the simple with highest weight lam and dimension length, or None."""
    n = round(lam)
    if abs(lam - n) < WEIGHT_TOL and 0 <= n < rd.r and length == n + 1:
        return Simple(int(n))
    if length == rd.r:
        alpha = lam - rd.r + 1
        if abs(alpha - round(alpha)) >= GUARD_EPS:
            return Neglecton(alpha)
    return None


@dataclass(frozen=True, eq=False)
class Summand:
    label: object
    embedding: np.ndarray  # dim(M) x dim(label)


def decompose(M: WeightModule) -> list[Summand]:
    """Split M into simple summands, ordered by descending highest weight.

    Raises UnsupportedFusion when the tops found do not account for the
    whole module (a projective, non-simple piece is present).
    """
    rd = M.rd
    lams = []
    for w in sorted(M.weights, reverse=True):
        if not lams or abs(lams[-1] - w) > WEIGHT_TOL:
            lams.append(float(w))
    found, bad = [], 0
    for lam in lams:
        tops = top_vectors(M, lam)
        for j in range(tops.shape[1]):
            v = _normalize_top(tops[:, j])
            ch = _chain(M, v, rd.r + 1)
            lab = label_for(lam, ch.shape[1], rd)
            if lab is None:
                bad += ch.shape[1]
                continue
            found.append(Summand(lab, ch))
    covered = sum(s.embedding.shape[1] for s in found)
    if bad or covered != M.dim:
        raise UnsupportedFusion(
            f"{M.label} is not a direct sum of simples",
            found=[s.label for s in found], remainder_dim=M.dim - covered)
    if found:
        U = np.column_stack([s.embedding for s in found])
        if np.linalg.matrix_rank(U, tol=1e-9 * np.abs(U).max()) != M.dim:
            raise UnsupportedFusion(f"{M.label}: summands are not independent",
                                    found=[s.label for s in found], remainder_dim=0)
    return found


@lru_cache(maxsize=None)
def fusion_channels(a, b, rd: RootData = DEFAULT_ROOT) -> tuple:
    """Channels of a x b, descending highest weight."""
    M = tensor(module(a, rd), module(b, rd))
    return tuple(s.label for s in decompose(M))


def channels_or_found(a, b, rd: RootData = DEFAULT_ROOT) -> tuple:
    """Like fusion_channels but returns the simple summands of a partially projective product."""
    try:
        return fusion_channels(as_label(a), as_label(b), rd)
    except UnsupportedFusion as exc:
        return exc.found


# ---------------------------------------------------------------- vertices

@dataclass(frozen=True, eq=False)
class YSymbol:
    a: object
    b: object
    c: object
    map: Morphism

    @property
    def mat(self) -> np.ndarray:
        return self.map.mat


@lru_cache(maxsize=None)
def _y_cached(a, b, c, rd):
    A, B, C = module(a, rd), module(b, rd), module(c, rd)
    M = tensor(A, B)
    lam = highest_weight(c, rd)
    tops = top_vectors(M, lam)
    if tops.shape[1] == 0:
        raise NoHighestWeight(f"no top of weight {lam} in {a} x {b}")
    if tops.shape[1] > 1:
        raise AmbiguousChannel(f"{c} appears {tops.shape[1]} times in {a} x {b}")
    v = _normalize_top(tops[:, 0])
    ch = _chain(M, v, C.dim)
    if ch.shape[1] != C.dim:
        raise NoHighestWeight(f"top of weight {lam} in {a} x {b} does not generate {c}")
    ch.setflags(write=False)
    return YSymbol(a, b, c, Morphism(C, M, ch))


def y_symbol(a, b, c, rd: RootData = DEFAULT_ROOT) -> YSymbol:
    return _y_cached(as_label(a), as_label(b), as_label(c), rd)


# ---------------------------------------------------------------- F and R

@dataclass(frozen=True, eq=False)
class FSymbol:
    a: object
    b: object
    c: object
    d: object
    rows: tuple  # right-tree internal channels n
    cols: tuple  # left-tree internal channels m
    matrix: np.ndarray
    residual: float

    def entry(self, n, m) -> complex:
        n, m = as_label(n), as_label(m)
        if n not in self.rows or m not in self.cols:
            return 0.0
        return self.matrix[self.rows.index(n), self.cols.index(m)]

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def left_tree(a, b, m, c, d, rd: RootData = DEFAULT_ROOT) -> np.ndarray:
    """((a,b)_m, c)_d as a matrix d -> a x b x c."""
    Y1 = y_symbol(a, b, m, rd).mat
    Y2 = y_symbol(m, c, d, rd).mat
    return kron(Y1, np.eye(module(c, rd).dim)) @ Y2


def right_tree(a, b, c, n, d, rd: RootData = DEFAULT_ROOT) -> np.ndarray:
    """(a,(b,c)_n)_d as a matrix d -> a x b x c."""
    Y1 = y_symbol(b, c, n, rd).mat
    Y2 = y_symbol(a, n, d, rd).mat
    return kron(np.eye(module(a, rd).dim), Y1) @ Y2


def _qr_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(A)
    return np.linalg.solve(R, Q.conj().T @ B)


@lru_cache(maxsize=None)
def _f_cached(a, b, c, d, rd):
    ms = tuple(m for m in fusion_channels(a, b, rd) if d in fusion_channels(m, c, rd))
    ns = tuple(n for n in fusion_channels(b, c, rd) if d in fusion_channels(a, n, rd))
    if not ms or not ns:
        raise InvalidLabel(f"{d} is not reachable from {a} x {b} x {c}")
    if len(ms) != len(ns):
        raise SingularSystem(f"F^{{{a}{b}{c}}}_{d}: {len(ms)} left vs {len(ns)} right channels")
    L = np.column_stack([left_tree(a, b, m, c, d, rd).ravel() for m in ms])
    A = np.column_stack([right_tree(a, b, c, n, d, rd).ravel() for n in ns])
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] < 1e-10 * s[0]:
        raise SingularSystem(f"right trees for F^{{{a}{b}{c}}}_{d} are degenerate")
    X = _qr_solve(A, L)
    resid = float(np.linalg.norm(A @ X - L) / np.linalg.norm(L))
    sx = np.linalg.svd(X, compute_uv=False)
    if sx[-1] < 1e-10 * sx[0]:
        raise SingularSystem(f"F^{{{a}{b}{c}}}_{d} is not invertible")
    X.setflags(write=False)
    return FSymbol(a, b, c, d, ns, ms, X, resid)


def f_symbol(a, b, c, d, rd: RootData = DEFAULT_ROOT) -> FSymbol:
    return _f_cached(as_label(a), as_label(b), as_label(c), as_label(d), rd)


@dataclass(frozen=True)
class RSymbol:
    """Braiding eigenvalue R^{ab}_c, defined by c_{ba} Y^{ba}_c = R^{ab}_c Y^{ab}_c.

    ``raw`` is the scalar obtained with both vertices lexicographically
    normalized.  Its modulus only reflects the relative scale of Y^{ab}_c
    and Y^{ba}_c, so ``value`` reports the phase raw/|raw|, i.e. the
    eigenvalue after rescaling Y^{ba}_c by |raw|.
    """
    a: object
    b: object
    c: object
    value: complex
    raw: complex
    residual: float


@lru_cache(maxsize=None)
def _r_cached(a, b, c, rd, tol):
    Yba = y_symbol(b, a, c, rd).mat
    Yab = y_symbol(a, b, c, rd).mat
    C = braiding(module(b, rd), module(a, rd)).mat @ Yba
    k = int(np.argmax(np.abs(Yab[:, 0]) > 1e-10 * np.abs(Yab[:, 0]).max()))
    lam = C[k, 0] / Yab[k, 0]
    resid = float(np.abs(C - lam * Yab).max() / np.abs(C).max())
    if resid > tol:
        raise InconsistentScalar(f"c_{{{b}{a}}} Y is not a multiple of Y^{{{a}{b}}}_{c} (residual {resid:.2e})")
    return RSymbol(a, b, c, complex(lam / abs(lam)), complex(lam), resid)


def r_symbol(a, b, c, rd: RootData = DEFAULT_ROOT, tol: float = 1e-9) -> RSymbol:
    return _r_cached(as_label(a), as_label(b), as_label(c), rd, tol)


def double_braid_eigenvalue(a, b, c, rd: RootData = DEFAULT_ROOT) -> complex:
    """Eigenvalue of c_{ba} c_{ab} on the channel c of a x b."""
    A, B = module(a, rd), module(b, rd)
    Y = y_symbol(a, b, c, rd).mat
    img = braiding(B, A).mat @ braiding(A, B).mat @ Y
    k = int(np.argmax(np.abs(Y[:, 0]) > 1e-10 * np.abs(Y[:, 0]).max()))
    return complex(img[k, 0] / Y[k, 0])


# ---------------------------------------------------------------- pentagon

def pentagon_residual(a, b, c, d, rd: RootData = DEFAULT_ROOT) -> float:
    """Largest pentagon defect over every admissible choice of internal labels.

    Both sides expand (((a b)_p c)_l d)_e in the basis (a (b (c d)_m)_r)_e.
    """
    a, b, c, d = map(as_label, (a, b, c, d))
    ch = lambda x, y: fusion_channels(x, y, rd)  # noqa: E731
    worst = 0.0
    for p in ch(a, b):
        for l in ch(p, c):
            for e in ch(l, d):
                for m in ch(c, d):
                    for r_ in ch(b, m):
                        if e not in ch(a, r_):
                            continue
                        lhs = f_symbol(p, c, d, e, rd).entry(m, l) * f_symbol(a, b, m, e, rd).entry(r_, p)
                        rhs = 0.0
                        for t in ch(b, c):
                            if l not in ch(a, t) or r_ not in ch(t, d):
                                continue
                            rhs += (f_symbol(a, b, c, l, rd).entry(t, p)
                                    * f_symbol(a, t, d, e, rd).entry(r_, l)
                                    * f_symbol(b, c, d, r_, rd).entry(m, t))
                        worst = max(worst, abs(lhs - rhs))
    return worst


def supported_tuples(alpha: float, k: int, pool=(0, 1, 2, 3), rd: RootData = DEFAULT_ROOT):
    """All k-tuples over pool + [alpha] with at most one alpha leg."""
    labels = [as_label(x) for x in pool] + [Neglecton(alpha)]
    for tup in itertools.product(labels, repeat=k):
        if sum(isinstance(x, Neglecton) for x in tup) <= 1:
            yield tup
