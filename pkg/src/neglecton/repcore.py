"""Weight modules of the unrolled quantum group of sl(2) at q = exp(i pi / r).

Modules are stored as explicit generator matrices on a weight basis
ordered by descending weight, v_i = F^i v_0.  Tensor products use the
coproduct

    D(E) = 1 x E + E x K,   D(F) = K^-1 x F + F x 1,   D(K) = K x K,
    D(H) = H x 1 + 1 x H

with ``np.kron`` (lexicographic) basis order.  Everything here is built
once and treated as immutable; the module cache is a plain
``functools.lru_cache`` whose entries hold read-only arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np

from .errors import InvalidLabel, NonScalarTwist

GUARD_EPS = 1e-6


@dataclass(frozen=True)
class RootData:
    r: int = 4
    d0: float = -4.0

    def __post_init__(self):
        if self.r <= 0 or self.r % 2:
            raise InvalidLabel(f"r must be a positive even integer, got {self.r}")

    @property
    def q(self) -> complex:
        return self.qpow(1)

    def qpow(self, x) -> complex:
        """q**x for real x, taken on the branch exp(i pi x / r)."""
        return complex(np.exp(1j * np.pi * x / self.r))

    def qbrace(self, x) -> complex:
        """{x} = q^x - q^-x."""
        return self.qpow(x) - self.qpow(-x)

    def qnum(self, x) -> float:
        """[x] = {x}/{1}; real for real x."""
        return math.sin(math.pi * x / self.r) / math.sin(math.pi / self.r)

    def qfact_brace(self, n: int) -> complex:
        out = 1.0 + 0j
        for k in range(1, n + 1):
            out *= self.qbrace(k)
        return out


DEFAULT_ROOT = RootData()


# ---------------------------------------------------------------- labels

@dataclass(frozen=True)
class Simple:
    n: int

    def __str__(self):
        return f"S{self.n}"


@dataclass(frozen=True)
class Neglecton:
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a):
            raise InvalidLabel(f"non-finite alpha {self.alpha!r}")
        # rounding keeps labels such as 2.3 + 1 and 3.3 equal as dict keys
        object.__setattr__(self, "alpha", round(a, 11) + 0.0)

    def __str__(self):
        return f"V({self.alpha:g})"


@dataclass(frozen=True)
class OneDim:
    k: int

    def __str__(self):
        return f"C({self.k})"


@dataclass(frozen=True)
class Dual:
    base: object

    def __str__(self):
        return f"{self.base}^*"


@dataclass(frozen=True)
class TensorProduct:
    parts: tuple

    def __str__(self):
        return "*".join(str(p) for p in self.parts)


def as_label(x):
    """Shorthand: ints name simples, floats name neglectons."""
    if isinstance(x, (Simple, Neglecton, OneDim, Dual, TensorProduct)):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return Simple(int(x))
    if isinstance(x, (float, np.floating)):
        return Neglecton(float(x))
    raise InvalidLabel(f"cannot interpret {x!r} as a module label")


def tensor_label(a, b):
    pa = a.parts if isinstance(a, TensorProduct) else (a,)
    pb = b.parts if isinstance(b, TensorProduct) else (b,)
    return TensorProduct(pa + pb)


def parse_label(text: str):
    """Inverse of ``str(label)`` for the simple, neglecton and one-dim forms."""
    text = text.strip()
    if "*" in text:
        return TensorProduct(tuple(parse_label(t) for t in text.split("*")))
    try:
        if text.startswith("S"):
            return Simple(int(text[1:]))
        if text.startswith("V(") and text.endswith(")"):
            return Neglecton(float(text[2:-1]))
        if text.startswith("C(") and text.endswith(")"):
            return OneDim(int(text[2:-1]))
    except ValueError as exc:
        raise InvalidLabel(text) from exc
    raise InvalidLabel(text)


def check_alpha(alpha: float, rd: RootData = DEFAULT_ROOT) -> None:
    if abs(alpha - round(alpha)) < GUARD_EPS and round(alpha) % rd.r != 0:
        raise InvalidLabel(f"alpha={alpha} is within {GUARD_EPS} of a nonzero integer mod {rd.r}")


def highest_weight(label, rd: RootData = DEFAULT_ROOT) -> float:
    label = as_label(label)
    if isinstance(label, Simple):
        return float(label.n)
    if isinstance(label, Neglecton):
        return label.alpha + rd.r - 1
    if isinstance(label, OneDim):
        return float(label.k * rd.r)
    raise InvalidLabel(f"no highest weight for {label}")


# ---------------------------------------------------------------- modules

def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


@dataclass(frozen=True, eq=False)
class WeightModule:
    label: object
    rd: RootData
    weights: np.ndarray
    E: np.ndarray
    F: np.ndarray
    K: np.ndarray
    Kinv: np.ndarray
    H: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def action(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def relation_residuals(self) -> dict:
        q = self.rd.q
        E, F, K, Ki, H = self.E, self.F, self.K, self.Kinv, self.H
        eye = np.eye(self.dim)
        Er = np.linalg.matrix_power(E, self.rd.r)
        Fr = np.linalg.matrix_power(F, self.rd.r)
        expected_K = np.diag(np.exp(1j * np.pi * np.diag(H).real / self.rd.r))
        res = {
            "KKinv": _nrm(K @ Ki - eye),
            "KEK": _nrm(K @ E @ Ki - q**2 * E),
            "KFK": _nrm(K @ F @ Ki - q**-2 * F),
            "EF": _nrm(E @ F - F @ E - (K - Ki) / (q - 1 / q)),
            "HE": _nrm(H @ E - E @ H - 2 * E),
            "HF": _nrm(H @ F - F @ H + 2 * F),
            "Er": _nrm(Er),
            "Fr": _nrm(Fr),
            "K=q^H": _nrm(K - expected_K),
            "H_diag": _nrm(H - np.diag(np.diag(H))),
        }
        return res


def _nrm(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def _module_from_weights(label, rd, weights, E, F):
    weights = np.asarray(weights, dtype=float)
    H = np.diag(weights).astype(complex)
    K = np.diag(np.exp(1j * np.pi * weights / rd.r))
    Kinv = np.diag(np.exp(-1j * np.pi * weights / rd.r))
    E = np.asarray(E, dtype=complex)
    F = np.asarray(F, dtype=complex)
    _freeze(weights, H, K, Kinv, E, F)
    return WeightModule(label, rd, weights, E, F, K, Kinv, H)


def make_simple(n: int, rd: RootData = DEFAULT_ROOT) -> WeightModule:
    if not (0 <= int(n) < rd.r) or int(n) != n:
        raise InvalidLabel(f"S{n} is not a simple of dimension <= r={rd.r}")
    n = int(n)
    d = n + 1
    E = np.zeros((d, d), complex)
    F = np.zeros((d, d), complex)
    for i in range(1, d):
        F[i, i - 1] = 1.0
        E[i - 1, i] = rd.qnum(i) * rd.qnum(n - i + 1)
    return _module_from_weights(Simple(n), rd, [n - 2 * i for i in range(d)], E, F)


def make_neglecton(alpha: float, rd: RootData = DEFAULT_ROOT) -> WeightModule:
    alpha = float(alpha)
    check_alpha(alpha, rd)
    r = rd.r
    E = np.zeros((r, r), complex)
    F = np.zeros((r, r), complex)
    for i in range(1, r):
        F[i, i - 1] = 1.0
        E[i - 1, i] = rd.qnum(i) * rd.qnum(i - alpha)
    return _module_from_weights(Neglecton(alpha), rd, [alpha + r - 1 - 2 * i for i in range(r)], E, F)


def make_onedim(k: int, rd: RootData = DEFAULT_ROOT) -> WeightModule:
    z = np.zeros((1, 1), complex)
    return _module_from_weights(OneDim(int(k)), rd, [k * rd.r], z, z.copy())


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """np.kron for 2-d arrays without its per-call overhead."""
    (a, b), (c, d) = A.shape, B.shape
    return (A[:, None, :, None] * B[None, :, None, :]).reshape(a * c, b * d)


@lru_cache(maxsize=4096)
def tensor(V: WeightModule, W: WeightModule) -> WeightModule:
    if V.rd != W.rd:
        raise InvalidLabel("tensor factors live over different roots of unity")
    Iv, Iw = np.eye(V.dim), np.eye(W.dim)
    E = kron(Iv, W.E) + kron(V.E, W.K)
    F = kron(V.Kinv, W.F) + kron(V.F, Iw)
    weights = np.add.outer(V.weights, W.weights).ravel()
    return _module_from_weights(tensor_label(V.label, W.label), V.rd, weights, E, F)


def dual(V: WeightModule) -> WeightModule:
    """Dual module with x.f = f o S(x) on the dual basis."""
    E = (-V.E @ V.Kinv).T
    F = (-V.K @ V.F).T
    return _module_from_weights(Dual(V.label), V.rd, -V.weights, E, F)


@lru_cache(maxsize=None)
def module(label, rd: RootData = DEFAULT_ROOT) -> WeightModule:
    """Build (and memoize) the module named by ``label``."""
    label = as_label(label)
    if isinstance(label, Simple):
        return make_simple(label.n, rd)
    if isinstance(label, Neglecton):
        return make_neglecton(label.alpha, rd)
    if isinstance(label, OneDim):
        return make_onedim(label.k, rd)
    if isinstance(label, Dual):
        return dual(module(label.base, rd))
    if isinstance(label, TensorProduct):
        return reduce(tensor, (module(p, rd) for p in label.parts))
    raise InvalidLabel(str(label))


def tensor_of(*labels, rd: RootData = DEFAULT_ROOT) -> WeightModule:
    return module(TensorProduct(tuple(as_label(x) for x in labels)), rd)


def is_simple_label(label) -> bool:
    return isinstance(label, (Simple, Neglecton, OneDim))


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True, eq=False)
class Morphism:
    dom: WeightModule
    cod: WeightModule
    mat: np.ndarray

    def __post_init__(self):
        if self.mat.shape != (self.cod.dim, self.dom.dim):
            raise ValueError(f"matrix shape {self.mat.shape} does not match {self.cod.dim}x{self.dom.dim}")

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return Morphism(other.dom, self.cod, self.mat @ other.mat)

    def tensor(self, other: "Morphism") -> "Morphism":
        return Morphism(tensor(self.dom, other.dom), tensor(self.cod, other.cod), kron(self.mat, other.mat))

    def inverse(self) -> "Morphism":
        return Morphism(self.cod, self.dom, np.linalg.inv(self.mat))

    def intertwiner_residual(self) -> float:
        return max(
            _nrm(self.cod.action(x) @ self.mat - self.mat @ self.dom.action(x))
            for x in ("E", "F", "K", "H")
        )

    def scalar(self, tol: float = 1e-9) -> complex | None:
        """Return c if mat = c*Id (square case), otherwise None."""
        n = self.mat.shape[0]
        if self.mat.shape[1] != n:
            return None
        c = np.trace(self.mat) / n
        return complex(c) if _nrm(self.mat - c * np.eye(n)) <= tol else None


def identity(V: WeightModule) -> Morphism:
    return Morphism(V, V, np.eye(V.dim, dtype=complex))


def swap_matrix(dv: int, dw: int) -> np.ndarray:
    """tau: V x W -> W x V on lexicographic bases."""
    P = np.zeros((dv * dw, dv * dw))
    for i in range(dv):
        for j in range(dw):
            P[j * dv + i, i * dw + j] = 1.0
    return P


def _r_coeff(rd: RootData, n: int) -> complex:
    return rd.qbrace(1) ** (2 * n) / rd.qfact_brace(n) * rd.qpow(n * (n - 1) / 2)


def r_matrix(V: WeightModule, W: WeightModule) -> Morphism:
    rd = V.rd
    VW = tensor(V, W)
    cartan = np.exp(1j * np.pi * np.multiply.outer(V.weights, W.weights).ravel() / (2 * rd.r))
    S = np.zeros((VW.dim, VW.dim), complex)
    En = np.eye(V.dim, dtype=complex)
    Fn = np.eye(W.dim, dtype=complex)
    for n in range(rd.r):
        S += _r_coeff(rd, n) * kron(En, Fn)
        En = En @ V.E
        Fn = Fn @ W.F
    return Morphism(VW, VW, cartan[:, None] * S)


def braiding(V: WeightModule, W: WeightModule) -> Morphism:
    R = r_matrix(V, W)
    return Morphism(R.dom, tensor(W, V), swap_matrix(V.dim, W.dim) @ R.mat)


def yang_baxter_residual(U: WeightModule, V: WeightModule, W: WeightModule) -> float:
    """Both sides map U x V x W -> W x V x U."""
    I = lambda M: np.eye(M.dim)  # noqa: E731
    lhs = (kron(braiding(V, W).mat, I(U)) @ kron(I(V), braiding(U, W).mat)
           @ kron(braiding(U, V).mat, I(W)))
    rhs = (kron(I(W), braiding(U, V).mat) @ kron(braiding(U, W).mat, I(V))
           @ kron(I(U), braiding(V, W).mat))
    return _nrm(lhs - rhs)


def twist(V: WeightModule, assert_simple: bool | None = None) -> Morphism:
    """Twist map v -> theta^-1 v, with theta the ribbon element."""
    rd = V.rd
    SF = -V.K @ V.F
    gauss = np.diag(np.exp(-1j * np.pi * V.weights**2 / (2 * rd.r)))
    theta = np.zeros((V.dim, V.dim), complex)
    SFn = np.eye(V.dim, dtype=complex)
    En = np.eye(V.dim, dtype=complex)
    for n in range(rd.r):
        theta += _r_coeff(rd, n) * SFn @ gauss @ En
        SFn = SFn @ SF
        En = En @ V.E
    theta = np.linalg.matrix_power(V.K, rd.r - 1) @ theta
    out = Morphism(V, V, np.linalg.inv(theta))
    if assert_simple is None:
        assert_simple = is_simple_label(V.label)
    if assert_simple and out.scalar(1e-9) is None:
        raise NonScalarTwist(f"twist on {V.label} is not scalar")
    return out


def unit(rd: RootData = DEFAULT_ROOT) -> WeightModule:
    return module(Simple(0), rd)


def duality_morphisms(V: WeightModule):
    """Return (i_V, e_V, i'_V, e'_V)."""
    d = V.dim
    Vs = dual(V)
    one = unit(V.rd)
    flat_id = np.eye(d, dtype=complex).reshape(d * d, 1)
    i_V = Morphism(one, tensor(V, Vs), flat_id)
    e_V = Morphism(tensor(Vs, V), one, flat_id.T.copy())
    Kp = np.linalg.matrix_power(V.K, V.rd.r - 1)
    Km = np.linalg.matrix_power(V.Kinv, V.rd.r - 1)
    # index (i, j) of V* x V carries the coefficient of v_i^* x v_j
    ip_V = Morphism(one, tensor(Vs, V), Kp.T.reshape(d * d, 1).copy())
    # v_j x v_i^* -> (K^{1-r})_{ij}
    ep_V = Morphism(tensor(V, Vs), one, Km.T.reshape(1, d * d).copy())
    return i_V, e_V, ip_V, ep_V


def zigzag_residuals(V: WeightModule) -> tuple[float, float]:
    i_V, e_V, _, _ = duality_morphisms(V)
    d = V.dim
    Iv = np.eye(d)
    left = kron(Iv, e_V.mat) @ kron(i_V.mat, Iv)
    right = kron(e_V.mat, Iv) @ kron(Iv, i_V.mat)
    return _nrm(left - Iv), _nrm(right - Iv)


def quantum_dimension(V: WeightModule) -> complex:
    i_V, _, _, ep_V = duality_morphisms(V)
    return complex((ep_V.mat @ i_V.mat)[0, 0])
