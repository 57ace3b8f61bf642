"""Hermitian forms, adjoints, bubble pops and the modified trace.

On a simple module with basis v_i = F^i v_0 the form is diagonal,
eta = diag(1, b_1, b_1 b_2, ...) with b_i the coefficient in
E v_i = b_i v_{i-1}; this is forced by E^H G = G F.  Products carry the
form kron(G_V, G_W) @ tau_{WV} X_{VW} with

    X_{VW} = (sqrt(theta)_{W x V})^-1 c_{VW} (sqrt(theta)_V x sqrt(theta)_W).

Longer products are built left to right: the form on (A x B) x C uses the
already-built form on A x B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (DegenerateForm, NonScalarBubble, UnsupportedDecomposition,
                     UnsupportedFusion, UnsupportedTrace)
from .intertwine import decompose, y_symbol
from .repcore import (DEFAULT_ROOT, Morphism, Neglecton, RootData, Simple,
                      TensorProduct, WeightModule, as_label, braiding,
                      is_simple_label, kron, module, swap_matrix, tensor)


@dataclass(frozen=True, eq=False)
class HermitianForm:
    module: WeightModule
    gram: np.ndarray

    @property
    def label(self):
        return self.module.label

    def residuals(self) -> dict:
        G, M = self.gram, self.module
        return {
            "hermitian": float(np.abs(G - G.conj().T).max()),
            "E": float(np.abs(M.E.conj().T @ G - G @ M.F).max()),
            "F": float(np.abs(M.F.conj().T @ G - G @ M.E).max()),
            "H": float(np.abs(M.H.conj().T @ G - G @ M.H).max()),
            "K": float(np.abs(M.K.conj().T @ G - G @ M.Kinv).max()),
        }


@dataclass(frozen=True)
class TraceConfig:
    d0: float = -4.0


def eta_simple(V: WeightModule) -> HermitianForm:
    betas = [V.E[i - 1, i] for i in range(1, V.dim)]
    diag = [1.0 + 0j]
    for b in betas:
        diag.append(np.conj(b) * diag[-1])
    return HermitianForm(V, np.diag(diag))


def _simple_sqrt_twist(label, rd: RootData) -> complex:
    r = rd.r
    if isinstance(label, Simple):
        i = label.n
        return rd.qpow(i * (i + 2 - 2 * r) / 4)
    if isinstance(label, Neglecton):
        return rd.qpow((label.alpha**2 - (r - 1) ** 2) / 4)
    raise UnsupportedDecomposition(f"no half twist for {label}")


def sqrt_twist(V: WeightModule) -> Morphism:
    """Half twist: scalar on simples, block-conjugated on semisimple products."""
    if is_simple_label(V.label):
        return Morphism(V, V, _simple_sqrt_twist(V.label, V.rd) * np.eye(V.dim))
    try:
        parts = decompose(V)
    except UnsupportedFusion as exc:
        raise UnsupportedDecomposition(str(exc)) from exc
    U = np.column_stack([p.embedding for p in parts])
    d = np.concatenate([np.full(p.embedding.shape[1], _simple_sqrt_twist(p.label, V.rd)) for p in parts])
    return Morphism(V, V, U @ np.diag(d) @ np.linalg.inv(U))


def x_map(V: WeightModule, W: WeightModule) -> Morphism:
    WV = tensor(W, V)
    st_wv = sqrt_twist(WV).mat
    st = kron(sqrt_twist(V).mat, sqrt_twist(W).mat)
    X = np.linalg.solve(st_wv, braiding(V, W).mat @ st)
    return Morphism(tensor(V, W), tensor(V, W), X)


def eta_tensor(fv: HermitianForm, fw: HermitianForm) -> HermitianForm:
    V, W = fv.module, fw.module
    eta = swap_matrix(W.dim, V.dim) @ x_map(V, W).mat
    return HermitianForm(tensor(V, W), kron(fv.gram, fw.gram) @ eta)


@lru_cache(maxsize=None)
def form(label, rd: RootData = DEFAULT_ROOT) -> HermitianForm:
    """Form on a simple, or on a left-associated product of simples."""
    label = as_label(label)
    if isinstance(label, TensorProduct):
        parts = label.parts
        if len(parts) == 1:
            return form(parts[0], rd)
        head = form(TensorProduct(parts[:-1]) if len(parts) > 2 else parts[0], rd)
        return eta_tensor(head, form(parts[-1], rd))
    return eta_simple(module(label, rd))


def product_form(*labels, rd: RootData = DEFAULT_ROOT) -> HermitianForm:
    return form(TensorProduct(tuple(as_label(x) for x in labels)), rd)


def adjoint(f: Morphism, form_dom: HermitianForm, form_cod: HermitianForm) -> Morphism:
    Gd = form_dom.gram
    s = np.linalg.svd(Gd, compute_uv=False)
    if s[-1] < 1e-12 * max(s[0], 1.0):
        raise DegenerateForm(f"form on {form_dom.label} is degenerate")
    return Morphism(f.cod, f.dom, np.linalg.solve(Gd, f.mat.conj().T @ form_cod.gram))


def y_dagger(a, b, c, rd: RootData = DEFAULT_ROOT) -> Morphism:
    Y = y_symbol(a, b, c, rd).map
    return adjoint(Y, form(c, rd), product_form(a, b, rd=rd))


@lru_cache(maxsize=None)
def _bubble(a, b, c, rd, tol):
    Y = y_symbol(a, b, c, rd).map
    P = y_dagger(a, b, c, rd).mat @ Y.mat
    B = np.trace(P) / P.shape[0]
    dev = float(np.abs(P - B * np.eye(P.shape[0])).max())
    if dev > tol * max(1.0, abs(B)) or abs(B.imag) > tol * max(1.0, abs(B)):
        raise NonScalarBubble(f"Y^dag Y on {c} in {a} x {b} is not a real scalar (dev {dev:.2e}, imag {B.imag:.2e})")
    return float(B.real)


def bubble_pop(a, b, c, rd: RootData = DEFAULT_ROOT, tol: float = 1e-9) -> float:
    return _bubble(as_label(a), as_label(b), as_label(c), rd, tol)


def modified_dimension(label, tc: TraceConfig = TraceConfig(), rd: RootData = DEFAULT_ROOT) -> float:
    """d(V_a) = d0 {a}/{r a}; S_{r-1} is treated as V_0 (limit d0 / r)."""
    label = as_label(label)
    if isinstance(label, Simple) and label.n == rd.r - 1:
        return tc.d0 / rd.r
    if not isinstance(label, Neglecton):
        raise UnsupportedTrace(f"{label} is not projective")
    a = label.alpha
    if abs(a - round(a)) < 1e-12:
        return tc.d0 / rd.r
    return tc.d0 * math.sin(math.pi * a / rd.r) / math.sin(math.pi * a)


def modified_trace(f: Morphism, tc: TraceConfig = TraceConfig(), tol: float = 1e-9) -> complex:
    """t(f) = d(V) <f> for an endomorphism of a projective simple V."""
    if f.dom is not f.cod and f.dom.label != f.cod.label:
        raise UnsupportedTrace("modified trace needs an endomorphism")
    c = f.scalar(tol)
    if c is None:
        raise UnsupportedTrace("endomorphism of a simple must be scalar")
    return c * modified_dimension(f.dom.label, tc, f.dom.rd)


def tree_norm(labels, leaves=None, tc: TraceConfig = TraceConfig(), rd: RootData = DEFAULT_ROOT) -> float:
    """Norm of a left-hanging tree.

    ``labels`` is the sequence u_0, u_1, ..., u_k of internal labels with
    u_0 the first leaf and u_k the root; ``leaves`` are the remaining leaves
    (defaults to all 1).  The value is prod_j B^{u_{j-1} leaf_j}_{u_j} * d(u_k).
    """
    labels = [as_label(x) for x in labels]
    leaves = [as_label(1)] * (len(labels) - 1) if leaves is None else [as_label(x) for x in leaves]
    out = 1.0
    for j in range(1, len(labels)):
        out *= bubble_pop(labels[j - 1], leaves[j - 1], labels[j], rd)
    return out * modified_dimension(labels[-1], tc, rd)
