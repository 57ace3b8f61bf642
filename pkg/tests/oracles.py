"""Independent reference computations used by the tests.

These avoid the production shortcuts: norms come from composing splitting
maps in the full tensor module, generators from braiding whole tree vectors.
"""
import itertools
from math import comb

import numpy as np

from neglecton.hermite import form, modified_dimension, product_form
from neglecton.intertwine import y_symbol
from neglecton.repcore import DEFAULT_ROOT, Neglecton, Simple, braiding, module


def path_count(n: int) -> int:
    """Number of +-1 step sequences of length 2n that return to the start."""
    return sum(1 for steps in itertools.product((1, -1), repeat=2 * n) if sum(steps) == 0)


def path_count_closed(n: int) -> int:
    return comb(2 * n, n)


def tree_vector(labels, rd=DEFAULT_ROOT) -> np.ndarray:
    """Matrix of the tree u_k -> u_0 x 1 x ... x 1 as composed Y maps."""
    k = len(labels) - 1
    out = None
    for j in range(k, 0, -1):
        Y = y_symbol(labels[j - 1], Simple(1), labels[j], rd).mat
        # pad with the leaves already split off to the right
        step = np.kron(Y, np.eye(2 ** (k - j)))
        out = step if out is None else step @ out
    return out


def composed_tree_norm(labels, rd=DEFAULT_ROOT) -> float:
    """t(v^dag v) with the adjoint taken in the full product form."""
    k = len(labels) - 1
    v = tree_vector(labels, rd)
    G = product_form(labels[0], *([Simple(1)] * k), rd=rd).gram
    Gr = form(labels[-1], rd).gram
    P = np.linalg.solve(Gr, v.conj().T @ G @ v)
    c = np.trace(P) / P.shape[0]
    assert np.abs(P - c * np.eye(P.shape[0])).max() < 1e-8 * max(1.0, abs(c))
    return float((c * modified_dimension(labels[-1], rd=rd)).real)


def full_module_generator(space, i: int, rd=DEFAULT_ROOT) -> np.ndarray:
    """Unnormalized generator from braiding tree vectors in u_0 x 1^{2n}.

    i = 1 gives the flagpole double braid; i >= 2 crosses leaves i-1 and i.
    """
    alpha = space.alpha
    k = 2 * space.n
    trees = [tree_vector([Neglecton(alpha)] + [Neglecton(alpha + o) for o in t.offsets], rd) for t in space.basis]
    A = module(Neglecton(alpha), rd)
    one = module(Simple(1), rd)
    if i == 1:
        local = braiding(one, A).mat @ braiding(A, one).mat
        op = np.kron(local, np.eye(2 ** (k - 1)))
    else:
        c11 = braiding(one, one).mat
        op = np.kron(np.kron(np.eye(A.dim * 2 ** (i - 2)), c11), np.eye(2 ** (k - i)))
    basis = np.stack([t.ravel() for t in trees], axis=1)
    image = np.stack([(op @ t).ravel() for t in trees], axis=1)
    coeffs, *_ = np.linalg.lstsq(basis, image, rcond=None)
    resid = np.abs(basis @ coeffs - image).max()
    return coeffs, resid
