import math

import numpy as np
import pytest

from neglecton.errors import InvalidLabel, NonScalarTwist
from neglecton.repcore import (DEFAULT_ROOT, Neglecton, RootData, Simple, TensorProduct, as_label,
                               braiding, check_alpha, dual, module, parse_label, quantum_dimension,
                               tensor, tensor_of, twist, yang_baxter_residual, zigzag_residuals)

ALPHAS = (0.3, 1.5, 2.3, 2.7, 3.7, 5.21)
LABELS = [Simple(n) for n in range(4)]


@pytest.mark.parametrize("alpha", ALPHAS)
def test_relations_hold_on_all_simples(alpha):
    for lab in LABELS + [Neglecton(alpha)]:
        res = module(lab).relation_residuals()
        assert max(res.values()) < 1e-10, (lab, res)


def test_q_is_primitive_eighth_root():
    q = DEFAULT_ROOT.q
    assert abs(q - np.exp(1j * np.pi / 4)) < 1e-15
    assert abs(q**8 - 1) < 1e-14


def test_odd_r_rejected():
    with pytest.raises(InvalidLabel):
        RootData(r=5)


@pytest.mark.parametrize("alpha", [1.0, 2.0, 3.0, 5.0 + 1e-8, -1.0])
def test_guard_rejects_integers(alpha):
    with pytest.raises(InvalidLabel):
        check_alpha(alpha)
    with pytest.raises(InvalidLabel):
        module(Neglecton(alpha))


def test_guard_allows_multiples_of_r():
    check_alpha(0.0)
    check_alpha(4.0)


def test_label_roundtrip_and_rounding():
    assert Neglecton(2.3 + 1) == Neglecton(3.3)
    for lab in (Simple(2), Neglecton(2.3), TensorProduct((Simple(1), Neglecton(0.5)))):
        assert parse_label(str(lab)) == lab
    assert as_label(1) == Simple(1)
    assert as_label(1.5) == Neglecton(1.5)
    with pytest.raises(InvalidLabel):
        parse_label("W3")
    with pytest.raises(InvalidLabel):
        module(Simple(4))


def test_dimensions():
    assert [module(s).dim for s in LABELS] == [1, 2, 3, 4]
    assert module(Neglecton(2.3)).dim == 4
    assert tensor_of(1, 2.3).dim == 8


def test_tensor_and_dual_are_modules():
    V = tensor(module(Simple(1)), module(Neglecton(2.3)))
    assert max(V.relation_residuals().values()) < 1e-10
    D = dual(module(Neglecton(2.3)))
    res = D.relation_residuals()
    res.pop("K=q^H")
    assert max(res.values()) < 1e-10


def test_braiding_intertwines():
    for a, b in [(Simple(1), Simple(1)), (Simple(1), Neglecton(2.3)), (Simple(2), Neglecton(0.7))]:
        c = braiding(module(a), module(b))
        assert c.intertwiner_residual() < 1e-10


def test_yang_baxter_all_triples():
    pool = [module(s) for s in LABELS] + [module(Neglecton(2.3))]
    worst = max(yang_baxter_residual(U, V, W) for U in pool for V in pool for W in pool)
    assert worst < 1e-9


@pytest.mark.parametrize("alpha", ALPHAS)
def test_zigzag(alpha):
    for lab in LABELS + [Neglecton(alpha)]:
        assert max(zigzag_residuals(module(lab))) < 1e-10


def test_quantum_dimensions():
    # (-1)^n [n+1] with the K^{1-r} pivot; zero on S_3 and on neglectons
    for n in range(4):
        expected = (-1) ** n * math.sin(math.pi * (n + 1) / 4) / math.sin(math.pi / 4)
        assert abs(quantum_dimension(module(Simple(n))) - expected) < 1e-10
    assert abs(quantum_dimension(module(Neglecton(2.3)))) < 1e-10


def test_twist_scalar_on_simples_only():
    for lab in LABELS + [Neglecton(2.3)]:
        assert twist(module(lab)).scalar() is not None
    with pytest.raises(NonScalarTwist):
        twist(tensor_of(1, 1), assert_simple=True)


def test_v0_is_isomorphic_to_s3():
    import scipy.linalg as sl
    A, B = module(Neglecton(0.0)), module(Simple(3))
    n = A.dim
    # X A(x) = B(x) X for x in E, F, K, solved on vec(X) (column major)
    rows = [np.kron(A.action(x).T, np.eye(n)) - np.kron(np.eye(n), B.action(x)) for x in "EFK"]
    null = sl.null_space(np.vstack(rows))
    assert null.shape[1] == 1
    X = null[:, 0].reshape(n, n, order="F")
    assert np.linalg.cond(X) < 1e6
