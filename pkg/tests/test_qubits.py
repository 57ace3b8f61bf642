import math

import numpy as np
import pytest

from neglecton.errors import InvalidWord, NonDiagonalJM, UnsupportedN
from neglecton.hermite import bubble_pop, modified_dimension
from neglecton.qubits import (ALT_BASIS, alt_generator, build_alt_space, build_space,
                              enumerate_paths, generator_matrix, indefinite_unitarity_residual,
                              jucys_murphy, leakage, normalize, parse_word, space_dimension,
                              su_rescaled_single_qubit, word_matrix)
from neglecton.repcore import DEFAULT_ROOT, Neglecton as N, Simple as S
from oracles import path_count

ALPHAS = (0.3, 1.5, 2.3, 2.7, 3.7, 5.21)
qp = DEFAULT_ROOT.qpow


def b01(alpha):
    B0 = bubble_pop(N(alpha), S(1), N(alpha + 1)) * bubble_pop(N(alpha + 1), S(1), N(alpha))
    B1 = bubble_pop(N(alpha), S(1), N(alpha - 1)) * bubble_pop(N(alpha - 1), S(1), N(alpha))
    return B0, B1, modified_dimension(N(alpha))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dimension_matches_path_count(n):
    assert space_dimension(n) == path_count(n)
    assert len(enumerate_paths(n)) == path_count(n)


def test_two_qubit_basis_order():
    sp = build_space(2, 2.3)
    names = [str(t) for t in sp.basis]
    assert names[:4] == ["|00>", "|01>", "|10>", "|11>"]
    assert sp.basis[4].offsets == (1, 2, 1, 0)
    assert sp.basis[5].offsets == (-1, -2, -1, 0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_gram_from_bubbles(alpha):
    B0, B1, d = b01(alpha)
    assert np.allclose(build_space(1, alpha).gram, [B0 * d, B1 * d], rtol=1e-12)
    g = build_space(2, alpha).gram[:4]
    assert np.allclose(g, np.array([B0 * B0, B0 * B1, B0 * B1, B1 * B1]) * d, rtol=1e-9)


def test_frozen_gram_at_2_3():
    # values from the composed-map oracle
    g = build_space(2, 2.3).gram
    ref = [-1.388164821895974, -2.946138623669909, -2.9461386236695613, -6.252667300722019,
           1.1542173550312402, -20.025350439045173]
    assert np.allclose(g, ref, rtol=1e-9)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_j1_eigenvalues(alpha):
    J = generator_matrix(build_space(1, alpha), 1)
    assert np.abs(J - np.diag([qp(3 + alpha), qp(-5 - alpha)])).max() < 1e-10


@pytest.mark.parametrize("alpha", ALPHAS)
def test_normalized_b2_closed_form(alpha):
    q = DEFAULT_ROOT.q
    B0, B1, d = b01(alpha)
    off = q**-1 * np.sqrt(complex(B0 * d)) / np.sqrt(complex(B1 * d))
    P = qp(0.5) * np.array([[(1 + q * q) / (1 - qp(2 * alpha)), off],
                            [off, (1 + q * q) / (1 - qp(-2 * alpha))]])
    sp = build_space(1, alpha)
    b2 = word_matrix(sp, "2")
    assert np.abs(b2 - P).max() < 1e-8
    assert indefinite_unitarity_residual(sp, b2) < 1e-8


@pytest.mark.parametrize("alpha", ALPHAS)
def test_su_rescaled_gates(alpha):
    q = DEFAULT_ROOT.q
    B0, B1, d = b01(alpha)
    J, b = su_rescaled_single_qubit(build_space(1, alpha))
    assert np.abs(J - np.diag([qp(alpha), qp(-alpha)])).max() < 1e-10
    assert abs(abs(np.linalg.det(b)) - 1) < 1e-10
    if B0 * B1 > 0 or d > 0:
        # the d-free square roots only agree with the normalized entries here
        off = q**-1 * np.sqrt(complex(B0)) / np.sqrt(complex(B1))
        P = q**-1 * np.array([[(1 + q * q) / (1 - qp(2 * alpha)), off],
                              [off, (1 + q * q) / (1 - qp(-2 * alpha))]])
        assert np.abs(b - P).max() < 1e-8


@pytest.mark.parametrize("alpha", [0.3, 2.3, 2.5])
def test_all_generators_preserve_the_form(alpha):
    for n in (1, 2):
        sp = build_space(n, alpha)
        for i in range(1, 2 * n + 1):
            assert indefinite_unitarity_residual(sp, normalize(sp, generator_matrix(sp, i))) < 1e-8


def test_unitary_in_the_definite_window():
    sp = build_space(1, 2.5)
    b = word_matrix(sp, "2")
    assert (sp.signature > 0).all()
    assert np.abs(b.conj().T @ b - np.eye(2)).max() < 1e-10


def test_braid_and_affine_relations():
    sp = build_space(2, 2.3)
    g = {i: normalize(sp, generator_matrix(sp, i)) for i in (1, 2, 3, 4)}
    close = lambda A, B: np.abs(A - B).max() < 1e-8  # noqa: E731
    assert close(g[2] @ g[3] @ g[2], g[3] @ g[2] @ g[3])
    assert close(g[3] @ g[4] @ g[3], g[4] @ g[3] @ g[4])
    assert close(g[2] @ g[4], g[4] @ g[2])
    assert close(g[1] @ g[3], g[3] @ g[1])
    assert close(g[2] @ g[1] @ g[2] @ g[1], g[1] @ g[2] @ g[1] @ g[2])


def test_jucys_murphy_commute_and_are_diagonal():
    sp = build_space(2, 2.3)
    J = [jucys_murphy(sp, i) for i in (1, 2, 3, 4)]
    assert max(np.abs(A @ B - B @ A).max() for A in J for B in J) < 1e-9
    with pytest.raises(NonDiagonalJM):
        jucys_murphy(sp, 2, tol=-1.0)


def test_b3_block_structure_and_leakage():
    a = 2.3
    sp = build_space(2, a)
    M = word_matrix(sp, "3")
    nc1, nc2 = sp.index((1, 2, 1, 0)), sp.index((-1, -2, -1, 0))
    mask = np.zeros((6, 6), bool)
    for blk in ([0, nc1], [3, nc2], [1], [2]):
        mask[np.ix_(blk, blk)] = True
    assert np.abs(M[~mask]).max() < 1e-12
    cot = lambda x: 1 / math.tan(x)  # noqa: E731
    b0sq = abs((-1 + cot(math.pi * (1 + a) / 4)) / (-1 + cot(math.pi * (2 + a) / 4)))
    assert abs(leakage(sp, M) - math.sqrt(b0sq)) < 1e-9
    assert leakage(sp, word_matrix(sp, "2")) == 0.0


def test_words():
    assert parse_word("1^2 3^-1, 2") == [(1, 2), (3, -1), (2, 1)]
    with pytest.raises(InvalidWord):
        parse_word("2^x")
    sp = build_space(2, 2.3)
    with pytest.raises(InvalidWord):
        word_matrix(sp, "1")
    assert np.abs(word_matrix(sp, "") - np.eye(6)).max() < 1e-15
    assert np.abs(word_matrix(sp, "2 2^-1") - np.eye(6)).max() < 1e-12


def test_alt_space():
    sp = build_alt_space(1, 1.3)
    assert sp.dim == 3
    assert [(t.v1, t.v1p) for t in sp.basis] == list(ALT_BASIS)
    assert list(sp.comp_index) == [0, 1]
    with pytest.raises(UnsupportedN):
        build_alt_space(2, 1.3)


@pytest.mark.parametrize("alpha", [0.7, 1.3, 2.5])
def test_alt_ising_generators_do_not_leak(alpha):
    sp = build_alt_space(1, alpha)
    for i in (1, 2):
        M = normalize(sp, alt_generator(sp, i))
        assert leakage(sp, M) < 1e-12
        assert indefinite_unitarity_residual(sp, M) < 1e-8
    g3 = normalize(sp, alt_generator(sp, 3))
    assert indefinite_unitarity_residual(sp, g3) < 1e-8
