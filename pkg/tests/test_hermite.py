import math

import numpy as np
import pytest

from neglecton.errors import UnsupportedTrace
from neglecton.hermite import (TraceConfig, adjoint, bubble_pop, form, modified_dimension,
                               modified_trace, product_form, tree_norm, y_dagger)
from neglecton.intertwine import y_symbol
from neglecton.repcore import Neglecton as N, Simple as S, identity, module
from oracles import composed_tree_norm


@pytest.mark.parametrize("labels", [(1,), (2.3,), (1, 1), (2.3, 1), (2.3, 1, 1), (0.7, 2)])
def test_forms_are_invariant_and_hermitian(labels):
    f = form(labels[0]) if len(labels) == 1 else product_form(*labels)
    assert max(f.residuals().values()) < 1e-10


def test_adjoint_is_involutive():
    Y = y_symbol(N(2.3), S(1), N(1.3)).map
    fc, fp = form(N(1.3)), product_form(N(2.3), S(1))
    Yd = adjoint(Y, fc, fp)
    assert np.abs(adjoint(Yd, fp, fc).mat - Y.mat).max() < 1e-10


@pytest.mark.parametrize("a,b,c,expected", [
    (S(1), S(1), S(2), 1.0),
    (S(1), S(1), S(0), -math.sqrt(2)),
    (N(2.3), S(1), N(3.3), 1.0),
    (S(2), S(1), S(1), -1 / math.sqrt(2)),
])
def test_bubble_values(a, b, c, expected):
    assert abs(bubble_pop(a, b, c) - expected) < 1e-10


def test_bubble_is_ydagger_y():
    a, b, c = N(2.3), S(1), N(1.3)
    P = y_dagger(a, b, c).mat @ y_symbol(a, b, c).mat
    assert np.abs(P - bubble_pop(a, b, c) * np.eye(4)).max() < 1e-10


def test_modified_dimension():
    a = 2.3
    expected = -4 * math.sin(math.pi * a / 4) / math.sin(math.pi * a)
    assert abs(modified_dimension(N(a)) - expected) < 1e-12
    assert modified_dimension(S(3)) == pytest.approx(-1.0)
    assert modified_dimension(N(a), TraceConfig(d0=1.0)) == pytest.approx(expected / -4)
    with pytest.raises(UnsupportedTrace):
        modified_dimension(S(1))


def test_modified_trace_of_identity():
    assert abs(modified_trace(identity(module(N(2.3)))) - modified_dimension(N(2.3))) < 1e-12


@pytest.mark.parametrize("alpha", [0.3, 1.5, 2.3, 3.7])
def test_tree_norm_matches_composed_maps(alpha):
    for path in [(0, 1, 0), (0, -1, 0), (0, 1, 2, 1, 0), (0, -1, 0, 1, 0)]:
        labels = [N(alpha + o) for o in path]
        assert tree_norm(labels) == pytest.approx(composed_tree_norm(labels), rel=1e-8)
