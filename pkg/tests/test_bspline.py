import numpy as np
import pytest

from src.geometry.bspline import (
    PeriodicBasis,
    basis_derivative,
    basis_matrix,
    basis_value,
    local_pieces,
    support_intervals,
)
from src.shared.erros import BasisError


@pytest.fixture
def basis28():
    return PeriodicBasis(2, 8)


def test_quadratic_value_at_interval_midpoint(basis28):
    # t=0.1875 é o meio de I_1: N²_1(1.5) = 0.75
    assert basis_value(basis28, 0, 0.1875) == pytest.approx(0.75, abs=1e-15)


def test_value_outside_support_is_zero(basis28):
    assert basis_value(basis28, 0, 0.6) == 0.0


def test_derivative_at_start_of_first_piece_is_zero(basis28):
    assert basis_derivative(basis28, 0, 0.0) == 0.0


def test_derivative_matches_central_difference(basis28):
    h = 1e-6
    fd = (basis_value(basis28, 0, 0.1 + h) - basis_value(basis28, 0, 0.1 - h)) / (2 * h)
    assert abs(basis_derivative(basis28, 0, 0.1) - fd) <= 1e-8 * basis28.count


@pytest.mark.parametrize("degree,count", [(2, 8), (2, 32), (2, 64), (1, 8), (3, 16)])
def test_partition_of_unity(degree, count):
    basis = PeriodicBasis(degree, count)
    t = np.linspace(0.0, 1.0, 1000)
    valores = basis_matrix(basis, t)
    np.testing.assert_allclose(valores.sum(axis=0), 1.0, atol=1e-12)
    assert valores.min() >= 0.0
    assert valores.max() <= 1.0
    np.testing.assert_allclose(basis_matrix(basis, t, derivative=True).sum(axis=0), 0.0, atol=1e-10)


@pytest.mark.parametrize("degree,count", [(1, 8), (2, 8), (3, 16)])
def test_derivative_consistency_away_from_knots(degree, count):
    basis = PeriodicBasis(degree, count)
    rng = np.random.default_rng(7)
    h = 1e-7
    for t in rng.uniform(0.01, 0.99, 20):
        if np.min(np.abs(t * count - np.round(t * count))) < 1e-3:
            continue
        for m in range(count):
            fd = (basis_value(basis, m, t + h) - basis_value(basis, m, t - h)) / (2 * h)
            assert basis_derivative(basis, m, t) == pytest.approx(fd, rel=1e-6, abs=1e-6)


@pytest.mark.parametrize("m,expected", [(3, [3, 4, 5]), (7, [7, 0, 1]), (6, [6, 7, 0]), (0, [0, 1, 2])])
def test_support_intervals_split_modulo_n(basis28, m, expected):
    assert support_intervals(basis28, m) == expected


@pytest.mark.parametrize("degree,count", [(2, 8), (3, 16), (1, 8)])
def test_value_vanishes_outside_listed_intervals(degree, count):
    basis = PeriodicBasis(degree, count)
    for m in range(count):
        suporte = support_intervals(basis, m)
        assert len(set(suporte)) == degree + 1
        for k in set(range(count)) - set(suporte):
            assert basis_value(basis, m, (k + 0.37) / count) == 0.0


@pytest.mark.parametrize("derivative", [False, True])
def test_explicit_quadratic_pieces_match_recursion(derivative):
    u = np.linspace(0.0, 1.0, 101)
    explicito = local_pieces(2, u, derivative, explicit=True)
    recursivo = local_pieces(2, u, derivative, explicit=False)
    np.testing.assert_allclose(explicito, recursivo, rtol=0, atol=1e-14)


def test_t_equal_one_wraps_to_zero(basis28):
    for m in range(8):
        assert basis_value(basis28, m, 1.0) == basis_value(basis28, m, 0.0)


def test_linear_derivative_uses_left_limit_at_end():
    basis = PeriodicBasis(1, 8)
    # em t=1 vale o limite à esquerda (I_7); em t=0, o limite à direita (I_0)
    assert basis_derivative(basis, 7, 1.0) == pytest.approx(8.0)
    assert basis_derivative(basis, 6, 1.0) == pytest.approx(-8.0)
    assert basis_derivative(basis, 7, 0.0) == pytest.approx(-8.0)
    assert basis_derivative(basis, 0, 0.0) == pytest.approx(8.0)


def test_knots_and_span(basis28):
    np.testing.assert_allclose(basis28.knots, np.arange(9) / 8)
    assert basis28.knot_span == 0.125


@pytest.mark.parametrize("call", [
    lambda b: basis_value(b, 8, 0.5),
    lambda b: basis_value(b, -1, 0.5),
    lambda b: basis_value(b, 0, 1.5),
    lambda b: basis_value(b, 0, -0.1),
    lambda b: support_intervals(b, 9),
    lambda b: basis_matrix(b, [0.2, float("nan")]),
])
def test_invalid_arguments_raise(basis28, call):
    with pytest.raises(BasisError):
        call(basis28)


@pytest.mark.parametrize("degree,count", [(0, 8), (4, 16), (2, 2), (3, 3)])
def test_invalid_basis_rejected(degree, count):
    with pytest.raises(BasisError):
        PeriodicBasis(degree, count)


def test_from_knots_rejects_non_uniform():
    assert PeriodicBasis.from_knots(2, np.arange(9) / 8) == PeriodicBasis(2, 8)
    with pytest.raises(BasisError):
        PeriodicBasis.from_knots(2, [0.0, 0.1, 0.3, 0.6, 1.0])
