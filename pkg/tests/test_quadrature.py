import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from src.geometry.quadrature import gauss_legendre, integrate_interval, periodic_nodes
from src.shared.erros import QuadratureError


def test_midpoint_rule():
    regra = gauss_legendre(1)
    np.testing.assert_allclose(regra.nodes, [0.0], atol=1e-16)
    np.testing.assert_allclose(regra.weights, [2.0])


def test_two_point_rule():
    regra = gauss_legendre(2)
    np.testing.assert_allclose(regra.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(regra.weights, [1.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("order", [1, 2, 3, 5, 8, 16, 33, 64])
def test_rule_invariants(order):
    regra = gauss_legendre(order)
    assert regra.weights.sum() == pytest.approx(2.0, abs=1e-14)
    assert np.all(regra.weights > 0)
    assert np.all(np.diff(regra.nodes) > 0)
    np.testing.assert_array_equal(regra.nodes, -regra.nodes[::-1])
    assert np.all(np.abs(regra.nodes) < 1)


@pytest.mark.parametrize("order", [4, 16, 40, 64])
def test_matches_numpy_leggauss(order):
    nos, pesos = leggauss(order)
    regra = gauss_legendre(order)
    np.testing.assert_allclose(regra.nodes, nos, atol=1e-14)
    np.testing.assert_allclose(regra.weights, pesos, atol=1e-14)


def test_degree_thirty_monomial_with_sixteen_points():
    regra = gauss_legendre(16)
    assert np.sum(regra.weights * regra.nodes**30) == pytest.approx(2 / 31, abs=1e-14)


@pytest.mark.parametrize("order", [3, 6, 10])
def test_polynomial_exactness(order):
    regra = gauss_legendre(order)
    for grau in range(2 * order):
        exato = 2.0 / (grau + 1) if grau % 2 == 0 else 0.0
        valor = np.sum(regra.weights * regra.nodes**grau)
        assert valor == pytest.approx(exato, rel=1e-13, abs=1e-14)


def test_integrate_interval_examples():
    regra = gauss_legendre(2)
    assert integrate_interval(regra, 0.0, 0.125, np.ones_like) == pytest.approx(0.125, rel=1e-15)
    assert integrate_interval(regra, 0.0, 1.0, lambda t: t) == pytest.approx(0.5, rel=1e-15)


def test_periodic_integral_vanishes():
    regra = gauss_legendre(16)
    total = sum(integrate_interval(regra, k / 8, (k + 1) / 8, lambda t: np.sin(2 * np.pi * t)) for k in range(8))
    assert abs(total) <= 1e-12


def test_integrate_interval_rejects_empty_interval():
    with pytest.raises(QuadratureError):
        integrate_interval(gauss_legendre(4), 1.0, 1.0, np.ones_like)


def test_periodic_nodes_cover_unit_interval():
    k, u, t, w = periodic_nodes(gauss_legendre(5), 8)
    assert k.shape == u.shape == t.shape == w.shape == (40,)
    assert w.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all(np.diff(t) > 0)
    assert 0.0 < t.min() and t.max() < 1.0


@pytest.mark.parametrize("order", [0, 65, -3, 2.5])
def test_order_out_of_range(order):
    with pytest.raises(QuadratureError):
        gauss_legendre(order)


def test_rules_are_cached():
    assert gauss_legendre(16) is gauss_legendre(16)
