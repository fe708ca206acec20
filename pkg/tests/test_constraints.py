from dataclasses import replace

import numpy as np
import pytest

from src.geometry.curve import length
from src.optimization.constraints import (
    SENTINEL,
    bound_vectors,
    constraint_jacobian,
    constraint_values,
    length_constraint_gradients,
    length_constraints,
)
from src.optimization.layout import DesignLayout, pack
from src.physics.oracle import finite_difference_gradient
from src.scene.cena import BoundSpec, LengthSpec
from src.shared.erros import SceneError
from tests.conftest import relative_error


def test_bounds_only_on_constrained_axes(example2):
    lower, upper = bound_vectors(example2)
    x = pack(example2)
    np.testing.assert_array_equal(lower[0::3], -SENTINEL)
    np.testing.assert_array_equal(upper[1::3], SENTINEL)
    np.testing.assert_allclose(lower[2::3], x[2::3] - 0.5)
    np.testing.assert_allclose(upper[2::3], x[2::3] + 0.5)


def test_frozen_axis_gives_coincident_bounds(example3_case3):
    lower, upper = bound_vectors(example3_case3)
    x = pack(example3_case3)
    np.testing.assert_array_equal(lower[2::3], x[2::3])
    np.testing.assert_array_equal(upper[2::3], x[2::3])
    assert np.all(lower[0::3] == -SENTINEL)


def test_radial_bounds(example1):
    lower, upper = bound_vectors(example1)
    assert lower.shape == upper.shape == (1,)
    assert lower[0] == pytest.approx(0.5, rel=1e-14)
    assert upper[0] == pytest.approx(5.0, rel=1e-14)


def test_scene_without_bounds_is_unbounded(example2):
    lower, upper = bound_vectors(replace(example2, bounds=()))
    assert np.all(lower == -SENTINEL) and np.all(upper == SENTINEL)


def test_infeasible_bounds_are_rejected(example2):
    invalido = BoundSpec(coil=0, lower=np.array([0.1, -1.0, -1.0]), upper=np.array([1.0, 1.0, 1.0]))
    with pytest.raises(SceneError):
        bound_vectors(replace(example2, bounds=(invalido,)))


def test_length_constraints_at_initial_point(example2):
    x = pack(example2)
    ell = length(example2.coils[0].curve, example2.rule)
    ((g_lower, g_upper),) = length_constraints(example2, x)
    assert g_lower == pytest.approx(-0.01 * ell, rel=1e-10)
    assert g_upper == pytest.approx(-0.01 * ell, rel=1e-10)
    np.testing.assert_allclose(constraint_values(example2, x), [g_lower, g_upper])


def test_scaled_coil_violates_upper_window(example2):
    layout = DesignLayout(example2)
    pontos = example2.coils[0].curve.control_points
    centro = pontos.mean(axis=0)
    x = (centro + 1.05 * (pontos - centro)).ravel()
    g = constraint_values(example2, x, layout)
    assert g[0] < 0 < g[1]


def test_length_gradients_are_opposite(example2):
    ((g_lower, g_upper),) = length_constraint_gradients(example2, pack(example2))
    np.testing.assert_array_equal(g_lower, -g_upper)


@pytest.mark.parametrize("semente", range(5))
def test_constraint_jacobian_matches_finite_differences(example2, semente):
    layout = DesignLayout(example2)
    x = pack(example2) + 0.01 * np.random.default_rng(semente).standard_normal(layout.size)
    jacobiano = constraint_jacobian(example2, x, layout)
    assert jacobiano.shape == (2, 96)
    for linha in range(2):
        fd = finite_difference_gradient(lambda z: constraint_values(example2, z, layout)[linha], x, 1e-6)
        assert relative_error(jacobiano[linha], fd) <= 1e-6


def test_length_gradients_componentwise_on_torus_coil(example3_case3):
    layout = DesignLayout(example3_case3)
    x = pack(example3_case3) + 0.02 * np.random.default_rng(11).standard_normal(layout.size)
    ((g_lower, g_upper),) = length_constraint_gradients(example3_case3, x, layout)
    valores = [lambda z, linha=linha: constraint_values(example3_case3, z, layout)[linha] for linha in range(2)]
    for analitico, g in zip((g_lower, g_upper), valores):
        assert analitico.shape == (layout.size,)
        assert relative_error(analitico, finite_difference_gradient(g, x, 1e-6)) <= 1e-6


def test_constraint_jacobian_without_length_constraints(example1):
    assert constraint_jacobian(example1, pack(example1)).shape == (0, 1)
    assert constraint_values(example1, pack(example1)).size == 0


def test_radial_length_gradient(example1):
    ell0 = length(example1.coils[0].curve, example1.rule)
    cena = replace(example1, length_specs=(LengthSpec(0, 0.9, 1.1, ell0),))
    x = pack(cena)
    jacobiano = constraint_jacobian(cena, x)
    # ℓ é homogêneo de grau 1 no raio
    assert jacobiano[1, 0] == pytest.approx(ell0 / x[0], rel=1e-10)
    assert jacobiano[0, 0] == pytest.approx(-ell0 / x[0], rel=1e-10)
