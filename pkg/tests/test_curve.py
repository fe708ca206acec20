import numpy as np
import pandas as pd
import pytest
from scipy.spatial.transform import Rotation

from src.geometry.bspline import PeriodicBasis
from src.geometry.curve import (
    CoilCurve,
    circle_coil,
    length,
    length_gradient,
    point,
    polyline,
    reversed_orientation,
    rotated,
    scaled,
    torus_coil,
    translated,
    velocity,
    write_polyline_csv,
)
from src.physics.oracle import finite_difference_gradient
from src.shared.erros import CurveError, DegenerateVelocity
from tests.conftest import relative_error

T = np.linspace(0.0, 1.0, 257)


def test_constant_control_points_give_constant_curve():
    c = np.array([0.3, -1.0, 2.0])
    curva = CoilCurve(PeriodicBasis(2, 8), np.tile(c, (8, 1)))
    np.testing.assert_allclose(point(curva, T), np.tile(c, (T.size, 1)), atol=1e-15)
    np.testing.assert_allclose(velocity(curva, T), 0.0, atol=1e-12)


def test_realized_circle_lies_inside_control_circle():
    curva = circle_coil((0, 0, 0), 2.0, count=32)
    assert np.all(np.linalg.norm(point(curva, T), axis=1) < 2.0)


def test_translation_shifts_points_exactly():
    curva = circle_coil((0, 0, 0), 1.0, count=16)
    u = np.array([0.5, -0.25, 3.0])
    np.testing.assert_allclose(point(translated(curva, u), T), point(curva, T) + u, atol=1e-14)


def test_velocity_matches_finite_difference():
    curva = torus_coil(2.0, 1.0, 3, count=32)
    h = 1e-6
    for t in np.linspace(0.05, 0.95, 11) + 0.003:
        fd = (point(curva, t + h) - point(curva, t - h)) / (2 * h)
        np.testing.assert_allclose(velocity(curva, t), fd, rtol=1e-6, atol=1e-6 * np.linalg.norm(fd))


def test_circle_velocity_is_nearly_tangent():
    r = 1.5
    curva = circle_coil((1.0, 2.0, 0.5), r, count=32)
    centro = np.array([1.0, 2.0, 0.5])
    v = velocity(curva, T)
    radial = point(curva, T) - centro
    produto = np.abs(np.einsum("ij,ij->i", v, radial))
    assert np.all(produto <= 1e-3 * np.linalg.norm(v, axis=1) * r)


def test_circle_length_with_on_circle_control_points(rule16):
    assert length(circle_coil((1.0, 0.0, 1.0), 2.0, count=32), rule16) == pytest.approx(12.50594, abs=1e-4)


def test_torus_length(rule16):
    assert length(torus_coil(2.0, 1.0, 16, count=64), rule16) == pytest.approx(74.44167, abs=1e-3)


def test_length_is_homogeneous(rule16):
    curva = torus_coil(2.0, 1.0, 5, count=40)
    assert length(scaled(curva, 2.5), rule16) == pytest.approx(2.5 * length(curva, rule16), rel=1e-12)


def test_length_invariant_under_rotation_and_reversal(rule16):
    curva = torus_coil(2.0, 0.5, 4, count=32)
    R = Rotation.from_euler("zyx", [0.4, -1.1, 2.3]).as_matrix()
    ell = length(curva, rule16)
    assert length(rotated(curva, R), rule16) == pytest.approx(ell, rel=1e-12)
    assert length(reversed_orientation(curva), rule16) == pytest.approx(ell, rel=1e-12)


@pytest.mark.parametrize("count", [8, 16, 32])
def test_length_gradient_matches_finite_differences(rule16, count):
    rng = np.random.default_rng(count)
    base = circle_coil((0, 0, 0), 1.0, count=count)
    curva = base.with_control_points(base.control_points + 0.05 * rng.standard_normal((count, 3)))
    h = 1e-6 * 2.0
    fd = finite_difference_gradient(
        lambda x: length(curva.with_control_points(x.reshape(-1, 3)), rule16), curva.control_points.ravel(), h)
    assert relative_error(length_gradient(curva, rule16).ravel(), fd) <= 1e-6


def test_circle_length_gradient_points_outward(rule16):
    curva = circle_coil((0.5, -0.5, 0.0), 2.0, count=32)
    g = length_gradient(curva, rule16)
    radial = curva.control_points - np.array([0.5, -0.5, 0.0])
    cosseno = np.einsum("ij,ij->i", g, radial) / (np.linalg.norm(g, axis=1) * np.linalg.norm(radial, axis=1))
    assert np.all(np.arccos(np.clip(cosseno, -1.0, 1.0)) <= 1e-2)


def test_length_gradient_sums_to_zero(rule16):
    g = length_gradient(torus_coil(2.0, 1.0, 16, count=64), rule16)
    assert np.linalg.norm(g.sum(axis=0)) <= 1e-10


def test_degenerate_velocity_raises(rule16):
    ponto = CoilCurve(PeriodicBasis(2, 8), np.ones((8, 3)))
    with pytest.raises(DegenerateVelocity):
        length_gradient(ponto, rule16)


def test_circle_control_point_placement():
    curva = circle_coil((0, 0, 0), 1.0, count=32)
    np.testing.assert_allclose(curva.control_points[0], [1.0, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(curva.control_points[8], [0.0, 1.0, 0.0], atol=1e-15)


def test_circle_deviation_decreases_with_count(rule16):
    desvios = []
    for count in (8, 16, 32, 64):
        curva = circle_coil((0, 0, 0), 1.0, count=count)
        assert length(curva, rule16) < 2 * np.pi
        desvios.append(np.max(np.abs(np.linalg.norm(point(curva, T), axis=1) - 1.0)))
    assert all(a > b for a, b in zip(desvios, desvios[1:]))


def test_torus_control_points_lie_on_surface():
    curva = torus_coil(2.0, 1.0, 16, count=64)
    x, y, z = curva.control_points.T
    np.testing.assert_allclose(curva.control_points[0], [1.0, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose((np.hypot(x, y) - 2.0) ** 2 + z**2, 1.0, atol=1e-12)


@pytest.mark.parametrize("curva", [
    circle_coil((0, 0, 0), 2.0, count=32),
    torus_coil(2.0, 1.0, 16, count=64),
    circle_coil((1, 1, 1), 0.5, axis=(0.0, 1.0, 0.0), count=8, degree=3),
])
def test_closure(curva):
    np.testing.assert_array_equal(point(curva, 1.0), point(curva, 0.0))
    assert np.linalg.norm(point(curva, 1.0 - 1e-12) - point(curva, 0.0)) <= 1e-9


def test_circle_orientation_follows_axis():
    curva = circle_coil((0, 0, 0), 1.0, axis=(0.0, 0.0, -1.0), count=16)
    # anti-horário visto de -z, logo horário visto de +z
    normal = np.cross(point(curva, 0.0), velocity(curva, 0.0))
    assert normal[2] < 0


@pytest.mark.parametrize("kwargs", [
    {"center": (0, 0, 0), "radius": 1.0, "axis": (0.0, 0.0, 2.0)},
    {"center": (0, 0, 0), "radius": -1.0},
])
def test_invalid_circle_parameters(kwargs):
    with pytest.raises(CurveError):
        circle_coil(**kwargs)


def test_invalid_torus_parameters():
    with pytest.raises(CurveError):
        torus_coil(1.0, 2.0, 3)
    with pytest.raises(CurveError):
        torus_coil(2.0, 1.0, 0)


def test_control_point_validation():
    with pytest.raises(CurveError):
        CoilCurve(PeriodicBasis(2, 8), np.zeros((7, 3)))
    with pytest.raises(CurveError):
        CoilCurve(PeriodicBasis(2, 8), np.zeros((8, 2)))
    with pytest.raises(CurveError):
        CoilCurve(PeriodicBasis(2, 8), np.full((8, 3), np.nan))


def test_control_points_are_read_only():
    curva = circle_coil((0, 0, 0), 1.0, count=8)
    with pytest.raises(ValueError):
        curva.control_points[0, 0] = 5.0


def test_polyline_export(tmp_path):
    curva = circle_coil((0, 0, 0), 1.0, count=16, label="loop")
    tabela = polyline(curva, 65)
    assert list(tabela.columns) == ["t", "x", "y", "z"]
    assert len(tabela) == 65
    np.testing.assert_array_equal(tabela.iloc[0][["x", "y", "z"]].to_numpy(), tabela.iloc[-1][["x", "y", "z"]].to_numpy())
    caminho = write_polyline_csv(curva, tmp_path / "loop.csv", 65)
    lida = pd.read_csv(caminho, float_precision="round_trip")
    np.testing.assert_array_equal(lida.to_numpy(), tabela.to_numpy())
