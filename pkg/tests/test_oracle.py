import numpy as np
import pytest
from scipy import integrate, special

from src.geometry.curve import circle_coil, torus_coil
from src.physics.em import mutual_inductance
from src.physics.oracle import (
    coaxial_configuration,
    coaxial_mi,
    coaxial_mi_db,
    coaxial_sensitivity_check,
    convergence_slope,
    elliptic_E,
    elliptic_K,
    finite_difference_gradient,
    polyline_mutual_inductance,
    radial_sensitivity,
)
from src.shared.erros import OracleDomainError


PARAMETROS = [0.0, 0.1, 0.5, 0.9, 0.999]


@pytest.mark.parametrize("m", PARAMETROS)
def test_elliptic_integrals_match_scipy(m):
    assert elliptic_K(m) == pytest.approx(special.ellipk(m), rel=1e-12)
    assert elliptic_E(m) == pytest.approx(special.ellipe(m), rel=1e-12)


@pytest.mark.parametrize("m", [0.0, 0.3, 0.8])
def test_elliptic_integrals_match_direct_quadrature(m):
    K, _ = integrate.quad(lambda phi: 1.0 / np.sqrt(1.0 - m * np.sin(phi) ** 2), 0.0, np.pi / 2, epsabs=1e-14, epsrel=1e-14)
    E, _ = integrate.quad(lambda phi: np.sqrt(1.0 - m * np.sin(phi) ** 2), 0.0, np.pi / 2, epsabs=1e-14, epsrel=1e-14)
    assert elliptic_K(m) == pytest.approx(K, rel=1e-12)
    assert elliptic_E(m) == pytest.approx(E, rel=1e-12)


def test_elliptic_integrals_accept_arrays():
    m = np.array(PARAMETROS)
    np.testing.assert_allclose(elliptic_K(m), special.ellipk(m), rtol=1e-12)
    np.testing.assert_allclose(elliptic_E(m), special.ellipe(m), rtol=1e-12)
    assert elliptic_K(0.0) == pytest.approx(np.pi / 2, rel=1e-15)


def test_legendre_relation():
    m = 0.37
    K, E = elliptic_K(m), elliptic_E(m)
    Kc, Ec = elliptic_K(1 - m), elliptic_E(1 - m)
    assert E * Kc + Ec * K - K * Kc == pytest.approx(np.pi / 2, rel=1e-12)


def test_elliptic_domain():
    assert elliptic_E(1.0) == 1.0
    with pytest.raises(OracleDomainError):
        elliptic_K(1.0)
    with pytest.raises(OracleDomainError):
        elliptic_K(-0.1)
    with pytest.raises(OracleDomainError):
        elliptic_E(1.5)


def test_coaxial_reference_values():
    assert coaxial_mi(1.0, 1.0, 1.0) == pytest.approx(0.39316, rel=1e-4)
    assert coaxial_mi(1.0, 1.77, 1.0) == pytest.approx(0.5640263, abs=2e-5)
    assert coaxial_mi(1.0, 2.0, 0.5, mu=3.0) == pytest.approx(3.0 * coaxial_mi(1.0, 2.0, 0.5), rel=1e-14)


@pytest.mark.parametrize("b", [0.5, 1.0, 1.77, 3.0])
def test_coaxial_derivative_matches_finite_differences(b):
    fd = finite_difference_gradient(lambda x: coaxial_mi(1.0, x[0], 1.0), [b], 1e-6)[0]
    assert coaxial_mi_db(1.0, b, 1.0) == pytest.approx(fd, abs=1e-8)


def test_coaxial_optimum_radius():
    assert abs(coaxial_mi_db(1.0, 1.77, 1.0)) < 5e-3
    assert coaxial_mi_db(1.0, 1.0, 1.0) > 0
    assert coaxial_mi_db(1.0, 3.0, 1.0) < 0


def test_coaxial_domain():
    with pytest.raises(OracleDomainError):
        coaxial_mi(1.0, 1.0, 0.0)
    with pytest.raises(OracleDomainError):
        coaxial_mi(-1.0, 1.0, 1.0)


def test_coaxial_configuration_layout():
    C, Cp = coaxial_configuration(1.0, 2.0, 0.5, count=16)
    assert C.count == Cp.count == 16
    np.testing.assert_allclose(np.linalg.norm(C.control_points[:, :2], axis=1), 2.0)
    np.testing.assert_allclose(Cp.control_points[:, 2], -0.5)


def test_radial_sensitivity_of_uniform_field():
    C = circle_coil((0, 0, 0), 2.0, count=8)
    d = C.control_points / 2.0
    assert radial_sensitivity(C, d, (0, 0, 0), 2.0) == pytest.approx(8.0)
    with pytest.raises(OracleDomainError):
        radial_sensitivity(C, d, (0, 0, 0), 0.0)


@pytest.mark.parametrize("b,count,tolerance", [(1.0, 32, 1.5e-2), (3.0, 32, 1.5e-2), (1.0, 64, 1e-2)])
def test_sensitivity_check_against_exact(rule16, b, count, tolerance):
    linha = coaxial_sensitivity_check(1.0, b, 1.0, count, rule16)
    assert linha["M_rel_error"] <= tolerance
    assert linha["dMdb_rel_error"] <= tolerance
    assert linha["count"] == count


def test_sensitivity_check_near_optimum(rule16):
    linha = coaxial_sensitivity_check(1.0, 1.77, 1.0, 32, rule16)
    assert linha["M_rel_error"] <= 1.5e-2
    assert linha["dMdb_abs_error"] <= 5e-3


def test_mutual_inductance_converges_quadratically(rule16):
    counts = [8, 16, 32, 64, 128]
    erros = [coaxial_sensitivity_check(1.0, 1.0, 1.0, n, rule16)["M_rel_error"] for n in counts]
    assert -2.4 <= convergence_slope(counts, erros) <= -1.6


def test_radial_sensitivity_converges_quadratically(rule16):
    counts = [8, 16, 32, 64, 128]
    erros = [coaxial_sensitivity_check(1.0, 1.0, 1.0, n, rule16)["dMdb_rel_error"] for n in counts]
    assert -2.4 <= convergence_slope(counts, erros) <= -1.6


def test_convergence_slope_on_exact_power_law():
    counts = np.array([8, 16, 32, 64])
    assert convergence_slope(counts, 3.0 * counts**-2.0) == pytest.approx(-2.0, abs=1e-12)


def test_finite_difference_gradient():
    g = finite_difference_gradient(lambda x: x[0] ** 2 + 3 * x[1], [1.5, -2.0], 1e-5)
    np.testing.assert_allclose(g, [3.0, 3.0], rtol=1e-9)
    with pytest.raises(ValueError):
        finite_difference_gradient(lambda x: 0.0, [1.0], 0.0)


@pytest.mark.parametrize("configuracao", ["coaxial", "tilted", "torus"])
def test_polyline_estimator_agrees_with_quadrature(rule16, tilted_pair, configuracao):
    if configuracao == "coaxial":
        C, Cp = coaxial_configuration(1.0, 1.5, 0.8, count=32)
    elif configuracao == "tilted":
        C, Cp = tilted_pair
    else:
        C = torus_coil(2.0, 1.0, 4, count=32)
        Cp = circle_coil((0, 0, -1.5), 3.0, count=32)
    referencia = polyline_mutual_inductance(C, Cp, segments=4000, chunk_size=200)
    assert mutual_inductance(C, Cp, rule16) == pytest.approx(referencia, rel=1e-4, abs=1e-6)
