# tests/conftest.py

import numpy as np
import pytest

from src.geometry.curve import circle_coil
from src.geometry.quadrature import gauss_legendre
from src.scene.fixtures import load_example


@pytest.fixture(scope="session")
def rule16():
    return gauss_legendre(16)


@pytest.fixture
def coaxial_pair():
    """Receptora de raio 1 em z=0 e transmissora de raio 1 em z=-1, N=32."""
    C = circle_coil((0.0, 0.0, 0.0), 1.0, count=32, label="C")
    Cp = circle_coil((0.0, 0.0, -1.0), 1.0, count=32, label="Cp")
    return C, Cp


@pytest.fixture
def tilted_pair():
    eixo = np.array([0.3, -0.2, 1.0])
    C = circle_coil((0.2, 0.1, 0.0), 1.3, axis=eixo / np.linalg.norm(eixo), count=16, label="tilted")
    Cp = circle_coil((-0.4, 0.3, -1.2), 0.8, count=12, degree=3, label="small")
    return C, Cp


@pytest.fixture(scope="session")
def example2():
    return load_example("example2")


@pytest.fixture(scope="session")
def example1():
    return load_example("example1-b1-n32")


@pytest.fixture(scope="session")
def example3_case3():
    return load_example("example3-case3")


def relative_error(analytic, numeric, floor=1e-12):
    """max |a - n| / max(max |n|, floor): métrica das verificações por diferenças finitas."""
    analytic, numeric = np.asarray(analytic), np.asarray(numeric)
    return float(np.max(np.abs(analytic - numeric))) / max(float(np.max(np.abs(numeric))), floor)
