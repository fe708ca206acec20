# src/geometry/curve.py

"""
Bobinas fechadas representadas por curvas B-spline periódicas:
s(t) = Σ_m R^p_m(t) P_m, com t em [0, 1] crescendo no sentido da corrente.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import numpy.typing as npt
import pandas as pd

from src.geometry.bspline import PeriodicBasis, assemble_matrix, basis_matrix
from src.geometry.quadrature import QuadratureRule, periodic_nodes
from src.shared.cache import CacheTabelas
from src.shared.erros import CurveError, DegenerateVelocity

logger = logging.getLogger(__name__)

Vec3 = npt.NDArray[np.float64]

DEGENERATE_VELOCITY_FACTOR = 1e-12
AXIS_TOLERANCE = 1e-9

_tabelas_nos = CacheTabelas(max_size=32, nome="base-nos")


@dataclass(frozen=True, eq=False)
class CoilCurve:
    """Curva fechada: base periódica, N pontos de controle (N, 3) em metros e um rótulo."""
    basis: PeriodicBasis
    control_points: npt.NDArray[np.float64]
    label: str = "coil"

    def __post_init__(self):
        pontos = np.array(self.control_points, dtype=float)
        if pontos.ndim != 2 or pontos.shape[1] != 3:
            raise CurveError(f"Pontos de controle devem ter forma (N, 3), recebido {pontos.shape}.")
        if pontos.shape[0] != self.basis.count:
            raise CurveError(f"{pontos.shape[0]} pontos de controle para uma base com N={self.basis.count}.")
        if not np.all(np.isfinite(pontos)):
            raise CurveError(f"Bobina '{self.label}' tem coordenadas não finitas.")
        pontos.setflags(write=False)
        object.__setattr__(self, "control_points", pontos)

    @property
    def count(self) -> int:
        return self.basis.count

    @property
    def degree(self) -> int:
        return self.basis.degree

    def with_control_points(self, control_points: npt.ArrayLike) -> "CoilCurve":
        return CoilCurve(self.basis, control_points, self.label)


@dataclass(frozen=True, eq=False)
class CurveSamples:
    """Geometria de uma curva nos nós de quadratura de todos os intervalos."""
    t: np.ndarray
    weights: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    values: np.ndarray = field(repr=False)
    derivatives: np.ndarray = field(repr=False)


def node_tables(basis: PeriodicBasis, rule: QuadratureRule) -> dict:
    """
    Valores e derivadas da base nos nós de quadratura, calculados uma vez por
    par (base, regra): os nós locais são os mesmos em todos os intervalos.
    """
    def _calcular():
        k, u, t, w = periodic_nodes(rule, basis.count)
        return {
            "t": t,
            "weights": w,
            "values": assemble_matrix(basis, k, u),
            "derivatives": assemble_matrix(basis, k, u, derivative=True),
        }
    return _tabelas_nos.get_or_compute((basis.degree, basis.count, rule.order), _calcular)


def sample(curve: CoilCurve, rule: QuadratureRule) -> CurveSamples:
    tabelas = node_tables(curve.basis, rule)
    return CurveSamples(
        t=tabelas["t"],
        weights=tabelas["weights"],
        points=tabelas["values"].T @ curve.control_points,
        velocities=tabelas["derivatives"].T @ curve.control_points,
        values=tabelas["values"],
        derivatives=tabelas["derivatives"],
    )


def point(curve: CoilCurve, t: Union[float, npt.ArrayLike]) -> Vec3:
    """s(t) = Σ R^p_m(t) P_m; aceita escalar ou vetor de parâmetros."""
    resultado = basis_matrix(curve.basis, t).T @ curve.control_points
    return resultado[0] if np.ndim(t) == 0 else resultado


def velocity(curve: CoilCurve, t: Union[float, npt.ArrayLike]) -> Vec3:
    """ṡ(t) = Σ Ṙ^p_m(t) P_m."""
    resultado = basis_matrix(curve.basis, t, derivative=True).T @ curve.control_points
    return resultado[0] if np.ndim(t) == 0 else resultado


def bounding_box_diagonal(points: npt.ArrayLike) -> float:
    pontos = np.asarray(points, dtype=float)
    return float(np.linalg.norm(pontos.max(axis=0) - pontos.min(axis=0)))


def length(curve: CoilCurve, rule: QuadratureRule) -> float:
    """ℓ = ∫ |ṡ(t)| dt, Gauss–Legendre em cada um dos N intervalos."""
    amostras = sample(curve, rule)
    return float(np.sum(amostras.weights * np.linalg.norm(amostras.velocities, axis=1)))


def length_gradient(curve: CoilCurve, rule: QuadratureRule) -> npt.NDArray[np.float64]:
    """
    ∂ℓ/∂P_k = ∫ Ṙ^p_k ṡ/|ṡ| dt, forma (N, 3). A matriz de derivadas só tem
    entradas nos intervalos do suporte de cada R^p_k.
    """
    amostras = sample(curve, rule)
    rapidez = np.linalg.norm(amostras.velocities, axis=1)
    limite = DEGENERATE_VELOCITY_FACTOR * bounding_box_diagonal(curve.control_points)
    if np.min(rapidez) <= limite:
        raise DegenerateVelocity(
            f"Bobina '{curve.label}': |ṡ| = {np.min(rapidez):.3e} <= {limite:.3e} em algum nó de quadratura."
        )
    tangente = amostras.velocities / rapidez[:, None]
    return amostras.derivatives @ (amostras.weights[:, None] * tangente)


def _plane_frame(axis: npt.ArrayLike) -> tuple[Vec3, Vec3, Vec3]:
    eixo = np.asarray(axis, dtype=float)
    if eixo.shape != (3,) or abs(np.linalg.norm(eixo) - 1.0) > AXIS_TOLERANCE:
        raise CurveError(f"Eixo {axis!r} não é unitário.")
    referencia = np.array([1.0, 0.0, 0.0])
    if np.linalg.norm(np.cross(referencia, eixo)) < 1e-8:
        referencia = np.array([0.0, 1.0, 0.0])
    e1 = referencia - np.dot(referencia, eixo) * eixo
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(eixo, e1)
    return e1, e2, eixo


def circle_coil(center: npt.ArrayLike, radius: float, axis: npt.ArrayLike = (0.0, 0.0, 1.0),
                count: int = 32, degree: int = 2, label: str = "circle") -> CoilCurve:
    """
    N pontos de controle igualmente espaçados SOBRE o círculo, CP_0 na direção
    +x (projetada no plano), sentido anti-horário visto de +axis.
    """
    if not radius > 0:
        raise CurveError(f"Raio deve ser positivo, recebido {radius!r}.")
    basis = PeriodicBasis(degree, count)
    e1, e2, _ = _plane_frame(axis)
    angulos = 2 * np.pi * np.arange(count) / count
    centro = np.asarray(center, dtype=float)
    pontos = centro + radius * (np.cos(angulos)[:, None] * e1 + np.sin(angulos)[:, None] * e2)
    return CoilCurve(basis, pontos, label)


def torus_coil(a: float, b: float, f: int, count: int = 64, degree: int = 2, label: str = "torus") -> CoilCurve:
    """Enrolamento toroidal: pontos de controle em p(t_j), t_j = 2πj/N."""
    if not (a > b > 0):
        raise CurveError(f"Parâmetros do toro inválidos: exige a > b > 0 (a={a}, b={b}).")
    if not isinstance(f, (int, np.integer)) or f < 1:
        raise CurveError(f"Número de voltas f={f!r} deve ser inteiro >= 1.")
    basis = PeriodicBasis(degree, count)
    t = 2 * np.pi * np.arange(count) / count
    raio = a - b * np.cos(f * t)
    pontos = np.column_stack([raio * np.cos(t), raio * np.sin(t), b * np.sin(f * t)])
    return CoilCurve(basis, pontos, label)


def translated(curve: CoilCurve, offset: npt.ArrayLike) -> CoilCurve:
    return curve.with_control_points(curve.control_points + np.asarray(offset, dtype=float))


def scaled(curve: CoilCurve, factor: float, origin: Optional[npt.ArrayLike] = None) -> CoilCurve:
    origem = np.zeros(3) if origin is None else np.asarray(origin, dtype=float)
    return curve.with_control_points(origem + factor * (curve.control_points - origem))


def rotated(curve: CoilCurve, rotation: npt.ArrayLike) -> CoilCurve:
    """Aplica a matriz de rotação 3x3 a todos os pontos de controle."""
    return curve.with_control_points(curve.control_points @ np.asarray(rotation, dtype=float).T)


def reversed_orientation(curve: CoilCurve) -> CoilCurve:
    """Inverte a ordem dos pontos de controle, o que inverte o sentido da corrente."""
    return curve.with_control_points(curve.control_points[::-1])


def polyline(curve: CoilCurve, samples: int = 256) -> pd.DataFrame:
    """Amostra a curva em `samples` valores uniformes de t (t=1 incluso para fechar o traço)."""
    t = np.linspace(0.0, 1.0, samples)
    pontos = point(curve, t)
    return pd.DataFrame({"t": t, "x": pontos[:, 0], "y": pontos[:, 1], "z": pontos[:, 2]})


def write_polyline_csv(curve: CoilCurve, path: Union[str, Path], samples: int = 256) -> Path:
    path = Path(path)
    polyline(curve, samples).to_csv(path, index=False, float_format="%.17g")
    logger.debug(f"Polilinha de '{curve.label}' gravada em {path}.")
    return path
