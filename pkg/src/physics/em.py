# src/physics/em.py

"""
Grandezas magnetostáticas de bobinas filamentares descritas por B-splines.

Todas as integrais de contorno usam a mesma quadratura de Gauss–Legendre por
intervalo. O núcleo de pares de intervalos (N x N' blocos de Q x Q nós) é
avaliado em blocos de linhas (nós da primeira bobina); os blocos podem rodar
em threads, mas a redução é sempre feita na ordem dos blocos, então o
resultado não depende do número de threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from src.geometry.curve import CoilCurve, CurveSamples, bounding_box_diagonal, sample
from src.geometry.quadrature import QuadratureRule
from src.shared.configuracao import Settings, get_settings
from src.shared.erros import NearSingular

logger = logging.getLogger(__name__)

NEAR_SINGULAR_FACTOR = 1e-6
DEFAULT_MU = 1.0


@dataclass(frozen=True, eq=False)
class MICoefficients:
    """Matriz m_{a,b} (N x N') com M = Σ_{a,b} m_{a,b} P_a·P'_b."""
    matrix: npt.NDArray[np.float64]
    labels: Tuple[str, str]

    def reconstruct(self, control_points: npt.ArrayLike, control_points_prime: npt.ArrayLike) -> float:
        return float(np.einsum("ab,ai,bi->", self.matrix, np.asarray(control_points), np.asarray(control_points_prime)))


@dataclass(frozen=True, eq=False)
class SensitivitySet:
    """d_m = ∂M/∂P_m (N, 3) e d'_n = ∂M/∂P'_n (N', 3), em henry/metro."""
    d: npt.NDArray[np.float64]
    d_prime: npt.NDArray[np.float64]


def _row_blocks(n_rows: int, chunk_size: int) -> List[slice]:
    return [slice(i, min(i + chunk_size, n_rows)) for i in range(0, n_rows, chunk_size)]


def _map_blocks(func: Callable[[slice], object], n_rows: int, settings: Settings) -> list:
    """Avalia `func` em cada bloco de linhas; devolve os resultados na ordem dos blocos."""
    blocos = _row_blocks(n_rows, settings.chunk_size)
    if settings.threads > 1 and len(blocos) > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as executor:
            return list(executor.map(func, blocos))
    return [func(bloco) for bloco in blocos]


def _singularity_threshold(*point_sets: np.ndarray) -> float:
    return NEAR_SINGULAR_FACTOR * max(bounding_box_diagonal(p) for p in point_sets)


def _check_distance(min_distance: float, threshold: float, contexto: str):
    if min_distance <= threshold:
        raise NearSingular(
            f"{contexto}: distância mínima entre nós {min_distance:.3e} <= {threshold:.3e}.",
            min_distance=min_distance,
            threshold=threshold,
        )


def _neumann_pass(sa: CurveSamples, sb: CurveSamples, mu: float, with_sensitivity: bool,
                  settings: Settings, contexto: str):
    """
    Uma varredura do núcleo de Neumann entre duas bobinas amostradas.

    Devolve M e, se pedido, os campos U, V por nó de cada bobina que montam as
    sensibilidades: d_m = μ/4π Σ_i w_i [Ṙ_m(t_i) U_i - R_m(t_i) V_i].
    """
    limite = _singularity_threshold(sa.points, sb.points)
    wb = sb.weights

    def _bloco(linhas: slice):
        sa_pts, sa_vel, wa = sa.points[linhas], sa.velocities[linhas], sa.weights[linhas]
        diff = sa_pts[:, None, :] - sb.points[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        distancia = float(r.min())
        if distancia <= limite:
            return distancia, None
        inv = 1.0 / r
        dot = sa_vel @ sb.velocities.T
        M = float(np.sum(wa * ((dot * inv) @ wb)))
        if not with_sensitivity:
            return distancia, (M,)
        # lado de C
        U_a = (inv * wb) @ sb.velocities
        k3 = dot * inv**3
        k3_b = k3 * wb
        V_a = sa_pts * k3_b.sum(axis=1)[:, None] - k3_b @ sb.points
        # lado de C'
        U_b = (inv * wa[:, None]).T @ sa_vel
        k3_a = k3 * wa[:, None]
        V_b = sb.points * k3_a.sum(axis=0)[:, None] - k3_a.T @ sa_pts
        return distancia, (M, U_a, V_a, U_b, V_b)

    resultados = _map_blocks(_bloco, sa.points.shape[0], settings)
    _check_distance(min(r[0] for r in resultados), limite, contexto)
    fator = mu / (4.0 * np.pi)
    M = fator * sum(r[1][0] for r in resultados)
    if not with_sensitivity:
        return M, None
    U_a = np.concatenate([r[1][1] for r in resultados])
    V_a = np.concatenate([r[1][2] for r in resultados])
    U_b = np.zeros_like(sb.points)
    V_b = np.zeros_like(sb.points)
    for r in resultados:
        U_b += r[1][3]
        V_b += r[1][4]
    d = fator * (sa.derivatives @ (sa.weights[:, None] * U_a) - sa.values @ (sa.weights[:, None] * V_a))
    d_prime = fator * (sb.derivatives @ (wb[:, None] * U_b) - sb.values @ (wb[:, None] * V_b))
    return M, SensitivitySet(d=d, d_prime=d_prime)


def _contexto(C: CoilCurve, Cp: CoilCurve) -> str:
    return f"Par ('{C.label}', '{Cp.label}')"


def mutual_inductance(C: CoilCurve, Cp: CoilCurve, rule: QuadratureRule, mu: float = DEFAULT_MU,
                      settings: Optional[Settings] = None) -> float:
    """Fórmula de Neumann M = μ/4π ∮∮ ds·ds'/|s - s'| (henry)."""
    settings = settings or get_settings()
    M, _ = _neumann_pass(sample(C, rule), sample(Cp, rule), mu, False, settings, _contexto(C, Cp))
    return M


def mi_with_sensitivity(C: CoilCurve, Cp: CoilCurve, rule: QuadratureRule, mu: float = DEFAULT_MU,
                        settings: Optional[Settings] = None,
                        samples: Optional[Tuple[CurveSamples, CurveSamples]] = None) -> Tuple[float, SensitivitySet]:
    """M e as sensibilidades (d, d') numa única varredura do núcleo."""
    settings = settings or get_settings()
    sa, sb = samples if samples is not None else (sample(C, rule), sample(Cp, rule))
    return _neumann_pass(sa, sb, mu, True, settings, _contexto(C, Cp))


def mi_sensitivity(C: CoilCurve, Cp: CoilCurve, rule: QuadratureRule, mu: float = DEFAULT_MU,
                   settings: Optional[Settings] = None) -> SensitivitySet:
    """
    d_m = μ/4π ∫∫ [Ṙ_m(t) ṡ'/|s-s'| - R_m(t)(ṡ·ṡ')(s-s')/|s-s'|³] dt dt' e d'_n com
    os papéis trocados; são exatamente ∂M/∂P_m e ∂M/∂P'_n da M discretizada.
    """
    _, sensibilidades = mi_with_sensitivity(C, Cp, rule, mu, settings)
    return sensibilidades


def mi_coefficients(C: CoilCurve, Cp: CoilCurve, rule: QuadratureRule, mu: float = DEFAULT_MU,
                    settings: Optional[Settings] = None) -> MICoefficients:
    """m_{a,b} = μ/4π ∫∫ Ṙ_a(t) Ṙ'_b(t') / |s(t) - s'(t')| dt dt'."""
    settings = settings or get_settings()
    sa, sb = sample(C, rule), sample(Cp, rule)
    limite = _singularity_threshold(sa.points, sb.points)
    lado_b = sb.derivatives * sb.weights  # (N', n')

    def _bloco(linhas: slice):
        diff = sa.points[linhas][:, None, :] - sb.points[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        distancia = float(r.min())
        if distancia <= limite:
            return distancia, None
        lado_a = sa.derivatives[:, linhas] * sa.weights[linhas]
        return distancia, lado_a @ (1.0 / r) @ lado_b.T

    resultados = _map_blocks(_bloco, sa.points.shape[0], settings)
    _check_distance(min(r[0] for r in resultados), limite, _contexto(C, Cp))
    matriz = np.zeros((C.count, Cp.count))
    for r in resultados:
        matriz += r[1]
    return MICoefficients(matrix=mu / (4.0 * np.pi) * matriz, labels=(C.label, Cp.label))


def _field_kernel(coil: CoilCurve, points: np.ndarray, rule: QuadratureRule, settings: Settings,
                  potential: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Σ_j w_j ṡ_j × (x - s_j)/|x - s_j|³ (ou ṡ_j/|x - s_j|) e a distância mínima por ponto."""
    amostras = sample(coil, rule)
    v = amostras.velocities * amostras.weights[:, None]

    def _bloco(linhas: slice):
        diff = points[linhas][:, None, :] - amostras.points[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        with np.errstate(divide="ignore", invalid="ignore"):
            if potential:
                valor = (1.0 / r) @ v
            else:
                valor = np.einsum("ijk,ij->ik", np.cross(v[None, :, :], diff), 1.0 / r**3)
        return valor, r.min(axis=1)

    resultados = _map_blocks(_bloco, points.shape[0], settings)
    return np.concatenate([r[0] for r in resultados]), np.concatenate([r[1] for r in resultados])


def _evaluate_field(coil, current, x, rule, mu, settings, potential):
    settings = settings or get_settings()
    pontos = np.atleast_2d(np.asarray(x, dtype=float))
    valor, distancias = _field_kernel(coil, pontos, rule, settings, potential)
    limite = NEAR_SINGULAR_FACTOR * bounding_box_diagonal(coil.control_points)
    _check_distance(float(distancias.min()), limite, f"Campo da bobina '{coil.label}'")
    resultado = mu * current / (4.0 * np.pi) * valor
    return resultado[0] if np.ndim(x) == 1 else resultado


def magnetic_field(coil: CoilCurve, current: float, x: npt.ArrayLike, rule: QuadratureRule,
                   mu: float = DEFAULT_MU, settings: Optional[Settings] = None) -> np.ndarray:
    """Biot–Savart: B(x) = μI'/4π ∮ ds' × (x - s')/|x - s'|³ (tesla). x: (3,) ou (P, 3)."""
    return _evaluate_field(coil, current, x, rule, mu, settings, potential=False)


def vector_potential(coil: CoilCurve, current: float, x: npt.ArrayLike, rule: QuadratureRule,
                     mu: float = DEFAULT_MU, settings: Optional[Settings] = None) -> np.ndarray:
    """A(x) = μI'/4π ∮ ds'/|x - s'| (tesla·metro)."""
    return _evaluate_field(coil, current, x, rule, mu, settings, potential=True)


def flux_through(C: CoilCurve, source: CoilCurve, current: float, rule: QuadratureRule,
                 mu: float = DEFAULT_MU, settings: Optional[Settings] = None) -> float:
    """Φ = ∮_C A·ds, com A gerado por `source` percorrida por `current`."""
    amostras = sample(C, rule)
    A = vector_potential(source, current, amostras.points, rule, mu, settings)
    return float(np.sum(amostras.weights * np.einsum("ij,ij->i", A, amostras.velocities)))


@dataclass(frozen=True)
class PlaneSpec:
    """Plano alinhado a um eixo, p.ex. y=0, com faixas e amostras nos dois eixos restantes."""
    axis: str
    value: float
    first_range: Tuple[float, float]
    second_range: Tuple[float, float]
    samples: Tuple[int, int]

    @property
    def in_plane_axes(self) -> Tuple[int, int]:
        return {"x": (1, 2), "y": (0, 2), "z": (0, 1)}[self.axis]

    def points(self) -> np.ndarray:
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"Eixo de plano inválido: {self.axis!r}.")
        primeiro = np.linspace(*self.first_range, self.samples[0])
        segundo = np.linspace(*self.second_range, self.samples[1])
        A, B = np.meshgrid(primeiro, segundo, indexing="ij")
        pontos = np.zeros((A.size, 3))
        i, j = self.in_plane_axes
        pontos[:, "xyz".index(self.axis)] = self.value
        pontos[:, i] = A.ravel()
        pontos[:, j] = B.ravel()
        return pontos


def field_grid(coils: Sequence[CoilCurve], currents: Sequence[float], plane: PlaneSpec, rule: QuadratureRule,
               mu: float = DEFAULT_MU, cap: Optional[float] = None,
               settings: Optional[Settings] = None) -> pd.DataFrame:
    """
    B total das bobinas numa grade plana. Pontos a menos de ε_d de algum fio
    recebem B = NaN e `singular` = True; |B| é truncado em `cap` se dado.
    """
    settings = settings or get_settings()
    pontos = plane.points()
    B = np.zeros_like(pontos)
    singular = np.zeros(pontos.shape[0], dtype=bool)
    for coil, current in zip(coils, currents):
        valor, distancias = _field_kernel(coil, pontos, rule, settings, potential=False)
        singular |= distancias <= NEAR_SINGULAR_FACTOR * bounding_box_diagonal(coil.control_points)
        B += mu * current / (4.0 * np.pi) * valor
    B[singular] = np.nan
    modulo = np.linalg.norm(B, axis=1)
    if cap is not None:
        modulo = np.minimum(modulo, cap)
    logger.info(f"Grade de campo no plano {plane.axis}={plane.value}: {pontos.shape[0]} pontos, {int(singular.sum())} singulares.")
    return pd.DataFrame({
        "x": pontos[:, 0], "y": pontos[:, 1], "z": pontos[:, 2],
        "Bx": B[:, 0], "By": B[:, 1], "Bz": B[:, 2], "|B|": modulo, "singular": singular,
    })
