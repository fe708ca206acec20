# src/physics/oracle.py

"""
Referências independentes para verificar o caminho numérico: integrais
elípticas completas, indutância mútua exata de espiras coaxiais e sua derivada
no raio, montagem radial das sensibilidades e gradientes por diferenças finitas.

Convenção: K(m) e E(m) recebem o PARÂMETRO m = k², não o módulo k.
"""

import logging
from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from src.geometry.curve import CoilCurve, circle_coil, point
from src.geometry.quadrature import QuadratureRule
from src.physics.em import DEFAULT_MU, mi_with_sensitivity
from src.shared.erros import OracleDomainError

logger = logging.getLogger(__name__)

AGM_MAX_ITERS = 64
DEFAULT_POLYLINE_SEGMENTS = 10_000

Scalar = Union[float, npt.NDArray[np.float64]]


def _agm(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Média aritmético-geométrica: devolve (K, E) para 0 <= m < 1."""
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    soma = 0.5 * m
    potencia = 0.5
    for _ in range(AGM_MAX_ITERS):
        c = (a - b) / 2.0
        a, b = (a + b) / 2.0, np.sqrt(a * b)
        potencia *= 2.0
        soma = soma + potencia * c**2
        if np.all(np.abs(c) <= np.finfo(float).eps * a):
            break
    K = np.pi / (2.0 * a)
    return K, K * (1.0 - soma)


def _as_output(valor: np.ndarray, entrada) -> Scalar:
    return float(valor) if np.ndim(entrada) == 0 else valor


def elliptic_K(m: npt.ArrayLike) -> Scalar:
    """Integral elíptica completa de primeira espécie, K(m) = ∫_0^{π/2} dφ/√(1 - m sin²φ)."""
    arr = np.asarray(m, dtype=float)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise OracleDomainError(f"K(m) exige 0 <= m < 1, recebido {m!r}.")
    K, _ = _agm(np.atleast_1d(arr))
    return _as_output(K.reshape(arr.shape), m)


def elliptic_E(m: npt.ArrayLike) -> Scalar:
    """Integral elíptica completa de segunda espécie, E(m) = ∫_0^{π/2} √(1 - m sin²φ) dφ."""
    arr = np.asarray(m, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OracleDomainError(f"E(m) exige 0 <= m <= 1, recebido {m!r}.")
    flat = np.atleast_1d(arr).copy()
    unitario = flat == 1.0
    flat[unitario] = 0.0
    _, E = _agm(flat)
    E[unitario] = 1.0
    return _as_output(E.reshape(arr.shape), m)


def _coaxial_parameter(a: float, b: float, d: float) -> float:
    if not (a > 0 and b > 0):
        raise OracleDomainError(f"Raios devem ser positivos (a={a}, b={b}).")
    k2 = 4.0 * a * b / ((a + b) ** 2 + d**2)
    if k2 >= 1.0:
        raise OracleDomainError(f"Espiras coincidentes (k² = {k2} >= 1).")
    return k2


def coaxial_mi(a: float, b: float, d: float, mu: float = DEFAULT_MU) -> float:
    """M = (2μb/k)√(a/b)[(1 - k²/2)K(k²) - E(k²)], k² = 4ab/((a+b)² + d²)."""
    k2 = _coaxial_parameter(a, b, d)
    k = np.sqrt(k2)
    return float(2.0 * mu * b / k * np.sqrt(a / b) * ((1.0 - k2 / 2.0) * elliptic_K(k2) - elliptic_E(k2)))


def coaxial_mi_db(a: float, b: float, d: float, mu: float = DEFAULT_MU) -> float:
    """dM/db = (μk/2)√(b/a)[(a² - b² - d²)/((a - b)² + d²) E(k²) + K(k²)]."""
    k2 = _coaxial_parameter(a, b, d)
    denominador = (a - b) ** 2 + d**2
    if denominador <= 0.0:
        raise OracleDomainError("dM/db indefinida para a = b e d = 0.")
    k = np.sqrt(k2)
    return float(mu * k / 2.0 * np.sqrt(b / a) * ((a**2 - b**2 - d**2) / denominador * elliptic_E(k2) + elliptic_K(k2)))


def radial_sensitivity(curve: CoilCurve, d: npt.ArrayLike, center: npt.ArrayLike, b: float) -> float:
    """Σ_m d_m·(P_m - o)/b: projeção das sensibilidades no movimento radial uniforme."""
    if not b > 0:
        raise OracleDomainError(f"Raio b deve ser positivo, recebido {b!r}.")
    deslocamento = curve.control_points - np.asarray(center, dtype=float)
    return float(np.sum(np.asarray(d) * deslocamento) / b)


def finite_difference_gradient(f: Callable[[np.ndarray], float], x: npt.ArrayLike, h: float) -> np.ndarray:
    """Diferenças centrais (f(x + h e_i) - f(x - h e_i)) / 2h em cada componente."""
    if not h > 0:
        raise ValueError(f"Passo h deve ser positivo, recebido {h!r}.")
    x0 = np.array(x, dtype=float)
    gradiente = np.zeros_like(x0)
    for i in range(x0.size):
        xp = x0.copy()
        xp[i] += h
        xm = x0.copy()
        xm[i] -= h
        gradiente[i] = (f(xp) - f(xm)) / (2.0 * h)
    return gradiente


def polyline_mutual_inductance(C: CoilCurve, Cp: CoilCurve, segments: int = DEFAULT_POLYLINE_SEGMENTS,
                               mu: float = DEFAULT_MU, chunk_size: int = 500) -> float:
    """
    Estimador de força bruta: cada curva vira uma polilinha densa e o núcleo de
    Neumann é avaliado nos pontos médios dos segmentos.
    """
    t = np.linspace(0.0, 1.0, segments + 1)
    pa, pb = point(C, t), point(Cp, t)
    da, db = np.diff(pa, axis=0), np.diff(pb, axis=0)
    ma, mb = (pa[1:] + pa[:-1]) / 2.0, (pb[1:] + pb[:-1]) / 2.0
    total = 0.0
    for inicio in range(0, segments, chunk_size):
        bloco = slice(inicio, inicio + chunk_size)
        diff = ma[bloco][:, None, :] - mb[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        total += float(np.sum((da[bloco] @ db.T) / r))
    return mu / (4.0 * np.pi) * total


def coaxial_configuration(a: float, b: float, d: float, count: int, degree: int = 2) -> Tuple[CoilCurve, CoilCurve]:
    """Receptora C (raio b, centro na origem, z=0) e transmissora C' (raio a, z=-d), ambas anti-horárias."""
    C = circle_coil((0.0, 0.0, 0.0), b, (0.0, 0.0, 1.0), count, degree, label="C")
    Cp = circle_coil((0.0, 0.0, -d), a, (0.0, 0.0, 1.0), count, degree, label="C'")
    return C, Cp


def coaxial_sensitivity_check(a: float, b: float, d: float, count: int, rule: QuadratureRule,
                              mu: float = DEFAULT_MU, degree: int = 2) -> Dict[str, float]:
    """Compara M e dM/db numéricos (montagem radial) com as fórmulas exatas."""
    C, Cp = coaxial_configuration(a, b, d, count, degree)
    M_num, sensibilidades = mi_with_sensitivity(C, Cp, rule, mu)
    dMdb_num = radial_sensitivity(C, sensibilidades.d, (0.0, 0.0, 0.0), b)
    M_exato = coaxial_mi(a, b, d, mu)
    dMdb_exato = coaxial_mi_db(a, b, d, mu)
    return {
        "b": b,
        "count": count,
        "M_num": M_num,
        "M_exact": M_exato,
        "M_rel_error": abs(M_num - M_exato) / abs(M_exato),
        "dMdb_num": dMdb_num,
        "dMdb_exact": dMdb_exato,
        "dMdb_abs_error": abs(dMdb_num - dMdb_exato),
        "dMdb_rel_error": abs(dMdb_num - dMdb_exato) / max(abs(dMdb_exato), 1e-300),
    }


def convergence_slope(counts: Sequence[int], errors: Sequence[float]) -> float:
    """Inclinação do ajuste log–log erro x N (≈ -2 para a base quadrática)."""
    inclinacao, _ = np.polyfit(np.log(np.asarray(counts, dtype=float)), np.log(np.asarray(errors, dtype=float)), 1)
    return float(inclinacao)
