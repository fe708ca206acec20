# src/geometry/quadrature.py

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from src.shared.cache import CacheTabelas
from src.shared.erros import QuadratureError

logger = logging.getLogger(__name__)

MIN_ORDER = 1
MAX_ORDER = 64
DEFAULT_ORDER = 16
NEWTON_TOLERANCE = 1e-15
NEWTON_MAX_ITERS = 100

_regras = CacheTabelas(max_size=16, nome="gauss-legendre")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Regra de Gauss–Legendre de ordem Q em [-1, 1]."""
    order: int
    nodes: npt.NDArray[np.float64]
    weights: npt.NDArray[np.float64]

    @property
    def local_coordinates(self) -> npt.NDArray[np.float64]:
        """Nós mapeados para [0, 1], a coordenada local de um intervalo de nós."""
        return (self.nodes + 1.0) / 2.0


def _legendre(order: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_Q(x) e P'_Q(x) pela recorrência de três termos."""
    p_anterior = np.ones_like(x)
    p_atual = x.copy()
    for k in range(2, order + 1):
        p_anterior, p_atual = p_atual, ((2 * k - 1) * x * p_atual - (k - 1) * p_anterior) / k
    derivada = order * (x * p_atual - p_anterior) / (x**2 - 1)
    return p_atual, derivada


def _compute_rule(order: int) -> QuadratureRule:
    # chute inicial clássico para as raízes de P_Q
    x = np.cos(np.pi * (np.arange(order) + 0.75) / (order + 0.5))
    for _ in range(NEWTON_MAX_ITERS):
        p, dp = _legendre(order, x)
        passo = p / dp
        x = x - passo
        if np.max(np.abs(passo)) <= NEWTON_TOLERANCE:
            break
    else:
        logger.warning(f"Newton para Gauss–Legendre Q={order} não atingiu a tolerância.")
    _, dp = _legendre(order, x)
    weights = 2.0 / ((1.0 - x**2) * dp**2)
    # simetria exata em torno de 0 e ordem crescente
    ordem = np.argsort(x)
    x, weights = x[ordem], weights[ordem]
    x = (x - x[::-1]) / 2.0
    weights = (weights + weights[::-1]) / 2.0
    return QuadratureRule(order=order, nodes=x, weights=weights)


def gauss_legendre(order: int) -> QuadratureRule:
    """Nós e pesos de Gauss–Legendre (iteração de Newton), 1 <= Q <= 64."""
    if not isinstance(order, (int, np.integer)) or not MIN_ORDER <= order <= MAX_ORDER:
        raise QuadratureError(f"Ordem de quadratura Q={order!r} fora de [{MIN_ORDER}, {MAX_ORDER}].")
    return _regras.get_or_compute(int(order), lambda: _compute_rule(int(order)))


def integrate_interval(rule: QuadratureRule, lower: float, upper: float,
                       integrand: Callable[[np.ndarray], np.ndarray]) -> float:
    """Σ_q w_q (Δ/2) f(t_k + (ξ_q + 1) Δ/2) no intervalo [lower, upper]."""
    if not lower < upper:
        raise QuadratureError(f"Intervalo inválido [{lower}, {upper}].")
    meio = (upper - lower) / 2.0
    t = lower + (rule.nodes + 1.0) * meio
    valores = np.asarray(integrand(t), dtype=float)
    return float(np.sum(rule.weights * meio * valores))


def periodic_nodes(rule: QuadratureRule, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Nós de todos os N intervalos de [0, 1], em ordem de intervalo.

    Retorna (k, u, t, w): índice do intervalo, coordenada local em [0, 1],
    parâmetro t e peso já escalado por Δ/2.
    """
    k = np.repeat(np.arange(count), rule.order)
    u = np.tile(rule.local_coordinates, count)
    t = (k + u) / count
    w = np.tile(rule.weights, count) / (2.0 * count)
    return k, u, t, w
