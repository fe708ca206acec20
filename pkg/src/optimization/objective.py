# src/optimization/objective.py

"""J = ½ Σ_κ (M^(α,β) - M̄^(α,β))² sobre os pares medidos e seu gradiente no vetor de projeto."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from src.geometry.curve import sample
from src.optimization.layout import DesignLayout
from src.physics.em import SensitivitySet, mi_with_sensitivity, mutual_inductance
from src.scene.cena import Scene
from src.shared.configuracao import Settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PairEvaluation:
    alpha: int
    beta: int
    M: float
    target: float
    sensitivities: Optional[SensitivitySet] = None

    @property
    def residual(self) -> float:
        return self.M - self.target


@dataclass(frozen=True, eq=False)
class Evaluation:
    J: float
    pairs: Tuple[PairEvaluation, ...]
    coil_gradients: Optional[List[npt.NDArray[np.float64]]] = None


def evaluate_scene(scene: Scene, with_gradient: bool = True, settings: Optional[Settings] = None) -> Evaluation:
    """
    Avalia todos os pares da cena. Cada bobina é amostrada uma única vez; os
    gradientes por bobina G^(α) acumulam (M - M̄)·d em α e (M - M̄)·d' em β,
    na ordem dos pares.
    """
    rule = scene.rule
    amostras = {}

    def _amostra(indice: int):
        if indice not in amostras:
            amostras[indice] = sample(scene.coils[indice].curve, rule)
        return amostras[indice]

    gradientes = [np.zeros_like(c.curve.control_points) for c in scene.coils] if with_gradient else None
    avaliacoes = []
    J = 0.0
    for par in scene.pairs:
        C, Cp = scene.coils[par.alpha].curve, scene.coils[par.beta].curve
        if with_gradient:
            M, sens = mi_with_sensitivity(C, Cp, rule, scene.mu, settings,
                                          samples=(_amostra(par.alpha), _amostra(par.beta)))
            residuo = M - par.target
            gradientes[par.alpha] += residuo * sens.d
            gradientes[par.beta] += residuo * sens.d_prime
        else:
            M, sens = mutual_inductance(C, Cp, rule, scene.mu, settings), None
            residuo = M - par.target
        J += 0.5 * residuo**2
        avaliacoes.append(PairEvaluation(par.alpha, par.beta, M, par.target, sens))
    logger.debug(f"J = {J:.10e} em {len(avaliacoes)} pares.")
    return Evaluation(J=J, pairs=tuple(avaliacoes), coil_gradients=gradientes)


def evaluate(layout: DesignLayout, x: npt.ArrayLike, settings: Optional[Settings] = None) -> Tuple[float, npt.NDArray[np.float64]]:
    """(J, ∇J) no vetor x, numa única varredura por par."""
    avaliacao = evaluate_scene(layout.apply(x), True, settings)
    return avaliacao.J, layout.pullback(avaliacao.coil_gradients)


def objective(scene: Scene, x: npt.ArrayLike, settings: Optional[Settings] = None) -> float:
    return evaluate_scene(DesignLayout(scene).apply(x), False, settings).J


def objective_gradient(scene: Scene, x: npt.ArrayLike, settings: Optional[Settings] = None) -> npt.NDArray[np.float64]:
    return evaluate(DesignLayout(scene), x, settings)[1]
