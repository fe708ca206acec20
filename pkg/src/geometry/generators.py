# src/geometry/generators.py

from abc import ABC, abstractmethod
from typing import Any, Dict
import logging

import numpy as np

from src.geometry.bspline import PeriodicBasis
from src.geometry.curve import CoilCurve, circle_coil, torus_coil
from src.shared.erros import CurveError

logger = logging.getLogger(__name__)


class GeradorBobina(ABC):
    """Classe base abstrata para os geradores de formas canônicas de bobinas."""

    @property
    @abstractmethod
    def nome(self) -> str:
        """Valor do campo `kind` na cena."""
        pass

    @property
    @abstractmethod
    def descricao(self) -> str:
        pass

    @abstractmethod
    def gerar(self, parametros: Dict[str, Any], degree: int, label: str) -> CoilCurve:
        """Expande os parâmetros do gerador em pontos de controle."""
        pass


class GeradorCirculo(GeradorBobina):
    nome = "circle"
    descricao = "N pontos de controle igualmente espaçados sobre um círculo (centro, raio, eixo)."

    def gerar(self, parametros: Dict[str, Any], degree: int, label: str) -> CoilCurve:
        return circle_coil(
            center=parametros["center"],
            radius=parametros["radius"],
            axis=parametros.get("axis", (0.0, 0.0, 1.0)),
            count=parametros["count"],
            degree=degree,
            label=label,
        )


class GeradorToro(GeradorBobina):
    nome = "torus"
    descricao = "Enrolamento toroidal ((a - b cos ft) cos t, (a - b cos ft) sin t, b sin ft)."

    def gerar(self, parametros: Dict[str, Any], degree: int, label: str) -> CoilCurve:
        return torus_coil(parametros["a"], parametros["b"], parametros["f"], parametros["count"], degree, label)


class GeradorExplicito(GeradorBobina):
    nome = "explicit-cps"
    descricao = "Lista explícita de pontos de controle."

    def gerar(self, parametros: Dict[str, Any], degree: int, label: str) -> CoilCurve:
        pontos = np.asarray(parametros["control_points"], dtype=float)
        if pontos.ndim != 2:
            raise CurveError(f"Bobina '{label}': lista de pontos de controle malformada.")
        return CoilCurve(PeriodicBasis(degree, pontos.shape[0]), pontos, label)


def get_all_generators() -> Dict[str, GeradorBobina]:
    """Retorna um dicionário de todos os geradores disponíveis, indexado por `kind`."""
    geradores = [GeradorCirculo(), GeradorToro(), GeradorExplicito()]
    return {gerador.nome: gerador for gerador in geradores}


def build_coil(kind: str, parametros: Dict[str, Any], degree: int, label: str) -> CoilCurve:
    geradores = get_all_generators()
    if kind not in geradores:
        raise CurveError(f"Gerador desconhecido '{kind}'. Disponíveis: {sorted(geradores)}.")
    curva = geradores[kind].gerar(parametros, degree, label)
    logger.debug(f"Bobina '{label}' gerada por '{kind}' com N={curva.count}, p={curva.degree}.")
    return curva
