# src/scene/cena.py

"""Tipos de execução da cena: bobinas já expandidas, pares medidos, limites e restrições."""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from src.geometry.curve import CoilCurve
from src.geometry.quadrature import QuadratureRule, gauss_legendre
from src.optimization.modelos import SolverConfig
from src.shared.erros import SceneError


class CouplingMode(str, Enum):
    FREE = "free"
    RADIAL = "radial"


@dataclass(frozen=True, eq=False)
class SceneCoil:
    curve: CoilCurve
    designable: bool = True
    current: float = 0.0
    coupling: CouplingMode = CouplingMode.FREE
    center: Optional[npt.NDArray[np.float64]] = None

    @property
    def label(self) -> str:
        return self.curve.label


@dataclass(frozen=True)
class PairSpec:
    """Par medido (α, β) com alvo M̄ em henry."""
    alpha: int
    beta: int
    target: float

    def __post_init__(self):
        if self.alpha == self.beta:
            raise SceneError(f"Par inválido: α = β = {self.alpha}.")


@dataclass(frozen=True, eq=False)
class BoundSpec:
    """Deslocamentos L, U (relativos à posição inicial) de cada variável de um ponto de controle."""
    coil: int
    lower: npt.NDArray[np.float64]
    upper: npt.NDArray[np.float64]


@dataclass(frozen=True)
class LengthSpec:
    """Janela [f_lower, f_upper] x ℓ(x_init) para o comprimento de uma bobina."""
    coil: int
    f_lower: float
    f_upper: float
    initial_length: float

    @property
    def window(self) -> Tuple[float, float]:
        return self.f_lower * self.initial_length, self.f_upper * self.initial_length


@dataclass(frozen=True, eq=False)
class Scene:
    coils: Tuple[SceneCoil, ...]
    pairs: Tuple[PairSpec, ...] = ()
    bounds: Tuple[BoundSpec, ...] = ()
    length_specs: Tuple[LengthSpec, ...] = ()
    mu: float = 1.0
    quadrature: int = 16
    solver: SolverConfig = field(default_factory=SolverConfig)

    @property
    def rule(self) -> QuadratureRule:
        return gauss_legendre(self.quadrature)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(c.label for c in self.coils)

    @property
    def curves(self) -> Tuple[CoilCurve, ...]:
        return tuple(c.curve for c in self.coils)

    def coil_index(self, ref) -> int:
        """Resolve um rótulo ou índice (0-based) de bobina."""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if not 0 <= ref < len(self.coils):
                raise SceneError(f"Índice de bobina {ref} fora de [0, {len(self.coils)}).")
            return int(ref)
        if ref in self.labels:
            return self.labels.index(ref)
        raise SceneError(f"Bobina '{ref}' não existe na cena.")

    def bound_for(self, coil: int) -> Optional[BoundSpec]:
        for spec in self.bounds:
            if spec.coil == coil:
                return spec
        return None

    def with_control_points(self, control_points: Sequence[npt.ArrayLike]) -> "Scene":
        """Nova cena com os pontos de controle substituídos (alvos, limites e ℓ inicial preservados)."""
        coils = tuple(
            replace(coil, curve=coil.curve.with_control_points(pontos))
            for coil, pontos in zip(self.coils, control_points)
        )
        return replace(self, coils=coils)

    def with_targets(self, targets: Sequence[float]) -> "Scene":
        pares = tuple(replace(par, target=float(alvo)) for par, alvo in zip(self.pairs, targets))
        return replace(self, pairs=pares)
