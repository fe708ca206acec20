# src/optimization/layout.py

"""
Vetor de projeto x: concatenação das variáveis das bobinas projetáveis, na
ordem da cena. Bobinas livres contribuem 3N entradas (P_0x, P_0y, P_0z, P_1x, ...);
bobinas em acoplamento radial contribuem uma única entrada, o raio b, com
P_m = o + (b/b₀)(P̄_m - o). Bobinas congeladas não contribuem.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from src.scene.cena import CouplingMode, Scene
from src.shared.erros import DesignVectorError


@dataclass(frozen=True, eq=False)
class CoilSlot:
    coil: int
    mode: CouplingMode
    start: int
    size: int
    reference: npt.NDArray[np.float64]
    center: npt.NDArray[np.float64]
    radius: float

    @property
    def stop(self) -> int:
        return self.start + self.size


def _radial_reference(control_points: np.ndarray, center: np.ndarray) -> float:
    return float(np.mean(np.linalg.norm(control_points - center, axis=1)))


class DesignLayout:
    """Mapeamento bijetivo entre os pontos de controle da cena e o vetor x."""

    def __init__(self, scene: Scene):
        self.scene = scene
        slots: List[CoilSlot] = []
        inicio = 0
        for indice, coil in enumerate(scene.coils):
            if not coil.designable:
                continue
            referencia = np.array(coil.curve.control_points, dtype=float)
            if coil.coupling is CouplingMode.RADIAL:
                centro = np.zeros(3) if coil.center is None else np.asarray(coil.center, dtype=float)
                raio = _radial_reference(referencia, centro)
                if raio <= 0.0:
                    raise DesignVectorError(f"Bobina '{coil.label}' em modo radial tem raio de referência nulo.")
                slot = CoilSlot(indice, CouplingMode.RADIAL, inicio, 1, referencia, centro, raio)
            else:
                slot = CoilSlot(indice, CouplingMode.FREE, inicio, referencia.size, referencia, np.zeros(3), 0.0)
            slots.append(slot)
            inicio += slot.size
        self.slots: Tuple[CoilSlot, ...] = tuple(slots)
        self.size = inicio

    def pack(self, scene: Optional[Scene] = None) -> npt.NDArray[np.float64]:
        scene = scene or self.scene
        x = np.empty(self.size)
        for slot in self.slots:
            pontos = scene.coils[slot.coil].curve.control_points
            if slot.mode is CouplingMode.RADIAL:
                # projeção de mínimos quadrados sobre a direção radial de referência
                rel = slot.reference - slot.center
                escala = float(np.sum((pontos - slot.center) * rel) / np.sum(rel * rel))
                x[slot.start] = slot.radius * escala
            else:
                x[slot.start:slot.stop] = pontos.ravel()
        return x

    def unpack(self, x: npt.ArrayLike) -> List[npt.NDArray[np.float64]]:
        """Pontos de controle de todas as bobinas (congeladas inalteradas) para o vetor x."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.size,):
            raise DesignVectorError(f"Vetor de projeto com forma {x.shape}; esperado ({self.size},).")
        pontos = [np.array(c.curve.control_points) for c in self.scene.coils]
        for slot in self.slots:
            if slot.mode is CouplingMode.RADIAL:
                escala = x[slot.start] / slot.radius
                if escala == 1.0:
                    pontos[slot.coil] = slot.reference.copy()
                else:
                    pontos[slot.coil] = slot.center + escala * (slot.reference - slot.center)
            else:
                pontos[slot.coil] = x[slot.start:slot.stop].reshape(-1, 3).copy()
        return pontos

    def apply(self, x: npt.ArrayLike) -> Scene:
        return self.scene.with_control_points(self.unpack(x))

    def pullback(self, coil_gradients: Sequence[npt.ArrayLike]) -> npt.NDArray[np.float64]:
        """Leva gradientes por bobina (N, 3) ao vetor x; as bobinas congeladas são descartadas."""
        g = np.zeros(self.size)
        for slot in self.slots:
            G = np.asarray(coil_gradients[slot.coil], dtype=float)
            if slot.mode is CouplingMode.RADIAL:
                g[slot.start] = float(np.sum(G * (slot.reference - slot.center))) / slot.radius
            else:
                g[slot.start:slot.stop] = G.ravel()
        return g

    def coil_of(self, position: int) -> int:
        for slot in self.slots:
            if slot.start <= position < slot.stop:
                return slot.coil
        raise DesignVectorError(f"Posição {position} fora do vetor de projeto de tamanho {self.size}.")


def pack(scene: Scene) -> npt.NDArray[np.float64]:
    return DesignLayout(scene).pack()


def unpack(scene: Scene, x: npt.ArrayLike) -> Scene:
    return DesignLayout(scene).apply(x)
