# src/optimization/constraints.py

import logging
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from src.geometry.curve import length, length_gradient
from src.optimization.layout import DesignLayout
from src.scene.cena import CouplingMode, Scene
from src.shared.erros import SceneError

logger = logging.getLogger(__name__)

SENTINEL = 1e19


def _offsets(valores: np.ndarray, forma: tuple) -> np.ndarray:
    return np.broadcast_to(np.clip(valores, -SENTINEL, SENTINEL), forma)


def bound_vectors(scene: Scene, layout: Optional[DesignLayout] = None) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Limites absolutos P̄ + L e P̄ + U no layout do vetor x; eixos livres recebem ±1e19."""
    layout = layout or DesignLayout(scene)
    x_init = layout.pack()
    lower = np.full(layout.size, -SENTINEL)
    upper = np.full(layout.size, SENTINEL)
    for slot in layout.slots:
        spec = scene.bound_for(slot.coil)
        if spec is None:
            continue
        forma = (1,) if slot.mode is CouplingMode.RADIAL else slot.reference.shape
        L = _offsets(np.asarray(spec.lower, dtype=float), forma).ravel()
        U = _offsets(np.asarray(spec.upper, dtype=float), forma).ravel()
        if np.any(L > U) or np.any(L > 0.0) or np.any(U < 0.0):
            raise SceneError(f"Limites inviáveis para a bobina '{scene.coils[slot.coil].label}': "
                             f"é preciso L <= 0 <= U em cada eixo.")
        base = x_init[slot.start:slot.stop]
        lower[slot.start:slot.stop] = np.where(L <= -SENTINEL, -SENTINEL, base + L)
        upper[slot.start:slot.stop] = np.where(U >= SENTINEL, SENTINEL, base + U)
    return lower, upper


def length_constraints(scene: Scene, x: npt.ArrayLike, layout: Optional[DesignLayout] = None) -> List[Tuple[float, float]]:
    """(g_lower, g_upper) = (-ℓ + f_lower·ℓ_init, ℓ - f_upper·ℓ_init) por restrição de comprimento."""
    layout = layout or DesignLayout(scene)
    cena = layout.apply(x)
    valores = []
    for spec in scene.length_specs:
        ell = length(cena.coils[spec.coil].curve, scene.rule)
        baixo, alto = spec.window
        valores.append((baixo - ell, ell - alto))
    return valores


def length_constraint_gradients(scene: Scene, x: npt.ArrayLike,
                                layout: Optional[DesignLayout] = None) -> List[Tuple[np.ndarray, np.ndarray]]:
    """∇g_lower = -∇ℓ e ∇g_upper = +∇ℓ, nulos fora das entradas da bobina restrita."""
    layout = layout or DesignLayout(scene)
    cena = layout.apply(x)
    gradientes = []
    for spec in scene.length_specs:
        por_bobina = [np.zeros_like(c.curve.control_points) for c in scene.coils]
        por_bobina[spec.coil] = length_gradient(cena.coils[spec.coil].curve, scene.rule)
        g = layout.pullback(por_bobina)
        gradientes.append((-g, g))
    return gradientes


def constraint_values(scene: Scene, x: npt.ArrayLike, layout: Optional[DesignLayout] = None) -> npt.NDArray[np.float64]:
    """Todas as g_i(x) <= 0 achatadas na ordem (lower, upper) por restrição."""
    pares = length_constraints(scene, x, layout)
    return np.array([g for par in pares for g in par], dtype=float)


def constraint_jacobian(scene: Scene, x: npt.ArrayLike, layout: Optional[DesignLayout] = None) -> npt.NDArray[np.float64]:
    layout = layout or DesignLayout(scene)
    pares = length_constraint_gradients(scene, x, layout)
    if not pares:
        return np.zeros((0, layout.size))
    return np.vstack([g for par in pares for g in par])
