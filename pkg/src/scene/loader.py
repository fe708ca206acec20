# src/scene/loader.py

import json
import logging
from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import ValidationError

from src.geometry.curve import length
from src.geometry.generators import build_coil
from src.geometry.quadrature import gauss_legendre
from src.scene.cena import BoundSpec, CouplingMode, LengthSpec, PairSpec, Scene, SceneCoil
from src.scene.modelos import BobinaModel, CenaModel, LimiteModel
from src.shared.erros import MutualCoilsError, SceneError

logger = logging.getLogger(__name__)

EIXOS = "xyz"


def _diagnosticos(erro: ValidationError) -> List[str]:
    return [f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in erro.errors()]


def _construir_bobina(indice: int, modelo: BobinaModel) -> SceneCoil:
    parametros = modelo.generator.model_dump(exclude={"kind"})
    try:
        curva = build_coil(modelo.generator.kind, parametros, modelo.degree, modelo.label)
    except MutualCoilsError as e:
        raise SceneError(f"Bobina '{modelo.label}' inválida.", [f"coils.{indice}.generator: {e}"]) from e
    centro = None
    if modelo.coupling.mode is CouplingMode.RADIAL:
        centro = (np.asarray(modelo.coupling.center, dtype=float) if modelo.coupling.center is not None
                  else curva.control_points.mean(axis=0))
    return SceneCoil(curve=curva, designable=modelo.designable, current=modelo.current,
                     coupling=modelo.coupling.mode, center=centro)


def _offsets(valores, tamanho: int, padrao: float, campo: str) -> np.ndarray:
    if valores is None:
        return np.full(tamanho, padrao)
    if len(valores) != tamanho:
        raise SceneError("Limites malformados.", [f"{campo}: esperado {tamanho} valores, recebido {len(valores)}"])
    return np.array([padrao if v is None else float(v) for v in valores])


def _construir_limite(cena: Scene, indice: int, modelo: LimiteModel) -> BoundSpec:
    bobina = cena.coil_index(modelo.coil)
    coil = cena.coils[bobina]
    if not coil.designable:
        raise SceneError("Limites em bobina congelada.", [f"bounds.{indice}.coil: '{coil.label}' não é projetável"])
    radial = coil.coupling is CouplingMode.RADIAL
    tamanho = 1 if radial else 3
    lower = _offsets(modelo.lower, tamanho, -np.inf, f"bounds.{indice}.lower")
    upper = _offsets(modelo.upper, tamanho, np.inf, f"bounds.{indice}.upper")
    if modelo.freeze:
        if radial:
            raise SceneError("Eixos congelados só se aplicam ao modo livre.", [f"bounds.{indice}.freeze"])
        for eixo in modelo.freeze:
            lower[EIXOS.index(eixo)] = upper[EIXOS.index(eixo)] = 0.0
    if np.any(lower > 0.0) or np.any(upper < 0.0):
        raise SceneError("Ponto inicial fora dos limites.", [f"bounds.{indice}: é preciso lower <= 0 <= upper"])
    return BoundSpec(coil=bobina, lower=lower, upper=upper)


def build_scene(modelo: CenaModel) -> Scene:
    """Expande os geradores e resolve referências do modelo validado."""
    cena = Scene(
        coils=tuple(_construir_bobina(i, c) for i, c in enumerate(modelo.coils)),
        mu=modelo.mu,
        quadrature=modelo.quadrature,
        solver=modelo.solver,
    )
    pares = []
    for i, par in enumerate(modelo.pairs):
        alpha, beta = cena.coil_index(par.alpha), cena.coil_index(par.beta)
        if alpha == beta:
            raise SceneError("Par inválido.", [f"pairs.{i}: alpha e beta referem-se à mesma bobina"])
        pares.append(PairSpec(alpha, beta, par.target))
    limites = tuple(_construir_limite(cena, i, b) for i, b in enumerate(modelo.bounds))
    vistas = {}
    for i, limite in enumerate(limites):
        if limite.coil in vistas:
            rotulo = cena.coils[limite.coil].label
            raise SceneError("Mais de um bloco de limites para a mesma bobina.",
                             [f"bounds.{i}.coil: '{rotulo}' já limitada em bounds.{vistas[limite.coil]}"])
        vistas[limite.coil] = i
    regra = gauss_legendre(modelo.quadrature)
    comprimentos = []
    for r in modelo.length_constraints:
        bobina = cena.coil_index(r.coil)
        inicial = r.initial_length if r.initial_length is not None else length(cena.coils[bobina].curve, regra)
        comprimentos.append(LengthSpec(bobina, r.f_lower, r.f_upper, inicial))
    return Scene(cena.coils, tuple(pares), limites, tuple(comprimentos), cena.mu, cena.quadrature, cena.solver)


def parse_scene(text: str) -> Scene:
    try:
        dados = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneError("Documento de cena não é JSON válido.", [f"linha {e.lineno}, coluna {e.colno}: {e.msg}"]) from e
    try:
        modelo = CenaModel.model_validate(dados)
    except ValidationError as e:
        raise SceneError("Cena inválida.", _diagnosticos(e)) from e
    cena = build_scene(modelo)
    logger.info(f"Cena carregada: {len(cena.coils)} bobinas, {len(cena.pairs)} pares, Q={cena.quadrature}.")
    return cena


def load_scene(path: Union[str, Path]) -> Scene:
    path = Path(path)
    try:
        texto = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SceneError(f"Não foi possível ler a cena '{path}'.", [str(e)]) from e
    return parse_scene(texto)


def _lista_limite(valores: np.ndarray) -> List:
    return [None if np.isinf(v) else float(v) for v in valores]


def scene_to_dict(scene: Scene) -> dict:
    """Forma serializável da cena; pontos de controle sempre explícitos."""
    bobinas = []
    for coil in scene.coils:
        acoplamento = {"mode": coil.coupling.value}
        if coil.center is not None:
            acoplamento["center"] = [float(v) for v in coil.center]
        bobinas.append({
            "label": coil.label,
            "degree": coil.curve.degree,
            "generator": {"kind": "explicit-cps", "control_points": coil.curve.control_points.tolist()},
            "designable": coil.designable,
            "current": coil.current,
            "coupling": acoplamento,
        })
    return {
        "mu": scene.mu,
        "quadrature": scene.quadrature,
        "coils": bobinas,
        "pairs": [{"alpha": p.alpha, "beta": p.beta, "target": p.target} for p in scene.pairs],
        "bounds": [{"coil": b.coil, "lower": _lista_limite(b.lower), "upper": _lista_limite(b.upper)}
                   for b in scene.bounds],
        "length_constraints": [{"coil": r.coil, "f_lower": r.f_lower, "f_upper": r.f_upper,
                                "initial_length": r.initial_length} for r in scene.length_specs],
        "solver": scene.solver.model_dump(),
    }


def serialize_scene(scene: Scene) -> str:
    # json usa repr() para floats: 17 dígitos significativos, ida e volta exata
    return json.dumps(scene_to_dict(scene), indent=2)
