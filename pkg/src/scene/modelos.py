# src/scene/modelos.py

"""Esquema JSON da cena, validado com pydantic."""

from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.optimization.modelos import SolverConfig
from src.scene.cena import CouplingMode

Vetor3 = Tuple[float, float, float]
ReferenciaBobina = Union[int, str]


class GeradorCirculoModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["circle"]
    center: Vetor3 = Field(default=(0.0, 0.0, 0.0), description="Centro do círculo (m).")
    radius: float = Field(..., gt=0, description="Raio do círculo de pontos de controle (m).")
    axis: Vetor3 = Field(default=(0.0, 0.0, 1.0), description="Normal unitária; corrente anti-horária vista de +axis.")
    count: int = Field(default=32, ge=2, description="Número N de pontos de controle.")


class GeradorToroModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["torus"]
    a: float = Field(..., gt=0, description="Raio maior do toro (m).")
    b: float = Field(..., gt=0, description="Raio menor do toro (m).")
    f: int = Field(..., ge=1, description="Número de voltas poloidais.")
    count: int = Field(default=64, ge=2)


class GeradorExplicitoModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["explicit-cps"]
    control_points: List[Vetor3] = Field(..., min_length=2, description="Pontos de controle P_0..P_{N-1} (m).")


Gerador = Annotated[
    Union[GeradorCirculoModel, GeradorToroModel, GeradorExplicitoModel],
    Field(discriminator="kind"),
]


class AcoplamentoModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mode: CouplingMode = Field(default=CouplingMode.FREE, description="'free' (3N variáveis) ou 'radial' (1 variável, o raio).")
    center: Optional[Vetor3] = Field(default=None, description="Origem o do movimento radial; padrão: centróide dos pontos de controle.")


class BobinaModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    label: str = Field(..., min_length=1)
    degree: int = Field(default=2, ge=1, le=3, description="Grau p da B-spline periódica.")
    generator: Gerador
    designable: bool = Field(default=True, description="Se falso, a bobina é congelada fora do vetor de projeto.")
    current: float = Field(default=0.0, description="Corrente (A), usada apenas na exportação de campo.")
    coupling: AcoplamentoModel = Field(default_factory=AcoplamentoModel)


class ParModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    alpha: ReferenciaBobina
    beta: ReferenciaBobina
    target: float = Field(default=0.0, description="Alvo M̄ da indutância mútua (H).")


class LimiteModel(BaseModel):
    """Deslocamentos relativos à posição inicial; null é eixo ilimitado."""
    model_config = ConfigDict(extra="forbid")
    coil: ReferenciaBobina
    lower: Optional[List[Optional[float]]] = None
    upper: Optional[List[Optional[float]]] = None
    freeze: List[Literal["x", "y", "z"]] = Field(default_factory=list, description="Eixos com deslocamento nulo.")


class RestricaoComprimentoModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    coil: ReferenciaBobina
    f_lower: float = Field(..., gt=0, le=1)
    f_upper: float = Field(..., ge=1)
    initial_length: Optional[float] = Field(default=None, gt=0, description="ℓ(x_init); calculado na carga se ausente.")


class CenaModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mu: float = Field(default=1.0, gt=0, description="Permeabilidade (H/m).")
    quadrature: int = Field(default=16, ge=1, le=64, description="Ordem Q de Gauss–Legendre por intervalo.")
    coils: List[BobinaModel] = Field(..., min_length=1)
    pairs: List[ParModel] = Field(default_factory=list)
    bounds: List[LimiteModel] = Field(default_factory=list)
    length_constraints: List[RestricaoComprimentoModel] = Field(default_factory=list)
    solver: SolverConfig = Field(default_factory=SolverConfig)

    @field_validator("coils")
    @classmethod
    def _rotulos_unicos(cls, coils: List[BobinaModel]) -> List[BobinaModel]:
        rotulos = [c.label for c in coils]
        repetidos = sorted({r for r in rotulos if rotulos.count(r) > 1})
        if repetidos:
            raise ValueError(f"rótulos de bobina repetidos: {repetidos}")
        return coils
