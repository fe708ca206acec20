# src/optimization/modelos.py

from enum import Enum
from typing import List, Optional
import pandas as pd
from pydantic import BaseModel, Field


class SolverStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    SOLVER_FAILURE = "solver_failure"


class SolverConfig(BaseModel):
    """Parâmetros do otimizador SQP (critério de parada como no SLSQP)."""
    rel_tol_J: float = Field(default=1e-5, gt=0, description="Parada quando |J_k - J_{k-1}| / max(|J_k|, J_floor) < rel_tol_J.")
    max_iters: int = Field(default=1000, ge=1, description="Número máximo de iterações principais.")
    J_floor: float = Field(default=1e-30, gt=0, description="Piso do denominador da variação relativa de J.")
    abs_tol_J: float = Field(default=1e-30, gt=0, description="Precisão absoluta de J repassada ao SLSQP (ftol).")
    constraint_tol: float = Field(default=1e-8, gt=0, description="Violação máxima aceita das restrições g_i <= 0 (ε_c).")


class IterationRecord(BaseModel):
    """Registro de uma iteração aceita."""
    iteration: int = Field(..., ge=0)
    J: float
    max_violation: float = Field(default=0.0, ge=0)
    lengths: List[float] = Field(default_factory=list, description="Comprimento de cada bobina, na ordem da cena.")
    step_norm: float = Field(default=0.0, ge=0)


class OptimizationTrace(BaseModel):
    """Histórico completo de uma execução do otimizador."""
    records: List[IterationRecord] = Field(default_factory=list)
    status: Optional[SolverStatus] = None
    message: str = ""
    notes: List[str] = Field(default_factory=list)
    coil_labels: List[str] = Field(default_factory=list)

    @property
    def iterations(self) -> int:
        return self.records[-1].iteration if self.records else 0

    @property
    def final_J(self) -> Optional[float]:
        return self.records[-1].J if self.records else None

    def to_frame(self) -> pd.DataFrame:
        """Histórico no formato `iter,J,max_violation,length_<rótulo>...,step_norm`."""
        linhas = []
        for r in self.records:
            linha = {"iter": r.iteration, "J": r.J, "max_violation": r.max_violation}
            for indice, valor in enumerate(r.lengths):
                rotulo = self.coil_labels[indice] if indice < len(self.coil_labels) else str(indice + 1)
                linha[f"length_{rotulo}"] = valor
            linha["step_norm"] = r.step_norm
            linhas.append(linha)
        return pd.DataFrame(linhas, columns=None if linhas else ["iter", "J", "max_violation", "step_norm"])
