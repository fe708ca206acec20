# src/shared/erros.py

from typing import Any, List, Optional


class MutualCoilsError(Exception):
    """Raiz de todos os erros do projeto."""


class BasisError(MutualCoilsError, ValueError):
    """Índice, parâmetro, grau ou nós inválidos para a base B-spline periódica."""


class QuadratureError(MutualCoilsError, ValueError):
    """Ordem de quadratura fora do intervalo suportado."""


class CurveError(MutualCoilsError, ValueError):
    """Pontos de controle ou parâmetros de gerador inválidos."""


class DegenerateVelocity(MutualCoilsError):
    """A velocidade da curva praticamente se anula em algum nó de quadratura."""


class NearSingular(MutualCoilsError):
    """Avaliação do núcleo 1/|s - s'| próxima demais de um fio."""

    def __init__(self, message: str, min_distance: float, threshold: float):
        super().__init__(message)
        self.min_distance = min_distance
        self.threshold = threshold


class DesignVectorError(MutualCoilsError, ValueError):
    """Vetor de projeto com comprimento incompatível com a cena."""


class SceneError(MutualCoilsError, ValueError):
    """Violação de esquema ou de invariantes da cena."""

    def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
        self.diagnostics = diagnostics or []
        detalhe = "\n".join(f"  - {d}" for d in self.diagnostics)
        super().__init__(f"{message}\n{detalhe}" if detalhe else message)


class SolverFailure(MutualCoilsError):
    """O otimizador falhou (busca linear colapsou ou QP inviável)."""

    def __init__(self, message: str, x: Any = None, trace: Any = None):
        super().__init__(message)
        self.x = x
        self.trace = trace


class OracleDomainError(MutualCoilsError, ValueError):
    """Argumento fora do domínio de uma referência analítica (p.ex. K(m) com m >= 1)."""
