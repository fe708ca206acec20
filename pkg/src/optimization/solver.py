# src/optimization/solver.py

"""
Driver de programação não linear: minimiza J(x) sujeito a limites de caixa e
restrições g_i(x) <= 0, com o SLSQP do scipy como motor SQP.

O critério de parada é o da variação relativa de J entre iterados aceitos,
aplicado no callback; a tolerância absoluta interna do SLSQP fica desligada
na prática (ftol = abs_tol_J).
"""

import hashlib
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy.optimize import Bounds, minimize as scipy_minimize

from src.optimization.constraints import SENTINEL
from src.optimization.modelos import IterationRecord, OptimizationTrace, SolverConfig, SolverStatus
from src.shared.cache import CacheTabelas
from src.shared.comunicacao import EVENTO_FIM, EVENTO_INICIO, EVENTO_ITERACAO, BarramentoEventos, Evento
from src.shared.erros import DesignVectorError, SolverFailure

logger = logging.getLogger(__name__)

ObjectiveCallback = Callable[[np.ndarray], Tuple[float, np.ndarray]]
ConstraintCallback = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]

# modos de saída do SLSQP
MODE_SUCCESS = 0
MODE_LINESEARCH = 8
MODE_MAX_ITERS = 9


@dataclass(eq=False)
class NlpProblem:
    """
    Problema min sense·J(x) s.a. lower <= x <= upper e g(x) <= 0.

    `objective` devolve (J, ∇J); `constraints` devolve (g, ∂g/∂x) com forma
    (n_g,) e (n_g, dimension). `lengths` alimenta o histórico com o
    comprimento de cada bobina. `sense = -1` maximiza J.
    """
    dimension: int
    objective: ObjectiveCallback
    lower: npt.NDArray[np.float64]
    upper: npt.NDArray[np.float64]
    constraints: Optional[ConstraintCallback] = None
    lengths: Optional[Callable[[np.ndarray], Sequence[float]]] = None
    sense: float = 1.0
    labels: Sequence[str] = ()

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != (self.dimension,) or self.upper.shape != (self.dimension,):
            raise DesignVectorError(f"Limites com formas {self.lower.shape}/{self.upper.shape}; esperado ({self.dimension},).")
        if np.any(self.lower > self.upper):
            raise DesignVectorError("Limite inferior maior que o superior.")
        if self.sense not in (1.0, -1.0):
            raise ValueError(f"sense deve ser +1 ou -1, recebido {self.sense}.")


@dataclass(eq=False)
class SolverResult:
    x: npt.NDArray[np.float64]
    trace: OptimizationTrace

    @property
    def status(self) -> Optional[SolverStatus]:
        return self.trace.status


def _chave(x: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(x).tobytes()).hexdigest()


def _sem_sentinela(limites: np.ndarray) -> np.ndarray:
    return np.where(np.abs(limites) >= SENTINEL, np.copysign(np.inf, limites), limites)


def minimize(problem: NlpProblem, x0: npt.ArrayLike, config: Optional[SolverConfig] = None,
             barramento: Optional[BarramentoEventos] = None) -> SolverResult:
    config = config or SolverConfig()
    barramento = barramento or BarramentoEventos()
    trace = OptimizationTrace(coil_labels=list(problem.labels))

    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (problem.dimension,):
        raise DesignVectorError(f"x0 com forma {x0.shape}; esperado ({problem.dimension},).")
    lower, upper = problem.lower, problem.upper
    x_inicial = np.clip(x0, lower, upper)
    if not np.array_equal(x_inicial, x0):
        nota = f"x0 fora dos limites em {int(np.sum(x_inicial != x0))} entradas; projetado na caixa."
        logger.warning(nota)
        trace.notes.append(nota)

    # variáveis com limites coincidentes ficam fixas e saem do problema passado ao SLSQP
    livres = lower < upper
    x_base = x_inicial.copy()

    def _expandir(z: np.ndarray) -> np.ndarray:
        x = x_base.copy()
        x[livres] = z
        return x

    avaliacoes = CacheTabelas(max_size=8, nome="objetivo-nlp")
    restricoes = CacheTabelas(max_size=8, nome="restricoes-nlp")

    def _objetivo(x: np.ndarray) -> Tuple[float, np.ndarray]:
        return avaliacoes.get_or_compute(_chave(x), lambda: problem.objective(x.copy()))

    def _restricoes(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if problem.constraints is None:
            return np.zeros(0), np.zeros((0, problem.dimension))
        return restricoes.get_or_compute(_chave(x), lambda: problem.constraints(x.copy()))

    def _violacao(x: np.ndarray) -> float:
        g, _ = _restricoes(x)
        return float(max(0.0, g.max())) if g.size else 0.0

    estado = {"x": x_inicial, "parou": False}

    def _registrar(x: np.ndarray) -> IterationRecord:
        J, _ = _objetivo(x)
        registro = IterationRecord(
            iteration=len(trace.records),
            J=float(J),
            max_violation=_violacao(x),
            lengths=[float(v) for v in problem.lengths(x)] if problem.lengths else [],
            step_norm=float(np.linalg.norm(x - estado["x"])),
        )
        trace.records.append(registro)
        estado["x"] = x
        barramento.publicar(Evento(EVENTO_ITERACAO, {"registro": registro}, origem=__name__))
        return registro

    barramento.publicar(Evento(EVENTO_INICIO, {"dimensao": problem.dimension, "livres": int(livres.sum()),
                                               "config": config.model_dump()}, origem=__name__))
    logger.info(f"Otimização iniciada: {problem.dimension} variáveis ({int(livres.sum())} livres), "
                f"sense={problem.sense:+.0f}.")
    _registrar(x_inicial)

    def _callback(xk: np.ndarray):
        J_anterior = trace.records[-1].J
        registro = _registrar(_expandir(np.asarray(xk, dtype=float)))
        variacao = abs(registro.J - J_anterior) / max(abs(registro.J), config.J_floor)
        if variacao < config.rel_tol_J and registro.max_violation <= config.constraint_tol:
            estado["parou"] = True
            raise StopIteration

    def _fun(z: np.ndarray):
        J, grad = _objetivo(_expandir(z))
        return problem.sense * J, problem.sense * np.asarray(grad)[livres]

    def _fun_restricao(z: np.ndarray) -> np.ndarray:
        return -_restricoes(_expandir(z))[0]

    def _jac_restricao(z: np.ndarray) -> np.ndarray:
        return -_restricoes(_expandir(z))[1][:, livres]

    n_restricoes = _restricoes(x_inicial)[0].size
    vinculos = [{"type": "ineq", "fun": _fun_restricao, "jac": _jac_restricao}] if n_restricoes else []

    modo, mensagem = MODE_SUCCESS, "sem variáveis livres"
    x_final = x_inicial
    if livres.any():
        try:
            resultado = scipy_minimize(
                _fun, x_inicial[livres], jac=True, method="SLSQP",
                bounds=Bounds(_sem_sentinela(lower[livres]), _sem_sentinela(upper[livres])),
                constraints=vinculos, callback=_callback,
                options={"maxiter": config.max_iters, "ftol": config.abs_tol_J, "disp": False},
            )
            modo, mensagem = int(resultado.status), str(resultado.message)
            x_final = estado["x"] if estado["parou"] else _expandir(resultado.x)
        except StopIteration:
            # scipy < 1.11 propaga a StopIteration do callback
            x_final = estado["x"]
    x_final = np.clip(x_final, lower, upper)
    if len(trace.records) == 1 or not np.array_equal(x_final, estado["x"]):
        _registrar(x_final)

    violacao = _violacao(x_final)
    viavel = violacao <= config.constraint_tol
    if estado["parou"]:
        trace.status = SolverStatus.CONVERGED
        trace.message = f"Variação relativa de J abaixo de {config.rel_tol_J:g}."
    elif modo == MODE_SUCCESS and viavel:
        trace.status, trace.message = SolverStatus.CONVERGED, mensagem
    elif modo == MODE_MAX_ITERS:
        trace.status, trace.message = SolverStatus.MAX_ITERS, mensagem
    elif modo == MODE_LINESEARCH and viavel:
        trace.status = SolverStatus.CONVERGED
        trace.message = mensagem
        trace.notes.append("Busca linear estagnada em ponto viável; tratado como convergência.")
    else:
        trace.status, trace.message = SolverStatus.SOLVER_FAILURE, f"SLSQP modo {modo}: {mensagem}"

    if trace.status is not SolverStatus.SOLVER_FAILURE and not viavel:
        trace.status = SolverStatus.SOLVER_FAILURE
        trace.message = f"Violação de restrição {violacao:.3e} acima de {config.constraint_tol:g}."

    barramento.publicar(Evento(EVENTO_FIM, {"status": trace.status, "iteracoes": trace.iterations,
                                            "J": trace.final_J}, origem=__name__))
    if trace.status is SolverStatus.SOLVER_FAILURE:
        logger.error(f"Otimização falhou após {trace.iterations} iterações: {trace.message}")
        raise SolverFailure(trace.message, x=x_final, trace=trace)
    if trace.status is SolverStatus.MAX_ITERS:
        logger.warning(f"Limite de {config.max_iters} iterações atingido; J = {trace.final_J:.6e}.")
    else:
        logger.info(f"Otimização convergiu em {trace.iterations} iterações; J = {trace.final_J:.6e}.")
    return SolverResult(x=x_final, trace=trace)
