# src/main.py

"""
Linha de comando: indutância mútua, verificação de gradiente, otimização,
grades de campo e verificação coaxial contra as fórmulas elípticas.

Códigos de saída: 0 sucesso, 1 uso/cena inválida, 2 falha numérica
(NearSingular, DegenerateVelocity, SolverFailure, gradiente reprovado),
3 erro interno inesperado.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from src.geometry.curve import bounding_box_diagonal, length
from src.geometry.quadrature import DEFAULT_ORDER, gauss_legendre
from src.optimization.constraints import bound_vectors, constraint_jacobian, constraint_values, length_constraints
from src.optimization.layout import DesignLayout
from src.optimization.modelos import IterationRecord
from src.optimization.objective import evaluate, evaluate_scene
from src.optimization.solver import NlpProblem, minimize
from src.physics.em import PlaneSpec, field_grid, mutual_inductance
from src.physics.oracle import coaxial_sensitivity_check, convergence_slope, finite_difference_gradient
from src.scene.cena import CouplingMode, Scene
from src.scene.export import export_results, write_frame
from src.scene.loader import load_scene
from src.shared.comunicacao import EVENTO_ITERACAO, BarramentoEventos, Evento
from src.shared.configuracao import get_settings
from src.shared.erros import DegenerateVelocity, MutualCoilsError, NearSingular, SolverFailure

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_INTERNAL = 3

GRAD_CHECK_LIMIT = 1e-5
GRAD_CHECK_FLOOR = 1e-12
CONVERGENCE_COUNTS = (8, 16, 32, 64, 128)

ERROS_NUMERICOS = (NearSingular, DegenerateVelocity, SolverFailure)


def _scene_size(scene: Scene) -> float:
    return bounding_box_diagonal(np.vstack([c.curve.control_points for c in scene.coils]))


def _relative_error(analitico: np.ndarray, numerico: np.ndarray) -> float:
    if analitico.size == 0:
        return 0.0
    escala = max(float(np.max(np.abs(numerico))), GRAD_CHECK_FLOOR)
    return float(np.max(np.abs(analitico - numerico))) / escala


# --- comandos ---

def cmd_mi(args: argparse.Namespace) -> int:
    scene = load_scene(args.scene)
    print(f"# mu = {scene.mu:g}, Q = {scene.quadrature}")
    if args.pair:
        alpha, beta = (scene.coil_index(_referencia(r)) for r in args.pair)
        pares = [(alpha, beta)]
    else:
        pares = [(p.alpha, p.beta) for p in scene.pairs]
    if not pares:
        logger.error("A cena não declara pares; use --pair.")
        return EXIT_USAGE
    for alpha, beta in pares:
        M = mutual_inductance(scene.coils[alpha].curve, scene.coils[beta].curve, scene.rule, scene.mu)
        print(f"M({scene.coils[alpha].label}, {scene.coils[beta].label}) = {M:.12e}")
    return EXIT_OK


def _referencia(texto: str):
    return int(texto) if texto.lstrip("-").isdigit() else texto


def cmd_grad_check(args: argparse.Namespace) -> int:
    scene = load_scene(args.scene)
    layout = DesignLayout(scene)
    if layout.size == 0:
        logger.error("Vetor de projeto vazio: nenhuma bobina projetável na cena.")
        return EXIT_USAGE
    x0 = layout.pack()
    h = args.step * _scene_size(scene)
    _, analitico = evaluate(layout, x0)
    numerico = finite_difference_gradient(lambda x: evaluate_scene(layout.apply(x), False).J, x0, h)

    pior = 0.0
    for slot in layout.slots:
        erro = _relative_error(analitico[slot.start:slot.stop], numerico[slot.start:slot.stop])
        pior = max(pior, erro)
        print(f"∇J  bobina {scene.coils[slot.coil].label:>8}: erro relativo máximo {erro:.3e}")
    if scene.length_specs:
        jacobiana = constraint_jacobian(scene, x0, layout)
        for i in range(jacobiana.shape[0]):
            fd = finite_difference_gradient(lambda x: float(constraint_values(scene, x, layout)[i]), x0, h)
            erro = _relative_error(jacobiana[i], fd)
            pior = max(pior, erro)
            spec = scene.length_specs[i // 2]
            lado = "lower" if i % 2 == 0 else "upper"
            print(f"∇g_{lado} bobina {scene.coils[spec.coil].label:>8}: erro relativo máximo {erro:.3e}")
    aprovado = pior <= GRAD_CHECK_LIMIT
    print(f"{'PASS' if aprovado else 'FAIL'} (pior erro {pior:.3e}, passo h = {h:.3e})")
    return EXIT_OK if aprovado else EXIT_NUMERIC


def build_problem(scene: Scene, layout: DesignLayout, maximize: bool = False) -> NlpProblem:
    lower, upper = bound_vectors(scene, layout)
    restricoes = None
    if scene.length_specs:
        def restricoes(x):
            return constraint_values(scene, x, layout), constraint_jacobian(scene, x, layout)

    def comprimentos(x):
        return [length(c.curve, scene.rule) for c in layout.apply(x).coils]

    return NlpProblem(
        dimension=layout.size,
        objective=lambda x: evaluate(layout, x),
        lower=lower,
        upper=upper,
        constraints=restricoes,
        lengths=comprimentos,
        sense=-1.0 if maximize else 1.0,
        labels=scene.labels,
    )


def _log_iteracao(evento: Evento):
    registro: IterationRecord = evento.dados["registro"]
    logger.info(f"iter {registro.iteration:4d}  J = {registro.J:.10e}  "
                f"violação = {registro.max_violation:.2e}  passo = {registro.step_norm:.3e}")


def cmd_optimize(args: argparse.Namespace) -> int:
    scene = load_scene(args.scene)
    layout = DesignLayout(scene)
    if layout.size == 0 or not scene.pairs:
        logger.error("Otimização exige ao menos uma bobina projetável e um par medido.")
        return EXIT_USAGE
    barramento = BarramentoEventos()
    barramento.assinar(EVENTO_ITERACAO, _log_iteracao)
    problema = build_problem(scene, layout, args.maximize)
    try:
        resultado = minimize(problema, layout.pack(), scene.solver, barramento)
    except SolverFailure as e:
        if e.x is not None and e.trace is not None:
            export_results(scene, e.x, e.trace, args.out, layout)
        raise
    export_results(scene, resultado.x, resultado.trace, args.out, layout)

    print(f"status: {resultado.status.value}  iterações: {resultado.trace.iterations}  J = {resultado.trace.final_J:.10e}")
    for slot in layout.slots:
        if slot.mode is CouplingMode.RADIAL:
            print(f"raio otimizado de {scene.coils[slot.coil].label}: b = {resultado.x[slot.start]:.8f}")
    for spec, (g_baixo, g_alto) in zip(scene.length_specs, length_constraints(scene, resultado.x, layout)):
        baixo, alto = spec.window
        print(f"comprimento de {scene.coils[spec.coil].label}: {baixo - g_baixo:.8f} em [{baixo:.8f}, {alto:.8f}]")
    return EXIT_OK


def _plane(texto: str) -> tuple:
    eixo, _, valor = texto.partition("=")
    if eixo not in ("x", "y", "z") or not valor:
        raise argparse.ArgumentTypeError(f"plano deve ter a forma eixo=valor, p.ex. y=0; recebido {texto!r}")
    return eixo, float(valor)


def cmd_field(args: argparse.Namespace) -> int:
    scene = load_scene(args.scene)
    eixo, valor = args.plane
    plano = PlaneSpec(eixo, valor, tuple(args.range[:2]), tuple(args.range[2:]), tuple(args.samples))
    grade = field_grid(scene.curves, [c.current for c in scene.coils], plano, scene.rule, scene.mu, args.cap)
    if args.out:
        write_frame(grade, Path(args.out))
        logger.info(f"Grade de campo gravada em {args.out}.")
    else:
        grade.to_csv(sys.stdout, index=False, float_format="%.10g")
    return EXIT_OK


def cmd_verify_coaxial(args: argparse.Namespace) -> int:
    regra = gauss_legendre(args.quadrature)
    if args.convergence:
        linhas = [coaxial_sensitivity_check(args.a, args.b, args.d, n, regra) for n in CONVERGENCE_COUNTS]
        tabela = pd.DataFrame(linhas)
        inclinacao = convergence_slope(tabela["count"], tabela["dMdb_rel_error"])
        print(tabela[["count", "M_num", "M_exact", "dMdb_num", "dMdb_exact", "dMdb_rel_error"]].to_string(index=False))
        print(f"inclinação log-log do erro de dM/db: {inclinacao:.3f}")
    else:
        raios = np.linspace(args.bmin, args.bmax, args.steps)
        tabela = pd.DataFrame([coaxial_sensitivity_check(args.a, b, args.d, args.count, regra) for b in raios])
        print(tabela[["b", "M_num", "M_exact", "M_rel_error", "dMdb_num", "dMdb_exact", "dMdb_abs_error"]]
              .to_string(index=False))
    if args.out:
        write_frame(tabela, Path(args.out))
    return EXIT_OK


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mutual-coils",
                                     description="Indutância mútua de bobinas B-spline e sua otimização de forma.")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING... (padrão: MUTUAL_COILS_LOG_LEVEL ou INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mi", help="Indutância mútua de cada par da cena.")
    p.add_argument("scene")
    p.add_argument("--pair", nargs=2, metavar=("ALPHA", "BETA"), help="Rótulos ou índices de um par avulso.")
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("grad-check", help="Gradiente analítico contra diferenças centrais.")
    p.add_argument("scene")
    p.add_argument("--step", type=float, default=1e-6, help="Passo relativo ao tamanho da cena.")
    p.set_defaults(func=cmd_grad_check)

    p = sub.add_parser("optimize", help="Otimiza a cena com SLSQP e exporta os resultados.")
    p.add_argument("scene")
    p.add_argument("--out", required=True, help="Diretório de saída.")
    p.add_argument("--maximize", action="store_true", help="Maximiza J em vez de minimizar.")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("field", help="Grade de B num plano alinhado a um eixo.")
    p.add_argument("scene")
    p.add_argument("--plane", type=_plane, required=True, help="p.ex. y=0")
    p.add_argument("--range", type=float, nargs=4, required=True, metavar=("MIN1", "MAX1", "MIN2", "MAX2"),
                   help="Faixas dos dois eixos do plano, em ordem (x, y, z) sem o eixo normal.")
    p.add_argument("--samples", type=int, nargs=2, default=[61, 31], metavar=("N1", "N2"))
    p.add_argument("--cap", type=float, default=None, help="Trunca |B| neste valor.")
    p.add_argument("--out", default=None, help="CSV de saída (padrão: stdout).")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("verify-coaxial", help="Compara M e dM/db com as fórmulas elípticas.")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0, help="Raio b do estudo de convergência.")
    p.add_argument("--bmin", type=float, default=0.1)
    p.add_argument("--bmax", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--count", type=int, default=32, help="N de pontos de controle da varredura em b.")
    p.add_argument("--quadrature", type=int, default=DEFAULT_ORDER)
    p.add_argument("--convergence", action="store_true", help="Varre N e ajusta a taxa de decaimento do erro.")
    p.add_argument("--out", default=None, help="CSV com a tabela.")
    p.set_defaults(func=cmd_verify_coaxial)
    return parser


def configure_logging(level: Optional[str] = None):
    nivel = (level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, nivel, logging.INFO),
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s', force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.log_level:
        configure_logging(args.log_level)
    try:
        return args.func(args)
    except ERROS_NUMERICOS as e:
        logger.error(f"Falha numérica: {e}")
        return EXIT_NUMERIC
    except MutualCoilsError as e:
        logger.error(f"Erro: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Erro fatal na execução: {e}", exc_info=True)
        return EXIT_INTERNAL
