# src/geometry/bspline.py

"""
Base B-spline periódica de grau p com nós uniformes t_m = m/N.

As N funções R^p_m são translações da B-spline cardinal de grau p, com o
suporte de p+1 intervalos "dobrado" módulo N. Cada função é avaliada por
pedaços: no intervalo I_k a função R^p_m usa o pedaço j = (k - m) mod N da
B-spline cardinal, na coordenada local u = t/Δ - k em [0, 1].
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import numpy.typing as npt

from src.shared.erros import BasisError

logger = logging.getLogger(__name__)

MAX_DEGREE = 3
KNOT_TOLERANCE = 1e-14

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class PeriodicBasis:
    """Base periódica uniforme: `degree` = p, `count` = N funções (e pontos de controle)."""
    degree: int
    count: int

    def __post_init__(self):
        if not isinstance(self.degree, (int, np.integer)) or not 1 <= self.degree <= MAX_DEGREE:
            raise BasisError(f"Grau {self.degree!r} não suportado (1 <= p <= {MAX_DEGREE}).")
        if not isinstance(self.count, (int, np.integer)) or self.count <= self.degree:
            raise BasisError(f"N={self.count!r} deve ser maior que o grau p={self.degree}.")

    @classmethod
    def from_knots(cls, degree: int, knots: Sequence[float]) -> "PeriodicBasis":
        """Constrói a base a partir de um vetor de nós; só nós uniformes em [0, 1] são aceitos."""
        knots = np.asarray(knots, dtype=float)
        count = knots.size - 1
        if count < 1:
            raise BasisError("São necessários pelo menos dois nós.")
        uniformes = np.arange(count + 1) / count
        if np.max(np.abs(knots - uniformes)) > KNOT_TOLERANCE:
            raise BasisError("Nós não uniformes não são suportados.")
        return cls(degree, count)

    @property
    def knot_span(self) -> float:
        return 1.0 / self.count

    @property
    def knots(self) -> FloatArray:
        return np.arange(self.count + 1) / self.count


def quadratic_piece(j: int, u: npt.ArrayLike, derivative: bool = False) -> FloatArray:
    """Pedaços explícitos N^2_j da B-spline cardinal quadrática, x = j + u."""
    x = j + np.asarray(u, dtype=float)
    if j == 0:
        return x.copy() if derivative else x**2 / 2
    if j == 1:
        return -2 * x + 3 if derivative else (-2 * x**2 + 6 * x - 3) / 2
    if j == 2:
        return x - 3 if derivative else (x - 3) ** 2 / 2
    return np.zeros_like(x)


def cardinal_piece(degree: int, j: int, u: npt.ArrayLike, derivative: bool = False) -> FloatArray:
    """
    Pedaço j (x em [j, j+1]) da B-spline cardinal de grau `degree`, pela
    recursão de Cox–de Boor em nós inteiros:
        B_p(x) = (x B_{p-1}(x) + (p+1-x) B_{p-1}(x-1)) / p
        B'_p(x) = B_{p-1}(x) - B_{p-1}(x-1)
    """
    u = np.asarray(u, dtype=float)
    if j < 0 or j > degree:
        return np.zeros_like(u)
    if derivative:
        return cardinal_piece(degree - 1, j, u) - cardinal_piece(degree - 1, j - 1, u)
    if degree == 0:
        return np.ones_like(u)
    x = j + u
    return (x * cardinal_piece(degree - 1, j, u) + (degree + 1 - x) * cardinal_piece(degree - 1, j - 1, u)) / degree


def local_pieces(degree: int, u: npt.ArrayLike, derivative: bool = False, explicit: bool = True) -> FloatArray:
    """Matriz (p+1, len(u)) com todos os pedaços avaliados em u (derivadas em x, sem o fator 1/Δ)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if degree == 2 and explicit:
        return np.stack([quadratic_piece(j, u, derivative) for j in range(3)])
    return np.stack([cardinal_piece(degree, j, u, derivative) for j in range(degree + 1)])


def _check_index(basis: PeriodicBasis, m: int):
    if not 0 <= m < basis.count:
        raise BasisError(f"Índice m={m} fora de [0, {basis.count}).")


def _locate(basis: PeriodicBasis, t: float, left_at_end: bool) -> tuple[int, float]:
    """Intervalo k e coordenada local u de t. Em t=1: limite à esquerda ou volta a t=0."""
    if not np.isfinite(t) or t < 0.0 or t > 1.0:
        raise BasisError(f"Parâmetro t={t!r} fora de [0, 1].")
    if t == 1.0:
        if left_at_end:
            return basis.count - 1, 1.0
        t = 0.0
    s = t * basis.count
    k = min(int(np.floor(s)), basis.count - 1)
    return k, s - k


def _piece_value(basis: PeriodicBasis, m: int, t: float, derivative: bool) -> float:
    _check_index(basis, m)
    k, u = _locate(basis, t, left_at_end=derivative)
    j = (k - m) % basis.count
    if j > basis.degree:
        return 0.0
    valor = float(local_pieces(basis.degree, u, derivative)[j, 0])
    return valor * basis.count if derivative else valor


def basis_value(basis: PeriodicBasis, m: int, t: float) -> float:
    """R^p_m(t); zero fora do suporte. t=1 é tratado como t=0."""
    return _piece_value(basis, m, t, derivative=False)


def basis_derivative(basis: PeriodicBasis, m: int, t: float) -> float:
    """dR^p_m/dt exata (fator 1/Δ incluído); limite pela direita nos nós, pela esquerda em t=1."""
    return _piece_value(basis, m, t, derivative=True)


def support_intervals(basis: PeriodicBasis, m: int) -> List[int]:
    """Índices dos p+1 intervalos I_k do suporte de R^p_m, com a divisão módulo N."""
    _check_index(basis, m)
    return [(m + j) % basis.count for j in range(basis.degree + 1)]


def assemble_matrix(basis: PeriodicBasis, k: npt.ArrayLike, u: npt.ArrayLike, derivative: bool = False,
                    explicit: bool = True) -> FloatArray:
    """
    Matriz densa (N, n) com R^p_m (ou Ṙ^p_m) nos n pontos dados por intervalo k e
    coordenada local u. Só p+1 entradas por coluna são não nulas.
    """
    k = np.asarray(k, dtype=int)
    u = np.asarray(u, dtype=float)
    pedacos = local_pieces(basis.degree, u, derivative, explicit)
    matriz = np.zeros((basis.count, k.size))
    colunas = np.arange(k.size)
    for j in range(basis.degree + 1):
        matriz[(k - j) % basis.count, colunas] = pedacos[j]
    return matriz * basis.count if derivative else matriz


def basis_matrix(basis: PeriodicBasis, t: npt.ArrayLike, derivative: bool = False) -> FloatArray:
    """Versão vetorizada de basis_value/basis_derivative para um vetor de parâmetros em [0, 1]."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise BasisError("Parâmetros t fora de [0, 1].")
    s = t * basis.count
    k = np.minimum(np.floor(s).astype(int), basis.count - 1)
    u = s - k
    fim = t == 1.0
    if not derivative:
        # periodicidade: t=1 equivale a t=0
        k = np.where(fim, 0, k)
        u = np.where(fim, 0.0, u)
    return assemble_matrix(basis, k, u, derivative)
