"""
Построение ρ_λ, симметрических степеней r_n, присоединённых действий
и модулей R_m, C_α над Γ_φ
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import DimensionMismatchError, RelatorError
from .exactlinalg import MatrixK, kernel_basis
from .fpgroup import FiberWeight, Presentation, evaluate_word
from .numfield import FieldElement, NumberField, Polynomial

logger = logging.getLogger(__name__)


def _verify_relators(pres: Presentation, matrices: Sequence[MatrixK]) -> None:
    if len(matrices) != pres.generator_count:
        raise DimensionMismatchError(f"{len(matrices)} matrices for {pres.generator_count} generators")
    inverses = [m.inverse() for m in matrices]
    for name, relator in zip(pres.relator_names, pres.relators):
        if not evaluate_word(relator, matrices, inverses).is_identity():
            logger.error(f"Relator {name} fails")
            raise RelatorError(name)


@dataclass(frozen=True)
class ModuleAction:
    """Γ-модуль: матрица действия для каждого генератора"""
    degree: int
    matrices: Tuple[MatrixK, ...]
    name: str = "module"

    @property
    def field(self) -> NumberField:
        return self.matrices[0].field

    def verify(self, pres: Presentation) -> "ModuleAction":
        _verify_relators(pres, self.matrices)
        return self

    def conjugate(self, Q: MatrixK) -> "ModuleAction":
        """Q·A·Q⁻¹ для всех генераторов"""
        Q_inv = Q.inverse()
        return ModuleAction(self.degree, tuple(Q * m * Q_inv for m in self.matrices), self.name)


@dataclass(frozen=True)
class Rep:
    presentation: Presentation
    degree: int
    matrices: Tuple[MatrixK, ...]
    weight: FiberWeight

    def __post_init__(self):
        for m in self.matrices:
            if m.shape != (self.degree, self.degree):
                raise DimensionMismatchError(f"Matrix of shape {m.shape} in a degree-{self.degree} representation")
        _verify_relators(self.presentation, self.matrices)

    @property
    def field(self) -> NumberField:
        return self.matrices[0].field

    def image(self, label: str) -> MatrixK:
        return self.matrices[self.presentation.index(label)]


@dataclass(frozen=True)
class EigenData:
    """φ*·a = λ²·a; pivot - индекс первой ненулевой координаты a"""
    lam: FieldElement
    lam_sq: FieldElement
    a: Tuple[FieldElement, ...]
    pivot: int

    @property
    def field(self) -> NumberField:
        return self.lam.field


def eigendata_from_action(
    E: MatrixK, lam: FieldElement, lam_sq: FieldElement, boundary: Sequence[int] = ()
) -> EigenData:
    """Канонический вектор ядра E - λ²I; boundary - индексы проколов, сумма по ним равна нулю"""
    field = lam.field
    E_K = E.over(field)
    shifted = E_K - MatrixK.identity(field, E.rows).scale(lam_sq)
    if boundary:
        row = [[1 if i in boundary else 0 for i in range(E.rows)]]
        shifted = MatrixK.stack(field, [[shifted], [MatrixK(field, row)]])
    basis = kernel_basis(shifted)
    if not basis:
        raise ValueError(f"{lam_sq} is not an eigenvalue of the monodromy action")
    if len(basis) > 1:
        logger.warning(f"Eigenspace of lambda^2 has dimension {len(basis)}; using the first canonical vector")
    a = tuple(basis[0])
    pivot = next(i for i, x in enumerate(a) if not x.is_zero())
    return EigenData(lam, lam_sq, a, pivot)


def build_rho_lambda(pres: Presentation, eig: EigenData, weight: FiberWeight) -> Rep:
    """ρ_λ(γ_i) = [[1, a_i], [0, 1]], ρ_λ(τ) = diag(λ, λ⁻¹)"""
    field = eig.field
    lam_inv = eig.lam.inverse()
    surface = [i for i, w in enumerate(weight.values) if w == 0]
    if len(surface) != len(eig.a):
        raise DimensionMismatchError(f"Eigenvector of length {len(eig.a)} for {len(surface)} fiber generators")
    coords = dict(zip(surface, eig.a))
    matrices = []
    for g, w in enumerate(weight.values):
        top_right = coords.get(g, field.zero())
        matrices.append(MatrixK(field, [[eig.lam ** w, top_right], [0, lam_inv ** w]]))
    rep = Rep(pres, 2, tuple(matrices), weight)
    logger.info(f"Built rho_lambda over {field.label}, all {len(pres.relators)} relators verified")
    return rep


def _check_sl2(M: MatrixK) -> None:
    if M.shape != (2, 2):
        raise DimensionMismatchError(f"Expected a 2x2 matrix, got {M.shape}")
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if det != 1:
        raise ValueError(f"Matrix has determinant {det}, expected 1")


def r_n(M: MatrixK, n: int) -> MatrixK:
    """Действие на однородных многочленах степени n-1, базис e_l = X^{l-1} Y^{n-l}"""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    _check_sl2(M)
    field = M.field
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    # многочлены от x = X/Y
    x_image = Polynomial([-b, d], field)
    y_image = Polynomial([a, -c], field)
    columns = []
    for l in range(n):
        image = (x_image ** l) * (y_image ** (n - 1 - l))
        coeffs = list(image.coeffs) + [field.zero()] * (n - len(image.coeffs))
        columns.append(coeffs[:n])
    return MatrixK.from_columns(field, columns)


def sl_basis(field: NumberField, n: int) -> List[MatrixK]:
    if n < 2:
        raise ValueError(f"sl(n) needs n >= 2, got {n}")

    def unit(i: int, j: int) -> List[List[int]]:
        rows = [[0] * n for _ in range(n)]
        rows[i][j] = 1
        return rows

    if n == 2:
        return [MatrixK(field, unit(0, 1)), MatrixK(field, [[1, 0], [0, -1]]), MatrixK(field, unit(1, 0))]
    basis = [MatrixK(field, unit(i, j)) for i in range(n) for j in range(n) if i != j]
    for i in range(n - 1):
        rows = unit(i, i)
        rows[i + 1][i + 1] = -1
        basis.append(MatrixK(field, rows))
    return basis


def sl_coordinates(X: MatrixK) -> List[FieldElement]:
    n = X.rows
    if n == 2:
        return [X[0, 1], X[0, 0], X[1, 0]]
    coords = [X[i, j] for i in range(n) for j in range(n) if i != j]
    acc = X.field.zero()
    for i in range(n - 1):
        acc = acc + X[i, i]
        coords.append(acc)
    return coords


def sl_matrix(field: NumberField, v: Sequence[FieldElement], n: int) -> MatrixK:
    result = MatrixK.zero(field, n, n)
    for coeff, B in zip(v, sl_basis(field, n)):
        if not field.coerce(coeff).is_zero():
            result = result + B.scale(coeff)
    return result


def adjoint_matrix(g: MatrixK) -> MatrixK:
    """Матрица X ↦ g X g⁻¹ в базисе sl_basis"""
    g_inv = g.inverse()
    columns = [sl_coordinates(g * B * g_inv) for B in sl_basis(g.field, g.rows)]
    return MatrixK.from_columns(g.field, columns)


def adjoint_action(rep: Rep) -> ModuleAction:
    d = rep.degree
    return ModuleAction(d * d - 1, tuple(adjoint_matrix(m) for m in rep.matrices), f"sl({d})")


def compose_rep(rep: Rep, n: int) -> Rep:
    """ρ_{λ,n} = r_n ∘ ρ_λ"""
    if rep.degree != 2:
        raise DimensionMismatchError("r_n composes with a degree-2 representation")
    composed = Rep(rep.presentation, n, tuple(r_n(m, n) for m in rep.matrices), rep.weight)
    logger.debug(f"Composed rho_lambda with r_{n}")
    return composed


def module_R(m: int, rep: Rep) -> ModuleAction:
    """R_m: r_{m+1}∘ρ_λ; R_0 - тривиальный модуль"""
    if m < 0:
        raise ValueError(f"R_m needs m >= 0, got {m}")
    return ModuleAction(m + 1, tuple(r_n(g, m + 1) for g in rep.matrices), f"R_{m}")


def module_C(alpha: FieldElement, pres: Presentation, weight: FiberWeight) -> ModuleAction:
    """C_α: x ↦ α^{ψ(γ)} x"""
    if alpha.is_zero():
        raise ValueError("C_alpha needs alpha != 0")
    field = alpha.field
    matrices = tuple(MatrixK(field, [[alpha ** w]]) for w in weight.values)
    return ModuleAction(1, matrices, f"C({alpha})").verify(pres)


def trivial_module(pres: Presentation, field: NumberField, degree: int = 1) -> ModuleAction:
    identity = MatrixK.identity(field, degree)
    return ModuleAction(degree, tuple(identity for _ in pres.labels), "trivial")


def clebsch_gordan_trace_check(M: MatrixK, n: int) -> bool:
    """tr Ad(r_n(M)) = Σ_{j=1}^{n-1} tr r_{2j+1}(M)"""
    left = adjoint_matrix(r_n(M, n)).trace()
    right = M.field.zero()
    for j in range(1, n):
        right = right + r_n(M, 2 * j + 1).trace()
    return left == right


def flag_check(rep: Rep) -> Dict[str, Any]:
    """Инвариантная прямая <e_1> и верхнетреугольный вид образов"""
    invariant_line = True
    upper_triangular = True
    characters = []
    for m in rep.matrices:
        if any(not m[i, 0].is_zero() for i in range(1, m.rows)):
            invariant_line = False
        if any(not m[i, j].is_zero() for i in range(m.rows) for j in range(i)):
            upper_triangular = False
        characters.append(m[0, 0])
    return {
        'invariant_line': invariant_line,
        'upper_triangular': upper_triangular,
        'line_characters': characters,
    }


def random_sl2(rng, field: NumberField, bound: int = 5, generator: Optional[FieldElement] = None) -> MatrixK:
    """Произведение элементарных матриц со случайными элементами поля"""
    def entry():
        value = field.coerce(rng.randint(-bound, bound))
        if generator is not None:
            value = value + generator * rng.randint(-bound, bound)
        return value

    upper = MatrixK(field, [[1, entry()], [0, 1]])
    lower = MatrixK(field, [[1, 0], [entry(), 1]])
    scale = field.coerce(rng.choice([1, 2, 3, -1, -2]))
    diagonal = MatrixK(field, [[scale, 0], [0, scale.inverse()]])
    return upper * lower * diagonal
