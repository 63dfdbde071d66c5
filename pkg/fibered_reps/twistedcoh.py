"""
Скрученные когомологии копредставления с коэффициентами в модуле:
Z¹, B¹, H⁰, H¹, матрица S для n = 2, индукция и разложение Клебша-Гордана
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from .errors import DimensionMismatchError
from .exactlinalg import MatrixK, Vector, kernel_basis, nullity, rank
from .fpgroup import MonodromySpec, Presentation, fox_jacobian, torus_presentation
from .numfield import FieldElement, Polynomial
from .repbuild import EigenData, ModuleAction, Rep, adjoint_action, compose_rep, module_R

logger = logging.getLogger(__name__)


@dataclass
class CocycleSpace:
    degree: int
    generator_count: int
    basis: List[Vector]
    z1: int
    b1: int
    h0: int
    h1: int
    module: str = ""

    def dims(self) -> Dict[str, int]:
        return {'z1': self.z1, 'b1': self.b1, 'h0': self.h0, 'h1': self.h1}

    def by_generator(self, vector: Sequence[FieldElement]) -> List[List[FieldElement]]:
        d = self.degree
        return [list(vector[g * d:(g + 1) * d]) for g in range(self.generator_count)]


def _matrices(act: Any) -> Sequence[MatrixK]:
    return act.matrices if isinstance(act, ModuleAction) else act


def h0_dim(act: Any) -> int:
    """Размерность ∩_g ker(act(g) - I)"""
    matrices = _matrices(act)
    field_ = matrices[0].field
    d = matrices[0].rows
    identity = MatrixK.identity(field_, d)
    stacked = MatrixK.stack(field_, [[m - identity] for m in matrices])
    return nullity(stacked)


def z1_space(pres: Presentation, act: Any) -> CocycleSpace:
    matrices = _matrices(act)
    if isinstance(act, ModuleAction):
        act.verify(pres)
    jac = fox_jacobian(pres, matrices)
    basis = kernel_basis(jac)
    d = matrices[0].rows
    h0 = h0_dim(matrices)
    b1 = d - h0
    z1 = len(basis)
    name = act.name if isinstance(act, ModuleAction) else ""
    logger.debug(f"Z1 for {name or 'module'} of degree {d}: z1={z1}, h0={h0}")
    return CocycleSpace(d, pres.generator_count, basis, z1, b1, h0, z1 - b1, name)


def h1_dim(pres: Presentation, act: Any) -> Tuple[int, Dict[str, int]]:
    space = z1_space(pres, act)
    return space.h1, space.dims()


def coboundary_vectors(pres: Presentation, act: Any) -> List[Vector]:
    """u - act(γ)u по генераторам, для u из стандартного базиса модуля"""
    matrices = _matrices(act)
    field_ = matrices[0].field
    d = matrices[0].rows
    vectors = []
    for k in range(d):
        u = [field_.one() if i == k else field_.zero() for i in range(d)]
        stacked: Vector = []
        for m in matrices:
            image = m.apply(u)
            stacked.extend(x - y for x, y in zip(u, image))
        vectors.append(stacked)
    return vectors


def coboundary_parametrization_n2(eig: EigenData, x: Any, y: Any, z: Any) -> Vector:
    """Кограница u = x e_1 + y e_2 + z e_3 в явном виде для ρ_λ, τ последним"""
    field_ = eig.field
    x, y, z = field_.coerce(x), field_.coerce(y), field_.coerce(z)
    vector: Vector = []
    for a in eig.a:
        vector.extend([2 * a * y + a * a * z, -(a * z), field_.zero()])
    lam_sq = eig.lam_sq
    vector.extend([(1 - lam_sq) * x, field_.zero(), (1 - lam_sq.inverse()) * z])
    return vector


@dataclass
class SMatrix:
    matrix: MatrixK
    columns: List[str]
    blocks: Dict[str, MatrixK] = field(default_factory=dict)
    y0_column: List[FieldElement] = field(default_factory=list)


def s_matrix_n2(spec: MonodromySpec, eig: EigenData, rep: Rep) -> SMatrix:
    """Якобиан соотношений сопряжения в координатах (x_1..x_N, y_0, y_1..y_N, z_1..z_N)"""
    if rep.degree != 2:
        raise DimensionMismatchError("S is defined for sl(2)")
    pres = rep.presentation.without("surface")
    N = spec.generator_count
    act = adjoint_action(rep)
    jac = fox_jacobian(pres, act.matrices)
    tau = N

    def col(g: int, comp: int) -> int:
        return 3 * g + comp

    column_order = (
        [col(i, 0) for i in range(N)]
        + [col(tau, 1)]
        + [col(i, 1) for i in range(N)]
        + [col(i, 2) for i in range(N)]
    )
    labels = (
        [f"x{i + 1}" for i in range(N)] + ["y0"]
        + [f"y{i + 1}" for i in range(N)] + [f"z{i + 1}" for i in range(N)]
    )
    row_order = [3 * r + comp for comp in range(3) for r in range(N)]
    S = jac.submatrix(row_order, column_order)

    def block(rc: int, cc: int) -> MatrixK:
        col_start = N + 1 if cc == 1 else (0 if cc == 0 else 2 * N + 1)
        return S.submatrix(range(rc * N, (rc + 1) * N), range(col_start, col_start + N))

    blocks = {
        'xx': block(0, 0), 'xy': block(0, 1), 'xz': block(0, 2),
        'yy': block(1, 1), 'yz': block(1, 2), 'zz': block(2, 2),
        'yx': block(1, 0), 'zx': block(2, 0), 'zy': block(2, 1),
    }
    y0 = S.column(N)
    logger.debug(f"S matrix of size {S.rows}x{S.cols}")
    return SMatrix(S, labels, blocks, y0)


def two_pipeline_report(spec: MonodromySpec, eig: EigenData, rep: Rep, k: int) -> Dict[str, Any]:
    """Сверка ядра S с общим конвейером Фокса"""
    s = s_matrix_n2(spec, eig, rep)
    act = adjoint_action(rep)
    null_s = nullity(s.matrix)
    z1_without = nullity(fox_jacobian(rep.presentation.without("surface"), act.matrices))
    generic = z1_space(rep.presentation, act)
    surface_rank = z1_without - generic.z1
    h1_from_s = null_s - 2

    field_ = eig.field
    eigen_vector = list(eig.a) + [field_.zero()] * (s.matrix.cols - len(eig.a))
    eigen_in_kernel = all(x.is_zero() for x in s.matrix.apply(eigen_vector))

    agreement = (
        null_s == 2 + k
        and z1_without == null_s + 2
        and surface_rank == 1
        and h1_from_s == generic.h1
    )
    if not agreement:
        logger.warning(f"S pipeline disagrees: null(S)={null_s}, z1 without surface={z1_without}, h1={generic.h1}")
    return {
        'null_S': null_s,
        'expected_null_S': 2 + k,
        'z1_without_surface': z1_without,
        'z1': generic.z1,
        'surface_relation_rank': surface_rank,
        'h1_from_S': h1_from_s,
        'h1_generic': generic.h1,
        'eigenvector_in_kernel': eigen_in_kernel,
        'agreement': agreement,
    }


def induction_check(pres: Presentation, eig: EigenData, rep: Rep, n: int, char_poly: Polynomial) -> Dict[str, Any]:
    """Сравнение H¹(Γ; R_{n-1}) и H¹(Γ; R_{n-3})"""
    if n < 3:
        raise ValueError(f"Induction compares R_(n-1) with R_(n-3), needs n >= 3, got {n}")
    mu = eig.lam ** (n - 1)
    violations = []
    if mu == 1:
        violations.append(f"lambda^{n - 1} = 1")
    if char_poly.evaluate(mu).is_zero():
        violations.append(f"lambda^{n - 1} is an eigenvalue of the monodromy action")
    if n <= 3:
        violations.append("induction step is stated for n > 3")
    for v in violations:
        logger.warning(f"Induction hypothesis violated: {v}")

    high, high_dims = h1_dim(pres, module_R(n - 1, rep))
    low, low_dims = h1_dim(pres, module_R(n - 3, rep))
    if high != low:
        logger.warning(f"H1(R_{n - 1}) = {high} differs from H1(R_{n - 3}) = {low}")
    return {
        'n': n,
        'hypothesis_holds': not violations,
        'violations': violations,
        'h1_high': high,
        'h1_low': low,
        'dims_high': high_dims,
        'dims_low': low_dims,
        'equal': high == low,
    }


def decomposition_check(pres: Presentation, rep: Rep, n: int) -> Dict[str, Any]:
    """h1(sl(n)) = Σ_{j=1}^{n-1} h1(R_{2j})"""
    composed = compose_rep(rep, n)
    total, dims = h1_dim(pres, adjoint_action(composed))
    parts = {f"R_{2 * j}": h1_dim(pres, module_R(2 * j, rep))[0] for j in range(1, n)}
    return {
        'n': n,
        'h1_adjoint': total,
        'h1_parts': parts,
        'dims': dims,
        'consistent': total == sum(parts.values()),
    }


def torus_cohomology(act_a: MatrixK, act_b: MatrixK) -> Dict[str, int]:
    """Когомологии Z² = ⟨a, b | [a, b]⟩"""
    pres, _ = torus_presentation()
    d = act_a.rows
    module = ModuleAction(d, (act_a, act_b), "peripheral")
    return h1_dim(pres, module)[1]


def coboundary_rank(pres: Presentation, act: Any) -> int:
    vectors = coboundary_vectors(pres, act)
    if not vectors:
        return 0
    field_ = vectors[0][0].field
    return rank(MatrixK(field_, vectors))
