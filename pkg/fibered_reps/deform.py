"""
Деформации по порядкам, препятствия, тест Бернсайда и критерий для b_{n1}
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath

from .errors import IllConditionedError, RelatorError
from .exactlinalg import MatrixK, Vector, solve_affine
from .fpgroup import Letter, Presentation, fox_jacobian
from .jets import JetMatrix, jet_exp, jet_log
from .numfield import RATIONALS, FieldElement, Jet, NumberField, embed_numeric
from .repbuild import Rep, adjoint_action, r_n, sl_coordinates, sl_matrix

logger = logging.getLogger(__name__)


@dataclass
class JetRep:
    """γ ↦ exp(Σ t^i u_i(γ))·ρ(γ) mod t^m"""
    base: Rep
    order: int
    cochains: List[List[MatrixK]]
    matrices: List[JetMatrix]

    @property
    def presentation(self) -> Presentation:
        return self.base.presentation

    @property
    def degree(self) -> int:
        return self.base.degree

    @property
    def field(self) -> NumberField:
        return self.base.field

    def cochain_vectors(self) -> List[Vector]:
        """u_i в координатах sl(n), по генераторам подряд"""
        out = []
        for u in self.cochains:
            vector: Vector = []
            for m in u:
                vector.extend(sl_coordinates(m))
            out.append(vector)
        return out


@dataclass
class ObstructionResult:
    order: int
    solvable: bool
    cochain: Optional[Vector] = None
    residual: Optional[Vector] = None
    solution_dim: int = 0
    extended: Optional[JetRep] = None


def _jet_matrices(base: Rep, cochains: Sequence[Sequence[MatrixK]], order: int) -> List[JetMatrix]:
    field_ = base.field
    d = base.degree
    matrices = []
    for g, rho in enumerate(base.matrices):
        terms = {i + 1: u[g] for i, u in enumerate(cochains) if i + 1 < order}
        exponent = JetMatrix.from_terms(field_, d, terms, order)
        matrices.append(jet_exp(exponent) * JetMatrix.constant(rho, order))
    return matrices


def _evaluate(word: Sequence[Letter], matrices: Sequence[JetMatrix], inverses: Sequence[JetMatrix]) -> JetMatrix:
    first = matrices[0]
    result = JetMatrix.identity(first.field, first.size, first.order)
    for g, e in word:
        result = result * (matrices[g] if e > 0 else inverses[g])
    return result


def _relator_values(jrep: JetRep, matrices: Sequence[JetMatrix]) -> List[Tuple[str, JetMatrix]]:
    inverses = [m.inverse() for m in matrices]
    pres = jrep.presentation
    return [(name, _evaluate(r, matrices, inverses)) for name, r in zip(pres.relator_names, pres.relators)]


def _make_jet_rep(base: Rep, cochains: List[List[MatrixK]], order: int) -> JetRep:
    matrices = _jet_matrices(base, cochains, order)
    jrep = JetRep(base, order, cochains, matrices)
    for name, value in _relator_values(jrep, matrices):
        if not value.is_identity():
            logger.error(f"Relator {name} fails modulo t^{order}")
            raise RelatorError(name, f"Relator {name} is not the identity modulo t^{order}")
    return jrep


def _split_cochain(base: Rep, vector: Sequence[Any]) -> List[MatrixK]:
    n = base.degree
    d = n * n - 1
    field_ = base.field
    count = base.presentation.generator_count
    if len(vector) != count * d:
        raise ValueError(f"Cochain of length {len(vector)}, expected {count * d}")
    return [sl_matrix(field_, [field_.coerce(x) for x in vector[g * d:(g + 1) * d]], n) for g in range(count)]


def first_order(rep: Rep, u: Sequence[Any]) -> JetRep:
    """(I + t·u(γ))·ρ(γ) mod t²"""
    return _make_jet_rep(rep, [_split_cochain(rep, u)], 2)


def constant_jet(rep: Rep, order: int = 2) -> JetRep:
    zero = [MatrixK.zero(rep.field, rep.degree, rep.degree) for _ in rep.matrices]
    return _make_jet_rep(rep, [zero] * (order - 1), order)


def obstruction_system(jrep: JetRep) -> Tuple[MatrixK, Vector]:
    """Якобиан Фокса в базовой точке и правая часть -D для коэффициента при t^m"""
    order = jrep.order
    target = order + 1
    matrices = _jet_matrices(jrep.base, jrep.cochains, target)
    defect: Vector = []
    for name, value in _relator_values(jrep, matrices):
        D = value.coefficient(order)
        defect.extend(-x for x in sl_coordinates(D))
    jac = fox_jacobian(jrep.presentation, adjoint_action(jrep.base).matrices)
    return jac, defect


def extend_order(jrep: JetRep) -> ObstructionResult:
    """Поиск u_m, снимающего дефект при t^m для JetRep порядка m"""
    order = jrep.order
    jac, rhs = obstruction_system(jrep)
    solution, kernel_dim = solve_affine(jac, rhs)
    if solution is None:
        logger.info(f"Obstruction at order {order}: defect not in the image of the Jacobian")
        return ObstructionResult(order, False, residual=[-x for x in rhs], solution_dim=kernel_dim)
    cochains = list(jrep.cochains) + [_split_cochain(jrep.base, solution)]
    extended = _make_jet_rep(jrep.base, cochains, order + 1)
    logger.debug(f"Order {order} solvable, solution space of dimension {kernel_dim}")
    return ObstructionResult(order, True, cochain=solution, solution_dim=kernel_dim, extended=extended)


def extend_to(jrep: JetRep, order: int) -> Tuple[JetRep, List[ObstructionResult]]:
    """Продолжение до t^order включительно; останавливается на первом препятствии"""
    results = []
    current = jrep
    while current.order <= order:
        result = extend_order(current)
        results.append(result)
        if not result.solvable:
            break
        current = result.extended
    return current, results


def conjugation_jet(rep: Rep, v: MatrixK, order: int) -> JetRep:
    """exp(tv)·ρ·exp(-tv), коциклы читаются через jet_log"""
    field_ = rep.field
    d = rep.degree
    tv = JetMatrix.from_terms(field_, d, {1: v}, order)
    g = jet_exp(tv)
    g_inv = jet_exp(-tv)
    per_generator = []
    for rho in rep.matrices:
        rho_jet = JetMatrix.constant(rho, order)
        multiplier = g * rho_jet * g_inv * JetMatrix.constant(rho.inverse(), order)
        per_generator.append(jet_log(multiplier))
    cochains = [[log.coefficient(i) for log in per_generator] for i in range(1, order)]
    return _make_jet_rep(rep, cochains, order)


# --- тест Бернсайда ---------------------------------------------------------------

class _ExactSpan:
    """Ступенчатый базис подпространства с нормированными ведущими элементами"""

    def __init__(self):
        self.rows: List[Tuple[int, Vector]] = []

    def reduce(self, vector: Sequence[FieldElement]) -> Vector:
        v = list(vector)
        for pivot, row in self.rows:
            c = v[pivot]
            if not c.is_zero():
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def add(self, vector: Sequence[FieldElement]) -> bool:
        v = self.reduce(vector)
        pivot = next((i for i, x in enumerate(v) if not x.is_zero()), None)
        if pivot is None:
            return False
        inv = v[pivot].inverse()
        self.rows.append((pivot, [x * inv for x in v]))
        return True

    def __len__(self) -> int:
        return len(self.rows)


def _flatten(m: MatrixK) -> Vector:
    return [x for row in m.entries for x in row]


def _to_mpc(a: FieldElement, root_choice: Optional[int], precision: int):
    if a.is_rational():
        q = a.coeffs[0]
        return mpmath.mpc(mpmath.mpf(q.numerator) / q.denominator)
    z = embed_numeric(a, root_choice, precision)
    return mpmath.mpc(mpmath.mpf(z.real.mid), mpmath.mpf(z.imag.mid))


def _numeric_rank(rows: List[List[Any]], tolerance: float, band: float = 1e3) -> int:
    """Ранг с частичным выбором ведущего элемента и порогом tolerance·scale.

    Ведущий элемент в [tolerance, tolerance·band) даёт IllConditionedError.
    """
    work = []
    for row in rows:
        scale = max((abs(x) for x in row), default=mpmath.mpf(0))
        if scale == 0:
            continue
        work.append([x / scale for x in row])
    if not work:
        return 0
    tol = mpmath.mpf(tolerance)
    soft = tol * mpmath.mpf(band)
    rank = 0
    cols = len(work[0])
    for c in range(cols):
        if rank == len(work):
            break
        p = max(range(rank, len(work)), key=lambda i: abs(work[i][c]))
        size = abs(work[p][c])
        if size < tol:
            continue
        if size < soft:
            raise IllConditionedError(
                f"Pivot {mpmath.nstr(size, 5)} lies within a factor {band:g} of the tolerance; use exact mode"
            )
        work[rank], work[p] = work[p], work[rank]
        pivot_row = work[rank]
        for i in range(rank + 1, len(work)):
            f = work[i][c] / pivot_row[c]
            if f != 0:
                work[i] = [x - f * y for x, y in zip(work[i], pivot_row)]
        rank += 1
    return rank


def algebra_closure(
    mats: Sequence[MatrixK],
    mode: str = "exact",
    tolerance: float = 1e-8,
    root_choice: Optional[int] = None,
    precision: int = 50,
    band: float = 1e3,
) -> List[int]:
    """Размерности алгебры по раундам замыкания; последний элемент - итог"""
    if not mats:
        raise ValueError("Burnside test needs at least one matrix")
    d = mats[0].rows
    field_ = mats[0].field
    identity = MatrixK.identity(field_, d)
    history = []

    if mode == "exact":
        span = _ExactSpan()
        span.add(_flatten(identity))
        frontier = [identity]
        history.append(len(span))
        while frontier:
            new = []
            for B in frontier:
                for M in mats:
                    P = M * B
                    if span.add(_flatten(P)):
                        new.append(P)
            frontier = new
            if new:
                history.append(len(span))
        return history

    if mode != "numeric":
        raise ValueError(f"Unknown Burnside mode: {mode}")

    with mpmath.workdps(precision):
        numeric = [
            [[_to_mpc(x, root_choice, precision) for x in row] for row in m.entries]
            for m in mats
        ]
        eye = [[mpmath.mpc(1 if i == j else 0) for j in range(d)] for i in range(d)]
        basis = [eye]
        frontier = [eye]
        history.append(1)
        while frontier:
            new = []
            for B in frontier:
                for M in numeric:
                    P = [[mpmath.fsum(M[i][k] * B[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
                    candidate = [[x for row in b for x in row] for b in basis + [P]]
                    if _numeric_rank(candidate, tolerance, band) > len(basis):
                        basis.append(P)
                        new.append(P)
            frontier = new
            if new:
                history.append(len(basis))
    return history


def burnside_irreducible(
    mats: Sequence[MatrixK],
    mode: str = "exact",
    tolerance: float = 1e-8,
    root_choice: Optional[int] = None,
    precision: int = 50,
    band: float = 1e3,
) -> Tuple[bool, int]:
    history = algebra_closure(mats, mode, tolerance, root_choice, precision, band)
    d = mats[0].rows
    algebra_dim = history[-1]
    logger.debug(f"Algebra closure ({mode}): {history}")
    return algebra_dim == d * d, algebra_dim


def irreducible_sample(a: Any, n: int, field_: Optional[NumberField] = None) -> List[MatrixK]:
    """r_n от тройки diag(2, 1/2), [[1, a], [0, 1]], [[1, 0], [1, 1]]"""
    if isinstance(a, FieldElement):
        field_ = a.field
    elif field_ is None:
        field_ = RATIONALS
    triple = [
        MatrixK(field_, [[2, 0], [0, "1/2"]]),
        MatrixK(field_, [[1, a], [0, 1]]),
        MatrixK(field_, [[1, 0], [1, 1]]),
    ]
    return [r_n(m, n) for m in triple]


def bn1_jet_check(c_path: Jet, n: int) -> Dict[str, Any]:
    """b_{n1}(t) = (-c(t))^{n-1}: первая ненулевая производная должна иметь порядок n-1"""
    if not c_path.coefficient(0).is_zero():
        raise ValueError("The path must start at the reducible point: c(0) = 0")
    b = (-c_path) ** (n - 1)
    first = b.valuation()
    derivatives = [b.derivative_at_zero(k) for k in range(b.order)]
    pattern = first == n - 1
    if first is None:
        logger.info(f"b_n1 vanishes modulo t^{b.order}; raise the jet order")
    return {
        'n': n,
        'b_coefficients': [c.to_strings() for c in b.coeffs],
        'derivatives': [d.to_strings() for d in derivatives],
        'first_nonvanishing_order': first,
        'pattern_holds': pattern,
    }
