"""
Проверка гипотез и сводный отчёт по (монодромия, λ, n)
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from .errors import FiberedRepsError, IllConditionedError, IndeterminateError, RootIndexError, SpecFileError
from .exactlinalg import MatrixK, char_poly, simple_factor_check
from .fpgroup import (
    AnySpec,
    FiberWeight,
    MonodromySpec,
    Presentation,
    abelianized_action,
    evaluate_word,
    mapping_torus_presentation,
    peripheral_subgroups,
)
from .monitoring import metrics, monitor_stage
from .numfield import (
    FieldElement,
    NumberField,
    Polynomial,
    archimedean_check,
    describe_field,
    lambda_field_from_factor,
)
from .repbuild import (
    EigenData,
    Rep,
    adjoint_action,
    build_rho_lambda,
    compose_rep,
    eigendata_from_action,
    flag_check,
)
from .specfile import SpecFile
from .twistedcoh import (
    decomposition_check,
    induction_check,
    torus_cohomology,
    two_pipeline_report,
    z1_space,
)
from .deform import burnside_irreducible, irreducible_sample
from .utils import format_vector, stage_summary

logger = logging.getLogger(__name__)

INDETERMINATE = "indeterminate"


class ReportStatus:
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"
    ERROR = "error"
    INDETERMINATE = "indeterminate"


@dataclass
class HypothesisReport:
    """Гипотезы теоремы о гладкости и размерности компоненты"""
    n: int
    k: int
    simple_eigenvalue: bool
    archimedean: Union[bool, str]
    one_not_eigenvalue_closed: bool
    power_conditions: Dict[int, bool] = field(default_factory=dict)
    h0: Optional[int] = None
    h1: Optional[int] = None
    z1: Optional[int] = None

    @property
    def predicted_dim(self) -> int:
        """(n+1+k)(n-1) - h0; h0 = 0, пока не вычислено"""
        return (self.n + 1 + self.k) * (self.n - 1) - (self.h0 or 0)

    @property
    def predicted_h1(self) -> int:
        return self.k * (self.n - 1)

    @property
    def all_hold(self) -> bool:
        return (
            self.simple_eigenvalue
            and self.archimedean is True
            and self.one_not_eigenvalue_closed
            and all(self.power_conditions.values())
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'k': self.k,
            'simple_eigenvalue': self.simple_eigenvalue,
            'archimedean': self.archimedean,
            'one_not_eigenvalue_closed': self.one_not_eigenvalue_closed,
            'power_conditions': {str(j): ok for j, ok in sorted(self.power_conditions.items())},
            'predicted_dim': self.predicted_dim,
            'predicted_h1': self.predicted_h1,
            'computed': {'h0': self.h0, 'h1': self.h1, 'z1': self.z1},
            'all_hold': self.all_hold,
        }


@dataclass
class _LambdaData:
    E: MatrixK
    char_poly: Polynomial
    info: Dict[str, Any]
    field: NumberField
    lam: FieldElement
    lam_sq: FieldElement


def _hypotheses(
    spec: AnySpec,
    q_sq: Polynomial,
    n: int,
    precision: int = 50,
    refinement_rounds: int = 6,
    root_choice: Optional[int] = None,
    modulus: Optional[Polynomial] = None,
    assume_irreducible: bool = False,
    max_factor_degree: int = 8,
) -> Tuple[HypothesisReport, _LambdaData]:
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    E, info = abelianized_action(spec)
    cp = char_poly(E)
    closed = info['closed_block']
    if closed.rows:
        one = closed.field.one()
        one_ok = not char_poly(closed).evaluate(one).is_zero()
    else:
        one_ok = True

    simple = simple_factor_check(cp, q_sq)
    field_, lam, lam_sq = lambda_field_from_factor(q_sq, modulus, assume_irreducible, max_factor_degree)

    try:
        archimedean: Union[bool, str] = archimedean_check(lam, root_choice, precision, refinement_rounds)
    except IndeterminateError as e:
        logger.warning(f"Archimedean check indeterminate: {e}")
        archimedean = INDETERMINATE

    powers = {j: not cp.evaluate(lam_sq ** j).is_zero() for j in range(2, n + 1)}

    report = HypothesisReport(n, info['k'], simple, archimedean, one_ok, powers)
    if not simple:
        logger.warning(f"{q_sq} is not a simple factor of the characteristic polynomial")
    if not one_ok:
        logger.warning("1 is an eigenvalue of the closed-surface monodromy action")
    for j, ok in powers.items():
        if not ok:
            logger.warning(f"lambda^{2 * j} is an eigenvalue of the monodromy action")
    return report, _LambdaData(E, cp, info, field_, lam, lam_sq)


def check_hypotheses(
    spec: AnySpec,
    q_sq: Polynomial,
    n: int,
    precision: int = 50,
    refinement_rounds: int = 6,
    root_choice: Optional[int] = None,
    modulus: Optional[Polynomial] = None,
    assume_irreducible: bool = False,
) -> HypothesisReport:
    return _hypotheses(spec, q_sq, n, precision, refinement_rounds, root_choice, modulus, assume_irreducible)[0]


@dataclass
class PreparedRep:
    """ρ_λ для файла спецификации вместе с промежуточными данными"""
    spec: MonodromySpec
    pres: Presentation
    weight: FiberWeight
    E: MatrixK
    info: Dict[str, Any]
    eig: EigenData
    rep: Rep


def prepare_rep(spec_file: SpecFile, max_factor_degree: int = 8) -> PreparedRep:
    spec = spec_file.monodromy()
    if not isinstance(spec, MonodromySpec):
        raise SpecFileError("monodromy.type", "this computation needs word-level images")
    E, info = abelianized_action(spec)
    _, lam, lam_sq = lambda_field_from_factor(
        spec_file.factor_polynomial(), spec_file.modulus_polynomial(),
        spec_file.assume_irreducible, max_factor_degree,
    )
    boundary = range(2 * spec.genus, 2 * spec.genus + spec.punctures)
    eig = eigendata_from_action(E, lam, lam_sq, boundary)
    pres, weight = mapping_torus_presentation(spec)
    rep = build_rho_lambda(pres, eig, weight)
    return PreparedRep(spec, pres, weight, E, info, eig, rep)


# --- сводный отчёт -------------------------------------------------------------

StageResult = Tuple[str, Dict[str, Any]]


class _Pipeline:
    """Стадии отчёта; сбой стадии записывается, а не пробрасывается"""

    def __init__(self):
        self.stages: List[Dict[str, Any]] = []
        self.context: Dict[str, Any] = {}

    def run(self, name: str, func: Callable[[], StageResult], requires: Tuple[str, ...] = (),
            skip_reason: Optional[str] = None) -> None:
        start_time = time.time()
        status = ReportStatus.SKIPPED
        details: Dict[str, Any] = {}
        error = None

        missing = [key for key in requires if key not in self.context]
        if skip_reason is not None:
            error = skip_reason
        elif missing:
            error = f"requires {', '.join(missing)}"
        else:
            try:
                status, details = func()
            except IllConditionedError as e:
                status, error = ReportStatus.INDETERMINATE, str(e)
            except (FiberedRepsError, ArithmeticError, ValueError, IndexError) as e:
                logger.error(f"Stage {name} failed: {e}")
                status, error = ReportStatus.ERROR, f"{type(e).__name__}: {e}"

        duration = time.time() - start_time
        if status != ReportStatus.SKIPPED:
            metrics.record_stage(name, status, duration)
        logger.info(f"Stage {name} completed: {status} ({duration:.2f}s)")
        self.stages.append({
            'name': name,
            'status': status,
            'duration': duration,
            'details': details,
            'error': error,
        })


def _status(ok: bool) -> str:
    return ReportStatus.PASSED if ok else ReportStatus.FAILED


@monitor_stage("full_report")
def full_report(
    spec_file: SpecFile,
    n: Optional[int] = None,
    precision: Optional[int] = None,
    refinement_rounds: int = 6,
    burnside_tolerance: float = 1e-8,
    burnside_band: float = 1e3,
    exact_only: Optional[bool] = None,
    max_factor_degree: int = 8,
) -> Dict[str, Any]:
    """Все стадии для одного (спецификация, λ, n); ни одна стадия не прерывает отчёт"""
    overall_start = time.time()
    n = n if n is not None else spec_file.n
    precision = precision if precision is not None else (spec_file.precision or 50)
    exact_only = spec_file.exact_only if exact_only is None else exact_only
    logger.info(f"Starting full report for {spec_file.name}, n = {n}...")

    pipe = _Pipeline()
    ctx = pipe.context
    report: Dict[str, Any] = {'spec': spec_file.name, 'n': n, 'input_error': None}

    try:
        spec = spec_file.monodromy()
        q_sq = spec_file.factor_polynomial()
        if n < 2:
            raise ValueError(f"n must be at least 2, got {n}")
        field_, _, _ = lambda_field_from_factor(
            q_sq, spec_file.modulus_polynomial(), spec_file.assume_irreducible, max_factor_degree,
        )
        root_choice = spec_file.root_choice
        if root_choice is not None and not 0 <= root_choice < field_.degree:
            raise RootIndexError(f"Root index {root_choice} out of range for degree {field_.degree}")
    except (FiberedRepsError, ValueError) as e:
        logger.error(f"Input error: {e}")
        report.update({'input_error': str(e), 'stages': [], 'summary': stage_summary([]),
                       'hypotheses': None, 'duration': time.time() - overall_start})
        report['verdict'] = verdict(report)
        metrics.record_report_status(report['verdict'])
        return report

    word_level = isinstance(spec, MonodromySpec)
    not_words = None if word_level else "homology-level monodromy has no presentation"

    def hypotheses() -> StageResult:
        hr, data = _hypotheses(
            spec, q_sq, n, precision, refinement_rounds, spec_file.root_choice,
            spec_file.modulus_polynomial(), spec_file.assume_irreducible, max_factor_degree,
        )
        ctx['hypotheses'] = hr
        ctx['lambda'] = data
        status = ReportStatus.INDETERMINATE if hr.archimedean == INDETERMINATE else _status(hr.all_hold)
        details = hr.to_dict()
        details['char_poly'] = data.char_poly.format()
        details['cycles'] = [list(c) for c in data.info['cycles']]
        return status, details

    def lambda_field() -> StageResult:
        data: _LambdaData = ctx['lambda']
        boundary = range(2 * spec.genus, 2 * spec.genus + spec.punctures)
        eig = eigendata_from_action(data.E, data.lam, data.lam_sq, boundary)
        ctx['eig'] = eig
        return ReportStatus.PASSED, {
            'field': describe_field(data.field),
            'lambda': format_vector([data.lam])[0],
            'lambda_squared': format_vector([data.lam_sq])[0],
            'eigenvector': format_vector(eig.a),
        }

    def rho_lambda() -> StageResult:
        pres, weight = mapping_torus_presentation(spec)
        rep = build_rho_lambda(pres, ctx['eig'], weight)
        ctx['pres'], ctx['rep'] = pres, rep
        return ReportStatus.PASSED, {
            'generators': list(pres.labels),
            'relators': list(pres.relator_names),
            'relators_verified': len(pres.relators),
        }

    def rho_lambda_n() -> StageResult:
        rep_n = compose_rep(ctx['rep'], n)
        ctx['rep_n'] = rep_n
        flags = flag_check(rep_n)
        ok = flags['invariant_line'] and flags['upper_triangular']
        return _status(ok), {
            'degree': n,
            'invariant_line': flags['invariant_line'],
            'upper_triangular': flags['upper_triangular'],
            'line_characters': format_vector(flags['line_characters']),
        }

    def cohomology() -> StageResult:
        act = adjoint_action(ctx['rep_n'])
        space = z1_space(ctx['pres'], act)
        ctx['space'] = space
        hr: HypothesisReport = ctx['hypotheses']
        hr.h0, hr.h1, hr.z1 = space.h0, space.h1, space.z1
        for quantity, value in space.dims().items():
            metrics.record_dimension(spec_file.name, quantity, value)
        coboundary_ok = space.b1 == n * n - 1 - space.h0
        details = dict(space.dims())
        details['module'] = space.module
        details['coboundary_dim_consistent'] = coboundary_ok
        return _status(coboundary_ok), details

    def predictions() -> StageResult:
        hr: HypothesisReport = ctx['hypotheses']
        h1_ok = hr.h1 == hr.predicted_h1
        z1_ok = hr.z1 == hr.predicted_dim
        if not (h1_ok and z1_ok):
            logger.warning(f"Computed h1={hr.h1}, z1={hr.z1}; predicted h1={hr.predicted_h1}, z1={hr.predicted_dim}")
        return _status(h1_ok and z1_ok), {
            'h1': hr.h1,
            'predicted_h1': hr.predicted_h1,
            'z1': hr.z1,
            'predicted_z1': hr.predicted_dim,
            'h1_matches': h1_ok,
            'z1_matches': z1_ok,
        }

    def burnside() -> StageResult:
        mats = list(ctx['rep_n'].matrices)
        irreducible, dim = burnside_irreducible(mats, "exact")
        details: Dict[str, Any] = {'irreducible': irreducible, 'algebra_dim': dim, 'full_dim': n * n}
        sample = irreducible_sample(1, n, ctx['rep_n'].field)
        details['with_irreducible_sample'] = burnside_irreducible(mats + sample, "exact")[1]
        if not exact_only:
            try:
                numeric_irr, numeric_dim = burnside_irreducible(
                    mats, "numeric", burnside_tolerance, spec_file.root_choice, precision, burnside_band,
                )
                details['numeric_algebra_dim'] = numeric_dim
                details['numeric_agrees'] = numeric_dim == dim
            except IllConditionedError as e:
                details['numeric_algebra_dim'] = None
                details['numeric_error'] = str(e)
        return _status(not irreducible), details

    def induction() -> StageResult:
        data: _LambdaData = ctx['lambda']
        result = induction_check(ctx['pres'], ctx['eig'], ctx['rep'], n, data.char_poly)
        details = {key: value for key, value in result.items() if key not in ('dims_high', 'dims_low')}
        if not result['hypothesis_holds']:
            return ReportStatus.SKIPPED, details
        return _status(result['equal']), details

    def decomposition() -> StageResult:
        result = decomposition_check(ctx['pres'], ctx['rep'], n)
        hr: HypothesisReport = ctx['hypotheses']
        if hr.h1 is not None and hr.h1 != result['h1_adjoint']:
            return ReportStatus.FAILED, result
        return _status(result['consistent']), result

    def peripheral_tori() -> StageResult:
        act = adjoint_action(ctx['rep_n'])
        inverses = [m.inverse() for m in act.matrices]
        expected = 2 * (n - 1)
        tori = []
        for torus in peripheral_subgroups(spec):
            a = evaluate_word(torus.meridian, act.matrices, inverses)
            b = evaluate_word(torus.longitude, act.matrices, inverses)
            dims = torus_cohomology(a, b)
            tori.append({'cycle': list(torus.cycle), 'h1': dims['h1'], 'h0': dims['h0']})
        ok = all(t['h1'] == expected for t in tori)
        return _status(ok), {'expected_h1': expected, 'tori': tori}

    def s_matrix() -> StageResult:
        data: _LambdaData = ctx['lambda']
        result = two_pipeline_report(spec, ctx['eig'], ctx['rep'], data.info['k'])
        return _status(result['agreement']), result

    pipe.run("hypotheses", hypotheses)
    pipe.run("lambda_field", lambda_field, requires=('lambda',))
    pipe.run("rho_lambda", rho_lambda, requires=('eig',), skip_reason=not_words)
    pipe.run("rho_lambda_n", rho_lambda_n, requires=('rep',), skip_reason=not_words)
    pipe.run("cohomology", cohomology, requires=('rep_n', 'hypotheses'), skip_reason=not_words)
    pipe.run("predictions", predictions, requires=('space',), skip_reason=not_words)
    pipe.run("burnside", burnside, requires=('rep_n',), skip_reason=not_words)
    pipe.run("induction", induction, requires=('rep',),
             skip_reason=not_words or (None if n >= 3 else "induction compares R_(n-1) with R_(n-3), needs n >= 3"))
    pipe.run("decomposition", decomposition, requires=('rep', 'hypotheses'), skip_reason=not_words)
    pipe.run("peripheral_tori", peripheral_tori, requires=('rep_n',), skip_reason=not_words)
    pipe.run("s_matrix", s_matrix, requires=('rep',),
             skip_reason=not_words or (None if n == 2 else "S matrix is defined for n = 2"))

    hr = ctx.get('hypotheses')
    report.update({
        'hypotheses': hr.to_dict() if hr is not None else None,
        'stages': pipe.stages,
        'summary': stage_summary(pipe.stages),
        'duration': time.time() - overall_start,
    })
    report['verdict'] = verdict(report)
    metrics.record_report_status(report['verdict'])

    summary = report['summary']
    logger.info(f"Full report completed: verdict {report['verdict']} "
                f"(passed: {summary.get(ReportStatus.PASSED, 0)}, "
                f"failed: {summary.get(ReportStatus.FAILED, 0)}, "
                f"skipped: {summary.get(ReportStatus.SKIPPED, 0)})")
    return report


def verdict(report: Dict[str, Any]) -> int:
    """0 - гипотезы выполнены и размерности совпали; 1 - иначе; 2 - ошибка входа"""
    if report.get('input_error'):
        return 2
    hypotheses = report.get('hypotheses')
    if not hypotheses or not hypotheses.get('all_hold'):
        return 1
    stages = report.get('stages', [])
    bad = (ReportStatus.FAILED, ReportStatus.ERROR, ReportStatus.INDETERMINATE)
    if any(stage['status'] in bad for stage in stages):
        return 1
    # без вычисленных размерностей сравнивать нечего
    if not any(stage.get('name') == 'predictions' and stage['status'] == ReportStatus.PASSED for stage in stages):
        return 1
    return 0

