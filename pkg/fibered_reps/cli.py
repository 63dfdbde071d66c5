"""
Командная строка: анализ файлов спецификаций и вспомогательные вычисления
"""

import json
import logging
from typing import Any, Callable, Dict, List, Optional

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from . import setup_logging
from .analyze import ReportStatus, full_report, prepare_rep
from .config import AnalysisConfig
from .deform import burnside_irreducible, extend_to, first_order
from .errors import FiberedRepsError
from .exactlinalg import MatrixK, char_poly
from .fpgroup import HomologyMonodromy, abelianized_action, homology_action
from .monitoring import metrics, write_metrics
from .numfield import Polynomial
from .repbuild import adjoint_action, compose_rep, module_C, module_R, r_n
from .specfile import SpecFile, bundled_examples
from .twistedcoh import z1_space
from .utils import format_vector, parse_matrix, parse_rational

logger = logging.getLogger(__name__)

console = Console()

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2

STATUS_STYLES = {
    ReportStatus.PASSED: "green",
    ReportStatus.FAILED: "red",
    ReportStatus.ERROR: "red",
    ReportStatus.SKIPPED: "dim",
    ReportStatus.INDETERMINATE: "yellow",
}


def _emit(ctx: click.Context, data: Dict[str, Any], render: Callable[[Dict[str, Any]], None]) -> None:
    if ctx.obj['format'] == 'machine':
        click.echo(json.dumps(data, sort_keys=True, indent=2, default=str))
    else:
        render(data)


def _input_error(message: str) -> None:
    click.echo(click.style(f"Input error: {message}", fg='red'), err=True)
    click.get_current_context().exit(EXIT_INPUT_ERROR)


def _load(path: str, n: Optional[int] = None) -> SpecFile:
    try:
        spec_file = SpecFile.load(path)
        if n is not None:
            spec_file = spec_file.with_overrides(n=n)
        return spec_file
    except FiberedRepsError as e:
        _input_error(str(e))


def _matrix_argument(text: str) -> MatrixK:
    """'a,b;c,d' или четыре числа 'a,b,c,d' для матрицы 2x2"""
    if ';' not in text:
        entries = [parse_rational(x) for x in text.split(',')]
        if len(entries) != 4:
            raise ValueError(f"Expected four entries a,b,c,d, got {text!r}")
        return MatrixK.from_rationals([entries[:2], entries[2:]])
    return MatrixK.from_rationals(parse_matrix(text))


def _matrix_table(title: str, M: MatrixK) -> Table:
    table = Table(title=title, show_header=False)
    for _ in range(M.cols):
        table.add_column(justify="right")
    for row in M.entries:
        table.add_row(*(str(x) for x in row))
    return table


@click.group()
@click.option('--precision', type=int, default=None, help='Десятичных знаков для численных вложений')
@click.option('--exact-only', is_flag=True, help='Только точные вычисления')
@click.option('--format', 'output_format', type=click.Choice(['text', 'machine']), default=None,
              help='Формат вывода')
@click.option('--config', 'config_file', type=click.Path(dir_okay=False), default=None,
              help='Файл конфигурации JSON')
@click.option('--verbose', is_flag=True, help='Отладочный журнал в stderr')
@click.option('--metrics-file', type=click.Path(dir_okay=False), default=None,
              help='Записать метрики Prometheus в файл')
@click.pass_context
def cli(ctx, precision, exact_only, output_format, config_file, verbose, metrics_file):
    """Приводимые представления групп расслоенных 3-многообразий"""
    ctx.ensure_object(dict)
    AnalysisConfig.use_config_file(config_file)
    setup_logging(logging.DEBUG if verbose else AnalysisConfig.get_log_level())

    validation = AnalysisConfig.validate_config()
    for error in validation['errors']:
        logger.error(f"Config: {error}")
    for warning in validation['warnings']:
        logger.warning(f"Config: {warning}")

    metrics.enabled = AnalysisConfig.is_metrics_enabled()
    metrics_file = metrics_file or AnalysisConfig.get_metrics_file()
    ctx.obj.update({
        'precision': precision if precision is not None else AnalysisConfig.get_precision(),
        'exact_only': exact_only,
        'format': output_format or AnalysisConfig.get_output_format(),
        'refinement_rounds': AnalysisConfig.get_refinement_rounds(),
        'burnside_tolerance': AnalysisConfig.get_burnside_tolerance(),
        'burnside_band': AnalysisConfig.get_burnside_band(),
        'max_factor_degree': AnalysisConfig.get_max_factor_degree(),
    })
    if metrics_file:
        ctx.call_on_close(lambda: write_metrics(metrics_file))


# --- analyze -------------------------------------------------------------------

def _render_report(report: Dict[str, Any]) -> None:
    hypotheses = report.get('hypotheses')
    if hypotheses:
        powers = ", ".join(f"j={j}: {ok}" for j, ok in hypotheses['power_conditions'].items())
        console.print(Panel.fit(
            f"[bold]{report['spec']}[/bold], n = {report['n']}, k = {hypotheses['k']}\n\n"
            f"Simple eigenvalue: {hypotheses['simple_eigenvalue']}\n"
            f"|lambda| != 1: {hypotheses['archimedean']}\n"
            f"1 not an eigenvalue (closed surface): {hypotheses['one_not_eigenvalue_closed']}\n"
            f"lambda^(2j) not eigenvalues: {powers}\n"
            f"Predicted dim Z1: {hypotheses['predicted_dim']}, predicted h1: {hypotheses['predicted_h1']}\n"
            f"Computed: {hypotheses['computed']}",
            title="Hypotheses",
            border_style="cyan",
        ))

    table = Table(title="Stages", show_header=True, header_style="bold magenta")
    table.add_column("Stage", style="cyan")
    table.add_column("Status")
    table.add_column("Time", style="yellow", justify="right")
    table.add_column("Notes")
    for stage in report.get('stages', []):
        style = STATUS_STYLES.get(stage['status'], "white")
        note = stage['error'] or ", ".join(
            f"{k}={v}" for k, v in stage['details'].items()
            if isinstance(v, (int, str, bool)) and not isinstance(v, dict)
        )
        table.add_row(stage['name'], f"[{style}]{stage['status']}[/{style}]", f"{stage['duration']:.2f}s", note)
    console.print(table)

    summary = report.get('summary', {})
    console.print(
        f"\nSummary: passed {summary.get(ReportStatus.PASSED, 0)}, "
        f"failed {summary.get(ReportStatus.FAILED, 0)}, "
        f"errors {summary.get(ReportStatus.ERROR, 0)}, "
        f"skipped {summary.get(ReportStatus.SKIPPED, 0)}; verdict {report['verdict']}"
    )


@cli.command()
@click.argument('path')
@click.option('--n', 'n', type=int, default=None, help='Размерность n представления ρ_{λ,n}')
@click.option('--factor', default=None, help='Множитель q(x) для λ², коэффициенты от младших: "1,-5,1"')
@click.pass_context
def analyze(ctx, path, n, factor):
    """Полный отчёт: гипотезы, когомологии, Бернсайд, индукция"""
    spec_file = _load(path)
    try:
        coeffs = [parse_rational(c) for c in factor.split(',')] if factor else None
        spec_file = spec_file.with_overrides(n=n, factor=coeffs)
    except (FiberedRepsError, ValueError, TypeError) as e:
        _input_error(str(e))

    report = full_report(
        spec_file,
        precision=ctx.obj['precision'],
        refinement_rounds=ctx.obj['refinement_rounds'],
        burnside_tolerance=ctx.obj['burnside_tolerance'],
        burnside_band=ctx.obj['burnside_band'],
        exact_only=ctx.obj['exact_only'] or spec_file.exact_only,
        max_factor_degree=ctx.obj['max_factor_degree'],
    )
    if report['input_error']:
        click.echo(click.style(f"Input error: {report['input_error']}", fg='red'), err=True)
    _emit(ctx, report, _render_report)
    ctx.exit(report['verdict'])


# --- rn ------------------------------------------------------------------------

@cli.command()
@click.argument('entries', nargs=-1, required=True)
@click.option('--n', 'n', type=int, required=True, help='Размерность симметрической степени')
@click.pass_context
def rn(ctx, entries, n):
    """Образы матриц SL(2, Q) под r_n"""
    try:
        matrices = [_matrix_argument(e) for e in entries]
        images = [r_n(M, n) for M in matrices]
    except (FiberedRepsError, ValueError, TypeError) as e:
        _input_error(str(e))

    data = {
        'n': n,
        'images': [{'matrix': M.to_strings(), 'r_n': image.to_strings()} for M, image in zip(matrices, images)],
    }

    def render(_):
        for i, image in enumerate(images):
            console.print(_matrix_table(f"r_{n}(M{i + 1})", image))

    _emit(ctx, data, render)


# --- burnside ------------------------------------------------------------------

@cli.command()
@click.argument('matrices', nargs=-1, required=True)
@click.option('--mode', type=click.Choice(['exact', 'numeric']), default='exact', help='Режим замыкания')
@click.pass_context
def burnside(ctx, matrices, mode):
    """Размерность алгебры, порождённой матрицами"""
    try:
        mats = [_matrix_argument(m) for m in matrices]
        if mode == 'numeric' and ctx.obj['exact_only']:
            raise ValueError("numeric mode is disabled by --exact-only")
        irreducible, dim = burnside_irreducible(
            mats, mode, ctx.obj['burnside_tolerance'], precision=ctx.obj['precision'],
            band=ctx.obj['burnside_band'],
        )
    except (FiberedRepsError, ValueError, TypeError) as e:
        _input_error(str(e))

    data = {'irreducible': irreducible, 'algebra_dim': dim, 'full_dim': mats[0].rows ** 2, 'mode': mode}
    _emit(ctx, data, lambda d: click.echo(
        f"{'irreducible' if d['irreducible'] else 'reducible'}, algebra_dim {d['algebra_dim']}"
    ))


# --- cohomology ----------------------------------------------------------------

def _module(selector: str, prepared, n: int):
    rep = prepared.rep
    if selector == 'sl':
        return adjoint_action(compose_rep(rep, n))
    if selector.startswith('R') and selector[1:].isdigit():
        return module_R(int(selector[1:]), rep)
    if selector.startswith('C') and len(selector) > 1:
        alpha = rep.field.coerce(parse_rational(selector[1:]))
        return module_C(alpha, prepared.pres, prepared.weight)
    raise ValueError(f"Unknown module {selector!r}; use sl, R<m> or C<alpha>")


@cli.command()
@click.argument('path')
@click.option('--module', 'selector', default='sl', help='sl, R<m> или C<alpha>')
@click.option('--n', 'n', type=int, default=None, help='n для sl(n)')
@click.pass_context
def cohomology(ctx, path, selector, n):
    """Размерности H⁰, Z¹, B¹, H¹ для выбранного модуля"""
    spec_file = _load(path, n)
    try:
        prepared = prepare_rep(spec_file, ctx.obj['max_factor_degree'])
        act = _module(selector, prepared, spec_file.n)
        space = z1_space(prepared.pres, act)
    except (FiberedRepsError, ValueError, TypeError) as e:
        _input_error(str(e))

    data = {'spec': spec_file.name, 'module': space.module, 'degree': space.degree, 'dims': space.dims()}

    def render(d):
        table = Table(title=f"H*({d['spec']}; {d['module']})", show_header=True, header_style="bold magenta")
        for key in ('h0', 'z1', 'b1', 'h1'):
            table.add_column(key, justify="right")
        table.add_row(*(str(d['dims'][key]) for key in ('h0', 'z1', 'b1', 'h1')))
        console.print(table)

    _emit(ctx, data, render)


# --- deform --------------------------------------------------------------------

@cli.command()
@click.argument('path')
@click.option('--cocycle', type=int, default=0, help='Индекс базисного коцикла Z¹')
@click.option('--order', type=int, default=3, help='Старшая степень t')
@click.option('--n', 'n', type=int, default=None, help='n для ρ_{λ,n}')
@click.pass_context
def deform(ctx, path, cocycle, order, n):
    """Продолжение коцикла до порядка t^order"""
    spec_file = _load(path, n)
    try:
        if order < 2:
            raise ValueError(f"order must be at least 2, got {order}")
        prepared = prepare_rep(spec_file, ctx.obj['max_factor_degree'])
        rep_n = compose_rep(prepared.rep, spec_file.n)
        space = z1_space(prepared.pres, adjoint_action(rep_n))
        if not 0 <= cocycle < space.z1:
            raise IndexError(f"cocycle index {cocycle} out of range 0..{space.z1 - 1}")
        jrep = first_order(rep_n, space.basis[cocycle])
        _, results = extend_to(jrep, order)
    except (FiberedRepsError, ValueError, TypeError, IndexError) as e:
        _input_error(str(e))

    solved: List[int] = [r.order for r in results if r.solvable]
    obstructed = next((r.order for r in results if not r.solvable), None)
    data = {
        'spec': spec_file.name,
        'n': spec_file.n,
        'cocycle': cocycle,
        'z1': space.z1,
        'results': [
            {'order': r.order, 'solvable': r.solvable, 'solution_dim': r.solution_dim,
             'cochain': format_vector(r.cochain) if r.cochain is not None else None}
            for r in results
        ],
        'obstructed_at': obstructed,
    }

    def render(d):
        if solved:
            click.echo(f"solvable at orders {','.join(str(o) for o in solved)}")
        if obstructed is not None:
            click.echo(click.style(f"obstructed at order {obstructed}", fg='red'))

    _emit(ctx, data, render)
    ctx.exit(EXIT_OK if obstructed is None else EXIT_NEGATIVE)


# --- twist-matrix --------------------------------------------------------------

@cli.command('twist-matrix')
@click.argument('path')
@click.pass_context
def twist_matrix(ctx, path):
    """Действие монодромии на когомологиях слоя и его характеристический многочлен"""
    spec_file = _load(path)
    try:
        spec = spec_file.monodromy()
        E, info = abelianized_action(spec)
    except FiberedRepsError as e:
        _input_error(str(e))

    cp = char_poly(E)
    closed_cp = char_poly(info['closed_block']) if info['closed_block'].rows else None
    factors = [
        {'factor': f.format(), 'multiplicity': m}
        for f, m in _rational_factors(cp)
    ]
    data = {
        'spec': spec_file.name,
        'action': E.to_strings(),
        'char_poly': cp.format(),
        'closed_char_poly': closed_cp.format() if closed_cp is not None else None,
        'factors': factors,
        'cycles': [list(c) for c in info['cycles']],
        'k': info['k'],
    }
    if isinstance(spec, HomologyMonodromy):
        data['homology_matrix'] = homology_action(spec).to_strings()

    def render(d):
        console.print(_matrix_table("Action on H^1 of the fiber", E))
        if 'homology_matrix' in d:
            console.print(_matrix_table("Action on H_1 (columns are images)", homology_action(spec)))
        console.print(f"char poly: {d['char_poly']}")
        if d['closed_char_poly']:
            console.print(f"closed-surface char poly: {d['closed_char_poly']}")
        console.print("factors: " + ", ".join(f"({f['factor']})^{f['multiplicity']}" for f in d['factors']))
        console.print(f"puncture cycles: {d['cycles']}, k = {d['k']}")

    _emit(ctx, data, render)


def _rational_factors(poly: Polynomial):
    _, factors = poly.to_sympy().factor_list()
    return [(Polynomial.from_sympy(f.monic()), m) for f, m in factors]


# --- examples ------------------------------------------------------------------

@cli.command()
@click.pass_context
def examples(ctx):
    """Встроенные файлы спецификаций"""
    entries = []
    for name, path in bundled_examples().items():
        first = next((line.lstrip('# ').strip() for line in path.read_text(encoding='utf-8').splitlines()
                      if line.startswith('#')), "")
        entries.append({'name': name, 'path': str(path), 'description': first})

    def render(_):
        table = Table(title="Bundled examples", show_header=True, header_style="bold magenta")
        table.add_column("Name", style="cyan")
        table.add_column("Description")
        for entry in entries:
            table.add_row(entry['name'], entry['description'])
        console.print(table)

    _emit(ctx, {'examples': entries}, render)


if __name__ == '__main__':
    cli()
