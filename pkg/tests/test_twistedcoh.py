import pytest

from fibered_reps.errors import RelatorError
from fibered_reps.exactlinalg import MatrixK, char_poly, determinant, same_span
from fibered_reps.fpgroup import cyclic_mapping_torus, fox_jacobian, torus_presentation
from fibered_reps.numfield import RATIONALS, Polynomial
from fibered_reps.repbuild import (
    EigenData,
    ModuleAction,
    adjoint_action,
    adjoint_matrix,
    build_rho_lambda,
    compose_rep,
    module_C,
    module_R,
    r_n,
    trivial_module,
)
from fibered_reps.twistedcoh import (
    coboundary_parametrization_n2,
    coboundary_rank,
    coboundary_vectors,
    decomposition_check,
    h0_dim,
    h1_dim,
    induction_check,
    s_matrix_n2,
    torus_cohomology,
    two_pipeline_report,
    z1_space,
)

TORUS_A = MatrixK.from_rationals([[2, 0], [0, "1/2"]])
TORUS_B = MatrixK.from_rationals([[3, 0], [0, "1/3"]])


def sl_torus_action(n):
    return adjoint_matrix(r_n(TORUS_A, n)), adjoint_matrix(r_n(TORUS_B, n))


def test_trivial_module_on_torus():
    pres, _ = torus_presentation()
    space = z1_space(pres, trivial_module(pres, RATIONALS))
    assert space.z1 == 2
    assert space.h0 == 1
    assert space.h1 == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_torus_cohomology_with_hyperbolic_diagonal(n):
    dims = torus_cohomology(*sl_torus_action(n))
    assert dims['h1'] == 2 * (n - 1)
    assert dims['h0'] == n - 1
    assert dims['b1'] == n * n - 1 - dims['h0']


def test_cocycle_basis_satisfies_jacobian(genus2):
    act = adjoint_action(genus2.rep)
    space = z1_space(genus2.pres, act)
    jac = fox_jacobian(genus2.pres, act.matrices)
    for v in space.basis:
        assert all(x.is_zero() for x in jac.apply(v))
    assert space.by_generator(space.basis[0])[0] == space.basis[0][:3]


@pytest.mark.parametrize("n", [2, 3])
def test_genus2_dimensions(genus2, n):
    space = z1_space(genus2.pres, adjoint_action(compose_rep(genus2.rep, n)))
    assert space.h0 == 0
    assert space.h1 == 2 * (n - 1)
    assert space.z1 == (n + 3) * (n - 1)
    assert space.b1 == n * n - 1


@pytest.mark.slow
def test_genus2_dimensions_n4(genus2):
    space = z1_space(genus2.pres, adjoint_action(compose_rep(genus2.rep, 4)))
    assert (space.h0, space.h1, space.z1) == (0, 6, 21)


@pytest.mark.parametrize("n", [2, 3])
def test_coboundaries_are_cocycles(genus2, n):
    act = adjoint_action(compose_rep(genus2.rep, n))
    jac = fox_jacobian(genus2.pres, act.matrices)
    for v in coboundary_vectors(genus2.pres, act):
        assert all(x.is_zero() for x in jac.apply(v))
    assert coboundary_rank(genus2.pres, act) == n * n - 1 - h0_dim(act)


def test_h1_invariant_under_conjugation(genus2, rng):
    act = adjoint_action(genus2.rep)
    field = act.field
    Q = MatrixK(field, [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
    while determinant(Q).is_zero():
        Q = MatrixK(field, [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)])
    assert h1_dim(genus2.pres, act.conjugate(Q))[0] == h1_dim(genus2.pres, act)[0]


def test_module_C_away_from_eigenvalues(genus2):
    alpha = genus2.rep.field.coerce(2)
    h1, dims = h1_dim(genus2.pres, module_C(alpha, genus2.pres, genus2.weight))
    assert h1 == 0
    assert dims['h0'] == 0


def test_explicit_coboundaries_span_B1(genus2):
    eig = genus2.eig
    explicit = [coboundary_parametrization_n2(eig, *xyz) for xyz in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    generic = coboundary_vectors(genus2.pres, adjoint_action(genus2.rep))
    assert same_span(eig.field, explicit, generic)


def test_s_matrix_blocks(genus2):
    eig = genus2.eig
    field = eig.field
    s = s_matrix_n2(genus2.spec, eig, genus2.rep)
    N = genus2.spec.generator_count
    E = genus2.E.over(field)
    identity = MatrixK.identity(field, N)
    assert s.matrix.shape == (3 * N, 3 * N + 1)
    assert s.blocks['xx'] == E - identity.scale(eig.lam_sq)
    assert s.blocks['yy'] == E - identity
    assert s.blocks['zz'] == E - identity.scale(eig.lam_sq.inverse())
    for name in ('yx', 'zx', 'zy'):
        assert s.blocks[name].is_zero()
    assert s.y0_column[:N] == [-2 * eig.lam_sq * a for a in eig.a]
    assert all(x.is_zero() for x in s.y0_column[N:])


def test_two_pipeline_agreement(genus2):
    report = two_pipeline_report(genus2.spec, genus2.eig, genus2.rep, genus2.info['k'])
    assert report['null_S'] == 4
    assert report['z1_without_surface'] == 6
    assert report['surface_relation_rank'] == 1
    assert report['h1_from_S'] == report['h1_generic'] == 2
    assert report['eigenvector_in_kernel'] is True
    assert report['agreement'] is True


def test_sl2_matches_R2(genus2):
    assert h1_dim(genus2.pres, module_R(2, genus2.rep))[0] == h1_dim(genus2.pres, adjoint_action(genus2.rep))[0] == 2


def test_induction_n3_flags_small_n(genus2):
    cp = Polynomial.from_rationals([1, -3, 1])
    result = induction_check(genus2.pres, genus2.eig, genus2.rep, 3, cp)
    assert result['hypothesis_holds'] is False
    assert result['h1_high'] == 2


def test_induction_flags_eigenvalue_violation():
    pres, weight = cyclic_mapping_torus(4)
    eig = EigenData(RATIONALS.coerce(2), RATIONALS.coerce(4), (RATIONALS.one(),), 0)
    rep = build_rho_lambda(pres, eig, weight)
    result = induction_check(pres, eig, rep, 3, Polynomial.from_rationals([-4, 1]))
    assert result['hypothesis_holds'] is False
    assert any("eigenvalue" in v for v in result['violations'])


def test_induction_needs_n_at_least_3(genus2):
    with pytest.raises(ValueError):
        induction_check(genus2.pres, genus2.eig, genus2.rep, 2, Polynomial.from_rationals([1, -3, 1]))


@pytest.mark.slow
@pytest.mark.parametrize("n", [4, 5])
def test_induction_step_genus2(genus2, n):
    result = induction_check(genus2.pres, genus2.eig, genus2.rep, n, char_poly(genus2.E))
    assert result['hypothesis_holds'] is True
    assert result['equal'] is True


def test_decomposition_n3(genus2):
    result = decomposition_check(genus2.pres, genus2.rep, 3)
    assert result['h1_adjoint'] == 4
    assert result['h1_parts'] == {'R_2': 2, 'R_4': 2}
    assert result['consistent'] is True


def test_torus_module_rejects_bad_action():
    pres, _ = torus_presentation()
    unipotent = MatrixK.from_rationals([[1, 1], [0, 1]])
    module = ModuleAction(2, (TORUS_A, unipotent), "noncommuting")
    with pytest.raises(RelatorError) as excinfo:
        z1_space(pres, module)
    assert excinfo.value.relator == "commutator"
