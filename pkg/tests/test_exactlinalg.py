from fractions import Fraction

import pytest

from fibered_reps.errors import DimensionMismatchError, NotSquareError
from fibered_reps.exactlinalg import (
    MatrixK,
    _bareiss_echelon,
    char_poly,
    char_poly_faddeev,
    determinant,
    eigenvalue_multiplicity,
    in_span,
    kernel_basis,
    poly_at_matrix,
    rank,
    rref,
    simple_factor_check,
    solve_affine,
)
from fibered_reps.numfield import RATIONALS, NumberField, Polynomial, lambda_field_from_factor

QUARTIC = Polynomial.from_rationals([1, -8, 17, -8, 1])


def random_matrix(rng, rows, cols, field=RATIONALS, bound=4):
    return MatrixK(field, [
        [field.element([rng.randint(-bound, bound) for _ in range(field.degree)]) for _ in range(cols)]
        for _ in range(rows)
    ])


def deficient_matrix(rng, rows, cols, inner):
    """Произведение rows x inner на inner x cols: ранг не больше inner"""
    return random_matrix(rng, rows, inner) * random_matrix(rng, inner, cols)


def test_kernel_of_zero_matrix():
    assert len(kernel_basis(MatrixK.zero(RATIONALS, 2, 2))) == 2


def test_kernel_of_invertible_matrix_is_empty():
    assert kernel_basis(MatrixK.from_rationals([[2, 1], [1, 1]])) == []


def test_companion_eigenspace_over_lambda_field():
    field, _, lam_sq = lambda_field_from_factor(Polynomial.from_rationals([1, -5, 1]))
    C = MatrixK.companion(Polynomial.from_rationals([1, -5, 1])).over(field)
    shifted = C - MatrixK.identity(field, 2).scale(lam_sq)
    basis = kernel_basis(shifted)
    assert len(basis) == 1
    assert all(x.is_zero() for x in shifted.apply(basis[0]))


def test_kernel_vectors_and_rank_nullity(rng):
    for _ in range(20):
        rows, cols = rng.randint(1, 5), rng.randint(1, 6)
        M = deficient_matrix(rng, rows, cols, rng.randint(1, 3))
        basis = kernel_basis(M)
        assert rank(M) + len(basis) == cols
        for v in basis:
            assert all(x.is_zero() for x in M.apply(v))
            assert next(x for x in v if not x.is_zero()) == 1


def test_kernel_basis_is_canonical(rng):
    M = deficient_matrix(rng, 3, 5, 2)
    Q = random_matrix(rng, 3, 3)
    while determinant(Q).is_zero():
        Q = random_matrix(rng, 3, 3)
    assert kernel_basis(Q * M) == kernel_basis(M)


def test_solve_affine_identity():
    x, kernel_dim = solve_affine(MatrixK.identity(RATIONALS, 3), [1, -2, 5])
    assert x == [1, -2, 5]
    assert kernel_dim == 0


def test_solve_affine_inconsistent():
    x, _ = solve_affine(MatrixK.zero(RATIONALS, 2, 2), [1, 0])
    assert x is None


def test_solve_affine_particular_solution():
    x, kernel_dim = solve_affine(MatrixK.from_rationals([[1, 1], [2, 2]]), [1, 2])
    assert x == [1, 0]
    assert kernel_dim == 1


def test_solve_affine_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_affine(MatrixK.identity(RATIONALS, 2), [1, 2, 3])


def test_char_poly_examples():
    assert char_poly(MatrixK.identity(RATIONALS, 2)) == Polynomial.from_rationals([1, -2, 1])
    q = Polynomial.from_rationals([1, -5, 1])
    assert char_poly(MatrixK.companion(q)) == q


def test_char_poly_of_homology_twists():
    M = MatrixK.from_rationals([[3, 1, 1, 0], [2, 1, 1, 0], [1, 0, 3, 1], [1, 0, 2, 1]])
    assert char_poly(M) == QUARTIC
    assert Polynomial.from_rationals([1, -5, 1]).divides(char_poly(M))
    assert Polynomial.from_rationals([1, -3, 1]).divides(char_poly(M))


def test_char_poly_cross_checks(rng):
    for field in (RATIONALS, NumberField([-1, -1, 1])):
        for n in (1, 2, 3, 4):
            A = random_matrix(rng, n, n, field)
            p = char_poly(A)
            assert p.degree == n and p.is_monic()
            assert p == char_poly_faddeev(A)
            assert poly_at_matrix(p, A).is_zero()
            assert determinant(A) == p.coeffs[0] * (-1) ** n


def test_char_poly_needs_square_matrix():
    with pytest.raises(NotSquareError):
        char_poly(MatrixK.zero(RATIONALS, 2, 3))


def test_simple_factor_check():
    q5 = Polynomial.from_rationals([1, -5, 1])
    assert simple_factor_check(QUARTIC, q5) is True
    assert simple_factor_check(Polynomial.from_rationals([1, -2, 1]), Polynomial.from_rationals([-1, 1])) is False
    assert simple_factor_check(Polynomial.from_rationals([1, -3, 1]), Polynomial.from_rationals([-2, 1])) is False
    with pytest.raises(ValueError):
        simple_factor_check(QUARTIC, Polynomial.from_rationals([1, 2]))


def test_eigenvalue_multiplicity():
    p = Polynomial.from_rationals([-1, 1]) ** 3 * Polynomial.from_rationals([1, -3, 1])
    assert eigenvalue_multiplicity(p, Polynomial.from_rationals([-1, 1])) == 3
    assert eigenvalue_multiplicity(p, Polynomial.from_rationals([1, -3, 1])) == 1


def test_inverse_and_transpose(rng):
    for _ in range(10):
        A = random_matrix(rng, 3, 3, NumberField([-1, -1, 1]))
        if determinant(A).is_zero():
            continue
        assert (A * A.inverse()).is_identity()
        assert (A.transpose() * A.transpose().inverse()).is_identity()
    with pytest.raises(ZeroDivisionError):
        MatrixK.zero(RATIONALS, 2, 2).inverse()


def test_rref_and_span_membership():
    M = MatrixK.from_rationals([[2, 4, 0], [1, 2, 1]])
    R, pivots = rref(M)
    assert pivots == [0, 2]
    assert R == MatrixK.from_rationals([[1, 2, 0], [0, 0, 1]])
    vectors = [[RATIONALS.coerce(x) for x in v] for v in ([1, 0, 1], [0, 1, 1])]
    target = [RATIONALS.coerce(x) for x in (2, 3, 5)]
    assert in_span(RATIONALS, vectors, target)
    assert not in_span(RATIONALS, vectors, [RATIONALS.coerce(x) for x in (1, 1, 0)])
    assert in_span(RATIONALS, [], [RATIONALS.zero()] * 3)


def test_bareiss_echelon_stays_integral():
    # четвёртая строка равна сумме первых двух
    M = MatrixK.from_rationals([[2, 3, 1, 5], [4, 1, 7, 2], [1, 9, 2, 3], [6, 4, 8, 7]])
    work = M.to_lists()
    pivots, _ = _bareiss_echelon(work, 4)
    assert pivots == [0, 1, 2]
    assert all(a.coeffs[0].denominator == 1 for row in work for a in row)
    assert all(a.is_zero() for a in work[3])
    assert rank(M) == 3


def test_elimination_with_fractional_entries(rng):
    field = NumberField([-1, -1, 1])
    for _ in range(10):
        A = random_matrix(rng, 3, 3, field)
        if determinant(A).is_zero():
            continue
        B = A.scale(field.element([Fraction(1, 6), Fraction(-2, 5)]))
        assert determinant(B) == determinant(A) * field.element([Fraction(1, 6), Fraction(-2, 5)]) ** 3
        assert rank(B) == 3
        assert (B * B.inverse()).is_identity()
