from fractions import Fraction

import pytest

from fibered_reps.errors import DimensionMismatchError, SpecValidationError
from fibered_reps.exactlinalg import MatrixK, char_poly, determinant
from fibered_reps.fpgroup import (
    HomologyMonodromy,
    MonodromySpec,
    Presentation,
    abelianized_action,
    compose_monodromies,
    dehn_twist_transvection,
    evaluate_word,
    format_word,
    fox_blocks,
    fox_jacobian,
    free_reduce,
    homology_action,
    is_cyclic_permutation,
    mapping_torus_presentation,
    parse_word,
    peripheral_subgroups,
    standard_symplectic_form,
    word_mul,
)
from fibered_reps.numfield import RATIONALS, Polynomial
from fibered_reps.repbuild import random_sl2
from fibered_reps.specfile import SpecFile

GENUS2_CLOSED = Polynomial.from_rationals([1, -5, 1]) * Polynomial.from_rationals([1, -3, 1])


def identity_spec(genus, punctures):
    n = 2 * genus + punctures
    return MonodromySpec(genus, punctures, tuple(((i, 1),) for i in range(n)), tuple(range(punctures)), ())


def random_word(rng, generators, length):
    return tuple((rng.randrange(generators), rng.choice((1, -1))) for _ in range(length))


def test_free_reduce_and_parse():
    assert free_reduce([(0, 1), (1, 1), (1, -1), (2, 1)]) == ((0, 1), (2, 1))
    assert parse_word("g1 g3^-1 g3 g2") == ((0, 1), (1, 1))
    assert parse_word("1") == ()
    assert parse_word("g2 t^-1", tau_index=4) == ((1, 1), (4, -1))
    assert format_word(((0, 1), (2, -1))) == "g1 g3^-1"
    assert format_word(()) == "1"


@pytest.mark.parametrize("text", ["t", "x1", "g1^2", "g0"])
def test_parse_word_rejects_bad_tokens(text):
    with pytest.raises(ValueError):
        parse_word(text)


def test_presentation_of_identity_monodromy():
    pres, weight = mapping_torus_presentation(identity_spec(1, 1))
    assert pres.labels == ("g1", "g2", "g3", "t")
    assert pres.relator_names == ("conj_g1", "conj_g2", "conj_g3", "surface")
    assert pres.format_relator(0) == "g1 t g1^-1 t^-1"
    assert pres.format_relator(3) == "g1 g2 g1^-1 g2^-1 g3^-1"
    assert weight.values == (0, 0, 0, 1)
    assert weight.vanishes_on(pres)


def test_presentation_of_genus2_example(genus2_file):
    pres, weight = mapping_torus_presentation(genus2_file.monodromy())
    assert pres.generator_count == 7
    assert len(pres.relators) == 7
    assert weight.vanishes_on(pres)


def test_surface_relator_violation_is_named():
    swap = MonodromySpec(1, 1, (((1, 1),), ((0, 1),), ((2, 1),)), (0,), ())
    with pytest.raises(SpecValidationError) as excinfo:
        mapping_torus_presentation(swap)
    assert excinfo.value.check == "surface_relator"


def test_hyperbolicity_and_permutation_checks():
    with pytest.raises(SpecValidationError) as excinfo:
        identity_spec(0, 2).validate()
    assert excinfo.value.check == "hyperbolicity"

    bad = MonodromySpec(0, 3, tuple(((i, 1),) for i in range(3)), (0, 0, 1))
    report = bad.validation_report()
    assert report['valid'] is False
    assert report['errors'][0].startswith("permutation")


def test_fox_single_letter_rules():
    M = MatrixK.from_rationals([[2, 1], [1, 1]])
    for word, expected in ((((0, 1),), MatrixK.identity(RATIONALS, 2)), (((0, -1),), -M.inverse())):
        pres = Presentation(("a",), (word,), ("r",))
        assert fox_jacobian(pres, [M]) == expected


def test_fox_block_of_tau_is_image_minus_identity(genus2):
    act = list(genus2.rep.matrices)
    jac = fox_jacobian(genus2.pres, act)
    tau = genus2.pres.index("t")
    identity = MatrixK.identity(genus2.rep.field, 2)
    for i, image in enumerate(genus2.spec.images):
        block = jac.submatrix(range(2 * i, 2 * i + 2), range(2 * tau, 2 * tau + 2))
        assert block == evaluate_word(image, act) - identity


def test_fox_product_rule(rng, golden):
    field, lam, _ = golden
    act = [random_sl2(rng, field, generator=lam) for _ in range(3)]
    for _ in range(20):
        u = random_word(rng, 3, rng.randint(1, 5))
        v = random_word(rng, 3, rng.randint(1, 5))
        whole = fox_blocks(u + v, act)
        left, right = fox_blocks(u, act), fox_blocks(v, act)
        shift = evaluate_word(u, act)
        for g in range(3):
            assert whole[g] == left[g] + shift * right[g]


def test_fox_dimension_mismatch():
    pres = Presentation(("a", "b"), (((0, 1), (1, 1)),), ("r",))
    with pytest.raises(DimensionMismatchError):
        fox_jacobian(pres, [MatrixK.identity(RATIONALS, 2), MatrixK.identity(RATIONALS, 3)])


def test_abelianized_identity():
    E, info = abelianized_action(identity_spec(1, 3))
    assert E.is_identity()
    assert info['k'] == 3


def test_abelianized_torus_block():
    spec = MonodromySpec(1, 1, (((0, 1), (1, 1)), ((1, 1),), ((2, 1),)), (0,), ())
    E, info = abelianized_action(spec)
    assert E.submatrix(range(2), range(2)) == MatrixK.from_rationals([[1, 1], [0, 1]])
    assert info['k'] == 1


def test_abelianized_genus2_words(genus2_file):
    E, info = abelianized_action(genus2_file.monodromy())
    assert E.shape == (6, 6)
    assert char_poly(info['closed_block']) == GENUS2_CLOSED
    assert info['P'].is_identity()
    assert info['k'] == 2
    assert info['cycles'] == [(1,), (2,)]


def test_genus2_homology_pipeline_agrees():
    spec = SpecFile.load("genus2_homology").monodromy()
    assert isinstance(spec, HomologyMonodromy)
    H = homology_action(spec)
    assert char_poly(H) == GENUS2_CLOSED
    _, info = abelianized_action(spec)
    assert char_poly(info['closed_block']) == GENUS2_CLOSED
    assert info['k'] == 2


def test_abelianized_action_of_composition(genus2_file):
    spec = genus2_file.monodromy()
    E, _ = abelianized_action(spec)
    E2, _ = abelianized_action(compose_monodromies(spec, spec))
    assert E2 == E * E


def test_transvection_about_alpha1():
    omega = standard_symplectic_form(2)
    T = dehn_twist_transvection([1, 0, 0, 0], 1, omega)
    assert T.column(0) == [1, 0, 0, 0]
    assert T.column(1) == [-1, 1, 0, 0]
    assert T.column(2) == [0, 0, 1, 0]
    assert T.column(3) == [0, 0, 0, 1]


def test_transvection_properties(rng):
    omega = standard_symplectic_form(2)
    for _ in range(20):
        c = [Fraction(rng.randint(-3, 3)) for _ in range(4)]
        if not any(c):
            continue
        plus = dehn_twist_transvection(c, 1, omega)
        minus = dehn_twist_transvection(c, -1, omega)
        assert (plus * minus).is_identity()
        assert determinant(plus) == 1
        assert plus.transpose() * omega * plus == omega
    with pytest.raises(ValueError):
        dehn_twist_transvection([0, 0, 0, 0], 1, omega)


def test_peripheral_subgroups_commute(genus2):
    act = list(genus2.rep.matrices)
    tori = peripheral_subgroups(genus2.spec)
    assert [t.cycle for t in tori] == [(1,), (2,)]
    for torus in tori:
        a = evaluate_word(torus.meridian, act)
        b = evaluate_word(torus.longitude, act)
        assert a * b == b * a
        assert evaluate_word(word_mul(torus.meridian, torus.longitude), act) == a * b


def test_cyclic_permutation():
    assert is_cyclic_permutation(parse_word("g1 g2 g3"), parse_word("g2 g3 g1"))
    assert not is_cyclic_permutation(parse_word("g1 g2 g3"), parse_word("g3 g2 g1"))
    assert not is_cyclic_permutation(parse_word("g1"), parse_word("g1 g1"))
    assert is_cyclic_permutation((), ())


def test_puncture_conjugator_count_is_checked():
    spec = MonodromySpec(0, 3, tuple(((i, 1),) for i in range(3)), (0, 1, 2), None, ((),))
    with pytest.raises(SpecValidationError) as excinfo:
        spec.validate()
    assert excinfo.value.check == "puncture_conjugators"
