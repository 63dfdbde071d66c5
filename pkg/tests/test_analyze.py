import dataclasses
from fractions import Fraction

import pytest

from fibered_reps.analyze import ReportStatus, check_hypotheses, full_report, verdict
from fibered_reps.fpgroup import format_word, parse_word, substitute
from fibered_reps.numfield import Polynomial
from fibered_reps.specfile import SpecFile


def stages_by_name(report):
    return {stage['name']: stage for stage in report['stages']}


def test_hypotheses_genus2_n3(genus2):
    hr = check_hypotheses(genus2.spec, Polynomial.from_rationals([1, -3, 1]), 3)
    assert hr.k == 2
    assert hr.simple_eigenvalue and hr.one_not_eigenvalue_closed
    assert hr.archimedean is True
    assert hr.power_conditions == {2: True, 3: True}
    assert hr.all_hold
    assert hr.predicted_dim == 12
    assert hr.predicted_h1 == 4


def test_hypotheses_other_factor(genus2):
    hr = check_hypotheses(genus2.spec, Polynomial.from_rationals([1, -5, 1]), 2)
    assert hr.all_hold
    assert hr.predicted_dim == 5


def test_hypotheses_with_eigenvalue_one():
    spec = SpecFile.load("eigenvalue_one").monodromy()
    hr = check_hypotheses(spec, Polynomial.from_rationals([1, -3, 1]), 2)
    assert hr.simple_eigenvalue
    assert not hr.one_not_eigenvalue_closed
    assert not hr.all_hold


def test_hypotheses_reject_small_n(genus2):
    with pytest.raises(ValueError):
        check_hypotheses(genus2.spec, Polynomial.from_rationals([1, -3, 1]), 1)


def test_full_report_genus2(genus2_file):
    report = full_report(genus2_file)
    assert report['verdict'] == 0
    assert report['input_error'] is None
    assert report['hypotheses']['computed'] == {'h0': 0, 'h1': 2, 'z1': 5}
    stages = stages_by_name(report)
    assert stages['predictions']['status'] == ReportStatus.PASSED
    assert stages['burnside']['details']['algebra_dim'] < 4
    assert stages['burnside']['details']['with_irreducible_sample'] == 4
    assert stages['s_matrix']['details']['null_S'] == 4
    assert stages['induction']['status'] == ReportStatus.SKIPPED
    assert [t['h1'] for t in stages['peripheral_tori']['details']['tori']] == [2, 2]
    assert report['summary']['total_stages'] == len(report['stages'])


@pytest.mark.slow
def test_full_report_genus2_n3(genus2_file):
    report = full_report(genus2_file, n=3)
    assert report['verdict'] == 0
    assert report['hypotheses']['computed']['z1'] == 12
    stages = stages_by_name(report)
    assert stages['decomposition']['details']['h1_parts'] == {'R_2': 2, 'R_4': 2}
    assert stages['s_matrix']['status'] == ReportStatus.SKIPPED


def test_full_report_keeps_going_when_hypotheses_fail():
    report = full_report(SpecFile.load("eigenvalue_one"))
    assert report['verdict'] == 1
    assert report['hypotheses']['one_not_eigenvalue_closed'] is False
    assert stages_by_name(report)['hypotheses']['status'] == ReportStatus.FAILED


def test_full_report_identity_monodromy():
    report = full_report(SpecFile.load("torus_toy"))
    assert report['verdict'] == 1
    assert report['input_error'] is None


def test_full_report_input_error(genus2_file):
    report = full_report(genus2_file, n=1)
    assert report['verdict'] == 2
    assert report['stages'] == []
    assert "n must be at least 2" in report['input_error']


def test_homology_spec_skips_word_stages():
    report = full_report(SpecFile.load("genus2_homology"))
    stages = stages_by_name(report)
    assert stages['hypotheses']['status'] == ReportStatus.PASSED
    assert stages['lambda_field']['status'] == ReportStatus.PASSED
    for name in ('rho_lambda', 'cohomology', 'burnside', 's_matrix'):
        assert stages[name]['status'] == ReportStatus.SKIPPED
    assert stages['predictions']['status'] == ReportStatus.SKIPPED
    assert report['verdict'] == 1


def test_verdict_rules():
    hold = {'all_hold': True}
    assert verdict({'input_error': "bad"}) == 2
    assert verdict({'hypotheses': None}) == 1
    predicted = {'name': 'predictions', 'status': ReportStatus.PASSED}
    skipped = {'name': 'burnside', 'status': ReportStatus.SKIPPED}
    assert verdict({'hypotheses': hold, 'stages': [predicted, skipped]}) == 0
    assert verdict({'hypotheses': hold, 'stages': [skipped]}) == 1
    assert verdict({'hypotheses': hold, 'stages': [predicted, {'status': ReportStatus.INDETERMINATE}]}) == 1


@pytest.mark.parametrize(
    "factor, message",
    [
        ([2, -3, 1], "reducible"),
        ([2, -6, 2], "not monic"),
    ],
)
def test_bad_lambda_factor_is_an_input_error(genus2_file, factor, message):
    spec = genus2_file.with_overrides(factor=[Fraction(c) for c in factor])
    report = full_report(spec)
    assert report['verdict'] == 2
    assert report['stages'] == []
    assert message in report['input_error']


def test_root_choice_out_of_range_is_an_input_error(genus2_file):
    spec = dataclasses.replace(genus2_file, root_choice=7)
    report = full_report(spec)
    assert report['verdict'] == 2
    assert "Root index 7" in report['input_error']


# (a1, b1, a2, b2, d1, d2) -> (c a2 c⁻¹, c b2 c⁻¹, a1, b1, d2, d2⁻¹ d1 d2), c = [a1, b1]
NEW_IN_OLD = [
    "g1 g2 g1^-1 g2^-1 g3 g2 g1 g2^-1 g1^-1",
    "g1 g2 g1^-1 g2^-1 g4 g2 g1 g2^-1 g1^-1",
    "g1",
    "g2",
    "g6",
    "g6^-1 g5 g6",
]
OLD_IN_NEW = [
    "g3",
    "g4",
    "g4 g3 g4^-1 g3^-1 g1 g3 g4 g3^-1 g4^-1",
    "g4 g3 g4^-1 g3^-1 g2 g3 g4 g3^-1 g4^-1",
    "g5 g6 g5^-1",
    "g5",
]


def relabeled_genus2(spec_file):
    spec = spec_file.monodromy()
    new_in_old = [parse_word(w) for w in NEW_IN_OLD]
    old_in_new = [parse_word(w) for w in OLD_IN_NEW]

    def to_new(word):
        return format_word(substitute(word, old_in_new))

    conjugator = to_new(spec.conjugator)
    return dataclasses.replace(
        spec_file,
        images=tuple(to_new(substitute(w, spec.images)) for w in new_in_old),
        conjugator=conjugator,
        puncture_conjugators=(conjugator, conjugator),
        name="genus2_relabeled",
    )


def test_relabeled_generators_give_same_report(genus2_file):
    relabeled = relabeled_genus2(genus2_file)
    assert relabeled.monodromy().surface_relator() == genus2_file.monodromy().surface_relator()
    original = full_report(genus2_file)
    report = full_report(relabeled)
    assert report['verdict'] == original['verdict'] == 0
    assert report['hypotheses']['computed'] == original['hypotheses']['computed']
    stages, expected = stages_by_name(report), stages_by_name(original)
    assert stages['burnside']['details']['algebra_dim'] == expected['burnside']['details']['algebra_dim']
    assert stages['s_matrix']['details']['null_S'] == expected['s_matrix']['details']['null_S']
    tori = sorted(t['h1'] for t in stages['peripheral_tori']['details']['tori'])
    assert tori == sorted(t['h1'] for t in expected['peripheral_tori']['details']['tori'])
