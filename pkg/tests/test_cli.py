import json

import pytest

from fibered_reps.specfile import bundled_examples

MALFORMED = """\
surface:
  genus: 1
  punctures: 1
monodromy:
  type: words
  images: ["g1 g2", "g2"]
lambda:
  factor: ["1", "-3", "1"]
"""


def test_analyze_genus2(invoke):
    result = invoke("analyze", "genus2")
    assert result.exit_code == 0
    assert "verdict 0" in result.output


def test_analyze_machine_output(invoke):
    result = invoke("--format", "machine", "analyze", "genus2")
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report['hypotheses']['computed']['h1'] == 2
    assert report['verdict'] == 0


def test_analyze_negative_verdict(invoke):
    assert invoke("analyze", "eigenvalue_one").exit_code == 1


def test_analyze_malformed_file(invoke, tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text(MALFORMED, encoding='utf-8')
    result = invoke("analyze", str(path))
    assert result.exit_code == 2


def test_analyze_bad_factor(invoke):
    assert invoke("analyze", "genus2", "--factor", "1,x,1").exit_code == 2


@pytest.mark.slow
def test_analyze_other_factor_n3(invoke):
    result = invoke("--format", "machine", "analyze", "genus2", "--factor", "1,-5,1", "--n", "3")
    report = json.loads(result.output)
    assert report['hypotheses']['predicted_dim'] == 12
    assert result.exit_code == 0


def test_rn_diagonal(invoke):
    result = invoke("--format", "machine", "rn", "2,0,0,1/2", "--n", "4")
    assert result.exit_code == 0
    image = json.loads(result.output)['images'][0]['r_n']
    assert [image[i][i] for i in range(4)] == ["8", "2", "1/2", "1/8"]
    assert all(image[i][j] == "0" for i in range(4) for j in range(4) if i != j)


def test_rn_rejects_determinant(invoke):
    assert invoke("rn", "2,0,0,1", "--n", "3").exit_code == 2


def test_burnside_text(invoke):
    result = invoke("burnside", "2,0,0,1/2", "1,1,0,1")
    assert result.exit_code == 0
    assert "reducible, algebra_dim 3" in result.output


def test_burnside_machine(invoke):
    result = invoke("--format", "machine", "burnside", "2,0,0,1/2", "1,1,0,1", "1,0,1,1")
    assert json.loads(result.output) == {'irreducible': True, 'algebra_dim': 4, 'full_dim': 4, 'mode': "exact"}


def test_burnside_numeric_blocked_by_exact_only(invoke):
    assert invoke("--exact-only", "burnside", "--mode", "numeric", "1,1,0,1").exit_code == 2


def test_cohomology_adjoint(invoke):
    result = invoke("--format", "machine", "cohomology", "genus2")
    assert result.exit_code == 0
    assert json.loads(result.output)['dims'] == {'z1': 5, 'b1': 3, 'h0': 0, 'h1': 2}


def test_cohomology_other_modules(invoke):
    data = json.loads(invoke("--format", "machine", "cohomology", "genus2", "--module", "C2").output)
    assert data['dims']['h1'] == 0
    data = json.loads(invoke("--format", "machine", "cohomology", "genus2", "--module", "R2").output)
    assert data['dims']['h1'] == 2
    assert invoke("cohomology", "genus2", "--module", "Q7").exit_code == 2


def test_cohomology_needs_words(invoke):
    assert invoke("cohomology", "genus2_homology").exit_code == 2


def test_deform(invoke):
    result = invoke("deform", "genus2")
    assert result.exit_code == 0
    assert "solvable at orders 2,3" in result.output


def test_deform_bad_index(invoke):
    assert invoke("deform", "genus2", "--cocycle", "99").exit_code == 2


def test_twist_matrix(invoke):
    result = invoke("--format", "machine", "twist-matrix", "genus2")
    assert result.exit_code == 0
    data = json.loads(result.output)
    factors = {f['factor']: f['multiplicity'] for f in data['factors']}
    assert factors == {"x - 1": 2, "x^2 - 5*x + 1": 1, "x^2 - 3*x + 1": 1}
    assert data['k'] == 2


def test_twist_matrix_homology(invoke):
    result = invoke("twist-matrix", "genus2_homology")
    assert result.exit_code == 0
    assert "x^2 - 5*x + 1" in result.output


def test_examples(invoke):
    data = json.loads(invoke("--format", "machine", "examples").output)
    assert {"genus2", "torus_toy"} <= {e['name'] for e in data['examples']}


def test_metrics_file(invoke, tmp_path):
    target = tmp_path / "metrics.prom"
    result = invoke("--metrics-file", str(target), "burnside", "1,1,0,1")
    assert result.exit_code == 0
    assert target.exists()


def test_unknown_spec(invoke):
    result = invoke("analyze", "no_such_example")
    assert result.exit_code == 2


def test_analyze_reducible_factor_exits_2(invoke):
    result = invoke("analyze", "genus2", "--factor", "2,-3,1")
    assert result.exit_code == 2
    assert "reducible" in result.output


def test_analyze_short_conjugator_list(invoke, tmp_path):
    text = bundled_examples()["genus2"].read_text(encoding='utf-8')
    path = tmp_path / "short.yaml"
    path.write_text(text.replace('["g1 g3", "g1 g3"]', '["g1 g3"]'), encoding='utf-8')
    result = invoke("analyze", str(path))
    assert result.exit_code == 2
    assert "puncture_conjugators" in result.output
