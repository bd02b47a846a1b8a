import json

import pytest
from click.testing import CliRunner

from eisenkron.cli import RunConfig, main, render


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, [str(a) for a in args], env=env)

    return invoke


def test_classes_level1(run):
    result = run("classes", "--level", 1, "--beta", 0, "--disc", -4)
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["schema"] == "1"
    assert data["count"] == 1
    assert data["hurwitz"] == "1/2"


def test_classes_rejects_bad_disc(run):
    result = run("classes", "--level", 6, "--beta", 1, "--disc", -20)
    assert result.exit_code == 2
    assert "error" in json.loads(result.output)


def test_classes_rejects_nonsquarefree(run):
    assert run("classes", "--level", 4, "--beta", 0, "--disc", -16).exit_code == 2


def test_class_number_csv(run):
    result = run("class-number", "--level", 1, "--beta", 1, "--disc", -23, "--format", "csv")
    assert result.exit_code == 0
    rows = dict(line.split(",", 1) for line in result.output.strip().splitlines()[1:])
    assert rows["value"] == "3"


def test_klf_hyperbolic(run):
    data = json.loads(run("klf", "--kind", "hyperbolic", "--level", 6, "--beta", 1, "--disc", 1).output)
    assert data["closed_form"]["constants"] == {"6": "3"}


def test_klf_elliptic_without_evaluator(run):
    result = run("klf", "--kind", "elliptic", "--level", 11, "--beta", 1, "--disc", -43, "--z", "0.1+1.2i")
    assert result.exit_code == 2
    data = json.loads(result.output)
    assert data["evaluator"] is None and "heegner_points" in data["closed_form"]


def test_klf_sample_values(run):
    result = run("klf", "--kind", "parabolic", "--level", 6, "--z", "0.1+1.2i", "--z", "0.3+0.7i")
    assert result.exit_code == 0
    assert len(json.loads(result.output)["samples"]) == 2


def test_qexp_hauptmodul(run):
    data = json.loads(run("qexp", "--level", 2, "--kind", "hauptmodul", "--bound-order", 3).output)
    assert data["offset"] == "-1"
    assert data["coeffs"][:3] == ["1", "0", "4372"]


def test_precision_from_environment(run):
    result = run("verify", "hurwitz", env={"EISENKRON_PRECISION": "200"})
    assert result.exit_code == 0
    assert json.loads(result.output)["precision_bits"] == 200


def test_low_precision_rejected(run):
    assert run("classes", "--level", 1, "--beta", 0, "--disc", -4, "--precision", 32).exit_code == 2


def test_verify_vq(run):
    result = run("verify", "vq", "--level", 30, "--q", 5)
    assert result.exit_code == 0
    ids = [r["id"] for r in json.loads(result.output)["checks"]]
    assert ids == ["vq/poincare/N30/q5/n5", "vq/theta/N30/q5"]


def test_verify_borcherds_csv(run):
    result = run("verify", "borcherds-eta", "--level", 6, "--format", "csv")
    lines = result.output.strip().splitlines()
    assert result.exit_code == 0
    assert lines[0].startswith("id,deviation,tolerance,passed")
    assert len(lines) == 1 + 4


def test_verify_lift_identity(run):
    result = run("verify", "lift-identity", "--level", 1, "--disc", -4, "--s", 1.3)
    data = json.loads(result.output)
    assert result.exit_code == 0
    assert [r["passed"] for r in data["checks"]] == [True]


def test_verify_unknown_suite(run):
    assert run("verify", "no-such-suite").exit_code == 2


def test_tolerance_override_floor():
    with pytest.raises(ValueError):
        RunConfig(precision_bits=128, tolerances={"lift-identity": 1e-30})


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        render({"a": 1}, "yaml")
