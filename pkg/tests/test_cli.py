import json

import pytest
from click.testing import CliRunner

from carpet.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args))

    return go


def test_toral_report(run):
    r = run("toral", "--q", "5")
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)
    assert "0.9624236501" in json.dumps(data)


def test_chamanara_point(run):
    r = run("chamanara", "--base", "2", "--point", "1/3,1/5", "--steps", "2")
    assert r.exit_code == 0, r.output
    json.loads(r.output)


def test_quotient_point(run):
    r = run("quotient", "--base", "3", "--point", "1/2,1/2", "--steps", "1")
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)


def test_entropy_closed_form_and_realization(run):
    r = run("entropy", "--system", "bernoulli", "--p", "1/2,1/2")
    assert r.exit_code == 0, r.output
    assert abs(json.loads(r.output)["value"] - 0.6931471805599453) < 1e-15
    r = run("entropy", "--realize", "5")
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["N"] == 149


def test_hyperlocal_small(run, tmp_path):
    svg = tmp_path / "r.svg"
    r = run("hyperlocal", "--samples", "50", "--svg", str(svg))
    assert r.exit_code == 0, r.output
    assert json.loads(r.output)["passed"] is True
    assert svg.read_text().startswith("<svg")


def test_invlim_zip(run, tmp_path):
    out = tmp_path / "z.json"
    r = run("invlim", "--zip", "--out", str(out))
    assert r.exit_code == 0, r.output
    assert json.loads(out.read_text())["passed"] is True


def test_plot_command(run, tmp_path):
    out = tmp_path / "id.svg"
    r = run("plot", "identification", "--out", str(out))
    assert r.exit_code == 0, r.output
    assert out.read_text().startswith("<svg")


def test_verify_single_check(run):
    r = run("verify", "--only", "5")
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)
    assert list(data["criteria"]) == ["5"] and data["passed"]


@pytest.mark.parametrize("args", [
    ("verify",),
    ("verify", "--only", "99"),
    ("verify", "--only", "x"),
    ("toral", "--matrix", "1,1,0,1"),
    ("entropy", "--eps", "1/0"),
    ("plot", "pie", "--out", "x.svg"),
    ("chamanara", "--base", "1"),
])
def test_usage_errors_exit_2(run, args):
    assert run(*args).exit_code == 2
