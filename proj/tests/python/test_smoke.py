import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import germflow

DATA = Path(os.environ.get("GERMFLOW_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def pitchfork():
    return germflow.load_germ_spec(str(DATA / "pitchfork.germ"))


def test_rho_unit_weights_is_euclidean():
    assert germflow.rho(germflow.WeightSystem.unit(2), np.array([3.0, 4.0])) == 5.0


def test_rho_quasi_homogeneous():
    w = germflow.WeightSystem([1, 2, 3])
    u = np.array([0.3, -0.2, 0.7])
    t = 0.37
    assert math.isclose(germflow.rho(w, w.dilate(u, t)), t * germflow.rho(w, u), rel_tol=1e-12)


def test_spec_fields(pitchfork):
    assert pitchfork.germ.n == 1 and pitchfork.germ.l == 1 and pitchfork.germ.p == 1
    assert pitchfork.group_order == 2
    assert pitchfork.job["r"] == "3"
    assert germflow.parse_germ_spec(str(pitchfork)).group_order == 2


def test_parse_error_raises():
    with pytest.raises(germflow._core.GermflowError):
        germflow.parse_germ_spec("dims 1 1 1\nmap 1 x 1 0\n")


def test_kuo_certificate(pitchfork):
    cert = germflow.check_kuo_condition(pitchfork, samples=2000)
    assert cert.verdict == "holds-empirically"
    assert 1.9 <= cert.fitted_exponent <= 2.1
    assert cert.witness is not None


def test_perturbation_order(pitchfork):
    x4 = germflow.load_germ_spec(str(DATA / "x4.germ"))
    report = germflow.perturbation_order(pitchfork, x4, 3)
    assert not report.passes()
    assert "perturbation order 4 ≤ 4" in report.summary()


def test_flow_reaches_perturbed_zero_set(pitchfork):
    x5 = germflow.load_germ_spec(str(DATA / "x5.germ"))
    problem = germflow.HomotopyProblem(pitchfork, x5)
    result = germflow.build_homeomorphism(problem, seeds=20)
    assert result["passed"]
    for phi in result["phi"]:
        assert np.linalg.norm(problem.value(phi, 1.0)) <= 1e-6
    trace = germflow.integrate_flow(problem, np.array([0.3, 0.09]))
    assert trace["reason"] == "completed"


def test_cli_round_trip():
    code, out, _ = germflow.run_cli(["check-kuo", "--spec", str(DATA / "pitchfork.germ"), "--samples", "1000"])
    assert code == 0
    assert json.loads(out)["verdicts"]["kuo"] == "holds-empirically"
    code, _, err = germflow.run_cli(["flow", "--spec", "missing.germ"])
    assert code == 2 and "missing.germ" in err
