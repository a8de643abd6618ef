"""Smoke tests for the Python bindings against hand-computed anchors."""

import math

import pytest

import eswitch

TWO_ROUND = [[0.8, 0.2], [0.8, 0.2]]
SWITCH = [[0.9, 0.1], [0.1, 0.9]]


def test_version():
    assert eswitch.__version__


def test_evidence_anchor():
    assert eswitch.evidence("bayes", TWO_ROUND) == pytest.approx(
        -math.log(0.34), abs=1e-12
    )


def test_run_predictions():
    out = eswitch.run("fs(alpha=0.5)", [[0.8, 0.2], [0.5, 0.5]])
    assert out["predictions"][0] == pytest.approx([0.5, 0.5], abs=1e-12)
    assert out["predictions"][1] == pytest.approx([0.65, 0.35], abs=1e-12)


def test_marginals_anchor():
    out = eswitch.marginals("fs(alpha=0.5)", SWITCH)
    assert out["log_loss"] == pytest.approx(-math.log(0.17), abs=1e-12)
    assert out["rows"][0] == pytest.approx([0.135 / 0.17, 0.035 / 0.17], abs=1e-12)
    assert out["retained_prior_mass"] == pytest.approx(1.0, abs=1e-12)


def test_viterbi_anchor():
    out = eswitch.viterbi("fs(alpha=0.5)", SWITCH)
    assert out["experts"] == [0, 1]
    assert out["log_joint"] == pytest.approx(math.log(0.10125), abs=1e-12)


def test_regret_anchor():
    r = eswitch.regret("fs(alpha=0.5)", SWITCH, [0, 1])
    assert r == pytest.approx(math.log(0.81 / 0.17), abs=1e-12)


def test_invest_anchor():
    out = eswitch.invest("bayes", [[1.2, 0.8], [1.2, 0.8]])
    assert out["wealth"] == pytest.approx(1.04, abs=1e-12)
    assert not out["ruined"]
    assert out["portfolios"][0] == pytest.approx([0.5, 0.5], abs=1e-12)


def test_validate_clean_and_bad_descriptor():
    assert eswitch.validate("fs(alpha=0.25)", 2) == []
    assert eswitch.validate("rl(tau=fat,theta=0.5)", 3, horizon=12) == []
    with pytest.raises(ValueError):
        eswitch.evidence("fs(alpha=2)", TWO_ROUND)


def test_bounds():
    assert eswitch.bound_fixed_share(2, 5, 2, 0.25) == pytest.approx(
        3.63563494, abs=1e-8
    )
    bound, alpha_star = eswitch.bound_parameter_drift(4, 4, math.sqrt(2.0) - 1.0)
    assert alpha_star == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-12)
    assert bound == pytest.approx(8.0 * math.log(1.0 + math.sqrt(2.0)), abs=1e-8)
    assert eswitch.bound_switching_method(5) == pytest.approx(
        math.log(2.0) + 0.5 * math.log(5.0), abs=1e-12
    )


def test_generate_deterministic_and_recoverable():
    a = eswitch.generate_piecewise(2, 6, [4], seed=7)
    b = eswitch.generate_piecewise(2, 6, [4], seed=7)
    assert a["data"] == b["data"]
    assert a["reference"]["experts"] == [0, 0, 0, 1, 1, 1]
    assert a["reference"]["m"] == 2
    best = eswitch.best_reference(a["data"], 2)
    assert best["experts"] == a["reference"]["experts"]
    drift = eswitch.generate_drift(3, 4, [0, 1, 2, 2], seed=9)
    assert drift["reference"]["d"] == 2
    assert len(drift["data"]) == 4
    with pytest.raises(ValueError):
        eswitch.generate_piecewise(2, 6, [1])  # blocks must start at round >= 2


def test_collapse_is_value_error():
    with pytest.raises(eswitch.EvidenceCollapse):
        eswitch.evidence("bayes", [[1.0, 0.0], [0.0, 0.0]])
    assert issubclass(eswitch.EvidenceCollapse, ValueError)
