import math

import numpy as np
import pytest

import lifegoal

DET_SINGLE = {"mode": "det-single", "r": 0.04, "lambda": 0.02, "theta": 0.1, "m": 5, "n": 10, "f": 100, "D": 20}
STOCH1 = {"mode": "stoch1", "r": 0.04, "lambda": 0.05, "mu": 0.09, "sigma": 0.2,
          "a": 0.01, "l": 0.5, "c": 0.02, "H": 0.03, "f": 100, "n": 20}


def test_det_single_curve():
    m = lifegoal.solve(DET_SINGLE)
    assert m.mode == "det-single"
    assert not m.stochastic
    marks = m.landmarks()
    assert marks["quasi"] < marks["mid"] < marks["ideal"]
    assert m.value(0.0) == 0.0
    assert m.value("ideal") == 1.0
    # Quasi-ideal value: probability of dying inside the coverage window.
    assert m.value("quasi") == pytest.approx(math.exp(-0.1) - math.exp(-0.3), abs=1e-12)

    w = np.linspace(0.0, marks["ideal"], 201)
    v = m.values(w)
    assert v.shape == w.shape
    assert np.all(np.diff(v) >= 0.0)
    assert m.branch("w*") == "at_or_above_ideal"
    assert m.action("ideal")["purchase"] == pytest.approx(80.0)


def test_verify_all_pass():
    for scn in (DET_SINGLE, STOCH1):
        checks = lifegoal.solve(scn).verify()
        assert checks
        assert all(c["status"] != "fail" for c in checks), checks


def test_simulate_matches_closed_form():
    m = lifegoal.solve(DET_SINGLE)
    w = 0.6 * m.landmarks()["quasi"]
    a = m.simulate(w, paths=50000, seed=3, strategy="buy_all_at_quasi_ideal", threads=1)
    b = m.simulate(w, paths=50000, seed=3, strategy="buy_all_at_quasi_ideal", threads=4)
    assert a == b
    assert a["status"] == "pass"


def test_stochastic_plateau():
    m = lifegoal.solve(STOCH1)
    assert m.stochastic
    marks = m.landmarks()
    mid = 0.5 * (marks["mid_low"] + marks["mid_high"])
    assert m.branch(mid) == "plateau"
    assert m.action(mid)["invest"] == 0.0
    assert m.value(mid) == pytest.approx(1.0 - math.exp(-0.05 * 20), abs=1e-12)


def test_errors():
    with pytest.raises(ValueError):
        lifegoal.solve({**DET_SINGLE, "colour": 1})
    with pytest.raises(lifegoal.InfeasibleScenario):
        lifegoal.solve({**DET_SINGLE, "premium_override": 1.5})
    with pytest.raises(ValueError):
        lifegoal.solve(DET_SINGLE).value(-1.0)
