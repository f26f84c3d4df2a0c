import math

import pytest

import ambtalk


def rising():
    return ambtalk.piecewise_linear([(0.0, 0.0), (1.0, 2.0)])


def falling():
    return ambtalk.piecewise_linear([(0.0, 2.0), (1.0, 0.0)])


def test_densities():
    g = rising()
    assert g(0.25) == pytest.approx(0.5)
    assert g.support == (0.0, 1.0)
    assert g.mean() == pytest.approx(2.0 / 3.0)
    assert ambtalk.uniform(0.2, 0.6)(0.3) == pytest.approx(2.5)
    assert ambtalk.counterexample(0.01).mean() == pytest.approx(0.5, abs=1e-3)
    assert g.mirror()(0.25) == pytest.approx(falling()(0.25))


def test_solve_action_regimes():
    g = rising()
    full = ambtalk.solve_action(g, 0.0, lo=0.2, hi=0.7)
    assert full["action"] == pytest.approx(0.45)
    assert full["regime"] == "full-ambiguity"
    assert ambtalk.solve_action(g, math.inf)["action"] == pytest.approx(2.0 / 3.0)
    s = ambtalk.solve_action(g, 1.0)
    assert abs(s["foc_residual"]) <= 1e-8
    assert s["value"] == pytest.approx(s["beta"] * s["normalizer"])
    assert abs(s["action"] - ambtalk.oracle.grid_action(g, 1.0, 20001)) <= 1e-4


def test_sweep_and_worst_case():
    pts = ambtalk.action_sweep(rising(), [1e-3, 1.0, 1e4])
    assert [p["beta"] for p in pts] == [1e-3, 1.0, 1e4]
    assert abs(pts[-1]["action"] - 2.0 / 3.0) <= 1e-3
    f, c = ambtalk.worst_case_density(ambtalk.uniform(), 0.5, 1.0)
    assert f(0.0) == pytest.approx(f(1.0))
    assert c <= 0.0


def test_partition():
    eq = ambtalk.solve_partition(ambtalk.uniform(), 0.1, 2, math.inf)
    assert eq["thresholds"] == pytest.approx([0.0, 0.3, 1.0])
    assert ambtalk.solve_partition(ambtalk.uniform(), 0.3, 3, math.inf) is None
    assert ambtalk.max_intervals(ambtalk.uniform(), 0.1, math.inf) == 2
    assert ambtalk.babbling_threshold(ambtalk.uniform(), math.inf) == pytest.approx(0.25, abs=1e-4)
    assert ambtalk.oracle.cs_uniform_thresholds(0.1, 2) == pytest.approx([0.0, 0.3, 1.0])


def test_welfare_and_mirror():
    r = ambtalk.compare_regimes(falling(), falling(), 0.1, 1.0)
    assert r["verdict"] == "better"
    assert all(s > 0 for s in r["shifts"])
    holds, err = ambtalk.mirror_pairing(rising(), 0.1, 1.0)
    assert holds and err <= 1e-6


def test_ex_ante():
    s = ambtalk.solve_ex_ante(ambtalk.uniform(), [0.0, 0.3, 1.0], 0.1, 1.0)
    assert s["p_hat"] == [0.0, 1.0]
    assert s["conditional_actions"] == pytest.approx(s["posterior_actions"], abs=1e-8)


def test_reproduce():
    assert ambtalk.scenarios() == ["example1", "counterexample", "welfare-mirror", "exante"]
    claims = ambtalk.reproduce("counterexample")
    assert claims and all(passed for _, passed, _ in claims)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        ambtalk.truncated_normal(0.5, -1.0)
    with pytest.raises(ValueError):
        ambtalk.solve_action(rising(), -1.0)
    with pytest.raises(RuntimeError):
        ambtalk.counterexample(0.01).restrict(0.55, 0.7)
