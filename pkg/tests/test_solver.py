import json

import numpy as np
import pytest

from rqrao.datasets import rnd14
from rqrao.graph import Graph, cut_weight, generate
from rqrao.oracle import brute_force_maxcut
from rqrao.solver import (
    ReportError,
    RqraoParams,
    SolveError,
    brute_solve,
    ensemble_energies,
    ensemble_energy,
    qrao_solve,
    rqrao_solve,
    tree_rounding_solve,
)
from rqrao.solver import rqrao as rqrao_mod

FAST = RqraoParams(ensemble=4)


def test_ensemble_energy_examples():
    assert ensemble_energy([0.9, 0.8, 0.85], 2.0) > 0
    assert ensemble_energy([0.5, -0.5], 1.0) == 0.0
    assert ensemble_energy([-0.6, -0.6], 2.0) == pytest.approx(-0.6)
    assert ensemble_energy([0.3], 5.0) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        ensemble_energy([], 1.0)


def test_ensemble_energies_shrinks_toward_zero(rng):
    x = rng.uniform(-1, 1, (20, 50))
    e = ensemble_energies(x, 1.0)
    mu = x.mean(axis=0)
    assert np.all(np.abs(e) <= np.abs(mu) + 1e-15)
    assert np.all((e == 0) | (np.sign(e) == np.sign(mu)))


def test_params_validation():
    assert RqraoParams() == RqraoParams(m=3, ensemble=20, scale=2.0, chi=2, bf_threshold=10)
    for bad in ({"m": 4}, {"ensemble": 0}, {"bf_threshold": 0}, {"scale": -1}, {"chi": 0}, {"amplitude": -1}):
        with pytest.raises(ValueError):
            RqraoParams(**bad)


def test_rqrao_on_small_graph_goes_straight_to_brute_force(square):
    rep = rqrao_solve(square, FAST, rng=0)
    assert rep.weight == 4 and rep.rounds == []


def test_rqrao_weight_is_on_original_graph():
    g = generate({"kind": "3regular", "n": 24, "seed": 5})
    rep = rqrao_solve(g, FAST, rng=1)
    rep.check(g)
    assert rep.weight == cut_weight(g, rep.bits)
    assert rep.weight <= brute_force_maxcut(g)[1]
    assert all(r["fixed"] >= 1 for r in rep.rounds)
    assert rep.rounds[0]["nodes"] == 24


def test_rqrao_is_deterministic():
    g = generate({"kind": "3regular", "n": 20, "seed": 2})
    a = rqrao_solve(g, FAST, rng=7)
    b = rqrao_solve(g, FAST, rng=7)
    assert a.to_json(timing=False) == b.to_json(timing=False)


def test_rqrao_threads_match_serial():
    g = generate({"kind": "3regular", "n": 20, "seed": 2})
    a = rqrao_solve(g, FAST, rng=3, threads=1)
    b = rqrao_solve(g, FAST, rng=3, threads=3)
    assert a.to_json(timing=False) == b.to_json(timing=False)


def test_rqrao_disconnected_and_isolated_nodes():
    g1 = generate({"kind": "3regular", "n": 12, "seed": 1})
    edges = g1.edges + [(u + 12, v + 12, w) for u, v, w in g1.edges]
    g = Graph(range(26), edges)  # nodes 24, 25 are isolated
    rep = rqrao_solve(g, FAST, rng=0)
    rep.check(g)
    assert rep.bits[24] == 0 and rep.bits[25] == 0


def test_rqrao_drops_failing_trials(monkeypatch):
    real = rqrao_mod._run_trial
    calls = {"n": 0}

    def flaky(*a):
        calls["n"] += 1
        if calls["n"] % 2:
            raise FloatingPointError("boom")
        return real(*a)

    monkeypatch.setattr(rqrao_mod, "_run_trial", flaky)
    g = generate({"kind": "3regular", "n": 16, "seed": 3})
    rep = rqrao_solve(g, FAST, rng=0)
    assert any("dropped" in f for f in rep.flags)
    rep.check(g)


def test_rqrao_retries_then_aborts(monkeypatch):
    real = rqrao_mod._run_trial
    seen = {"n": 0}

    def first_round_fails(*a):
        seen["n"] += 1
        if seen["n"] <= FAST.ensemble:
            raise np.linalg.LinAlgError("singular")
        return real(*a)

    monkeypatch.setattr(rqrao_mod, "_run_trial", first_round_fails)
    g = generate({"kind": "3regular", "n": 16, "seed": 3})
    rep = rqrao_solve(g, FAST, rng=0)
    assert any("retrying" in f for f in rep.flags)

    def always(*a):
        raise ArithmeticError("nope")

    monkeypatch.setattr(rqrao_mod, "_run_trial", always)
    with pytest.raises(SolveError, match="failed twice"):
        rqrao_solve(g, FAST, rng=0)


def test_rqrao_stall_fallback():
    # scale so large that no edge survives shrinkage; one edge is still fixed per round
    g = generate({"kind": "3regular", "n": 14, "seed": 8})
    rep = rqrao_solve(g, FAST.with_(scale=1e6), rng=0)
    assert any("no edge survived" in f for f in rep.flags)
    assert all(r["fixed"] == 1 for r in rep.rounds)
    rep.check(g)


def test_tree_rounding_uses_one_trial():
    g = generate({"kind": "3regular", "n": 20, "seed": 4})
    rep = tree_rounding_solve(g, rng=0)
    assert rep.algorithm == "tree" and rep.params["ensemble"] == 1
    assert all(r["trials"] == 1 for r in rep.rounds)


def test_qrao_and_brute():
    g = rnd14()
    assert brute_solve(g).weight == 12
    rep = qrao_solve(g, rng=0)
    rep.check(g)
    assert rep.weight <= 12


def test_report_serialization(square):
    rep = brute_solve(square)
    d = json.loads(rep.to_json())
    assert d["bits"] == "".join(map(str, rep.bits)) and "timing" in d
    assert "timing" not in json.loads(rep.to_json(timing=False))
    rep.weight = 99
    with pytest.raises(ReportError):
        rep.check(square)


def test_telemetry_csv():
    g = generate({"kind": "3regular", "n": 20, "seed": 1})
    rep = rqrao_solve(g, FAST, rng=0)
    lines = rep.telemetry_csv().splitlines()
    assert lines[0] == "round,nodes,edges,fixed,best_objective,seconds"
    assert len(lines) == 1 + len(rep.rounds)
