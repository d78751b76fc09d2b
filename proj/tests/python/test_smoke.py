import math

import pytest

import floqgap


def test_undoped_gap_is_exact():
    for n in (4, 6):
        g = floqgap.gap(n, 0.5)
        assert g["converged"]
        assert g["delta"] == pytest.approx(n * 0.5 / 2, abs=1e-6)
        assert floqgap.undoped_gap(n, 0.5) == n * 0.25


def test_power_matches_dense():
    dense = floqgap.gap(4, 0.7, "staggered", seed=3, method="dense")
    power = floqgap.gap(4, 0.7, "staggered", seed=3, method="power")
    assert power["delta"] == pytest.approx(dense["delta"], abs=1e-6)


def test_fully_doped_formula_at_strong_damping():
    d = floqgap.gap(4, 6.0, "full", seed=1, method="dense")["delta"]
    f = floqgap.fully_doped_formula(4, 6.0, seed=1)
    assert not f["degenerate"]
    assert d == pytest.approx(f["delta"], abs=10 * math.exp(-6.0))


def test_channel_preserves_trace():
    state = [0.0] * 256
    state[0] = 1.0
    state[5] = 0.3
    out = floqgap.apply_channel(4, 0.2, "full", 0, state)
    assert out[0] == 1.0
    assert sum(x * x for x in out[1:]) < 0.09


def test_orbit_floor():
    spec = floqgap.orbit_spectrum(4)
    assert spec[0]["normalized_weight"] == 0.5
    o = floqgap.orbit("YIYI")
    assert 2 * o["weight_sum"] == 4 * o["length"]


def test_patterns_and_cutoffs():
    assert floqgap.pattern("block:2", 6) == "ooxoox"
    assert floqgap.max_eigenmode_free_cutoff(6, "undoped") == 2
    assert floqgap.eigenmode_free(6, "undoped", 2)["eigenmode_free"]


def test_cycles_small_block():
    r = floqgap.cycles(1)
    assert r["w_star"] == 2
    assert "w_star 2" in r["report"]


def test_haar_entry_average():
    s = floqgap.haar_log_stats(50000, seed=4)
    assert abs(s["mean"] - s["target"]) < 5 * s["stderr"]


def test_cli_records():
    rows = floqgap.records("gap", "--n", 4, "--gamma", "0.1,1")
    deltas = [r for r in rows if r["quantity"] == "delta"]
    assert len(deltas) == 2
    assert float(deltas[1]["delta"]) == pytest.approx(2.0, abs=1e-6)


def test_cli_config_error():
    code, _, err = floqgap.run_cli(["gap", "--n", "4"])
    assert code == 2
    assert err
    with pytest.raises(RuntimeError):
        floqgap.records("gap", "--n", "5", "--gamma", "1")
