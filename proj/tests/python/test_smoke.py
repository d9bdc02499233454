"""Smoke tests for the python bindings against the C++ core."""

import math

import pytest

percolab = pytest.importorskip("percolab")


def test_weights_deterministic_and_uniformish():
    w1 = percolab.edge_weight(12345, 0, 0, 1, 0)
    w2 = percolab.edge_weight(12345, 0, 0, 1, 0)
    assert w1 == w2
    assert 0.0 < w1 < 1.0
    assert percolab.edge_weight(12346, 0, 0, 1, 0) != w1
    # orientation of the endpoints never matters
    assert percolab.edge_weight(7, 3, 4, 3, 5) == percolab.edge_weight(7, 3, 5, 3, 4)


def test_reduce_sequence():
    assert percolab.reduce_sequence("OCCCOC") in ("OCCOC", "COCCO", "CCOCO", "OCOCC", "COCOC")
    assert percolab.reduce_sequence("OCOC") == "OCOC"
    assert percolab.reduce_sequence("O") == "O"


def test_detector_matches_oracle_on_small_annulus():
    for seed in range(200):
        for sigma in ("O", "C", "OC", "OCOC"):
            fast = percolab.detect_arms(seed, sigma, 3)
            slow = percolab.brute_force_arms(seed, sigma, 3)
            assert fast == slow


def test_arm_probability_trivial_and_critical():
    sure = percolab.arm_probability("O", 8, trials=200, seed=3, p=1.0)
    assert sure["estimate"] == 1.0
    crit = percolab.arm_probability("OC", 8, trials=2000, seed=3)
    assert 0.0 < crit["estimate"] < 1.0
    assert crit["ci"][0] <= crit["estimate"] <= crit["ci"][1]


def test_arm_probability_reproducible():
    a = percolab.arm_probability("OC", 12, trials=1500, seed=11)
    b = percolab.arm_probability("OC", 12, trials=1500, seed=11, threads=2)
    assert a["hits"] == b["hits"]


def test_invasion_arm_probability():
    rec = percolab.invasion_arm_probability("O", 6, trials=60, seed=5)
    assert rec["estimate"] > 0.9  # the invasion reaches every distance
    assert rec["bracket"][0] <= rec["bracket"][1]


def test_correlation_length_and_p_hat():
    res = percolab.correlation_length(0.95, trials=800, n_max=16, seed=2)
    assert res["length"] <= 4 and not res["exceeded"]
    ph = percolab.p_hat(4, trials=800, tolerance=0.02, seed=2)
    assert 0.5 < ph["lo"] <= ph["hi"] <= 1.0
    assert math.isclose(ph["mid"], 0.5 * (ph["lo"] + ph["hi"]))


def test_duality_suite():
    checked, violations = percolab.verify_duality(max_half_side=6, trials=3000, seed=4)
    assert checked == 3000
    assert violations == 0
