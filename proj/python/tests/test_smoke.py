import math

import pytest

import trirem


def test_small_runs_follow_the_edge_identity():
    for n in range(3, 16):
        r = trirem.run(n, seed=n, snapshot_dp=0.2)
        assert r["completed"]
        assert 3 * r["tau0"] + r["final_edges"] == n * (n - 1) // 2
        assert r["snapshots"][0]["p"] == 1.0
        assert r["snapshots"][-1]["i"] == r["tau0"]


def test_n5_always_ends_with_four_edges():
    assert {trirem.run(5, seed=s)["final_edges"] for s in range(50)} == {4}


def test_runs_are_deterministic_and_modes_are_reported():
    a = trirem.run(60, seed=7)
    b = trirem.run(60, seed=7)
    assert a == b
    p = trirem.run(60, seed=7, permutation_at=0.5)
    assert p["mode"] == "permutation"
    c = trirem.run(80, seed=3, certify_at=0.4)
    s = c["survivors"]
    assert s["activation_step"] == trirem.step_at_density(80, 0.4)
    assert s["certified_edges"] <= c["final_edges"]
    assert s["disjoint_at_insertion"]


def test_scales_and_drift():
    s = trirem.scales(1000, 0)
    assert s["p"] == 1.0
    assert s["predicted_edges"] == 499500.0
    assert math.isclose(trirem.scales(10000, 0)["zeta"], math.log(10000) / 100)
    k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    assert trirem.expected_drift(4, k4) == (-4, 1)
    with pytest.raises(ValueError):
        trirem.expected_drift(4, [])


def test_ladder_words_and_family():
    assert not trirem.validate_word("e0")
    assert trirem.validate_word("ee")
    assert trirem.ladder_edges("1") == [(0, 2), (1, 2)]
    assert trirem.max_fan("1100") == (1, 3)
    assert trirem.max_fan("11") is None
    b3 = trirem.bounded_family(3)
    assert len(b3) == 94
    assert set(b3) <= set(trirem.bounded_family(4))
    assert trirem.classify_edge("11111111", 8, 9, 3) == "outer_boundary"
    assert trirem.classify_edge("110", 1, 4, 3) == "side_boundary"
    assert trirem.omega("1", 3) == 6561
    assert trirem.backward_extension_density("11111111", 8, 9, 3) == (5, 2, True)
    with pytest.raises(trirem.PreconditionError):
        trirem.bounded_family(2)


def test_psi_and_fit():
    k5 = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    assert trirem.psi_ladder("1", 0, 1, 5, k5) == 3
    assert trirem.psi_ladder("11", 0, 1, 5, k5) == 6
    fit = trirem.fit_exponent([(n, 7 * n**1.5) for n in (128, 256, 512)])
    assert abs(fit["slope"] - 1.5) < 1e-9
    assert fit["r2"] == pytest.approx(1.0)


def test_hom_audit_report():
    r = trirem.hom_audit(60, p_min=0.6, pairs=4, max_length=2, seed=1)
    assert r["schema_version"] == 1
    assert r["max_ratio"] <= 1
    assert all(e["p"] >= 0.6 for e in r["entries"])
