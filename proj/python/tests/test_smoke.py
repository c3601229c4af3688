import math

import pytest

import orbcount


def test_gaussian_constant():
    c = orbcount.constant([1, 0, 1])
    assert c["C"]["symbolic"] == "3"
    assert c["C"]["float"] == 3.0
    assert c["denominators_agree"]


def test_golden_ratio_constant():
    c = orbcount.constant("1,0,-5")
    phi = (1 + math.sqrt(5)) / 2
    assert c["C"]["float"] == pytest.approx(48 * math.log(phi) / (math.pi * math.sqrt(5)), rel=1e-12)
    g = orbcount.constant("1,0,-5", mode="general")
    assert g["C"]["symbolic"] == c["C"]["symbolic"]


def test_orbital_methods_agree():
    r = orbcount.orbital([1, 0, -20], 2, twist_order=2)
    assert r["orbital"] == 10
    assert r["coset"]["value"] == 10
    assert r["twisted"]["text"] == "4"


def test_counts():
    assert orbcount.count_points([1, 0, 1], 3) == 10
    assert orbcount.count_points([1, -1, -1], 2) == 4
    for T in (5, 12, 23):
        assert orbcount.count_points([1, 1, 1], T) == orbcount.count_points_bruteforce([1, 1, 1], T)
    r = orbcount.census([1, 0, 1], 5000)
    assert abs(r["checkpoints"][-1]["ratio"] / 3 - 1) < 0.05


def test_satake_and_delta():
    rows = orbcount.satake(2, 2, 4)
    assert [row["image"] == "0" for row in rows] == [True, False, True, False]
    assert all(row["equal"] for row in rows)
    assert orbcount.delta(3, 2, "sqrt", 3)["delta"] == 1


def test_fl_and_residue():
    assert orbcount.fl_check([1, 0, -20], 2, 2)["equal"]
    z = orbcount.zeta_order([1, 0, -5])
    assert z["yun_check"]["match"]
    assert z["index"] == 2


def test_errors():
    with pytest.raises(Exception):
        orbcount.constant([1, 0, -4])
    with pytest.raises(Exception):
        orbcount.satake(3, 2, 4)


def test_invariants_file():
    inv = {
        "schema_version": 1,
        "n": 2,
        "fields": [{"name": "Q", "degree": 1, "res_zeta_RE": {"rational": "1/4", "pi_power": 1}}],
    }
    assert orbcount.constant([1, 0, 1], invariants=inv)["C"]["symbolic"] == "3"
