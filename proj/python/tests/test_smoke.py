from fractions import Fraction
from math import comb

import pytest

import bratteli as b


def test_binfty_heights():
    r = b.heights("binfty", 4, 10)
    assert [h["height"] for h in r["heights"]] == [comb(i + 2, 3) for i in range(1, 11)]


def test_stochastic_rows_sum_to_one():
    m = b.stochastic_matrix("pascal-n", 3, 3)
    assert m["rows"]
    for row in m["rows"]:
        assert sum(e["value"] for e in row["entries"]) == 1


def test_limit_vectors():
    q = b.binfty_limit_vector(1, 1, 10)
    assert [e["value"] for e in q["entries"]][:3] == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
    p = b.pascal_limit_vector({1: "1/3", 2: "1/3", 3: "1/3"}, 3)
    mixed = [e["value"] for e in p["entries"] if e["vertex"] == {"1": 1, "2": 1, "3": 1}]
    assert mixed == [Fraction(2, 9)]


def test_measures():
    mu = {"measure": "pascal-mu", "d": {1: "1/2", 2: "1/2"}}
    assert b.cylinder_mass(mu, 2, {1: 1, 2: 1}) == Fraction(1, 4)
    assert b.tower_mass({"measure": "binfty-mu-a", "a": 1}, 2, 2) == Fraction(1, 4)
    assert b.verify_invariance({"measure": "binfty-mu-a", "a": 2}, 6, 15)["all_pass"]
    assert b.verify_probability(mu, 3, 3)["total"] == 1


def test_sampling_is_reproducible():
    a = b.sample_paths({1: 0.3, 2: 0.7}, 100, 500, 7)
    c = b.sample_paths({1: 0.3, 2: 0.7}, 100, 500, 7)
    assert a == c


def test_extensions():
    assert b.closed_form_extension("mu-a-pascal-edge", "1/2", 2) == Fraction(1, 6)
    assert b.closed_form_extension("mu-a-pascal-edge", 1, 3) == 0
    assert b.odometer_extension("pow2")["verdict"] == "Finite"
    assert b.odometer_extension("const:2")["verdict"] == "Infinite"
    assert b.nu_p_extension("1/2", 3)["verdict"] == "Infinite"
    rows = b.bk_decay(1, 3)["rows"]
    assert [r["ratio"] for r in rows] == [Fraction(1, 3), Fraction(1, 3), Fraction(7, 27)]


def test_vershik():
    x = {"start": 1, "edges": [[2, 3, 0]], "tail": {"kind": "unspecified"}}
    y = b.vershik_step("binfty", "ltr", x)
    assert y["edges"] == [[3, 3, 0]]
    assert b.vershik_step("binfty", "ltr", y, inverse=True)["edges"] == x["edges"]
    assert b.bijection_check({"family": "pascal-k", "params": {"k": 2}}, "natural-pascal", 4, 10)["bijection"]
    assert b.odometer_check(5)["mismatches"] == 0


def test_errors():
    with pytest.raises(ValueError):
        b.heights("nope", 1, 1)
    with pytest.raises(NotImplementedError):
        b.closed_form_extension("unknown", "1/2", 2)
    spec = {"family": "custom", "params": {"level0": [1], "rows": [{"1": [[1, 1]]}]}}
    with pytest.raises(b.TruncationIncomplete):
        b.heights(spec, 3, 2)
