"""Catalog construction and integrity tests."""

from fractions import Fraction

import pytest

from multider.coxeter import (
    build_system,
    catalog_entries,
    defining_poly,
    get_system,
    parse_key,
    symmetric_polys,
)
from multider.exactpoly import Poly, is_constant_multiple, rat_det, rat_mat_mul

x1 = Poly.variable(2, 0)
x2 = Poly.variable(2, 1)


def test_b2_catalog_entry():
    s = get_system("B2")
    assert s.invariants[0] == (x1**2 + x2**2) * Fraction(1, 2)
    assert s.invariants[1] == (x1**4 + x2**4) * Fraction(1, 4)
    assert s.h == 4 and s.exponents == (1, 3)
    assert s.gram == ((1, 0), (0, 1))
    assert s.num_hyperplanes == 4


def test_b2_defining_polynomial():
    s = get_system("B2")
    q = defining_poly(s)
    assert is_constant_multiple(q.poly, x1 * x2**3 - x1**3 * x2) in (1, -1)
    assert len(q.factors) == 4


def test_a1_rank_one():
    s = get_system("A1")
    y = Poly.variable(1, 0)
    assert s.q_poly == y
    assert s.invariants[0] == 2 * y**2
    assert s.h == 2 and s.exponents == (1,)


def test_b3_hyperplane_count():
    s = get_system("B3")
    assert s.num_hyperplanes == 9  # 3 coordinate forms + 2 * C(3,2)
    assert sum(s.exponents) == 9
    assert s.h == 6


@pytest.mark.parametrize("key,exponents,h,count", [
    ("A2", (1, 2), 3, 3),
    ("A3", (1, 2, 3), 4, 6),
    ("A4", (1, 2, 3, 4), 5, 10),
    ("B4", (1, 3, 5, 7), 8, 16),
    ("D3", (1, 2, 3), 4, 6),
    ("D4", (1, 3, 3, 5), 6, 12),
    ("D5", (1, 3, 4, 5, 7), 8, 20),
    ("I2(5)", (1, 4), 5, 5),
    ("I2(6)", (1, 5), 6, 6),
    ("I2(7)", (1, 6), 7, 7),
])
def test_catalog_numerology(key, exponents, h, count):
    s = get_system(key)
    assert s.exponents == exponents
    assert s.h == h
    assert s.num_hyperplanes == count
    assert sum(s.exponents) == count
    for i in range(s.rank):
        assert s.exponents[i] + s.exponents[s.rank - 1 - i] == s.h
    assert [f.degree() for f in s.invariants] == [e + 1 for e in s.exponents]


def test_d3_matches_a3_numerology():
    assert get_system("D3").exponents == get_system("A3").exponents
    assert get_system("D3").h == get_system("A3").h


@pytest.mark.parametrize("key", ["A2", "A3", "B2", "B3", "D4", "I2(5)", "I2(6)"])
def test_generator_relations(key):
    s = get_system(key)
    for g in s.generators:
        gt = tuple(tuple(g[j][i] for j in range(s.rank)) for i in range(s.rank))
        assert rat_mat_mul(rat_mat_mul(gt, s.gram), g) == s.gram
        det = rat_det(g)
        assert det in (Fraction(1), Fraction(-1))
        assert s.q_poly.substitute_linear(g) == s.q_poly * det
        for f in s.invariants:
            assert f.substitute_linear(g) == f


def test_i2_4_is_rational_b2_rotation():
    s = get_system("I2(4)")
    assert not s.orbit_level
    assert {f.degree() for f in s.factors} == {1}
    assert len(s.generators) == 3


def test_i2_5_orbit_factors():
    s = get_system("I2(5)")
    assert s.orbit_level
    degrees = sorted(f.degree() for f in s.factors)
    assert degrees == [1, 4]
    assert s.q_poly == 5 * x1**4 * x2 - 10 * x1**2 * x2**3 + x2**5


def test_i2_6_orbit_factors():
    s = get_system("I2(6)")
    degrees = sorted(f.degree() for f in s.factors)
    assert degrees == [1, 1, 2, 2]


def test_symmetric_polys():
    assert symmetric_polys("complete_sq", 1, 2) == x1**2 + x2**2
    assert not symmetric_polys("complete_sq", -2, 4)
    assert symmetric_polys("complete_sq", 0, 3) == Poly.const(3, 1)
    assert symmetric_polys("complete_sq", 2, 2) == x1**4 + x1**2 * x2**2 + x2**4
    e2 = symmetric_polys("elementary", 2, 3)
    y = [Poly.variable(3, i) for i in range(3)]
    assert e2 == y[0] * y[1] + y[0] * y[2] + y[1] * y[2]
    assert symmetric_polys("power_sum", 3, 2) == x1**3 + x2**3
    with pytest.raises(ValueError):
        symmetric_polys("nope", 1, 2)


def test_parse_key():
    assert parse_key("B3") == ("B", 3, None)
    assert parse_key("I2(11)") == ("I2", 2, 11)
    with pytest.raises(KeyError):
        parse_key("E8")


def test_unsupported_rejected():
    with pytest.raises(ValueError):
        build_system("D", 2)
    with pytest.raises(ValueError):
        build_system("I2", 2, 2)
    with pytest.raises(ValueError):
        build_system("I2", 3, 5)
    with pytest.raises(ValueError):
        build_system("Q", 3)


def test_catalog_entries_listing():
    keys = [s.key for s in catalog_entries()]
    assert "B2" in keys and "A1" in keys and "D4" in keys and "I2(5)" in keys
