"""Unit tests for the exact polynomial layer."""

from fractions import Fraction

import pytest

from multider.exactpoly import (
    LinForm,
    Matrix,
    Poly,
    canonical_factor,
    divide_exact,
    is_constant_multiple,
    mat_det_adj,
    poly_from_records,
    poly_to_records,
)
from multider.exactpoly import _mul_dict, _mul_kron


x1 = Poly.variable(2, 0)
x2 = Poly.variable(2, 1)


def test_difference_of_squares():
    assert (x1 + x2) * (x1 - x2) == x1**2 - x2**2


def test_scale_by_zero_annihilates():
    p = x1 * x2**3
    assert not p * 0
    assert len(p * 0) == 0


def test_b2_defining_polynomial_expands():
    q = x1 * x2 * (x1 + x2) * (x2 - x1)
    assert q == x1 * x2**3 - x1**3 * x2


def test_power_rule():
    assert (x1**4 * Fraction(1, 4)).diff(0) == x1**3


def test_derivative_of_b2_q():
    q = x1 * x2**3 - x1**3 * x2
    assert q.diff(1) == 3 * x1 * x2**2 - x1**3


def test_derivative_of_constant_is_zero():
    assert not Poly.const(2, 7).diff(0)


def test_derivative_index_range():
    with pytest.raises(ValueError):
        x1.diff(2)


def test_variable_count_mismatch_rejected():
    with pytest.raises(ValueError):
        x1 + Poly.variable(3, 0)
    with pytest.raises(ValueError):
        x1 * Poly.variable(3, 0)


def test_mul_of_homogeneous_is_homogeneous():
    a = x1**2 + x1 * x2
    b = x2**3 - x1 * x2**2
    p = a * b
    assert p.is_homogeneous() and p.degree() == 5


def test_divide_exact_basic():
    assert divide_exact(x1**2 - x2**2, x1 - x2) == x1 + x2


def test_divide_exact_monomial_divisor():
    num = x1**3 * (x1**2 - 5 * x2**2)
    assert divide_exact(num, x1**3) == x1**2 - 5 * x2**2


def test_divide_exact_not_divisible():
    assert divide_exact(x1**2 + x2**2, x1 + x2) is None


def test_divide_exact_by_zero():
    with pytest.raises(ZeroDivisionError):
        divide_exact(x1, Poly.zero(2))


def test_divide_exact_many_variable_form():
    # three-term divisor goes through the general heap kernel
    y = [Poly.variable(3, i) for i in range(3)]
    div = 2 * y[0] + y[1] + y[2]
    q = y[0] ** 2 - y[1] * y[2]
    assert divide_exact(q * div, div) == q


def test_substitute_invariance_and_antiinvariance():
    f1 = (x1**2 + x2**2) * Fraction(1, 2)
    flip = [[-1, 0], [0, 1]]
    assert f1.substitute_linear(flip) == f1
    swap = [[0, 1], [1, 0]]
    assert x1.substitute_linear(swap) == x2
    q = x1 * x2**3 - x1**3 * x2
    assert q.substitute_linear(flip) == -q


def test_substitute_general_matrix():
    m = [[1, 1], [0, 1]]  # x1 -> x1, x2 -> x1 + x2
    assert (x1 * x2).substitute_linear(m) == x1 * (x1 + x2)


def test_substitute_size_mismatch():
    with pytest.raises(ValueError):
        x1.substitute_linear([[1]])


def test_is_constant_multiple():
    q = x1 * x2**3 - x1**3 * x2
    assert is_constant_multiple(2 * q, q) == 2
    assert is_constant_multiple(x1**2, x2**2) is None
    assert is_constant_multiple(Poly.zero(2), Poly.zero(2)) == 1
    assert is_constant_multiple(Poly.zero(2), q) is None
    assert is_constant_multiple(q, Poly.zero(2)) is None


def test_graded_lex_term_order():
    p = x2**3 + x1 + x1 * x2 + Poly.const(2, 1)
    exps = [e for e, _ in p.items()]
    assert exps == [(0, 3), (1, 1), (1, 0), (0, 0)]


def test_leading_term():
    p = 5 * x1 * x2**2 - x2**3
    assert p.leading() == ((1, 2), Fraction(5))


def test_pow():
    assert (x1 + x2) ** 3 == x1**3 + 3 * x1**2 * x2 + 3 * x1 * x2**2 + x2**3
    assert (x1 + x2) ** 0 == Poly.const(2, 1)


def test_kronecker_matches_dict_multiplication():
    import random

    from multider.exactpoly import _finish_product

    rng = random.Random(2024)
    for nv in (2, 3, 4):
        for _ in range(30):
            def rand_homog(deg):
                t = {}
                for _ in range(rng.randint(1, 30)):
                    exps = [0] * nv
                    for _ in range(deg):
                        exps[rng.randrange(nv)] += 1
                    t[tuple(exps)] = Fraction(rng.randint(-50, 50), rng.randint(1, 7))
                return Poly(nv, t)

            a = rand_homog(rng.randint(1, 8))
            b = rand_homog(rng.randint(1, 8))
            if a and b:
                via_kron = _finish_product(nv, *_mul_kron(a, b))
                via_dict = _finish_product(nv, *_mul_dict(a, b))
                assert via_kron == via_dict


def test_canonical_factor():
    f, s = canonical_factor(x2 - x1)
    assert f == x1 - x2 and s == -1
    f, s = canonical_factor(Fraction(1, 2) * x1 + Fraction(1, 4) * x2)
    assert f == 2 * x1 + x2 and s == Fraction(1, 4)


def test_lin_form_normalisation():
    lf = LinForm([Fraction(-2), Fraction(4)])
    assert lf.coeffs == (Fraction(1), Fraction(-2))
    assert lf.poly() == x1 - 2 * x2


def test_matrix_det_adj_identity():
    ident = Matrix.identity(3, 2)
    det, adj = mat_det_adj(ident)
    assert det == Poly.const(2, 1)
    assert adj == ident


def test_matrix_det_adj_b2_jacobian():
    j = Matrix([[x1, x1**3], [x2, x2**3]])
    det, adj = mat_det_adj(j)
    assert det == x1 * x2**3 - x1**3 * x2
    prod = j @ adj
    zero = Poly.zero(2)
    assert prod == Matrix([[det, zero], [zero, det]])


def test_matrix_det_adj_singular():
    one = Poly.const(2, 1)
    m = Matrix([[one, one], [one, one]])
    det, adj = mat_det_adj(m)
    assert not det
    # classical adjugate is still valid: M @ adj == 0 == det * I
    prod = m @ adj
    assert all(not prod[i][j] for i in range(2) for j in range(2))


def test_serialization_roundtrip():
    p = x1 * x2**3 - Fraction(7, 3) * x1**3 * x2
    recs = poly_to_records(p)
    assert recs[0] == {"coefficient": "-7/3", "exponents": [3, 1]}
    assert poly_from_records(recs, 2) == p


def test_euler_identity_example():
    q = x1 * x2**3 - x1**3 * x2
    assert x1 * q.diff(0) + x2 * q.diff(1) == 4 * q
