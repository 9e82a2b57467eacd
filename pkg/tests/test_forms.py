from fractions import Fraction

import numpy as np
import pytest

from ternary_pythagoras.forms import X1, X2, X3, Form, monomials, sum_of_squares

from oracles import to_sympy


def test_monomial_order_and_count():
    assert monomials(0) == ((0, 0, 0),)
    assert monomials(2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert len(monomials(7)) == 36


def test_exponent_must_match_degree():
    with pytest.raises(ValueError):
        Form(3, {(1, 1, 0): 1})


def test_zero_coefficients_dropped():
    f = Form(2, {(2, 0, 0): 0, (0, 2, 0): 3})
    assert f.coeffs == {(0, 2, 0): 3}


def test_arithmetic_matches_sympy():
    rng = np.random.default_rng(1)
    f, g = Form.random(3, rng), Form.random(3, rng)
    h = Form.random(2, rng)
    assert to_sympy(f * h) == (to_sympy(f) * to_sympy(h)).expand()
    assert to_sympy(f + g) == (to_sympy(f) + to_sympy(g)).expand()
    assert to_sympy(f - g) == (to_sympy(f) - to_sympy(g)).expand()
    assert to_sympy(h**3) == (to_sympy(h) ** 3).expand()


def test_mixed_degree_addition_rejected():
    with pytest.raises(ValueError):
        X1 + X1 * X2


def test_zero_absorbs_degree():
    assert (Form.zero(5) + X1 * X2).degree == 2
    assert X1 - X1 == 0


def test_evaluate_and_str():
    f = X1**2 * X2 - 3 * X3**3
    assert f(1, 2, 1) == -1
    assert str(f) == "x1^2*x2 - 3*x3^3"
    assert str(Form.zero(4)) == "0"


def test_vector_round_trip():
    rng = np.random.default_rng(2)
    f = Form.random(4, rng)
    assert Form.from_vector(4, f.vector()) == f


def test_normalized_leading_one():
    f = 6 * X1**2 + 4 * X2**2
    n = f.normalized()
    assert n.coeffs[(2, 0, 0)] == 1
    assert n.coeffs[(0, 2, 0)] == Fraction(2, 3)


def test_sum_of_squares_weights():
    s = sum_of_squares([X1, X2], [1, Fraction(1, 2)])
    assert s == X1 * X1 + Form(2, {(0, 2, 0): Fraction(1, 2)})


def test_random_range_and_determinism():
    f = Form.random(5, np.random.default_rng(3))
    g = Form.random(5, np.random.default_rng(3))
    assert f == g
    assert all(-9 <= c <= 9 for c in f.coeffs.values())
    assert Form.random(-2, np.random.default_rng(3)).is_zero()
