"""Tests for normal-ordered Weyl algebra arithmetic."""

import pytest
from sympy import QQ

from weyl_eulerian.algebra import (
    INHOMOGENEOUS,
    WeylElement,
    degree_of,
    euler_operator,
    format_element,
    is_homogeneous,
    monomial_product,
    power,
    transpose,
)


class TestProduct:
    def test_commutator(self, x1, d1):
        assert d1 * x1 - x1 * d1 == 1

    def test_reordering_rule(self, P):
        d2x2 = WeylElement.d(1, 1, 2) * WeylElement.x(1, 1, 2)
        assert d2x2 == P("x1^2*d1^2 + 4*x1*d1 + 2", 1)

    def test_monomial_product_weights(self):
        out = dict(monomial_product((0,), (1,), (1,), (0,)))
        assert out == {((1,), (1,)): 1, ((0,), (0,)): 1}

    def test_distinct_variables_commute(self):
        x1, d2 = WeylElement.x(2, 1), WeylElement.d(2, 2)
        assert x1 * d2 == d2 * x1

    def test_scalar_multiplication(self, x1):
        assert (x1 * QQ(1, 2)).terms[((1,), (0,))] == QQ(1, 2)
        assert 3 * x1 == x1 + x1 + x1

    def test_cancellation_gives_zero(self, x1):
        assert (x1 - x1).is_zero()
        assert not (x1 - x1)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="Dimension mismatch"):
            WeylElement.x(1, 1) + WeylElement.x(2, 1)

    def test_variable_out_of_range(self):
        with pytest.raises(ValueError):
            WeylElement.d(2, 3)

    def test_associativity(self, P):
        a, b, c = P("x1*d2 + d1^2", 2), P("x2^2 - 3*d2", 2), P("x1*x2*d1 + 1/2", 2)
        assert (a * b) * c == a * (b * c)


class TestPower:
    def test_zero_exponent(self, x1):
        assert power(x1, 0) == 1

    def test_matches_repeated_product(self, E):
        assert E ** 3 == E * E * E

    def test_negative_exponent(self, x1):
        with pytest.raises(ValueError):
            power(x1, -1)


class TestDegree:
    def test_monomial(self):
        assert degree_of(WeylElement.monomial((2, 0), (0, 1))) == 1

    def test_euler_has_degree_zero(self, E):
        assert degree_of(E) == 0

    def test_inhomogeneous(self, x1, d1):
        assert degree_of(x1 + d1) == INHOMOGENEOUS
        assert not is_homogeneous(x1 + d1)

    def test_zero_has_no_degree(self):
        with pytest.raises(ValueError):
            degree_of(WeylElement.zero(2))
        assert is_homogeneous(WeylElement.zero(2))


class TestEuler:
    def test_terms(self, P):
        assert euler_operator(2) == P("x1*d1 + x2*d2", 2)

    def test_needs_a_variable(self):
        with pytest.raises(ValueError):
            euler_operator(0)

    @pytest.mark.parametrize("e", [-3, 0, 2])
    @pytest.mark.parametrize("t", [1, 2, 4])
    def test_commutation_with_powers(self, n, E, e, t):
        xt, dt = WeylElement.x(n, n, t), WeylElement.d(n, 1, t)
        assert (E - e) * xt == xt * (E - (e - t))
        assert (E - e) * dt == dt * (E - (e + t))


class TestTranspose:
    def test_generators(self, x1, d1):
        assert transpose(x1) == x1
        assert transpose(d1) == -d1

    def test_euler(self, n, E):
        assert transpose(E) == -E - n

    def test_anti_automorphism(self, P):
        a, b = P("x1*d1^2 + x2", 2), P("d2*x1 - 2", 2)
        assert transpose(a * b) == transpose(b) * transpose(a)

    def test_involution(self, P):
        a = P("3*x1^2*d1*d2 - x2*d2^3 + 1", 2)
        assert transpose(transpose(a)) == a


class TestFormatting:
    def test_canonical_text(self, P):
        assert format_element(P("x1*d1 + 2*x2^2*d2 - 3/2", 2)) == "x1*d1 + 2*x2^2*d2 - 3/2"

    def test_euler(self):
        assert str(euler_operator(2)) == "x1*d1 + x2*d2"

    def test_leading_minus(self, P):
        assert str(P("3/2 - x1", 1)) == "-x1 + 3/2"

    def test_zero(self):
        assert str(WeylElement.zero(1)) == "0"

    def test_hashable(self, P):
        assert len({P("x1*d1", 1), P("d1*x1 - 1", 1)}) == 1
