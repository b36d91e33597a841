"""Tests for the element text syntax."""

import pytest
from sympy import QQ

from weyl_eulerian.algebra import WeylElement, euler_operator
from weyl_eulerian.parse import ParseError, parse_element, print_element


class TestParse:
    def test_euler_by_terms(self):
        assert parse_element("x1*d1 + x2*d2", 2) == euler_operator(2)

    def test_euler_symbol(self):
        assert parse_element("E", 3) == euler_operator(3)

    def test_rational_coefficient_by_juxtaposition(self):
        a = parse_element("3/2 x1^2", 1)
        assert dict(a.terms) == {((2,), (0,)): QQ(3, 2)}

    def test_product_is_weyl_product(self):
        assert parse_element("d1*x1", 1) == parse_element("x1*d1 + 1", 1)

    def test_parentheses_and_powers(self):
        assert parse_element("(x1 + d1)^2", 1) == parse_element("x1^2 + 2*x1*d1 + d1^2 + 1", 1)

    def test_unary_minus(self):
        assert parse_element("-x1 + x1", 1).is_zero()

    def test_whitespace_is_ignored(self):
        assert parse_element("  x1 *d1+1 ", 1) == parse_element("x1*d1+1", 1)

    def test_constant(self):
        assert parse_element("7", 2) == WeylElement.constant(2, 7)


class TestParseErrors:
    def test_unknown_variable(self):
        with pytest.raises(ParseError, match="x3") as exc:
            parse_element("x1 + x3", 2)
        assert exc.value.position == 5

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as exc:
            parse_element("x1 $", 1)
        assert exc.value.position == 3

    def test_end_of_input(self):
        with pytest.raises(ParseError) as exc:
            parse_element("x1 +", 1)
        assert exc.value.position == 4

    def test_empty(self):
        with pytest.raises(ParseError, match="Empty"):
            parse_element("", 1)

    def test_division_by_zero(self):
        with pytest.raises(ParseError, match="Division by zero"):
            parse_element("1/0", 1)

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ParseError):
            parse_element("(x1 + d1", 1)

    def test_is_a_value_error(self):
        with pytest.raises(ValueError):
            parse_element("y1", 1)


class TestRoundTrip:
    @pytest.mark.parametrize("text,n", [
        ("x1*d1 + x2*d2", 2),
        ("-3/2*x1^2*d1 + 5", 1),
        ("d1^3*x1^2", 1),
        ("E^2 - E", 3),
        ("0", 2),
    ])
    def test_print_then_parse(self, text, n):
        a = parse_element(text, n)
        assert parse_element(print_element(a), n) == a

    def test_canonical_form_is_stable(self):
        text = "x1*d1 + 2*x2^2*d2 - 3/2"
        assert print_element(parse_element(text, 2)) == text
