"""Grammar round trips and error positions."""

import math

import numpy as np
import pytest

from nevlab.exprgrammar import (ExprParseError, parse_curve, parse_entire,
                                parse_meromorphic, parse_poly)


class TestEntire:
    def test_polynomials(self):
        f = parse_entire("z^2 - 1")
        for z in (0j, 1 + 1j, -2.5j):
            assert f(z) == pytest.approx(z * z - 1)

    def test_exponentials(self):
        f = parse_entire("exp(2*z) + exp(z)")
        z = 0.3 + 0.7j
        assert complex(f(z)) == pytest.approx(np.exp(2 * z) + np.exp(z))

    def test_gaussian_rational_coefficients(self):
        f = parse_entire("(1+i)*z + 1/2")
        assert complex(f(1.0 + 0j)) == pytest.approx(1.5 + 1j)

    def test_decimal_literals_exact(self):
        # 0.1 enters as the fraction 1/10, not the nearest binary float
        f = parse_entire("0.1*z")
        g = parse_entire("z/10")
        z = 3 + 4j
        assert complex(f(z)) == complex(g(z))

    def test_constant_denominator_folds(self):
        f = parse_entire("(z + 1)/3")
        assert complex(f(2 + 0j)) == pytest.approx(1.0)

    def test_rejects_nonconstant_denominator(self):
        with pytest.raises(ExprParseError, match="not entire"):
            parse_entire("1/z")

    def test_rejects_division_by_zero(self):
        with pytest.raises(ExprParseError, match="division by zero"):
            parse_entire("1/0")

    def test_unclosed_call_position(self):
        with pytest.raises(ExprParseError) as info:
            parse_entire("exp(")
        assert info.value.position == 4
        assert "position 4" in str(info.value)

    def test_unexpected_character_position(self):
        with pytest.raises(ExprParseError) as info:
            parse_entire("z + $")
        assert info.value.position == 4

    def test_trailing_garbage(self):
        with pytest.raises(ExprParseError):
            parse_entire("z z")


class TestMeromorphic:
    def test_ratio(self):
        psi = parse_meromorphic("(z^2 - 1)/z")
        z = 2 + 0j
        assert complex(psi(z)) == pytest.approx((z * z - 1) / z)

    def test_entire_is_fine(self):
        psi = parse_meromorphic("exp(z)")
        assert complex(psi(1 + 0j)) == pytest.approx(math.e)

    def test_rejects_zero(self):
        with pytest.raises(ExprParseError, match="zero function"):
            parse_meromorphic("0")


class TestCurve:
    def test_colon_and_comma_forms(self):
        a = parse_curve("[1 : z]")
        b = parse_curve("[1, z]")
        assert len(a.components) == len(b.components) == 2
        z = 1 + 2j
        assert complex(a.components[1](z)) == complex(b.components[1](z))

    def test_three_components(self):
        c = parse_curve("[1 : exp(z) : exp(2*z)]")
        assert len(c.components) == 3
        z = 0.2 + 0.1j
        assert complex(c.components[2](z)) == pytest.approx(np.exp(2 * z))

    def test_constant_denominators_fold(self):
        c = parse_curve("[1/2 : z/2]")
        assert complex(c.components[0](0j)) == pytest.approx(0.5)

    def test_needs_two_components(self):
        with pytest.raises(ExprParseError, match="at least 2"):
            parse_curve("[z]")

    def test_rejects_meromorphic_component(self):
        with pytest.raises(ExprParseError, match="entire"):
            parse_curve("[1 : 1/z]")

    def test_unclosed_bracket_position(self):
        with pytest.raises(ExprParseError) as info:
            parse_curve("[1:exp(]")
        assert info.value.position == 7


class TestPoly:
    def test_hyperplane(self):
        q = parse_poly("w0 + 2*w1", 2)
        assert q.degree == 1

    def test_conic(self):
        q = parse_poly("w0^2 - w1*w2", 3)
        assert q.degree == 2
        assert q.n_vars == 3

    def test_gaussian_coefficient(self):
        q = parse_poly("i*w0 + w1", 2)
        assert q.degree == 1

    def test_division_by_constant(self):
        q = parse_poly("(w0 + w1)/2", 2)
        assert q.degree == 1

    def test_rejects_inhomogeneous(self):
        with pytest.raises(ExprParseError):
            parse_poly("w0 + w1^2", 2)

    def test_rejects_unknown_variable(self):
        with pytest.raises(ExprParseError):
            parse_poly("w3 + w0", 2)

    def test_rejects_z(self):
        with pytest.raises(ExprParseError):
            parse_poly("z + w0", 2)

    def test_needs_two_vars(self):
        with pytest.raises(ValueError):
            parse_poly("w0", 1)
