import numpy as np
import pytest
from hypothesis import given, strategies as st

from ruledsolitons.errors import ParseError
from ruledsolitons.exprparse import parse_curve, parse_expression, parse_scalar, parse_surface_expr


@pytest.mark.parametrize(
    "text, value",
    [
        ("1 + 2*3", 7.0),
        ("2^3^2", 512.0),
        ("-2^2", -4.0),
        ("2**-1", 0.5),
        ("(1+2)*(3-1)/4", 1.5),
        ("pi", np.pi),
        ("exp(1) - e", 0.0),
        ("1.5e1", 15.0),
    ],
)
def test_constant_expressions(text, value):
    assert np.isclose(parse_scalar(text)(0.3), value)


@given(st.floats(0.05, 1.4))
def test_matches_numpy(s):
    f = parse_scalar("-log(cos(s)) + s^2*atan(s) - sqrt(s)/cosh(s)")
    expected = -np.log(np.cos(s)) + s**2 * np.arctan(s) - np.sqrt(s) / np.cosh(s)
    assert np.isclose(f(s), expected)


def test_curve_jet_from_taylor():
    c = parse_curve("(log(s), 1/(2*s), -1/(2*s))")
    s = np.array([0.5, 1.0, 2.0])
    jet = c.jet(s, 2)
    assert np.allclose(jet[1][:, 0], 1 / s)
    assert np.allclose(jet[2][:, 1], 1 / s**3)


def test_surface_expr_kinds():
    assert parse_surface_expr("(s, 0, 1)").jet(0.2, 1).shape == (2, 3)
    assert np.isclose(parse_surface_expr("s*s")(3.0), 9.0)


@pytest.mark.parametrize(
    "text, column",
    [("1 + ", 5), ("(s, s)", 6), ("s $ 2", 3), ("foo(s)", 1), ("q + 1", 1), ("(1, 2", 6)],
)
def test_parse_errors_report_column(text, column):
    with pytest.raises(ParseError) as info:
        parse_expression(text, line=4)
    assert info.value.line == 4
    assert info.value.column == column


def test_shape_errors():
    with pytest.raises(ParseError):
        parse_curve("s + 1")
    with pytest.raises(ParseError):
        parse_scalar("(s, s, s)")
