import numpy as np
import pytest
from hypothesis import given, strategies as st

from ruledsolitons import taylor as tl
from ruledsolitons.errors import EvalDomainError
from ruledsolitons.taylor import Taylor

x0s = st.floats(0.1, 1.2)


def derivs(fn, x, order=3):
    return fn(Taylor.variable(x, order)).derivatives()


@given(x0s)
def test_elementary_derivatives(x):
    assert np.allclose(derivs(tl.sin, x), [np.sin(x), np.cos(x), -np.sin(x), -np.cos(x)])
    assert np.allclose(derivs(tl.exp, x), [np.exp(x)] * 4)
    assert np.allclose(derivs(tl.log, x), [np.log(x), 1 / x, -1 / x**2, 2 / x**3])
    assert np.allclose(derivs(tl.tan, x)[:2], [np.tan(x), 1 / np.cos(x) ** 2])
    assert np.allclose(derivs(tl.atan, x)[:3], [np.arctan(x), 1 / (1 + x * x), -2 * x / (1 + x * x) ** 2])
    assert np.allclose(derivs(tl.sqrt, x)[:2], [np.sqrt(x), 0.5 / np.sqrt(x)])


@given(st.floats(-0.9, 0.9))
def test_atanh_and_cosh(x):
    assert np.allclose(derivs(tl.atanh, x)[:2], [np.arctanh(x), 1 / (1 - x * x)])
    assert np.allclose(derivs(tl.cosh, x), [np.cosh(x), np.sinh(x), np.cosh(x), np.sinh(x)])


@given(x0s, x0s)
def test_arithmetic_rules(x, c):
    u = Taylor.variable(x, 3)
    f = (u * u + c) / (1 + u) - u ** 3 + 2 ** u
    # finite-difference cross-check of the first two derivatives
    g = lambda y: (y * y + c) / (1 + y) - y**3 + 2**y
    h = 1e-4
    d1 = (g(x + h) - g(x - h)) / (2 * h)
    d2 = (g(x + h) - 2 * g(x) + g(x - h)) / h**2
    d = f.derivatives()
    assert np.isclose(d[0], g(x))
    assert np.isclose(d[1], d1, rtol=1e-6, atol=1e-6)
    assert np.isclose(d[2], d2, rtol=1e-4, atol=1e-4)


def test_vectorized_variable():
    s = np.linspace(0.1, 1, 5)
    d = tl.sin(Taylor.variable(s, 2)).derivatives()
    assert d.shape == (3, 5)
    assert np.allclose(d[1], np.cos(s))


def test_domain_errors():
    with pytest.raises(EvalDomainError):
        tl.log(Taylor.variable(np.array([1.0, -1.0]), 2))
    with pytest.raises(EvalDomainError):
        tl.sqrt(Taylor.variable(-2.0, 1))
