"""Truncated univariate Taylor arithmetic (forward-mode AD of arbitrary order).

A :class:`Taylor` holds normalized coefficients ``c[k] = f^(k)(s0) / k!``
for ``k = 0..order``.  Coefficients may be numpy arrays, so one Taylor object
carries a whole batch of expansion points at once.

The elementary functions below (``sin``, ``log``, ...) accept Taylor
objects, numpy arrays and floats, so the same closure can be used to
compute positions (floats) and derivatives (Taylor inputs).  Bivariate
second-order jets are obtained from three directional expansions, see
:func:`surface_jet_from_closure` in :mod:`ruledsolitons.surface`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import EvalDomainError


def _first_bad(mask, where):
    """Value of ``where`` at the first True entry of ``mask`` (for messages)."""
    mask = np.asarray(mask)
    if where is None:
        return None
    where = np.broadcast_to(np.asarray(where, dtype=float), mask.shape)
    idx = np.argwhere(mask)
    return float(where[tuple(idx[0])]) if idx.size else None


class Taylor:
    __slots__ = ("c",)
    __array_ufunc__ = None

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)
        if self.c.ndim == 0:
            raise ValueError("Taylor needs at least one coefficient")

    @classmethod
    def variable(cls, x0, order: int, direction=1.0) -> "Taylor":
        x0 = np.asarray(x0, dtype=float)
        c = np.zeros((order + 1,) + x0.shape)
        c[0] = x0
        if order >= 1:
            c[1] = direction
        return cls(c)

    @classmethod
    def constant(cls, value, order: int, shape=()) -> "Taylor":
        c = np.zeros((order + 1,) + tuple(shape))
        c[0] = value
        return cls(c)

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    def derivative(self, k: int):
        """The k-th derivative at the expansion point."""
        return math.factorial(k) * self.c[k]

    def derivatives(self) -> np.ndarray:
        """Stack of all derivatives ``f, f', f'', ...`` along axis 0."""
        fact = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.c * fact.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def diff(self) -> "Taylor":
        """Taylor series of f' (one order lower)."""
        k = np.arange(1, self.order + 1, dtype=float)
        return Taylor(self.c[1:] * k.reshape((-1,) + (1,) * (self.c.ndim - 1)))

    def truncate(self, order: int) -> "Taylor":
        return Taylor(self.c[: order + 1])

    def __repr__(self):
        return f"Taylor({self.c!r})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Taylor):
            if other.order == self.order:
                return self, other
            k = min(self.order, other.order)
            return self.truncate(k), other.truncate(k)
        other = np.asarray(other, dtype=float)
        c = np.zeros_like(self.c * other)
        c[0] = other
        return self, Taylor(c)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Taylor(a.c + b.c)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Taylor(a.c - b.c)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Taylor(b.c - a.c)

    def __neg__(self):
        return Taylor(-self.c)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Taylor):
            return Taylor(self.c * np.asarray(other, dtype=float))
        a, b = self._coerce(other)
        n = a.order + 1
        out = np.zeros(np.broadcast_shapes(a.c.shape, b.c.shape))
        for k in range(n):
            acc = a.c[0] * b.c[k]
            for j in range(1, k + 1):
                acc = acc + a.c[j] * b.c[k - j]
            out[k] = acc
        return Taylor(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Taylor):
            return Taylor(self.c / np.asarray(other, dtype=float))
        a, b = self._coerce(other)
        return a * reciprocal(b)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, exponent):
        if isinstance(exponent, Taylor):
            return exp(exponent * log(self))
        exponent = float(exponent)
        if exponent.is_integer():
            return _int_power(self, int(exponent))
        return _real_power(self, exponent)

    def __rpow__(self, base):
        return exp(self * np.log(base))


def _int_power(x: Taylor, n: int) -> Taylor:
    if n < 0:
        return reciprocal(_int_power(x, -n))
    result = Taylor.constant(1.0, x.order, x.c.shape[1:])
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _real_power(x: Taylor, alpha: float) -> Taylor:
    a = x.c
    bad = a[0] <= 0
    if np.any(bad):
        raise EvalDomainError("non-integer power of a non-positive number")
    p = np.zeros_like(a)
    p[0] = a[0] ** alpha
    for k in range(1, x.order + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + ((alpha + 1.0) * j - k) * a[j] * p[k - j]
        p[k] = acc / (k * a[0])
    return Taylor(p)


def reciprocal(x: Taylor) -> Taylor:
    a = x.c
    if np.any(a[0] == 0):
        raise EvalDomainError("division by zero")
    r = np.zeros_like(a)
    r[0] = 1.0 / a[0]
    for k in range(1, x.order + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + a[j] * r[k - j]
        r[k] = -acc / a[0]
    return Taylor(r)


def _integrate(value0, dseries: Taylor) -> Taylor:
    """Series of F with F(s0) = value0 and F' = dseries."""
    d = dseries.c
    out = np.zeros((d.shape[0] + 1,) + np.shape(d[0]))
    out[0] = value0
    for k in range(1, d.shape[0] + 1):
        out[k] = d[k - 1] / k
    return Taylor(out)


# -- elementary functions ---------------------------------------------------


def exp(x):
    if not isinstance(x, Taylor):
        return np.exp(x)
    a = x.c
    e = np.zeros_like(a)
    e[0] = np.exp(a[0])
    for k in range(1, x.order + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * a[j] * e[k - j]
        e[k] = acc / k
    return Taylor(e)


def log(x):
    if not isinstance(x, Taylor):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise EvalDomainError("log of a non-positive number")
        return np.log(x)
    a = x.c
    if np.any(a[0] <= 0):
        raise EvalDomainError("log of a non-positive number")
    out = np.zeros_like(a)
    out[0] = np.log(a[0])
    for k in range(1, x.order + 1):
        acc = a[k] * 1.0
        for j in range(1, k):
            acc = acc - (j / k) * out[j] * a[k - j]
        out[k] = acc / a[0]
    return Taylor(out)


def _sincos(x: Taylor, hyperbolic: bool):
    a = x.c
    s = np.zeros_like(a)
    c = np.zeros_like(a)
    if hyperbolic:
        s[0], c[0] = np.sinh(a[0]), np.cosh(a[0])
    else:
        s[0], c[0] = np.sin(a[0]), np.cos(a[0])
    sign = 1.0 if hyperbolic else -1.0
    for k in range(1, x.order + 1):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * a[j] * c[k - j]
            acc_c = acc_c + j * a[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = sign * acc_c / k
    return Taylor(s), Taylor(c)


def sin(x):
    return _sincos(x, False)[0] if isinstance(x, Taylor) else np.sin(x)


def cos(x):
    return _sincos(x, False)[1] if isinstance(x, Taylor) else np.cos(x)


def tan(x):
    if not isinstance(x, Taylor):
        return np.tan(x)
    s, c = _sincos(x, False)
    return s / c


def sinh(x):
    return _sincos(x, True)[0] if isinstance(x, Taylor) else np.sinh(x)


def cosh(x):
    return _sincos(x, True)[1] if isinstance(x, Taylor) else np.cosh(x)


def tanh(x):
    if not isinstance(x, Taylor):
        return np.tanh(x)
    s, c = _sincos(x, True)
    return s / c


def sqrt(x):
    if not isinstance(x, Taylor):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise EvalDomainError("sqrt of a negative number")
        return np.sqrt(x)
    a = x.c
    if np.any(a[0] < 0) or (x.order > 0 and np.any(a[0] == 0)):
        raise EvalDomainError("sqrt of a non-positive number")
    r = np.zeros_like(a)
    r[0] = np.sqrt(a[0])
    for k in range(1, x.order + 1):
        acc = a[k] * 1.0
        for j in range(1, k):
            acc = acc - r[j] * r[k - j]
        r[k] = acc / (2.0 * r[0])
    return Taylor(r)


def atan(x):
    if not isinstance(x, Taylor):
        return np.arctan(x)
    if x.order == 0:
        return Taylor(np.arctan(x.c))
    low = x.truncate(x.order - 1)
    return _integrate(np.arctan(x.c[0]), x.diff() / (1.0 + low * low))


def atanh(x):
    if not isinstance(x, Taylor):
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) >= 1):
            raise EvalDomainError("atanh outside (-1, 1)")
        return np.arctanh(x)
    if np.any(np.abs(x.c[0]) >= 1):
        raise EvalDomainError("atanh outside (-1, 1)")
    if x.order == 0:
        return Taylor(np.arctanh(x.c))
    low = x.truncate(x.order - 1)
    return _integrate(np.arctanh(x.c[0]), x.diff() / (1.0 - low * low))


def value_of(x):
    """Plain value of a Taylor object, or the argument itself."""
    return x.c[0] if isinstance(x, Taylor) else x


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "sinh": sinh,
    "cosh": cosh,
    "tanh": tanh,
    "exp": exp,
    "log": log,
    "atan": atan,
    "arctan": atan,
    "atanh": atanh,
    "arctanh": atanh,
    "sqrt": sqrt,
}
