"""Space curves given by closures, evaluated to any derivative order.

A curve closure maps a parameter ``s`` (float, array or :class:`Taylor`) to a
3-tuple of components built from the functions in :mod:`ruledsolitons.taylor`.
Derived curves (normalized directors, striction curves) override
:meth:`Curve.taylor` and ask their inputs for one extra order.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import taylor as tl
from .errors import EvalDomainError
from .taylor import Taylor


def _as_taylor(x, order: int, shape) -> Taylor:
    if isinstance(x, Taylor):
        if x.c.shape[1:] != tuple(shape):
            x = Taylor(np.broadcast_to(x.c, (x.c.shape[0],) + tuple(shape)).copy())
        return x
    return Taylor.constant(np.broadcast_to(np.asarray(x, dtype=float), shape), order, shape)


class Curve:
    """A parametrized curve ``s -> (x(s), y(s), z(s))``."""

    def __init__(self, fn: Callable, label: str = "curve"):
        self.fn = fn
        self.label = label

    def __repr__(self):
        return f"Curve({self.label})"

    def taylor(self, s, order: int) -> list[Taylor]:
        s = np.asarray(s, dtype=float)
        var = Taylor.variable(s, order)
        try:
            comps = self.fn(var)
        except EvalDomainError as exc:
            raise EvalDomainError(str(exc).split(" at s=")[0], s=_locate_bad(self.fn, s)) from None
        return [_as_taylor(c, order, s.shape) for c in comps]

    def jet(self, s, order: int = 2) -> np.ndarray:
        """Derivatives ``[C, C', C'', ...]`` with shape ``(order+1, *s.shape, 3)``."""
        comps = self.taylor(s, order)
        return np.stack([c.derivatives() for c in comps], axis=-1)

    def __call__(self, s) -> np.ndarray:
        return self.jet(s, 0)[0]


def _locate_bad(fn, s):
    """First sample of ``s`` at which the closure leaves its real domain."""
    for x in np.ravel(s):
        try:
            fn(Taylor.variable(np.asarray(x), 1))
        except EvalDomainError:
            return float(x)
    return None


def constant_curve(vec, label: str | None = None) -> Curve:
    v = tuple(float(c) for c in vec)
    return Curve(lambda s: v, label or f"const{v}")


class NormalizedCurve(Curve):
    """``w / sqrt(|<w,w>|)`` for a nowhere-lightlike curve ``w``."""

    def __init__(self, base: Curve):
        super().__init__(None, f"normalized({base.label})")
        self.base = base

    def taylor(self, s, order: int) -> list[Taylor]:
        w = self.base.taylor(s, order)
        q = w[0] * w[0] + w[1] * w[1] - w[2] * w[2]
        sign = np.sign(q.value)
        scale = tl.sqrt(q * sign)
        return [c / scale for c in w]


def mdot_taylor(a: list[Taylor], b: list[Taylor]) -> Taylor:
    return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]


class StrictionCurve(Curve):
    """``gamma - (<gamma', w'> / <w', w'>) w`` for a director with non-null w'."""

    def __init__(self, gamma: Curve, director: Curve):
        super().__init__(None, f"striction({gamma.label})")
        self.gamma = gamma
        self.director = director

    def taylor(self, s, order: int) -> list[Taylor]:
        g = self.gamma.taylor(s, order + 1)
        w = self.director.taylor(s, order + 1)
        gp = [c.diff() for c in g]
        wp = [c.diff() for c in w]
        lam = mdot_taylor(gp, wp) / mdot_taylor(wp, wp)
        return [g[i].truncate(order) - lam * w[i].truncate(order) for i in range(3)]


def polynomial_curve(coeffs, label: str | None = None) -> Curve:
    """Curve with components ``sum_k coeffs[k, i] s^k`` (Horner evaluation)."""
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 2 or c.shape[1] != 3:
        raise ValueError("coefficients must have shape (degree + 1, 3)")

    def fn(s):
        out = []
        for i in range(3):
            acc = c[-1, i]
            for k in range(c.shape[0] - 2, -1, -1):
                acc = acc * s + c[k, i]
            out.append(acc)
        return tuple(out)

    return Curve(fn, label or f"poly(deg={c.shape[0] - 1})")
