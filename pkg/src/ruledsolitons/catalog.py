"""Closed-form ruled translating solitons, each packaged with its velocity and domain.

Integration constants that amount to ambient translations are omitted; only
the constants ``a`` and ``b`` that change the shape are exposed.  Apply
translations externally if needed.

Cylinders use the parametrization order ``(0, s, u) + t (1,0,0)`` for
spacelike rulings and ``(s, u, 0) + t (0,0,1)`` for timelike rulings; the
profile ODEs in :mod:`ruledsolitons.reaper` assume exactly this order.

The non-cylindrical families have director ``w(s) = (1, s, s)`` and base
``gamma = (x, z + Phi, z)``.  They are solitons only on the side of the
degenerate line ``EG - F^2 = 0`` where ``<N,N>`` equals the constructor's
``eps``; when no t-range is given, one on the correct side is chosen.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import taylor as tl
from .curves import Curve, constant_curve
from .errors import DegenerateBase, DomainViolation, EpsMismatch
from .minkowski import mink_dot, mvec
from .surface import ParametricSurface, fundamental_arrays, ruled_surface


class FamilyId(enum.Enum):
    GR1_COSH = "Gr1Cosh"
    GR1_SINH = "Gr1Sinh"
    GR2_EXP = "Gr2Exp"
    GR2_ARCTANH = "Gr2Arctanh"
    GR3 = "Gr3"
    NULL_SCROLL = "NullScroll"
    THM4_V0 = "Thm4V0"
    THM4_A0 = "Thm4A0"
    THM4_A1 = "Thm4A1"
    THM4_A2 = "Thm4A2"
    INTRO_X = "IntroX"
    INTRO_Y = "IntroY"
    GENERIC_CYLINDER = "GenericCylinder"


class RulingCase(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"


SPACELIKE_RULING = (1.0, 0.0, 0.0)
TIMELIKE_RULING = (0.0, 0.0, 1.0)
LIGHTLIKE_RULING = (1.0, 0.0, 1.0)
THM4_DIRECTOR = Curve(lambda s: (1.0, s, s), "(1, s, s)")


@dataclass(frozen=True)
class SolitonFamily:
    family_id: FamilyId
    params: dict
    velocity: np.ndarray
    surface: ParametricSurface
    gamma: Curve
    director: Curve
    eps: int | None = None
    profile: Callable | None = field(default=None, compare=False)
    ruling: RulingCase | None = None

    @property
    def s_range(self):
        return self.surface.s_range

    @property
    def t_range(self):
        return self.surface.t_range

    @property
    def label(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.params.items() if not callable(v))
        return f"{self.family_id.value}({args})"


# -- helpers -----------------------------------------------------------------


def _samples(s_range, n=101):
    return np.linspace(s_range[0], s_range[1], n)


def _check_profile_domain(profile, s_range, what: str):
    s = _samples(s_range)
    try:
        vals = np.asarray(profile(s), dtype=float)
    except Exception as exc:  # domain errors from the elementary functions
        raise DomainViolation(f"{what}: {exc}") from None
    if not np.all(np.isfinite(vals)):
        raise DomainViolation(f"{what}: profile not finite on s in {tuple(s_range)}")


def _cylinder_curves(profile, ruling: RulingCase):
    if ruling is RulingCase.SPACELIKE:
        return Curve(lambda s: (0.0, s, profile(s)), "(0, s, u)"), constant_curve(SPACELIKE_RULING)
    return Curve(lambda s: (s, profile(s), 0.0), "(s, u, 0)"), constant_curve(TIMELIKE_RULING)


def _cylinder_family(fid, params, profile, ruling, v, s_range, t_range):
    _check_profile_domain(profile, s_range, fid.value)
    gamma, director = _cylinder_curves(profile, ruling)
    surface = ruled_surface(gamma, director, s_range, t_range, fid.value)
    return SolitonFamily(fid, params, mvec(v), surface, gamma, director, None, profile, ruling)


def auto_t_range(gamma: Curve, director: Curve, s_range, eps: int, margin=0.5, width=1.0):
    """A t-interval on which ``<N,N>`` has sign ``eps`` for every s in ``s_range``.

    Assumes the lightlike-derivative normalization ``<gamma', w> = 0``, ``<w, w> = 1`` and
    lightlike ``w'`` so that ``EG - F^2 = R + 2 t Q`` is linear in t.
    """
    s = _samples(s_range, 41)
    g, w = gamma.jet(s, 1), director.jet(s, 1)
    R = mink_dot(g[1], g[1])
    Q = mink_dot(g[1], w[1])
    if np.any(Q == 0) or len(set(np.sign(eps * Q))) != 1:
        raise DomainViolation("<gamma', w'> changes sign or vanishes on the s-range")
    t_star = -R / (2.0 * Q)
    if eps * Q[0] > 0:
        hi = float(t_star.min()) - margin
        return (hi - width, hi)
    lo = float(t_star.max()) + margin
    return (lo, lo + width)


def _check_eps(surface: ParametricSurface, eps: int, grid=(30, 30)):
    S, T = surface.grid(*grid)
    data, degenerate = fundamental_arrays(surface.jet(S, T))
    ok = ~degenerate
    if not np.any(ok):
        raise EpsMismatch(f"{surface.label}: every sample point is degenerate")
    bad = ok & (data.eps != eps)
    if np.any(bad):
        k = np.argwhere(bad)[0]
        raise EpsMismatch(
            f"{surface.label}: <N,N> = {-eps:+d} at s={S[tuple(k)]:.6g}, t={T[tuple(k)]:.6g}, expected {eps:+d}"
        )


def _thm4_family(fid, params, gamma, velocity, eps, s_range, t_range):
    if t_range is None:
        t_range = auto_t_range(gamma, THM4_DIRECTOR, s_range, eps)
    surface = ruled_surface(gamma, THM4_DIRECTOR, s_range, t_range, fid.value)
    _check_eps(surface, eps)
    return SolitonFamily(fid, params, mvec(velocity), surface, gamma, THM4_DIRECTOR, eps)


def _check_eps_arg(eps):
    if eps not in (1, -1):
        raise DomainViolation(f"eps must be +1 or -1, got {eps}")
    return int(eps)


# -- cylinders -----------------------------------------------------------------


def make_cylinder(profile, ruling_case, v, s_range=(-1.0, 1.0), t_range=(-1.0, 1.0)) -> SolitonFamily:
    """Cylinder over an arbitrary profile; a soliton iff the profile solves its ODE."""
    ruling = RulingCase(ruling_case)
    params = {"ruling": ruling.value, "v": tuple(float(c) for c in v)}
    return _cylinder_family(FamilyId.GENERIC_CYLINDER, params, profile, ruling, v, s_range, t_range)


def make_gr1(branch: str, a: float = 0.0, b: float = 0.0, v1: float = 0.0, s_range=None, t_range=(-1.0, 1.0)):
    """Spacelike rulings, velocity (v1, 0, 1)."""
    if branch == "cosh":
        profile = lambda s: -tl.log(tl.cosh(s + a)) + b
        fid = FamilyId.GR1_COSH
        s_range = s_range or (-1.0 - a, 1.0 - a)
    elif branch == "sinh":
        profile = lambda s: tl.log(tl.sinh(s + a)) + b
        fid = FamilyId.GR1_SINH
        s_range = s_range or (0.5 - a, 2.0 - a)
        if s_range[0] + a <= 0:
            raise DomainViolation(f"Gr1Sinh needs s + a > 0 on the domain, got s >= {s_range[0]}")
    else:
        raise ValueError(f"unknown gr1 branch {branch!r}")
    params = {"a": a, "b": b, "v1": v1}
    return _cylinder_family(fid, params, profile, RulingCase.SPACELIKE, (v1, 0.0, 1.0), s_range, t_range)


def make_gr2(branch: str, a: float = 1.0, b: float = 0.0, v1: float = 0.0, sign: int = 1, s_range=None, t_range=(-1.0, 1.0)):
    """Spacelike rulings, velocity (v1, 1, 0).

    For the exp branch with ``a < 0`` the profile has ``u'^2 > 1`` (timelike
    surface) and the same profile is a soliton for velocity ``(v1, -1, 0)``
    instead; that velocity is recorded.
    """
    if sign not in (1, -1):
        raise DomainViolation("sign must be +1 or -1")
    if branch == "exp":
        if a == 0:
            raise DomainViolation("Gr2Exp needs a != 0")
        if s_range is None:
            s_range = (-1.0, 1.0) if a > 0 else (0.5 * math.log(-a) + 0.25, 0.5 * math.log(-a) + 1.25)
        if a < 0 and math.exp(2 * s_range[0]) + a <= 0:
            raise DomainViolation("Gr2Exp needs e^(2s) + a > 0 on the domain")
        profile = lambda s: sign * tl.log(tl.exp(s) + tl.sqrt(tl.exp(2 * s) + a)) + b
        fid = FamilyId.GR2_EXP
        velocity = (v1, 1.0 if a > 0 else -1.0, 0.0)
    elif branch == "arctanh":
        if a <= 0:
            raise DomainViolation("Gr2Arctanh needs a > 0")
        edge = -0.5 * math.log(a)
        s_range = s_range or (edge - 2.0, edge - 0.1)
        if a * math.exp(2 * s_range[1]) >= 1:
            raise DomainViolation(f"Gr2Arctanh needs a*e^(2s) < 1, i.e. s < {edge + 0.0:.6g}, on the domain")
        profile = lambda s: sign * tl.atanh(tl.sqrt(1 - a * tl.exp(2 * s))) + b
        fid = FamilyId.GR2_ARCTANH
        velocity = (v1, 1.0, 0.0)
    else:
        raise ValueError(f"unknown gr2 branch {branch!r}")
    params = {"a": a, "b": b, "v1": v1, "sign": sign}
    return _cylinder_family(fid, params, profile, RulingCase.SPACELIKE, velocity, s_range, t_range)


def make_gr3(a: float = 0.0, b: float = 0.0, v3: float = 0.0, s_range=None, t_range=(-1.0, 1.0)):
    """Timelike rulings, velocity (0, 1, v3): the Euclidean grim reaper profile."""
    s_range = s_range or (-1.4 - a, 1.4 - a)
    if math.cos(s_range[0] + a) <= 0 or math.cos(s_range[1] + a) <= 0 or s_range[1] - s_range[0] >= math.pi:
        raise DomainViolation("Gr3 needs cos(s + a) > 0 on the domain")
    profile = lambda s: -tl.log(tl.cos(s + a)) + b
    params = {"a": a, "b": b, "v3": v3}
    return _cylinder_family(FamilyId.GR3, params, profile, RulingCase.TIMELIKE, (0.0, 1.0, v3), s_range, t_range)


def make_null_scroll(profile, v_scale: float = 1.0, s_range=(-1.0, 1.0), t_range=(-1.0, 1.0), label="u"):
    """Cylinder with lightlike rulings (1,0,1) over ``gamma = (u, s, -u)``; velocity ``v_scale (1,0,1)``."""
    if v_scale == 0:
        raise DomainViolation("v_scale must be non-zero")
    _check_profile_domain(profile, s_range, "NullScroll")
    s = _samples(s_range)
    u = profile(tl.Taylor.variable(s, 1))
    du = np.broadcast_to(u.derivative(1) if isinstance(u, tl.Taylor) else 0.0, s.shape)
    if np.any(np.abs(du) <= 1e-12):
        k = int(np.argmin(np.abs(du)))
        raise DegenerateBase(f"u' vanishes at s={s[k]:.6g}; the null scroll is degenerate there")
    gamma = Curve(lambda s: (profile(s), s, -profile(s)), f"({label}, s, -{label})")
    director = constant_curve(LIGHTLIKE_RULING)
    surface = ruled_surface(gamma, director, s_range, t_range, "NullScroll")
    params = {"profile": label, "v_scale": v_scale}
    return SolitonFamily(
        FamilyId.NULL_SCROLL, params, v_scale * mvec(LIGHTLIKE_RULING), surface, gamma, director, None, profile
    )


# -- non-cylindrical families ----------------------------------------------------


def thm4_v0_curve(a, b, eps) -> Curve:
    def gamma(s):
        L = tl.log(2 * eps * s + a)
        phi = L / (2 * eps)
        x = a * L / 4 - s / (2 * eps)
        z = -(a * a + 4) * L / (16 * eps) + b * s - eps * s * s / 8
        return (x, z + phi, z)

    return Curve(gamma, f"v0(a={a}, b={b}, eps={eps})")


def make_thm4_v0(a: float = 1.0, b: float = 0.0, eps: int = 1, s_range=None, t_range=None):
    """Director (1, s, s), velocity (0, 1, 1)."""
    eps = _check_eps_arg(eps)
    if s_range is None:
        edge = -a / (2 * eps)
        s_range = (edge + 0.5, edge + 2.0) if eps > 0 else (edge - 2.0, edge - 0.5)
    if min(2 * eps * s_range[0] + a, 2 * eps * s_range[1] + a) <= 0:
        raise DomainViolation("Thm4V0 needs 2*eps*s + a > 0 on the domain")
    params = {"a": a, "b": b, "eps": eps}
    return _thm4_family(FamilyId.THM4_V0, params, thm4_v0_curve(a, b, eps), (0.0, 1.0, 1.0), eps, s_range, t_range)


def thm4_a0_curve(v2, b, eps) -> Curve:
    def gamma(s):
        d = s - v2
        L = tl.log(d)
        phi = 1 / (eps * d)
        x = (L - v2 / d) / eps
        z = (2 * v2 * L - (1 + v2 * v2) / d) / (2 * eps) + b * s
        return (x, z + phi, z)

    return Curve(gamma, f"a0(v2={v2}, b={b}, eps={eps})")


def make_thm4_a0(v2: float = 0.0, b: float = 0.0, eps: int = 1, s_range=None, t_range=None):
    """Director (1, s, s), velocity (1, v2, v2), integration constant a = 0."""
    eps = _check_eps_arg(eps)
    s_range = s_range or (v2 + 0.5, v2 + 2.0)
    if s_range[0] <= v2:
        raise DomainViolation(f"Thm4A0 needs s > v2 = {v2} on the domain")
    params = {"v2": v2, "b": b, "eps": eps}
    return _thm4_family(FamilyId.THM4_A0, params, thm4_a0_curve(v2, b, eps), (1.0, v2, v2), eps, s_range, t_range)


def thm4_a1_curve(v2, a, b) -> Curve:
    eps = 1 if a > 0 else -1
    p = math.sqrt(eps / a)

    def gamma(s):
        phi = p * (s - v2)
        at = tl.atan(phi)
        lg = tl.log(1 + phi * phi)
        Phi = -at / (a * p)
        x = lg / (2 * eps) + v2 * at / (a * p)
        # general-p form; reduces to the p = 1 expression of the intro example
        z = 0.5 * eps * (p * (1 - eps * a + v2 * v2) * at + v2 * lg) + b * s
        return (x, z + Phi, z)

    return Curve(gamma, f"a1(v2={v2}, a={a}, b={b})")


def make_thm4_a1(v2: float = 0.0, a: float = -1.0, b: float = 1.0, s_range=None, t_range=None):
    """Director (1, s, s), velocity (1, v2, v2), sgn(a) = sgn(eps)."""
    if a == 0:
        raise DomainViolation("Thm4A1 needs a != 0")
    eps = 1 if a > 0 else -1
    s_range = s_range or (v2 - 1.0, v2 + 1.0)
    params = {"v2": v2, "a": a, "b": b}
    return _thm4_family(FamilyId.THM4_A1, params, thm4_a1_curve(v2, a, b), (1.0, v2, v2), eps, s_range, t_range)


def thm4_a2_curve(v2, a, b) -> Curve:
    eps = -1 if a > 0 else 1
    p = math.sqrt(-eps / a)

    def gamma(s):
        phi = p * (s - v2)
        lratio = tl.log((1 + phi) / (1 - phi))
        l1m = tl.log(1 - phi * phi)
        Phi = -lratio / (2 * p * a)
        x = l1m / (2 * eps) + v2 * lratio / (2 * a * p)
        z = eps * v2 * l1m / 2 + (1 - a * eps + v2 * v2) * tl.atanh(phi) / (2 * a * p) + b * s
        return (x, z + Phi, z)

    return Curve(gamma, f"a2(v2={v2}, a={a}, b={b})")


def make_thm4_a2(v2: float = 0.0, a: float = 1.0, b: float = 0.0, s_range=None, t_range=None):
    """Director (1, s, s), velocity (1, v2, v2), sgn(a) = -sgn(eps), |p (s - v2)| < 1."""
    if a == 0:
        raise DomainViolation("Thm4A2 needs a != 0")
    eps = -1 if a > 0 else 1
    p = math.sqrt(-eps / a)
    s_range = s_range or (v2 - 0.9 / p, v2 + 0.9 / p)
    if max(abs(p * (s_range[0] - v2)), abs(p * (s_range[1] - v2))) >= 1:
        raise DomainViolation(f"Thm4A2 needs |p (s - v2)| < 1, i.e. |s - {v2}| < {1 / p:.6g}")
    params = {"v2": v2, "a": a, "b": b}
    return _thm4_family(FamilyId.THM4_A2, params, thm4_a2_curve(v2, a, b), (1.0, v2, v2), eps, s_range, t_range)


INTRO_X_CURVE = Curve(lambda s: (tl.log(s), 1 / (2 * s), -1 / (2 * s)), "(log s, 1/(2s), -1/(2s))")
INTRO_Y_CURVE = Curve(lambda s: (-0.5 * tl.log(1 + s * s), tl.atan(s) + s, s), "(-log(1+s^2)/2, atan s + s, s)")


def intro_x(s_range=(0.5, 2.0), t_range=(1.0, 3.0)) -> SolitonFamily:
    """The first non-cylindrical example, defined for s > 0, t > 1/2."""
    if s_range[0] <= 0 or t_range[0] <= 0.5:
        raise DomainViolation("IntroX is stated for s > 0 and t > 1/2")
    surface = ruled_surface(INTRO_X_CURVE, THM4_DIRECTOR, s_range, t_range, "IntroX")
    return SolitonFamily(FamilyId.INTRO_X, {}, mvec(1, 0, 0), surface, INTRO_X_CURVE, THM4_DIRECTOR, 1)


def intro_y(s_range=(-2.0, 2.0), t_range=(-1.0, 1.0)) -> SolitonFamily:
    """The second non-cylindrical example, defined for all s and t > -3/2."""
    if t_range[0] <= -1.5:
        raise DomainViolation("IntroY is stated for t > -3/2")
    surface = ruled_surface(INTRO_Y_CURVE, THM4_DIRECTOR, s_range, t_range, "IntroY")
    return SolitonFamily(FamilyId.INTRO_Y, {}, mvec(1, 0, 0), surface, INTRO_Y_CURVE, THM4_DIRECTOR, -1)


def intro_examples():
    return intro_x(), intro_y()


# -- registry ------------------------------------------------------------------


@dataclass(frozen=True)
class ParamSpec:
    name: str
    default: object
    kind: type = float
    doc: str = ""


@dataclass(frozen=True)
class FamilyEntry:
    family_id: FamilyId
    anchor: str
    params: tuple[ParamSpec, ...]
    builder: Callable
    summary: str


def _profile_param(default):
    return ParamSpec("profile", default, str, "profile u(s) as an expression in s")


def _build_null_scroll(profile="exp(s)", v_scale=1.0, **kw):
    from .exprparse import parse_scalar

    return make_null_scroll(parse_scalar(profile), v_scale, label=profile, **kw)


def _build_generic(profile="-log(cos(s))", ruling="timelike", v="0,1,0", **kw):
    from .exprparse import parse_scalar

    vec = tuple(float(c) for c in str(v).split(",")) if isinstance(v, str) else tuple(v)
    fam = make_cylinder(parse_scalar(profile), ruling, vec, **kw)
    fam.params["profile"] = profile
    return fam


REGISTRY: dict[FamilyId, FamilyEntry] = {
    e.family_id: e
    for e in [
        FamilyEntry(FamilyId.GR1_COSH, "spacelike-ruling grim reaper, cosh branch",
                    (ParamSpec("a", 0.0), ParamSpec("b", 0.0), ParamSpec("v1", 0.0)),
                    lambda **k: make_gr1("cosh", **k), "u = -log cosh(s+a) + b, w = (1,0,0), v = (v1,0,1)"),
        FamilyEntry(FamilyId.GR1_SINH, "spacelike-ruling grim reaper, sinh branch",
                    (ParamSpec("a", 0.0), ParamSpec("b", 0.0), ParamSpec("v1", 0.0)),
                    lambda **k: make_gr1("sinh", **k), "u = log sinh(s+a) + b, w = (1,0,0), v = (v1,0,1)"),
        FamilyEntry(FamilyId.GR2_EXP, "spacelike-ruling profile, exp branch",
                    (ParamSpec("a", 1.0), ParamSpec("b", 0.0), ParamSpec("v1", 0.0), ParamSpec("sign", 1, int)),
                    lambda **k: make_gr2("exp", **k), "u = +-log(e^s + sqrt(e^2s + a)) + b, w = (1,0,0), v = (v1,1,0)"),
        FamilyEntry(FamilyId.GR2_ARCTANH, "spacelike-ruling profile, arctanh branch",
                    (ParamSpec("a", 1.0), ParamSpec("b", 0.0), ParamSpec("v1", 0.0), ParamSpec("sign", 1, int)),
                    lambda **k: make_gr2("arctanh", **k), "u = +-arctanh sqrt(1 - a e^2s) + b, w = (1,0,0), v = (v1,1,0)"),
        FamilyEntry(FamilyId.GR3, "timelike-ruling grim reaper",
                    (ParamSpec("a", 0.0), ParamSpec("b", 0.0), ParamSpec("v3", 0.0)),
                    make_gr3, "u = -log cos(s+a) + b, w = (0,0,1), v = (0,1,v3)"),
        FamilyEntry(FamilyId.NULL_SCROLL, "null scroll, lightlike rulings and arbitrary base",
                    (_profile_param("exp(s)"), ParamSpec("v_scale", 1.0)),
                    _build_null_scroll, "gamma = (u, s, -u), w = (1,0,1), v = v_scale (1,0,1)"),
        FamilyEntry(FamilyId.THM4_V0, "lightlike director derivative, velocity (0,1,1)",
                    (ParamSpec("a", 1.0), ParamSpec("b", 0.0), ParamSpec("eps", 1, int)),
                    make_thm4_v0, "w = (1,s,s), v = (0,1,1)"),
        FamilyEntry(FamilyId.THM4_A0, "lightlike director derivative, case a = 0",
                    (ParamSpec("v2", 0.0), ParamSpec("b", 0.0), ParamSpec("eps", 1, int)),
                    make_thm4_a0, "w = (1,s,s), v = (1,v2,v2)"),
        FamilyEntry(FamilyId.THM4_A1, "lightlike director derivative, sgn(a) = sgn(eps)",
                    (ParamSpec("v2", 0.0), ParamSpec("a", -1.0), ParamSpec("b", 1.0)),
                    make_thm4_a1, "w = (1,s,s), v = (1,v2,v2)"),
        FamilyEntry(FamilyId.THM4_A2, "lightlike director derivative, sgn(a) = -sgn(eps)",
                    (ParamSpec("v2", 0.0), ParamSpec("a", 1.0), ParamSpec("b", 0.0)),
                    make_thm4_a2, "w = (1,s,s), v = (1,v2,v2)"),
        FamilyEntry(FamilyId.INTRO_X, "non-cylindrical example X, base (log s, 1/(2s), -1/(2s))", (), intro_x,
                    "(log s, 1/(2s), -1/(2s)) + t (1,s,s), v = (1,0,0)"),
        FamilyEntry(FamilyId.INTRO_Y, "non-cylindrical example Y, base (-log(1+s^2)/2, atan s + s, s)", (), intro_y,
                    "(-log(1+s^2)/2, atan s + s, s) + t (1,s,s), v = (1,0,0)"),
        FamilyEntry(FamilyId.GENERIC_CYLINDER, "cylinder over a profile, spacelike or timelike rulings",
                    (_profile_param("-log(cos(s))"), ParamSpec("ruling", "timelike", str),
                     ParamSpec("v", "0,1,0", str)),
                    _build_generic, "cylinder over a user profile; soliton iff the profile solves its cylinder ODE"),
    ]
}


def family_id(name: str) -> FamilyId:
    for fid in FamilyId:
        if fid.value.lower() == name.lower():
            return fid
    raise KeyError(f"unknown family {name!r}; known: {', '.join(f.value for f in FamilyId)}")


def build_family(name, s_range=None, t_range=None, **params) -> SolitonFamily:
    """Construct a registered family from string or typed parameters."""
    entry = REGISTRY[name if isinstance(name, FamilyId) else family_id(name)]
    known = {p.name: p for p in entry.params}
    kwargs = {}
    for key, value in params.items():
        if key not in known:
            raise KeyError(f"{entry.family_id.value} has no parameter {key!r}; expected {sorted(known)}")
        spec = known[key]
        kwargs[key] = spec.kind(float(value)) if spec.kind is int else spec.kind(value)
    if s_range is not None:
        kwargs["s_range"] = tuple(s_range)
    if t_range is not None:
        kwargs["t_range"] = tuple(t_range)
    return entry.builder(**kwargs)
