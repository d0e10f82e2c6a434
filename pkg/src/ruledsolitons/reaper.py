"""Profile ODEs of cylindrical translating solitons and their lifts to surfaces.

Spacelike rulings ``w = (1,0,0)`` with base ``(0, s, u(s))``::

    u'' =  (1 - u'^2)(v2 u' - v3)     where 1 - u'^2 > 0
    u'' = -(1 - u'^2)(v2 u' - v3)     where 1 - u'^2 < 0

Timelike rulings ``w = (0,0,1)`` with base ``(s, u(s), 0)``::

    u'' = (1 + u'^2)(v2 - v1 u')

The lightlike-velocity case ``v = (v1, 1, 1)`` of the spacelike rulings is
stored in the printed normalization ``u'' = +-(1 - u'^2)(1 - u')``.  In the
base ``(0, s, u)`` that equation belongs to ``v = (v1, -1, -1)``; the lift
therefore uses the mirrored base ``(0, -s, -u)``, on which the same profile
is a soliton for ``(v1, 1, 1)``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import IncompatiblePair, OutOfRange, RegimeViolationAtStart, StepUnderflow
from .surface import ParametricSurface, SurfaceJet2

BLOWUP_SLOPE = 1e6
MIN_STEP = 1e-12
REGIME_BAND = 1e-9
DEFAULT_TOL = 1e-10


class OdeId(enum.Enum):
    EQ31_SPACELIKE = "Eq31Spacelike"
    EQ31_TIMELIKE = "Eq31Timelike"
    EQ32 = "Eq32"
    GR0_SPACELIKE = "Gr0Spacelike"
    GR0_TIMELIKE = "Gr0Timelike"


# +1: needs 1 - u'^2 > 0, -1: needs 1 - u'^2 < 0, 0: no restriction
_REGIME = {
    OdeId.EQ31_SPACELIKE: 1,
    OdeId.EQ31_TIMELIKE: -1,
    OdeId.EQ32: 0,
    OdeId.GR0_SPACELIKE: 1,
    OdeId.GR0_TIMELIKE: -1,
}


@dataclass(frozen=True)
class ReaperODE:
    id: OdeId
    v1: float = 0.0
    v2: float = 0.0
    v3: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "id", OdeId(self.id))

    @property
    def regime(self) -> int:
        return _REGIME[self.id]

    @property
    def ruling(self) -> str:
        return "timelike" if self.id is OdeId.EQ32 else "spacelike"

    @property
    def mirrored(self) -> bool:
        return self.id in (OdeId.GR0_SPACELIKE, OdeId.GR0_TIMELIKE)

    @property
    def velocity(self) -> np.ndarray:
        """The velocity for which the lifted cylinder is a soliton."""
        if self.mirrored:
            return np.array([self.v1, 1.0, 1.0])
        return np.array([self.v1, self.v2, self.v3])

    def rhs(self, s, u, up):
        q = 1.0 - up * up
        if self.id is OdeId.EQ31_SPACELIKE:
            return q * (self.v2 * up - self.v3)
        if self.id is OdeId.EQ31_TIMELIKE:
            return -q * (self.v2 * up - self.v3)
        if self.id is OdeId.EQ32:
            return (1.0 + up * up) * (self.v2 - self.v1 * up)
        if self.id is OdeId.GR0_SPACELIKE:
            return q * (1.0 - up)
        return -q * (1.0 - up)

    def in_regime(self, up) -> bool:
        if self.regime == 0:
            return True
        return self.regime * (1.0 - up * up) > 0


@dataclass(frozen=True)
class ProfileSolution:
    ode: ReaperODE
    nodes: np.ndarray
    u: np.ndarray
    up: np.ndarray
    u2: np.ndarray
    regime_exit: float | None = None
    stop_reason: str = "completed"
    tol: float = DEFAULT_TOL
    notes: tuple[str, ...] = field(default=())

    @property
    def s_span(self):
        return float(self.nodes[0]), float(self.nodes[-1])

    def ode_residual(self) -> np.ndarray:
        return self.u2 - self.ode.rhs(self.nodes, self.u, self.up)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            write_csv(self, fh)


def write_csv(sol: ProfileSolution, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["s", "u", "u_prime", "u_second"])
    for row in zip(sol.nodes, sol.u, sol.up, sol.u2):
        w.writerow(["%.17g" % x for x in row])


def _rk4_step(ode: ReaperODE, s, y, h):
    def f(s, y):
        return np.array([y[1], ode.rhs(s, y[0], y[1])])

    k1 = f(s, y)
    k2 = f(s + h / 2, y + h / 2 * k1)
    k3 = f(s + h / 2, y + h / 2 * k2)
    k4 = f(s + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _check_start(ode, up0, tol):
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not ode.in_regime(up0):
        need = "1 - u'^2 > 0" if ode.regime > 0 else "1 - u'^2 < 0"
        raise RegimeViolationAtStart(f"{ode.id.value} needs {need}; got u'(s0) = {up0}")


def _leaves_regime(ode, up) -> bool:
    if ode.regime == 0:
        return False
    return ode.regime * (1.0 - up * up) <= REGIME_BAND


def _finish(ode, nodes, ys, regime_exit, reason, tol, notes=()):
    nodes = np.asarray(nodes, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if nodes.size > 1 and nodes[-1] < nodes[0]:
        nodes, ys = nodes[::-1], ys[::-1]
    u, up = ys[:, 0].copy(), ys[:, 1].copy()
    u2 = ode.rhs(nodes, u, up)
    return ProfileSolution(ode, nodes, u, up, u2, regime_exit, reason, tol, tuple(notes))


def integrate(ode: ReaperODE, s0, u0, up0, s_end, tol=DEFAULT_TOL, h0=None, on_blowup="stop", max_steps=1_000_000):
    """Classical RK4 with step-halving (Richardson) error control.

    A step of size h is compared with two steps of size h/2; the two half
    steps are accepted when ``|y_half - y_full| / 15 <= tol * |h|``.  The
    solution stops early with ``regime_exit`` set when ``1 - u'^2`` would
    reach zero, and on blow-up (``|u'| > 1e6`` or a step below 1e-12);
    ``on_blowup="raise"`` turns the latter into :class:`StepUnderflow`.
    """
    _check_start(ode, up0, tol)
    length = s_end - s0
    if length == 0:
        return _finish(ode, [s0], [[u0, up0]], None, "completed", tol)
    direction = math.copysign(1.0, length)
    h = direction * (h0 if h0 else min(abs(length), 0.01))
    s, y = float(s0), np.array([u0, up0], dtype=float)
    nodes, ys = [s], [y.copy()]
    regime_exit, reason = None, "completed"
    near_edge = False
    for _ in range(max_steps):
        if direction * (s_end - s) <= 0:
            break
        if direction * (s + h - s_end) > 0:
            h = s_end - s
        full = _rk4_step(ode, s, y, h)
        mid = _rk4_step(ode, s, y, h / 2)
        half = _rk4_step(ode, s + h / 2, mid, h / 2)
        err = float(np.max(np.abs(half - full))) / 15.0
        bad = not np.all(np.isfinite(half)) or _leaves_regime(ode, mid[1]) or _leaves_regime(ode, half[1])
        # the floor keeps round-off from rejecting steps near a regime boundary
        allowed = max(tol * abs(h), 64 * np.finfo(float).eps * float(np.max(np.abs(half))))
        if not bad and err <= allowed:
            s += h
            y = half
            nodes.append(s)
            ys.append(y.copy())
            if abs(y[1]) > BLOWUP_SLOPE:
                reason = "blowup"
                break
            grow = 2.0 if err == 0 else min(2.0, 0.9 * (tol * abs(h) / err) ** 0.25)
            h *= 1.0 if near_edge else max(grow, 0.5)
        else:
            if bad and ode.regime != 0 and ode.regime * (1.0 - y[1] ** 2) <= 10 * REGIME_BAND:
                regime_exit, reason = s, "regime_exit"
                break
            near_edge = near_edge or bad
            h /= 2
        if abs(h) < MIN_STEP:
            if bad and ode.regime != 0 and np.all(np.isfinite(half)):
                regime_exit, reason = s, "regime_exit"
            else:
                reason = "step_underflow"
            break
    else:
        reason = "max_steps"
    if reason in ("blowup", "step_underflow") and on_blowup == "raise":
        raise StepUnderflow(f"{ode.id.value}: integration stopped ({reason}) at s = {s:.12g}")
    return _finish(ode, nodes, ys, regime_exit, reason, tol)


def integrate_fixed(ode: ReaperODE, s0, u0, up0, s_end, n_steps: int) -> ProfileSolution:
    """Plain RK4 with ``n_steps`` equal steps (for order-of-accuracy studies)."""
    _check_start(ode, up0, 1.0)
    h = (s_end - s0) / n_steps
    y = np.array([u0, up0], dtype=float)
    nodes, ys = [s0], [y.copy()]
    for k in range(n_steps):
        y = _rk4_step(ode, s0 + k * h, y, h)
        nodes.append(s0 + (k + 1) * h)
        ys.append(y.copy())
    return _finish(ode, nodes, ys, None, "completed", 0.0, ("fixed-step",))


def convergence_order(ode: ReaperODE, s0, u0, up0, s_end, exact, n_steps=(20, 40, 80, 160)):
    """Observed orders ``log2(err_h / err_{h/2})`` of fixed-step RK4 at ``s_end``."""
    errs = []
    for n in n_steps:
        sol = integrate_fixed(ode, s0, u0, up0, s_end, n)
        errs.append(abs(sol.u[-1] - exact(s_end)) if s_end > s0 else abs(sol.u[0] - exact(s_end)))
    errs = np.asarray(errs)
    return np.log2(errs[:-1] / errs[1:]), errs


# -- lifting -------------------------------------------------------------------


def _profile_interpolant(sol: ProfileSolution):
    if sol.nodes.size < 2:
        raise OutOfRange("a profile solution needs at least two nodes to be lifted")
    return CubicHermiteSpline(sol.nodes, sol.u, sol.up)


def lift_cylinder(sol: ProfileSolution, s_range=None, t_range=(-1.0, 1.0), exact_second=True) -> ParametricSurface:
    """Cylinder over the profile with Hermite-interpolated ``u, u'``.

    With ``exact_second`` (the default) ``u''`` is the ODE right-hand side at
    the interpolated ``(s, u, u')``; otherwise it is linearly interpolated from
    the stored node values, which lets tests plant a broken second derivative.
    """
    lo, hi = sol.s_span
    s_range = tuple(s_range) if s_range is not None else (lo, hi)
    if s_range[0] < lo - 1e-12 or s_range[1] > hi + 1e-12:
        raise OutOfRange(f"requested s in {s_range} but the solution covers [{lo:.12g}, {hi:.12g}]")
    spline = _profile_interpolant(sol)
    dspline = spline.derivative()
    ode = sol.ode

    def profile(s):
        if np.any(s < lo - 1e-12) or np.any(s > hi + 1e-12):
            raise OutOfRange(f"s outside the solution range [{lo:.12g}, {hi:.12g}]")
        u, up = spline(s), dspline(s)
        u2 = ode.rhs(s, u, up) if exact_second else np.interp(s, sol.nodes, sol.u2)
        return u, up, u2

    def jet_fn(s, t):
        u, up, u2 = profile(s)
        z, o = np.zeros_like(s), np.ones_like(s)
        if ode.ruling == "timelike":
            P = np.stack([s, u, t], -1)
            Ps = np.stack([o, up, z], -1)
            Pt = np.stack([z, z, o], -1)
            Pss = np.stack([z, u2, z], -1)
        else:
            sg = -1.0 if ode.mirrored else 1.0
            P = np.stack([t, sg * s, sg * u], -1)
            Ps = np.stack([z, sg * o, sg * up], -1)
            Pt = np.stack([o, z, z], -1)
            Pss = np.stack([z, z, sg * u2], -1)
        zero = np.zeros_like(P)
        return SurfaceJet2(P, Ps, Pt, Pss, zero, zero)

    return ParametricSurface(s_range, tuple(t_range), jet_fn, "hermite", f"lift({ode.id.value})")


def node_grid_residual(sol: ProfileSolution, t_values=(-0.5, 0.0, 0.5)):
    """Max ``|2H - <N,v>|`` of the lift at every node and the given t values."""
    from .surface import residual_eq1

    surf = lift_cylinder(sol)
    S, T = np.meshgrid(sol.nodes, np.asarray(t_values, dtype=float), indexing="ij")
    return float(np.max(np.abs(residual_eq1(surf.jet(S, T), sol.ode.velocity))))


# -- closed-form comparison -------------------------------------------------------


def _family_profile_kind(family):
    from .catalog import FamilyId

    fid = family.family_id
    if fid is FamilyId.GR3:
        return OdeId.EQ32, np.array([0.0, 1.0, family.params["v3"]])
    if fid in (FamilyId.GR1_COSH, FamilyId.GR2_EXP):
        if fid is FamilyId.GR2_EXP and family.params["a"] < 0:
            return OdeId.EQ31_TIMELIKE, family.velocity
        return OdeId.EQ31_SPACELIKE, family.velocity
    if fid in (FamilyId.GR1_SINH, FamilyId.GR2_ARCTANH):
        return OdeId.EQ31_TIMELIKE, family.velocity
    if fid is FamilyId.GENERIC_CYLINDER:
        return (OdeId.EQ32 if family.ruling.value == "timelike" else None), family.velocity
    return None, None


def compare_closed_form(sol: ProfileSolution, family) -> float:
    """Max ``|u_numeric - u_closed|`` over the nodes."""
    kind, velocity = _family_profile_kind(family)
    if kind is None or family.profile is None:
        raise IncompatiblePair(f"{family.family_id.value} has no cylinder profile")
    ode = sol.ode
    if kind is OdeId.EQ32:
        ok = ode.id is OdeId.EQ32 and np.isclose(ode.v1, velocity[0]) and np.isclose(ode.v2, velocity[1])
    else:
        ok = ode.id is kind and np.allclose([ode.v2, ode.v3], velocity[1:])
    if not ok:
        raise IncompatiblePair(
            f"{ode.id.value} with v=({ode.v1}, {ode.v2}, {ode.v3}) does not describe {family.label}"
        )
    lo, hi = family.s_range
    if sol.nodes[0] < lo - 1e-12 or sol.nodes[-1] > hi + 1e-12:
        raise IncompatiblePair(f"solution range {sol.s_span} leaves the family domain {family.s_range}")
    closed = np.asarray(family.profile(sol.nodes), dtype=float)
    return float(np.max(np.abs(sol.u - closed)))


def closed_form_initial_data(family, s0):
    """``(u(s0), u'(s0))`` of a catalog cylinder, for matching a numeric solution."""
    from .taylor import Taylor

    series = family.profile(Taylor.variable(np.asarray(float(s0)), 1))
    return float(series.derivative(0)), float(series.derivative(1))
