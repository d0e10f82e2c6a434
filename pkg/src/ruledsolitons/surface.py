"""Second-order jets of parametric surfaces and the translating-soliton residuals.

Two residual forms are provided and kept on separate code paths so that each
can serve as a check on the other:

* ``residual_eq1``: ``2H - <N, v>`` built from the unit normal and the mean
  curvature formula.
* ``residual_eq2``: the cleared-denominator form ``H1 - eps (EG-F^2) (Xs,Xt,v)``
  with ``H1 = E (Xs,Xt,Xtt) - 2F (Xs,Xt,Xst) + G (Xs,Xt,Xss)``.

``H1`` is taken *without* the leading minus sign of the mean curvature
formula; with that choice ``r2 = -|EG-F^2|^(3/2) r1`` at every non-degenerate
point.

All functions broadcast over leading axes: a :class:`SurfaceJet2` may hold a
single point (vectors of shape ``(3,)``) or a whole grid (``(nS, nT, 3)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .curves import Curve
from .errors import AllPointsDegenerate, DegeneratePoint, EpsUnavailable, RankDeficient
from .minkowski import euclid_norm2, mink_cross, mink_dot, triple
from .taylor import Taylor

DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SurfaceJet2:
    P: np.ndarray
    Ps: np.ndarray
    Pt: np.ndarray
    Pss: np.ndarray
    Pst: np.ndarray
    Ptt: np.ndarray

    def vectors(self):
        return (self.P, self.Ps, self.Pt, self.Pss, self.Pst, self.Ptt)

    def scale(self) -> float:
        """Largest Euclidean norm among the derivative vectors (position excluded)."""
        return float(max(np.sqrt(np.max(euclid_norm2(v))) for v in self.vectors()[1:]))

    def swapped(self) -> "SurfaceJet2":
        """Jet of the surface X~(s, t) = X(t, s)."""
        return SurfaceJet2(self.P, self.Pt, self.Ps, self.Ptt, self.Pst, self.Pss)

    def mapped(self, matrix) -> "SurfaceJet2":
        m = np.asarray(matrix, dtype=float).T
        return SurfaceJet2(*(v @ m for v in self.vectors()))

    def scaled(self, lam: float) -> "SurfaceJet2":
        return SurfaceJet2(*(lam * v for v in self.vectors()))

    def __getitem__(self, idx) -> "SurfaceJet2":
        return SurfaceJet2(*(v[idx] for v in self.vectors()))


@dataclass(frozen=True)
class FundamentalData:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    W2: np.ndarray
    eps: np.ndarray
    N: np.ndarray
    H: np.ndarray
    K: np.ndarray


def _normal_parts(jet: SurfaceJet2, tol: float):
    n = mink_cross(jet.Ps, jet.Pt)
    nn = mink_dot(n, n)
    ref = euclid_norm2(jet.Ps) * euclid_norm2(jet.Pt)
    degenerate = np.abs(nn) <= tol * ref
    return n, nn, degenerate


def first_form(jet: SurfaceJet2):
    E = mink_dot(jet.Ps, jet.Ps)
    F = mink_dot(jet.Ps, jet.Pt)
    G = mink_dot(jet.Pt, jet.Pt)
    return E, F, G, E * G - F * F


def degenerate_mask(jet: SurfaceJet2, tol: float = DEGENERACY_TOL) -> np.ndarray:
    return _normal_parts(jet, tol)[2]


def fundamental_arrays(jet: SurfaceJet2, tol: float = DEGENERACY_TOL):
    """Fundamental data at every point plus the degeneracy mask.

    Degenerate points carry NaN in every field instead of raising.
    """
    n, nn, degenerate = _normal_parts(jet, tol)
    E, F, G, W2 = first_form(jet)
    with np.errstate(divide="ignore", invalid="ignore"):
        nabs = np.sqrt(np.abs(nn))
        N = n / nabs[..., None]
        eps = np.sign(nn)
        t_ss = triple(jet.Ps, jet.Pt, jet.Pss)
        t_st = triple(jet.Ps, jet.Pt, jet.Pst)
        t_tt = triple(jet.Ps, jet.Pt, jet.Ptt)
        absW = np.abs(W2)
        H = -0.5 * (E * t_tt - 2.0 * F * t_st + G * t_ss) / absW**1.5
        L, M, Nc = t_ss / nabs, t_st / nabs, t_tt / nabs
        K = eps * (L * Nc - M * M) / W2
    if np.any(degenerate):
        nan = np.where(degenerate, np.nan, 1.0)
        N = N * nan[..., None]
        E, F, G, W2, eps, H, K = (x * nan for x in (E, F, G, W2, eps, H, K))
    return FundamentalData(E, F, G, W2, eps, N, H, K), degenerate


def fundamental_data(jet: SurfaceJet2, tol: float = DEGENERACY_TOL) -> FundamentalData:
    data, degenerate = fundamental_arrays(jet, tol)
    if np.any(degenerate):
        raise DegeneratePoint("EG - F^2 vanishes (to tolerance) at the requested point")
    return data


def residual_eq1(jet: SurfaceJet2, v, tol: float = DEGENERACY_TOL):
    """``2H - <N, v>``; zero exactly where the soliton equation holds."""
    data = fundamental_data(jet, tol)
    return 2.0 * data.H - mink_dot(data.N, np.asarray(v, dtype=float))


def residual_eq1_masked(jet: SurfaceJet2, v, tol: float = DEGENERACY_TOL):
    data, degenerate = fundamental_arrays(jet, tol)
    return 2.0 * data.H - mink_dot(data.N, np.asarray(v, dtype=float)), degenerate


def h1_numerator(jet: SurfaceJet2):
    E, F, G, _ = first_form(jet)
    return (
        E * triple(jet.Ps, jet.Pt, jet.Ptt)
        - 2.0 * F * triple(jet.Ps, jet.Pt, jet.Pst)
        + G * triple(jet.Ps, jet.Pt, jet.Pss)
    )


def _fill_eps_along_rulings(eps: np.ndarray, degenerate: np.ndarray) -> np.ndarray:
    """Replace eps at degenerate points by the nearest valid value along the last axis."""
    if eps.ndim == 0:
        raise EpsUnavailable("eps undefined at a degenerate point; pass eps explicitly")
    out = eps.copy()
    flat_e = out.reshape(-1, out.shape[-1])
    flat_d = degenerate.reshape(-1, degenerate.shape[-1])
    idx = np.arange(flat_e.shape[1])
    for row_e, row_d in zip(flat_e, flat_d):
        if not row_d.any():
            continue
        good = np.flatnonzero(~row_d)
        if good.size == 0:
            raise EpsUnavailable("no non-degenerate point on this ruling to borrow eps from")
        nearest = good[np.abs(idx[:, None] - good[None, :]).argmin(axis=1)]
        row_e[row_d] = row_e[nearest[row_d]]
    return out


def residual_eq2(jet: SurfaceJet2, v, eps=None, tol: float = DEGENERACY_TOL):
    """``H1 - eps (EG-F^2) (Xs, Xt, v)``, polynomial in the jet entries."""
    _, F, G, W2 = first_form(jet)
    if eps is None:
        n, nn, degenerate = _normal_parts(jet, tol)
        eps = np.sign(nn)
        if np.any(degenerate):
            eps = _fill_eps_along_rulings(np.asarray(eps, dtype=float), degenerate)
    return h1_numerator(jet) - eps * W2 * triple(jet.Ps, jet.Pt, np.asarray(v, dtype=float))


# -- surfaces ------------------------------------------------------------------


@dataclass(frozen=True)
class ParametricSurface:
    """A surface patch with a rule for computing second-order jets."""

    s_range: tuple[float, float]
    t_range: tuple[float, float]
    jet_fn: Callable[[np.ndarray, np.ndarray], SurfaceJet2]
    provenance: str = "analytic"
    label: str = "surface"
    position_fn: Callable | None = field(default=None, compare=False)

    def jet(self, s, t) -> SurfaceJet2:
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        return self.jet_fn(s, t)

    def position(self, s, t) -> np.ndarray:
        if self.position_fn is not None:
            s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
            return self.position_fn(s, t)
        return self.jet(s, t).P

    def grid(self, n_s: int, n_t: int):
        """Cell-centred interior grid, shape ``(n_s, n_t)``."""
        return interior_grid(self.s_range, self.t_range, n_s, n_t)

    def mapped(self, matrix, label=None) -> "ParametricSurface":
        m = np.asarray(matrix, dtype=float)
        return ParametricSurface(
            self.s_range, self.t_range, lambda s, t: self.jet_fn(s, t).mapped(m),
            self.provenance, label or f"{self.label}@R",
        )

    def scaled(self, lam: float, label=None) -> "ParametricSurface":
        return ParametricSurface(
            self.s_range, self.t_range, lambda s, t: self.jet_fn(s, t).scaled(lam),
            self.provenance, label or f"{lam}*{self.label}",
        )


def interior_grid(s_range, t_range, n_s: int, n_t: int):
    s0, s1 = s_range
    t0, t1 = t_range
    ss = s0 + (np.arange(n_s) + 0.5) * (s1 - s0) / n_s
    ts = t0 + (np.arange(n_t) + 0.5) * (t1 - t0) / n_t
    return np.meshgrid(ss, ts, indexing="ij")


def surface_jet_from_closure(fn: Callable, s, t) -> SurfaceJet2:
    """Exact second-order jet of ``fn(s, t) -> (x, y, z)`` by Taylor arithmetic.

    Expands along the directions (1,0), (0,1) and (1,1); the mixed partial
    follows from ``D_(1,1)^2 = d_ss + 2 d_st + d_tt``.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)

    def expand(ds, dt):
        comps = fn(Taylor.variable(s, 2, ds), Taylor.variable(t, 2, dt))
        out = np.zeros((3,) + s.shape + (3,))
        for i, c in enumerate(comps):
            if isinstance(c, Taylor):
                out[..., i] = c.derivatives()
            else:
                out[0, ..., i] = c
        return out

    js = expand(1.0, 0.0)
    jt = expand(0.0, 1.0)
    jd = expand(1.0, 1.0)
    pst = 0.5 * (jd[2] - js[2] - jt[2])
    return SurfaceJet2(js[0], js[1], jt[1], js[2], pst, jt[2])


def surface_from_closure(fn, s_range, t_range, label="surface") -> ParametricSurface:
    def position(s, t):
        return np.stack(np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in fn(s, t)]), axis=-1)

    return ParametricSurface(
        tuple(s_range), tuple(t_range),
        lambda s, t: surface_jet_from_closure(fn, s, t),
        "taylor-jet", label, position,
    )


def ruled_jet(gamma_jet: np.ndarray, w_jet: np.ndarray, t) -> SurfaceJet2:
    """Jet of ``gamma(s) + t w(s)`` from curve jets of shape ``(3, ..., 3)``."""
    t = np.asarray(t, dtype=float)[..., None]
    g0, g1, g2 = gamma_jet[0], gamma_jet[1], gamma_jet[2]
    w0, w1, w2 = w_jet[0], w_jet[1], w_jet[2]
    zero = np.zeros(np.broadcast_shapes(w0.shape, t.shape))
    return SurfaceJet2(
        g0 + t * w0, g1 + t * w1, w0 + zero, g2 + t * w2, w1 + zero, zero
    )


def ruled_surface(gamma: Curve, director: Curve, s_range, t_range, label="ruled") -> ParametricSurface:
    def jet_fn(s, t):
        return ruled_jet(gamma.jet(s, 2), director.jet(s, 2), t)

    def position(s, t):
        return gamma(s) + np.asarray(t, dtype=float)[..., None] * director(s)

    return ParametricSurface(tuple(s_range), tuple(t_range), jet_fn, "analytic", label, position)


def fd_jet(position: Callable, s: float, t: float, h: float = 1e-4, mixed: str = "st") -> SurfaceJet2:
    """Central-difference jet of a position closure; a test oracle only.

    ``mixed`` selects the nesting order of the mixed partial: ``"st"``
    differentiates in t first and then in s, ``"ts"`` the other way round.
    """

    def X(a, b):
        return np.asarray(position(np.asarray(a, dtype=float), np.asarray(b, dtype=float)), dtype=float)

    P = X(s, t)
    xp, xm = X(s + h, t), X(s - h, t)
    yp, ym = X(s, t + h), X(s, t - h)
    Ps = (xp - xm) / (2 * h)
    Pt = (yp - ym) / (2 * h)
    Pss = (xp - 2 * P + xm) / h**2
    Ptt = (yp - 2 * P + ym) / h**2
    if mixed == "st":
        dt_plus = (X(s + h, t + h) - X(s + h, t - h)) / (2 * h)
        dt_minus = (X(s - h, t + h) - X(s - h, t - h)) / (2 * h)
        Pst = (dt_plus - dt_minus) / (2 * h)
    elif mixed == "ts":
        ds_plus = (X(s + h, t + h) - X(s - h, t + h)) / (2 * h)
        ds_minus = (X(s + h, t - h) - X(s - h, t - h)) / (2 * h)
        Pst = (ds_plus - ds_minus) / (2 * h)
    else:
        raise ValueError("mixed must be 'st' or 'ts'")
    return SurfaceJet2(P, Ps, Pt, Pss, Pst, Ptt)


# -- grid sweeps ------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    mean_abs: float
    worst_point: tuple[float, float]
    n_points: int
    n_degenerate: int

    def lines(self):
        return [
            f"max_residual: {self.max_abs:.6e}",
            f"mean_residual: {self.mean_abs:.6e}",
            f"worst_point: s={self.worst_point[0]:.12g} t={self.worst_point[1]:.12g}",
            f"points: {self.n_points}",
            f"degenerate_points: {self.n_degenerate}",
        ]


def max_residual(surface: ParametricSurface, v, grid=(30, 30), tol: float = DEGENERACY_TOL):
    n_s, n_t = grid
    if n_s < 2 or n_t < 2:
        raise ValueError("grid needs at least 2 x 2 points")
    S, T = surface.grid(n_s, n_t)
    r, degenerate = residual_eq1_masked(surface.jet(S, T), v, tol)
    ok = ~degenerate & np.isfinite(r)
    if not np.any(ok):
        raise AllPointsDegenerate(f"all {S.size} grid points of {surface.label} are degenerate")
    absr = np.where(ok, np.abs(r), -1.0)
    k = np.unravel_index(np.argmax(absr), absr.shape)
    report = ResidualReport(
        float(absr[k]), float(np.mean(np.abs(r[ok]))),
        (float(S[k]), float(T[k])), int(ok.sum()), int((~ok).sum()),
    )
    return report.max_abs, report


@dataclass(frozen=True)
class VelocityFit:
    v: np.ndarray
    fit_residual: float
    nullspace_dim: int
    nullspace: np.ndarray
    singular_values: np.ndarray
    n_points: int

    def agrees_with(self, v_true, rtol: float = 1e-6) -> bool:
        """True if ``v_true`` equals the fit modulo the undetermined directions."""
        v_true = np.asarray(v_true, dtype=float)
        scale = max(np.linalg.norm(v_true), np.linalg.norm(self.v), 1e-300)
        diff = v_true - self.v
        if self.nullspace_dim:
            Q = self.nullspace.T
            diff = diff - Q @ (Q.T @ diff)
        return bool(np.linalg.norm(diff) <= rtol * scale)


def velocity_system(jets: SurfaceJet2, tol: float = DEGENERACY_TOL):
    """Rows ``a`` and right-hand sides ``b`` with ``a . v = <N, v>`` and ``b = 2H``.

    This is the cleared-denominator system ``eps (EG-F^2) (Xs,Xt,v) = H1``
    divided row-wise by ``-|EG-F^2|^(3/2)``.
    """
    data, degenerate = fundamental_arrays(jets, tol)
    ok = ~degenerate
    N = data.N[ok]
    A = N * np.array([1.0, 1.0, -1.0])
    b = 2.0 * data.H[ok]
    return A, b


def solve_velocity(
    surface: ParametricSurface,
    grid=(12, 12),
    constraint=None,
    allow_rank_deficient: bool = False,
    rank_tol: float = 1e-9,
    tol: float = DEGENERACY_TOL,
) -> VelocityFit:
    """Least-squares velocity from the linear system implied by the soliton equation.

    ``constraint`` is an optional vector ``c``; the fit is then restricted to
    ``<c, v> = 0``.
    """
    S, T = surface.grid(*grid)
    A, b = velocity_system(surface.jet(S, T), tol)
    if A.shape[0] < 3:
        raise RankDeficient(f"only {A.shape[0]} non-degenerate points available")
    if constraint is not None:
        c = np.asarray(constraint, dtype=float) * np.array([1.0, 1.0, -1.0])
        _, _, vt = np.linalg.svd(c[None, :])
        Z = vt[1:].T
    else:
        Z = np.eye(3)
    B = A @ Z
    u, sv, vt = np.linalg.svd(B, full_matrices=False)
    rank = int(np.sum(sv > rank_tol * sv[0])) if sv[0] > 0 else 0
    coef = vt[:rank].T @ ((u[:, :rank].T @ b) / sv[:rank])
    v = Z @ coef
    null = (Z @ vt[rank:].T).T
    fit = VelocityFit(
        v=v,
        fit_residual=float(np.sqrt(np.mean((A @ v - b) ** 2))),
        nullspace_dim=Z.shape[1] - rank,
        nullspace=null,
        singular_values=sv,
        n_points=A.shape[0],
    )
    if fit.nullspace_dim and not allow_rank_deficient:
        raise RankDeficient(
            f"velocity determined only up to a {fit.nullspace_dim}-dimensional nullspace", fit
        )
    return fit
