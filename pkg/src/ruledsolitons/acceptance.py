"""Executable acceptance criteria, one function per criterion.

Each check returns a :class:`CheckResult`; ``run_all`` runs them in order.
Random inputs come from ``numpy.random.default_rng(seed)`` so every run is
reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import catalog as cat
from . import taylor as tl
from .classifier import CaseLabel, RuledSurfaceSpec, classify, coefficient_scale, patch_eps, t_polynomial_coeffs
from .curves import Curve, constant_curve, polynomial_curve
from .exprparse import parse_scalar
from .minkowski import boost_x, mink_dot, rot_z, triple
from .reaper import ReaperODE, convergence_order, integrate, lift_cylinder, node_grid_residual
from .surface import (
    SurfaceJet2,
    VelocityFit,
    fundamental_arrays,
    h1_numerator,
    first_form,
    max_residual,
    residual_eq1_masked,
    residual_eq2,
    surface_jet_from_closure,
)

SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    measured: str
    threshold: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] AC{self.number} {self.title}: {self.measured} (threshold {self.threshold})"


# -- 1 ---------------------------------------------------------------------------


def catalog_instances():
    """At least three parameter choices for each of the twelve concrete families."""
    exp_s = parse_scalar("exp(s)")
    cubic = parse_scalar("s^3 + s")
    mixed = parse_scalar("sinh(s) + 2*s")
    return {
        "Gr1Cosh": [cat.make_gr1("cosh", 0, 0, 0), cat.make_gr1("cosh", 0.3, 1, 2), cat.make_gr1("cosh", -0.5, -1, 1)],
        "Gr1Sinh": [cat.make_gr1("sinh", 0, 0, 0), cat.make_gr1("sinh", 0.2, 0.5, -1), cat.make_gr1("sinh", 1, 0, 3)],
        "Gr2Exp": [cat.make_gr2("exp", 1, 0, 0, 1), cat.make_gr2("exp", 2, 1, 0.5, -1), cat.make_gr2("exp", -2, 0, 0, 1)],
        "Gr2Arctanh": [
            cat.make_gr2("arctanh", 1, 0, 0, 1), cat.make_gr2("arctanh", 0.5, 0, 1, -1), cat.make_gr2("arctanh", 2, -1, 0, 1),
        ],
        "Gr3": [cat.make_gr3(0, 0, 0), cat.make_gr3(0, 0, 5), cat.make_gr3(0.3, -1, 2)],
        "NullScroll": [
            cat.make_null_scroll(exp_s, 2.0, label="exp(s)"),
            cat.make_null_scroll(cubic, 1.0, label="s^3 + s"),
            cat.make_null_scroll(mixed, -1.5, label="sinh(s) + 2*s"),
        ],
        "Thm4V0": [cat.make_thm4_v0(1, 0, 1), cat.make_thm4_v0(1, 0.5, -1), cat.make_thm4_v0(2, -1, 1)],
        "Thm4A0": [cat.make_thm4_a0(0, 0, 1), cat.make_thm4_a0(1, 0.5, 1, s_range=(2, 3)), cat.make_thm4_a0(0.5, 1, -1)],
        "Thm4A1": [cat.make_thm4_a1(0, -1, 1), cat.make_thm4_a1(1, 2, 0), cat.make_thm4_a1(0.3, 3, 0.2)],
        "Thm4A2": [cat.make_thm4_a2(0, 1, 0), cat.make_thm4_a2(0.5, -2, 1), cat.make_thm4_a2(-0.3, 0.5, 0)],
        "IntroX": [cat.intro_x(), cat.intro_x((1, 2), (1, 2)), cat.intro_x((0.2, 5), (0.75, 4))],
        "IntroY": [cat.intro_y(), cat.intro_y((-1, 1), (0, 1)), cat.intro_y((-5, 5), (-1.4, 3))],
    }


def check_catalog(limit=1e-8, time_limit=5.0) -> CheckResult:
    start = time.perf_counter()
    worst, where, count = 0.0, "", 0
    for name, fams in catalog_instances().items():
        for fam in fams:
            r, _ = max_residual(fam.surface, fam.velocity, (30, 30))
            count += 1
            if r > worst or not np.isfinite(r):
                worst, where = r, fam.label
    elapsed = time.perf_counter() - start
    ok = worst <= limit and elapsed < time_limit and count >= 36
    return CheckResult(
        1, "catalog soliton verification", ok,
        f"{count} instances, max |r1| = {worst:.2e} ({where}), {elapsed:.2f} s", f"{limit:g}, < {time_limit:g} s",
    )


# -- 2 ---------------------------------------------------------------------------


def _jet_gap(a: SurfaceJet2, b: SurfaceJet2) -> float:
    return max(float(np.max(np.abs(x - y))) for x, y in zip(a.vectors(), b.vectors()))


def check_intro_identification(limit=1e-12) -> CheckResult:
    x = cat.intro_x()
    a0 = cat.make_thm4_a0(0, 0, 1, s_range=x.s_range, t_range=x.t_range)
    y = cat.intro_y()
    a1 = cat.make_thm4_a1(0, -1, 1, s_range=y.s_range, t_range=y.t_range)
    gaps = []
    for p, q in ((x, a0), (y, a1)):
        S, T = p.surface.grid(40, 40)
        gaps.append(float(np.max(np.abs(p.surface.position(S, T) - q.surface.position(S, T)))))
        gaps.append(_jet_gap(p.surface.jet(S, T), q.surface.jet(S, T)))
    worst = max(gaps)
    return CheckResult(
        2, "intro examples = Thm4A0(0,0,1), Thm4A1(0,-1,1)", worst <= limit,
        f"max position/jet gap = {worst:.2e}", f"{limit:g}",
    )


# -- 3 ---------------------------------------------------------------------------


def random_closures(rng, count=5):
    """Smooth non-ruled surfaces with random coefficients."""
    out = []
    for _ in range(count):
        c = rng.uniform(-1, 1, size=8)

        def fn(s, t, c=c):
            x = s + c[0] * t * t + 0.3 * tl.sin(c[1] * s * t)
            y = t + c[2] * s * s * t + 0.2 * tl.cos(s + c[3] * t)
            z = c[4] * s * s + c[5] * t * t + c[6] * tl.exp(0.5 * s * t) + c[7] * s * t * t
            return x, y, z

        out.append(fn)
    return out


def check_residual_forms(n_points=1000, limit=1e-8, seed=SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    per = n_points // 5
    worst, total = 0.0, 0
    for fn in random_closures(rng):
        s, t = rng.uniform(-1, 1, size=(2, 4 * per))
        jet = surface_jet_from_closure(fn, s, t)
        v = rng.normal(size=3)
        r1, bad = residual_eq1_masked(jet, v)
        keep = np.flatnonzero(~bad)[:per]
        jet, r1 = jet[keep], r1[keep]
        r2 = residual_eq2(jet, v)
        W = first_form(jet)[3]
        lhs = -np.abs(W) ** 1.5 * r1
        scale = np.abs(h1_numerator(jet)) + np.abs(W * triple(jet.Ps, jet.Pt, v))
        worst = max(worst, float(np.max(np.abs(r2 - lhs) / scale)))
        total += keep.size
    ok = worst <= limit and total >= n_points
    return CheckResult(3, "first / second residual form equivalence", ok, f"{total} jets, max relative gap = {worst:.2e}", f"{limit:g}")


# -- 4 ---------------------------------------------------------------------------


def check_ode_closed_form(limit=1e-8, order_band=(3.8, 4.2)) -> CheckResult:
    eq32 = ReaperODE("Eq32", 0, 1, 0)
    sol = integrate(eq32, 0, 0, 0, 1.2)
    d32 = float(np.max(np.abs(sol.u + np.log(np.cos(sol.nodes)))))
    eq31 = ReaperODE("Eq31Spacelike", 0, 0, 1)
    sol = integrate(eq31, 0, 0, 0, 2)
    d31 = float(np.max(np.abs(sol.u + np.log(np.cosh(sol.nodes)))))
    steps = (40, 80, 160, 320)
    o32, _ = convergence_order(eq32, 0, 0, 0, 1.2, lambda s: -np.log(np.cos(s)), steps)
    o31, _ = convergence_order(eq31, 0, 0, 0, 2.0, lambda s: -np.log(np.cosh(s)), steps)
    orders = np.concatenate([o32, o31])
    ok = d32 <= limit and d31 <= limit and np.all((orders >= order_band[0]) & (orders <= order_band[1]))
    return CheckResult(
        4, "ODE vs closed form and RK4 order", bool(ok),
        f"dev(Eq32) = {d32:.2e}, dev(Eq31) = {d31:.2e}, orders {np.round(orders, 3).tolist()}",
        f"{limit:g}, order 4.0 +- 0.2",
    )


# -- 5 ---------------------------------------------------------------------------


def check_gr0(node_limit=1e-10, lift_limit=1e-6) -> CheckResult:
    ode = ReaperODE("Gr0Spacelike", 0.0)
    sol = integrate(ode, 0, 0, 0, 2)
    reached = sol.stop_reason == "completed" and np.isclose(sol.nodes[-1], 2.0)
    u2_0 = float(sol.u2[0])
    node_res = float(np.max(np.abs(sol.u2 - (1 - sol.up**2) * (1 - sol.up))))
    v = np.array([0.0, 1.0, 1.0])
    lift_nodes = node_grid_residual(sol)
    lift_grid, _ = max_residual(lift_cylinder(sol), v, (30, 30))
    lift = max(lift_nodes, lift_grid)
    ok = reached and abs(u2_0 - 1.0) <= 1e-15 and node_res <= node_limit and lift <= lift_limit
    return CheckResult(
        5, "gr0 numerics", bool(ok),
        f"reached s=2: {reached}, u''(0) = {u2_0:.15g}, node residual = {node_res:.2e}, lift residual = {lift:.2e}",
        f"{node_limit:g} / {lift_limit:g}",
    )


# -- 6 ---------------------------------------------------------------------------


def check_null_scroll(limit=1e-9, wrong_floor=1e-3) -> CheckResult:
    scrolls = catalog_instances()["NullScroll"]
    hk, res, wrong = 0.0, 0.0, np.inf
    for fam in scrolls:
        S, T = fam.surface.grid(30, 30)
        data, bad = fundamental_arrays(fam.surface.jet(S, T))
        hk = max(hk, float(np.max(np.abs(data.H[~bad]))), float(np.max(np.abs(data.K[~bad]))))
        for scale in (1.0, -2.0, 0.5):
            res = max(res, max_residual(fam.surface, scale * np.array([1.0, 0.0, 1.0]))[0])
        wrong = min(wrong, max_residual(fam.surface, (1.0, 0.0, 0.0))[0])
    ok = hk <= limit and res <= limit and wrong > wrong_floor
    return CheckResult(
        6, "null scroll H = K = 0 and velocity parallel to rulings", ok,
        f"max |H|,|K| = {hk:.2e}, max residual (v || w) = {res:.2e}, min max residual (v=(1,0,0)) = {wrong:.2e}",
        f"{limit:g}; wrong v > {wrong_floor:g}",
    )


# -- 7 ---------------------------------------------------------------------------


def random_ruled_spec(rng, degree=3):
    g = rng.uniform(-1, 1, size=(degree + 1, 3))
    w = rng.uniform(-1, 1, size=(3, 3))
    w[0] = rng.choice([-1, 1], size=3) * rng.uniform(1.0, 2.0, size=3)
    return RuledSurfaceSpec(polynomial_curve(g), polynomial_curve(w), (0.0, 1.0), (-0.5, 0.5), "random")


def random_thm4_spec(rng):
    """Base with <gamma', (1,s,s)> = 0 and director (1, s, s)."""
    y = np.polynomial.Polynomial(rng.uniform(-1, 1, size=4))
    z = np.polynomial.Polynomial(rng.uniform(-1, 1, size=4))
    xp = -np.polynomial.Polynomial([0, 1]) * (y.deriv() - z.deriv())
    x = xp.integ()
    coeffs = np.zeros((6, 3))
    for i, p in enumerate((x, y, z)):
        coeffs[: p.coef.size, i] = p.coef
    return RuledSurfaceSpec(polynomial_curve(coeffs), cat.THM4_DIRECTOR, (0.2, 1.2), (-0.3, 0.3), "thm4-shaped")


def b2_closed_form(spec, v, s, eps):
    g = spec.gamma.jet(s, 1)
    w = spec.director.jet(s, 1)
    return -2.0 * eps * mink_dot(g[1], w[1]) * triple(w[1], w[0], v)


def check_polynomial_structure(n_specs=10, limit_t4=1e-9, limit_b2=1e-8, seed=SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 7)
    s = np.linspace(0.05, 0.95, 7)
    worst4 = 0.0
    for _ in range(n_specs):
        spec = random_ruled_spec(rng)
        v = rng.normal(size=3)
        c = t_polynomial_coeffs(spec, v, s, degree=4)
        worst4 = max(worst4, float(np.max(np.abs(c[4]))) / coefficient_scale(spec, v, s))
    worst2 = 0.0
    s2 = np.linspace(0.25, 1.15, 7)
    for _ in range(n_specs):
        spec = random_thm4_spec(rng)
        v = rng.normal(size=3)
        eps = patch_eps(spec, s2)
        c = t_polynomial_coeffs(spec, v, s2, degree=4, eps=eps)
        gap = np.abs(c[2] - b2_closed_form(spec, v, s2, eps))
        worst2 = max(worst2, float(np.max(gap)) / coefficient_scale(spec, v, s2, eps))
    ok = worst4 <= limit_t4 and worst2 <= limit_b2
    return CheckResult(
        7, "polynomial structure in t", ok,
        f"max |t^4 coeff|/scale = {worst4:.2e}, max |B2 - closed form|/scale = {worst2:.2e}",
        f"{limit_t4:g} / {limit_b2:g}",
    )


# -- 8 ---------------------------------------------------------------------------

EXPECTED_CASE = {
    "Gr1Cosh": CaseLabel.THM1_SPACELIKE_CYLINDER,
    "Gr1Sinh": CaseLabel.THM1_SPACELIKE_CYLINDER,
    "Gr2Exp": CaseLabel.THM1_SPACELIKE_CYLINDER,
    "Gr2Arctanh": CaseLabel.THM1_SPACELIKE_CYLINDER,
    "Gr3": CaseLabel.THM1_TIMELIKE_CYLINDER,
    "NullScroll": CaseLabel.THM1_NULL_SCROLL,
    "Thm4V0": CaseLabel.THM4_CANDIDATE,
    "Thm4A0": CaseLabel.THM4_CANDIDATE,
    "Thm4A1": CaseLabel.THM4_CANDIDATE,
    "Thm4A2": CaseLabel.THM4_CANDIDATE,
    "IntroX": CaseLabel.THM4_CANDIDATE,
    "IntroY": CaseLabel.THM4_CANDIDATE,
}


def check_classifier(rtol=1e-6) -> CheckResult:
    failures = []
    gr3_null = []
    count = 0
    for name, fams in catalog_instances().items():
        for fam in fams:
            report = classify(RuledSurfaceSpec.from_family(fam))
            count += 1
            fit = VelocityFit(report.fitted_v, 0.0, report.nullspace_dim, report.nullspace, np.array([]), 0)
            if report.case_label is not EXPECTED_CASE[name]:
                failures.append(f"{fam.label}: {report.case_label.value}")
            elif not fit.agrees_with(fam.velocity, rtol):
                failures.append(f"{fam.label}: v = {np.round(report.fitted_v, 9).tolist()}")
            if name == "Gr3":
                gr3_null.append(report.nullspace_dim)
    ok = not failures and all(d == 1 for d in gr3_null)
    detail = f"{count} instances, {len(failures)} mismatches, Gr3 nullspace dims {gr3_null}"
    if failures:
        detail += "; " + "; ".join(failures[:3])
    return CheckResult(8, "classifier on the catalog", ok, detail, f"velocity rtol {rtol:g}")


# -- 9 ---------------------------------------------------------------------------


def random_lightlike_spec(rng):
    """Non-cylindrical ruled surface whose rulings are lightlike everywhere."""
    a = rng.uniform(-1, 1, size=3)
    a[1] = rng.choice([-1, 1]) * rng.uniform(0.5, 2.0)
    phi, theta = rng.uniform(-0.8, 0.8), rng.uniform(0, 2 * np.pi)
    M = boost_x(phi) @ rot_z(theta)
    scale = rng.uniform(0.5, 2.0)

    def director(s):
        ang = a[0] + a[1] * s + a[2] * s * s
        base = (tl.cos(ang), tl.sin(ang), 1.0 + 0.0 * s)
        f = scale * (1.0 + 0.3 * s * s)
        return tuple(f * sum(M[i, j] * base[j] for j in range(3)) for i in range(3))

    g = rng.uniform(-1, 1, size=(4, 3))
    g[1] += np.array([0.0, 0.0, 2.0])
    return RuledSurfaceSpec(polynomial_curve(g), Curve(director, "lightlike"), (0.0, 1.0), (-0.5, 0.5), "lightlike")


def check_thm2_refuter(n_specs=10, seed=SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 11)
    bad, weakest = [], np.inf
    for k in range(n_specs):
        report = classify(random_lightlike_spec(rng))
        violated = report.violated()
        if report.case_label is not CaseLabel.THM2_EXCLUDED or not violated:
            bad.append(k)
            continue
        weakest = min(weakest, max(e.value for e in violated))
    ok = not bad
    return CheckResult(
        9, "lightlike-director refuter", ok,
        f"{n_specs - len(bad)}/{n_specs} excluded with a violated condition, smallest violation {weakest:.2e}",
        "all excluded",
    )


# -- 10 ---------------------------------------------------------------------------


def random_jets(rng, n):
    """Random second-order jets, rejecting degenerate ones."""
    vecs = rng.normal(size=(6, 3 * n, 3))
    jet = SurfaceJet2(*vecs)
    _, bad = fundamental_arrays(jet)
    W = first_form(jet)[3]
    good = np.flatnonzero(~bad & (np.abs(W) > 1e-2))[:n]
    return jet[good]


def _r1(jet, v):
    r, _ = residual_eq1_masked(jet, v)
    return r


def check_equivariance(n=200, limit=1e-9, seed=SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 13)
    jet = random_jets(rng, n)
    v = rng.normal(size=(jet.P.shape[0], 3))
    data, _ = fundamental_arrays(jet)
    scale = np.abs(2 * data.H) + np.abs(mink_dot(data.N, v))
    base = _r1(jet, v)

    lam = rng.uniform(0.2, 5.0, size=base.shape)
    dil = np.abs(_r1(jet.scaled(lam[:, None]), v / lam[:, None]) - base / lam) * lam / scale

    iso = np.zeros_like(base)
    for k in range(base.size):
        M = boost_x(rng.uniform(-1.5, 1.5)) @ rot_z(rng.uniform(0, 2 * np.pi))
        iso[k] = abs(_r1(jet[k].mapped(M), M @ v[k]) - base[k]) / scale[k]

    swap = np.abs(_r1(jet.swapped(), v) + base) / scale
    worst = {"dilation": float(dil.max()), "isometry": float(iso.max()), "swap": float(swap.max())}
    ok = all(x <= limit for x in worst.values()) and base.size >= n
    return CheckResult(
        10, "equivariance (dilation, boost/rotation, s<->t)", ok,
        f"{base.size} jets each; " + ", ".join(f"{k} {x:.2e}" for k, x in worst.items()), f"{limit:g} x scale",
    )


CHECKS = [
    check_catalog,
    check_intro_identification,
    check_residual_forms,
    check_ode_closed_form,
    check_gr0,
    check_null_scroll,
    check_polynomial_structure,
    check_classifier,
    check_thm2_refuter,
    check_equivariance,
]


def run_all():
    return [check() for check in CHECKS]
