import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ruledsolitons import taylor as tl
from ruledsolitons.errors import RankDeficient
from ruledsolitons.minkowski import mink_dot, triple
from ruledsolitons.surface import (
    fd_jet,
    first_form,
    fundamental_arrays,
    h1_numerator,
    max_residual,
    residual_eq1_masked,
    residual_eq2,
    solve_velocity,
    surface_from_closure,
    surface_jet_from_closure,
)
from ruledsolitons.catalog import make_gr1, make_gr3


def hyperbolic_plane(s, t):
    # x^2 + y^2 - z^2 = -1, spacelike
    return tl.sinh(s) * tl.cos(t), tl.sinh(s) * tl.sin(t), tl.cosh(s)


def lorentz_cylinder(s, t):
    # x^2 + y^2 = 1 times the time axis, timelike
    return tl.cos(s), tl.sin(s), t


def wavy(s, t):
    return s, t, 0.3 * tl.sin(s) * tl.cos(2 * t) + 0.1 * s * s * t


def test_hyperbolic_plane_is_totally_umbilic():
    S, T = np.meshgrid(np.linspace(0.3, 1.5, 7), np.linspace(0, 6, 7))
    data, bad = fundamental_arrays(surface_jet_from_closure(hyperbolic_plane, S, T))
    assert not bad.any()
    assert np.all(data.eps == -1)
    assert np.allclose(np.abs(data.H), 1.0)
    assert np.allclose(data.K, -1.0)  # extrinsic K = -1 gives intrinsic curvature -1


def test_timelike_cylinder():
    S, T = np.meshgrid(np.linspace(0, 6, 7), np.linspace(-1, 1, 5))
    data, _ = fundamental_arrays(surface_jet_from_closure(lorentz_cylinder, S, T))
    assert np.all(data.eps == 1)
    assert np.allclose(np.abs(data.H), 0.5)
    assert np.allclose(data.K, 0.0)


@settings(max_examples=40)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_taylor_jet_matches_finite_differences(s, t):
    exact = surface_jet_from_closure(wavy, s, t)
    pos = lambda a, b: np.stack(np.broadcast_arrays(*[np.asarray(c, float) for c in wavy(a, b)]), -1)
    approx = fd_jet(pos, s, t, h=1e-4)
    for a, b in zip(exact.vectors(), approx.vectors()):
        assert np.allclose(a, b, atol=1e-6)


@settings(max_examples=40)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_residual_forms_agree(s, t, a, b, c):
    jet = surface_jet_from_closure(wavy, np.array([s]), np.array([t]))
    v = np.array([a, b, c])
    r1, bad = residual_eq1_masked(jet, v)
    if bad.any():
        return
    W = first_form(jet)[3]
    r2 = residual_eq2(jet, v)
    scale = abs(h1_numerator(jet)) + abs(W * triple(jet.Ps, jet.Pt, v))
    assert np.all(np.abs(r2 + np.abs(W) ** 1.5 * r1) <= 1e-10 * (1 + scale))


def test_normal_sign_convention():
    jet = surface_jet_from_closure(wavy, np.array([0.2]), np.array([0.1]))
    data, _ = fundamental_arrays(jet)
    assert np.allclose(mink_dot(data.N, data.N), data.eps)
    assert np.allclose(mink_dot(data.N, jet.Ps), 0, atol=1e-14)
    assert np.allclose(mink_dot(data.N, jet.Pt), 0, atol=1e-14)


def test_max_residual_on_known_soliton():
    fam = make_gr1("cosh", 0.2, 0.5, 1.0)
    r, report = max_residual(fam.surface, fam.velocity)
    assert r <= 1e-10
    assert report.n_degenerate == 0
    # the ruling component of v is free, so only a transverse change is detected
    assert max_residual(fam.surface, fam.velocity + np.array([5.0, 0, 0]))[0] <= 1e-10
    assert max_residual(fam.surface, (0, 1, 0))[0] > 1e-3


def test_velocity_fit_and_nullspace():
    fam = make_gr3(0.1, 0.0, 2.0)
    with pytest.raises(RankDeficient) as info:
        solve_velocity(fam.surface)
    assert info.value.nullspace_dim == 1
    fit = solve_velocity(fam.surface, allow_rank_deficient=True)
    assert fit.nullspace_dim == 1
    assert fit.agrees_with(fam.velocity)
    assert not fit.agrees_with(fam.velocity + np.array([0, 1e-3, 0]))


def test_velocity_fit_with_constraint():
    fam = make_gr1("cosh", 0.0, 0.0, 0.0)
    fit = solve_velocity(fam.surface, constraint=(1, 0, 0))
    assert fit.nullspace_dim == 0
    assert np.allclose(fit.v, fam.velocity, atol=1e-8)
