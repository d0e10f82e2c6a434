import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ruledsolitons import catalog as cat
from ruledsolitons.errors import IncompatiblePair, OutOfRange, RegimeViolationAtStart, StepUnderflow
from ruledsolitons.reaper import (
    OdeId,
    ReaperODE,
    closed_form_initial_data,
    compare_closed_form,
    integrate,
    integrate_fixed,
    lift_cylinder,
    node_grid_residual,
    write_csv,
)
from ruledsolitons.surface import max_residual


def test_eq32_value_at_one():
    sol = integrate(ReaperODE("Eq32", 0, 1, 0), 0, 0, 0, 1)
    assert sol.stop_reason == "completed"
    assert abs(sol.u[-1] + np.log(np.cos(1.0))) <= 1e-8
    assert abs(sol.u[-1] - 0.6156265) <= 1e-7  # rounded reference value


@pytest.mark.parametrize(
    "family, s0",
    [
        (cat.make_gr1("cosh", 0, 0, 0), 0.0),
        (cat.make_gr1("cosh", 0.3, 1, 0.5), 0.2),
        (cat.make_gr1("sinh", 0, 0, 0, s_range=(0.5, 2)), 1.0),
        (cat.make_gr2("exp", 1, 0, 0, 1), 0.0),
        (cat.make_gr2("exp", 1, 0, 0, -1), 0.0),
        (cat.make_gr2("arctanh", 1, 0, 0, 1), -1.0),
        (cat.make_gr3(0.1, 0, 2), 0.0),
    ],
    ids=lambda x: getattr(x, "label", str(x)),
)
def test_matches_closed_forms_in_both_directions(family, s0):
    kind = {"Gr3": "Eq32"}.get(family.family_id.value)
    if kind is None:
        kind = "Eq31Timelike" if family.family_id.value in ("Gr1Sinh", "Gr2Arctanh") else "Eq31Spacelike"
    v = family.velocity
    ode = ReaperODE(kind, *v)
    u0, up0 = closed_form_initial_data(family, s0)
    lo, hi = family.s_range
    for end in (hi - 1e-3, lo + 1e-3):
        if abs(end - s0) < 1e-2:
            continue
        sol = integrate(ode, s0, u0, up0, end)
        assert compare_closed_form(sol, family) <= 1e-8


def test_incompatible_pairs():
    sol = integrate(ReaperODE("Eq32", 0, 1, 0), 0, 0, 0, 1)
    with pytest.raises(IncompatiblePair):
        compare_closed_form(sol, cat.make_gr1("cosh"))
    with pytest.raises(IncompatiblePair):
        compare_closed_form(sol, cat.intro_x())


def test_regime_checks():
    with pytest.raises(RegimeViolationAtStart):
        integrate(ReaperODE("Eq31Spacelike", 0, 0, 1), 0, 0, 2.0, 1)
    with pytest.raises(RegimeViolationAtStart):
        integrate(ReaperODE("Eq31Timelike", 0, 0, 1), 0, 0, 0.5, 1)
    sol = integrate(ReaperODE("Eq31Spacelike", 0, 1, 0), 0, 0, 0.999, 20)
    assert sol.regime_exit
    assert sol.nodes[-1] < 20
    assert np.all(1 - sol.up**2 > 0)


def test_blowup():
    ode = ReaperODE("Eq32", 0, 1, 0)
    sol = integrate(ode, 0, 0, 0, 2)
    assert sol.stop_reason != "completed"
    assert abs(sol.nodes[-1] - np.pi / 2) < 1e-2
    with pytest.raises(StepUnderflow):
        integrate(ode, 0, 0, 0, 2, on_blowup="raise")


def test_tolerance_refinement():
    ode = ReaperODE("Eq31Spacelike", 0, 0, 1)
    exact = lambda s: -np.log(np.cosh(s))
    errs = []
    for n in (25, 50, 100):
        sol = integrate_fixed(ode, 0, 0, 0, 2, n)
        errs.append(abs(sol.u[-1] - exact(2.0)))
    # halving h divides the error by about 16
    assert 12 < errs[0] / errs[1] < 20
    assert 12 < errs[1] / errs[2] < 20


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(-2, 2), st.floats(-1, 1), st.floats(-1, 1))
def test_node_residual_is_tiny(up0, v1, v2, v3):
    ode = ReaperODE("Eq31Spacelike", v1, v2, v3)
    sol = integrate(ode, 0, 0, up0, 1)
    assert np.max(np.abs(sol.ode_residual())) <= 1e-10


def test_gr0_spacelike():
    ode = ReaperODE(OdeId.GR0_SPACELIKE, 0.0)
    assert ode.mirrored
    assert np.allclose(ode.velocity, (0, 1, 1))
    sol = integrate(ode, 0, 0, 0, 2)
    assert sol.stop_reason == "completed"
    assert sol.u2[0] == 1.0
    surf = lift_cylinder(sol)
    assert max_residual(surf, ode.velocity)[0] <= 1e-6
    assert node_grid_residual(sol) <= 1e-6
    assert max_residual(surf, (0, -1, -1))[0] > 1e-3


def test_gr0_timelike():
    ode = ReaperODE("Gr0Timelike", 0.0)
    sol = integrate(ode, 0, 0, 2, 2)
    assert np.all(1 - sol.up**2 < 0)
    assert max_residual(lift_cylinder(sol), ode.velocity)[0] <= 1e-6


def test_lift_with_wrong_profile_fails():
    sol = integrate(ReaperODE("Eq32", 0, 1, 0), 0, 0, 0, 1)
    lifted = lift_cylinder(sol)
    assert max_residual(lifted, (0, 1, 0))[0] <= 1e-6
    assert max_residual(lifted, (0, 2, 0))[0] > 1e-3
    with pytest.raises(OutOfRange):
        lift_cylinder(sol, s_range=(0, 2))


def test_interpolated_second_derivative_is_close():
    sol = integrate(ReaperODE("Eq32", 0, 1, 0), 0, 0, 0, 1)
    lifted = lift_cylinder(sol, exact_second=False)
    # linear interpolation of stored u'' is only second order between nodes
    assert max_residual(lifted, (0, 1, 0))[0] <= 1e-3


def test_csv_output():
    sol = integrate(ReaperODE("Eq32", 0, 1, 0), 0, 0, 0, 0.5)
    buf = io.StringIO()
    write_csv(sol, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "s,u,u_prime,u_second"
    data = np.loadtxt(io.StringIO(buf.getvalue()), delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 0], sol.nodes)
    assert np.array_equal(data[:, 1], sol.u)


@pytest.mark.parametrize("up0", [-0.9, -0.3, 0.0, 0.5, 0.9])
def test_gr0_spacelike_is_convex_below_slope_one(up0):
    sol = integrate(ReaperODE("Gr0Spacelike", 0.0), 0, 0, up0, 2)
    below = sol.up < 1
    assert below.all()
    assert np.all(sol.u2[below] > 0)
