import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ruledsolitons import catalog as cat
from ruledsolitons import taylor as tl
from ruledsolitons.acceptance import catalog_instances
from ruledsolitons.errors import DegenerateBase, DomainViolation, EpsMismatch
from ruledsolitons.minkowski import boost_x, mink_dot, rot_z, triple
from ruledsolitons.surface import fundamental_arrays, max_residual
from ruledsolitons.taylor import Taylor

THM4 = ("Thm4V0", "Thm4A0", "Thm4A1", "Thm4A2", "IntroX", "IntroY")
ALL = [f for fams in catalog_instances().values() for f in fams]
THM4_FAMS = [f for name in THM4 for f in catalog_instances()[name]]


@pytest.mark.parametrize("fam", ALL, ids=lambda f: f.label)
def test_every_family_is_a_soliton(fam):
    r, report = max_residual(fam.surface, fam.velocity, (30, 30))
    assert r <= 1e-8
    assert report.n_points > 0


def test_cylinder_examples():
    gr3_profile = lambda s: -tl.log(tl.cos(s))
    fam = cat.make_cylinder(gr3_profile, cat.RulingCase.TIMELIKE, (0, 1, 0), s_range=(-1.2, 1.2))
    assert max_residual(fam.surface, fam.velocity)[0] <= 1e-9
    fam = cat.make_cylinder(lambda s: -tl.log(tl.cosh(s)), cat.RulingCase.SPACELIKE, (0, 0, 1))
    assert max_residual(fam.surface, fam.velocity)[0] <= 1e-9
    fam = cat.make_cylinder(lambda s: s * s, cat.RulingCase.TIMELIKE, (0, 1, 0))
    assert max_residual(fam.surface, fam.velocity)[0] > 1e-3


def profile_jet(fam, s):
    return fam.profile(Taylor.variable(np.asarray(s, float), 2)).derivatives()


@pytest.mark.parametrize(
    "fam",
    [cat.make_gr1("cosh", 0.3, 1, 0), cat.make_gr2("exp", 1, 0, 0, 1), cat.make_gr2("exp", 0.5, 0, 0, -1),
     cat.make_gr2("arctanh", 1, 0, 0, 1), cat.make_gr2("exp", -2, 0, 0, 1)],
    ids=lambda f: f.label,
)
def test_gr_profiles_solve_spacelike_ruling_ode(fam):
    s = np.linspace(*fam.s_range, 41)[1:-1]
    u, up, u2 = profile_jet(fam, s)
    v2, v3 = fam.velocity[1], fam.velocity[2]
    regime = np.sign(1 - up**2)
    assert np.all(regime == regime[0])
    assert np.allclose(u2, regime * (1 - up**2) * (v2 * up - v3), atol=1e-10)


def test_gr1_sinh_is_in_the_timelike_regime():
    fam = cat.make_gr1("sinh", 0, 0, 0, s_range=(0.5, 2))
    _, up, _ = profile_jet(fam, np.linspace(0.5, 2, 30))
    assert np.all(1 - up**2 < 0)


def test_gr2_exp_derivative_identity():
    fam = cat.make_gr2("exp", 1, 0, 0, 1)
    s = np.linspace(-1, 1, 21)
    _, up, u2 = profile_jet(fam, s)
    assert np.allclose(up, np.exp(s) / np.sqrt(np.exp(2 * s) + 1))
    assert np.allclose(u2, up * (1 - up**2))


def test_gr3_profile():
    fam = cat.make_gr3(0.2, 1, 0)
    _, up, u2 = profile_jet(fam, np.linspace(-1, 1, 21))
    assert np.allclose(u2, 1 + up**2, atol=1e-10)


def test_domain_violations():
    with pytest.raises(DomainViolation):
        cat.make_gr1("sinh", 0, 0, 0, s_range=(-1, 1))
    with pytest.raises(DomainViolation):
        cat.make_gr2("arctanh", 1, 0, 0, 1, s_range=(-1, 0.5))
    with pytest.raises(DomainViolation):
        cat.make_gr3(0, 0, 0, s_range=(-2, 2))
    with pytest.raises(DomainViolation):
        cat.make_thm4_a2(0, 1, 0, s_range=(-1.5, 0.5))
    with pytest.raises(DegenerateBase):
        cat.make_null_scroll(lambda s: s * s, 1.0)


def test_eps_mismatch():
    gamma = cat.thm4_a0_curve(0, 0, 1)
    with pytest.raises(EpsMismatch):
        cat._thm4_family(cat.FamilyId.THM4_A0, {}, gamma, np.array([1.0, 0, 0]), -1, (0.5, 2), (1, 3))


def test_intro_x_value():
    fam = cat.intro_x()
    # x = log 1 + t = 1 at (s, t) = (1, 1)
    assert np.allclose(fam.surface.position(1.0, 1.0), (1, 1.5, 0.5))
    assert np.allclose(fam.velocity, (1, 0, 0))


@pytest.mark.parametrize("fam", THM4_FAMS, ids=lambda f: f.label)
def test_thm4_proof_identities(fam):
    s = np.linspace(*fam.s_range, 25)
    g = fam.gamma.jet(s, 2)
    w = fam.director.jet(s, 2)
    v = fam.velocity
    eps = fam.eps
    Q = mink_dot(g[1], w[1])
    R = mink_dot(g[1], g[1])
    gv = mink_dot(g[1], v)
    scale = 1 + np.abs(R) * np.linalg.norm(g[2], axis=-1)
    assert np.all(np.abs(mink_dot(g[1], w[0])) <= 1e-10 * scale)
    assert np.all(np.abs(triple(g[1], w[0], g[2]) + eps * R * gv) <= 1e-8 * scale)
    assert np.all(np.abs(mink_dot(g[2], w[1]) + 2 * eps * Q * gv) <= 1e-8 * scale)
    assert abs(mink_dot(w[1][0], v)) <= 1e-12
    assert abs(mink_dot(v, (0, 1, 1))) <= 1e-12


@pytest.mark.parametrize("fam", THM4_FAMS, ids=lambda f: f.label)
def test_thm4_eps_matches_normal(fam):
    S, T = fam.surface.grid(15, 15)
    data, bad = fundamental_arrays(fam.surface.jet(S, T))
    assert not bad.any()
    assert np.all(data.eps == fam.eps)


def test_a2_phi_log_identity():
    phi = np.linspace(-0.9, 0.9, 11)
    assert np.allclose(np.arctanh(phi), 0.5 * np.log((1 + phi) / (1 - phi)))


@settings(max_examples=25, deadline=None)
@given(
    st.floats(-1.5, 1.5), st.floats(0, 2 * np.pi), st.floats(0.3, 3.0),
    st.sampled_from(["Gr1Cosh", "Gr3", "Thm4A1", "IntroX", "NullScroll"]),
)
def test_isometries_and_dilations_preserve_solitons(phi, theta, lam, name):
    fam = catalog_instances()[name][0]
    M = boost_x(phi) @ rot_z(theta)
    assert max_residual(fam.surface.mapped(M), M @ fam.velocity, (10, 10))[0] <= 1e-7 * np.cosh(phi) ** 3
    assert max_residual(fam.surface.scaled(lam), fam.velocity / lam, (10, 10))[0] <= 1e-8 / lam


def test_registry():
    assert len(cat.REGISTRY) == 13
    assert cat.family_id("gr3") is cat.FamilyId.GR3
    fam = cat.build_family("Thm4A1", v2="0.5", a="2", b="0")
    assert fam.params["v2"] == 0.5
    with pytest.raises(KeyError):
        cat.build_family("Gr3", nonsense=1)
    with pytest.raises(KeyError):
        cat.family_id("Gr9")
    generic = cat.build_family("GenericCylinder")
    assert max_residual(generic.surface, generic.velocity)[0] <= 1e-9
