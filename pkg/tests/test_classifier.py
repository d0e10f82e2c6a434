import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ruledsolitons import catalog as cat
from ruledsolitons.acceptance import b2_closed_form, random_thm4_spec
from ruledsolitons.classifier import (
    CaseLabel,
    RuledSurfaceSpec,
    classify,
    coefficient_scale,
    patch_eps,
    planarity_test,
    ruled_invariants,
    striction_reparametrize,
    t_polynomial_coeffs,
)
from ruledsolitons.curves import Curve, polynomial_curve
from ruledsolitons.errors import DomainViolation, LightlikeDirectorDerivative
from ruledsolitons.exprparse import parse_curve
from ruledsolitons.minkowski import CausalCharacter, mink_cross, mink_dot


def spec(gamma, w, s_range=(-1, 1), t_range=(-1, 1)):
    return RuledSurfaceSpec(parse_curve(gamma), parse_curve(w), s_range, t_range, "test")


def test_thm4_director_cross_identity():
    s = np.linspace(-2, 2, 9)
    w = cat.THM4_DIRECTOR.jet(s, 1)
    assert np.allclose(mink_cross(w[0], w[1]), -w[1], atol=1e-10)


@pytest.mark.parametrize("fam", [cat.intro_x(), cat.intro_y()], ids=lambda f: f.label)
def test_intro_examples_fit_unit_velocity(fam):
    report = classify(RuledSurfaceSpec.from_family(fam))
    assert report.case_label is CaseLabel.THM4_CANDIDATE
    assert np.allclose(report.fitted_v, (1, 0, 0), atol=1e-8)
    assert report.residual_max <= 1e-8


def test_intro_x_from_text():
    report = classify(spec("(log(s), 1/(2*s), -1/(2*s))", "(1, s, s)", (0.5, 2), (1, 3)))
    assert report.case_label is CaseLabel.THM4_CANDIDATE
    assert np.allclose(report.fitted_v, (1, 0, 0), atol=1e-8)
    inv = report.invariants
    assert inv.delta is CausalCharacter.SPACELIKE
    assert inv.eta is CausalCharacter.LIGHTLIKE


def test_given_velocity_is_verified():
    fam = cat.intro_y()
    good = classify(RuledSurfaceSpec.from_family(fam), v=(1, 0, 0))
    assert good.case_label is CaseLabel.THM4_CANDIDATE
    bad = classify(RuledSurfaceSpec.from_family(fam), v=(0, 1, 0))
    assert bad.case_label is CaseLabel.NOT_A_SOLITON
    assert bad.violated()


def test_lightlike_non_cylindrical_is_excluded():
    report = classify(spec("(s, 0, 0)", "(cos(s), sin(s), 1)", (0.1, 1), (-0.5, 0.5)))
    assert report.case_label is CaseLabel.THM2_EXCLUDED
    assert report.violated()
    assert not report.is_soliton


def test_null_scroll_with_any_base():
    report = classify(spec("(s^3 + s, s, -s^3 - s)", "(1, 0, 1)"))
    assert report.case_label is CaseLabel.THM1_NULL_SCROLL
    assert report.nullspace_dim == 1
    assert np.allclose(np.abs(report.nullspace[0] @ np.array([1, 0, 1])) / np.sqrt(2), 1.0)


def test_planes():
    assert classify(spec("(0, s, 0)", "(1, 0, 0)")).case_label is CaseLabel.THM1_PLANE
    rotating = spec("(0, s, 0)", "(cos(s), sin(s), 0)", (0.1, 1), (0.2, 0.6))
    assert classify(rotating).case_label is CaseLabel.THM3_PLANE


def test_helicoid_must_be_cylindrical():
    report = classify(spec("(0, 0, s)", "(cos(s), sin(s), 0)", (0, 1), (0.2, 1)))
    assert report.case_label is CaseLabel.THM3_MUST_BE_CYLINDRICAL
    assert not report.is_soliton


def test_mixed_cylinder_is_not_a_soliton():
    report = classify(spec("(0, s, -log(cos(s)))", "(1, 0, 0)"))
    assert report.case_label is CaseLabel.NOT_A_SOLITON


def test_planarity():
    flat = planarity_test(spec("(s, 2*s, 0)", "(1, -1, 0)"))
    assert flat.planar
    assert np.allclose(flat.normal, (0, 0, 1))
    assert not planarity_test(RuledSurfaceSpec.from_family(cat.intro_x()))
    assert not planarity_test(RuledSurfaceSpec.from_family(cat.make_gr3()))


def test_invariants_are_scale_free():
    a = ruled_invariants(spec("(s, s*s, 0)", "(cos(s), sin(s), 0.2)"))
    b = ruled_invariants(spec("(s, s*s, 0)", "(3*exp(s)*cos(s), 3*exp(s)*sin(s), 0.6*exp(s))"))
    assert a.delta is b.delta is CausalCharacter.SPACELIKE
    assert a.eta is b.eta
    assert not a.cylindrical and not b.cylindrical
    # the direction test ignores rescaling of w by a positive function
    assert np.isclose(a.bending, b.bending, rtol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_striction_curve_is_orthogonal(seed):
    rng = np.random.default_rng(seed)
    g = rng.uniform(-1, 1, size=(3, 3))
    c = rng.uniform(0.5, 1.5)

    def w(s):
        from ruledsolitons import taylor as tl

        return (tl.cos(c * s), tl.sin(c * s), 0.3 + 0 * s)

    base = RuledSurfaceSpec(polynomial_curve(g), Curve(w), (0, 1), (-1, 1))
    out = striction_reparametrize(base)
    s = out.s_samples(21)
    beta = out.gamma.jet(s, 1)
    wn = out.director.jet(s, 1)
    assert np.allclose(mink_dot(wn[0], wn[0]), 1.0)
    assert np.max(np.abs(mink_dot(beta[1], wn[1]))) <= 1e-10


def test_striction_errors():
    with pytest.raises(DomainViolation):
        striction_reparametrize(spec("(s, 0, 0)", "(cos(s), sin(s), 1)"))
    with pytest.raises(DomainViolation):
        striction_reparametrize(spec("(s, 0, 0)", "(0, 1, 0)"))
    with pytest.raises(LightlikeDirectorDerivative):
        striction_reparametrize(spec("(s, 0, 0)", "(1, s, s)"))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_coefficients_do_not_depend_on_t_samples(seed):
    rng = np.random.default_rng(seed)
    sp = random_thm4_spec(rng)
    v = rng.normal(size=3)
    s = np.linspace(0.3, 1.1, 5)
    eps = patch_eps(sp, s)
    a = t_polynomial_coeffs(sp, v, s, eps=eps, t_range=(-0.3, 0.3))
    b = t_polynomial_coeffs(sp, v, s, eps=eps, t_range=(0.05, 0.2))
    scale = coefficient_scale(sp, v, s, eps)
    assert np.max(np.abs(a - b)) <= 1e-8 * scale
    assert np.max(np.abs(a[2] - b2_closed_form(sp, v, s, eps))) <= 1e-8 * scale
    assert np.max(np.abs(a[3])) <= 1e-9 * scale


def test_report_text_and_csv():
    report = classify(RuledSurfaceSpec.from_family(cat.intro_x()))
    text = report.to_text()
    assert text.startswith("case_label: Thm4-Candidate\n")
    assert "fitted_v: " in text
    csv_text = report.coefficients_csv()
    table = np.loadtxt(io.StringIO(csv_text), delimiter=",", skiprows=1)
    header = csv_text.splitlines()[0].split(",")
    assert header[0] == "s"
    assert table.shape[1] == len(header)
