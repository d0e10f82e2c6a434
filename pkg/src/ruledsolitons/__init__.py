"""Ruled translating solitons in Minkowski 3-space.

Residual kernel, closed-form catalog, profile-ODE integrator and a
classifier for ruled surfaces ``gamma(s) + t w(s)``.
"""

from .catalog import (
    FamilyId,
    SolitonFamily,
    build_family,
    intro_examples,
    make_cylinder,
    make_gr1,
    make_gr2,
    make_gr3,
    make_null_scroll,
    make_thm4_a0,
    make_thm4_a1,
    make_thm4_a2,
    make_thm4_v0,
)
from .classifier import (
    CaseLabel,
    ClassificationReport,
    RuledInvariants,
    RuledSurfaceSpec,
    classify,
    planarity_test,
    ruled_invariants,
    striction_reparametrize,
    t_polynomial_coeffs,
)
from .curves import Curve, constant_curve, polynomial_curve
from .errors import *  # noqa: F401,F403
from .exprparse import parse_curve, parse_scalar, parse_surface_expr
from .minkowski import (
    CausalCharacter,
    boost_x,
    causal_character,
    mink_cross,
    mink_dot,
    mvec,
    normalize,
    rot_z,
    triple,
)
from .reaper import (
    OdeId,
    ProfileSolution,
    ReaperODE,
    compare_closed_form,
    integrate,
    lift_cylinder,
)
from .surface import (
    FundamentalData,
    ParametricSurface,
    SurfaceJet2,
    VelocityFit,
    fd_jet,
    fundamental_data,
    max_residual,
    residual_eq1,
    residual_eq2,
    ruled_surface,
    solve_velocity,
    surface_from_closure,
)

__version__ = "0.1.0"
