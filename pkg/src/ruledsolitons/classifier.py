"""Classification of ruled surfaces ``X(s,t) = gamma(s) + t w(s)`` as translating solitons.

The decision tree only uses gauge-invariant quantities: causal characters of
the normalized director ``w / sqrt|<w,w>|`` and its derivative, whether the
director keeps a fixed direction, and whether the normalized director traces
a straight line.  The non-existence theorems enter as refuters.  Because the
residual is affine in ``v``, the least-squares velocity fit is the best any
velocity can do; a fit defect above tolerance is a certificate that no
velocity works.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve, NormalizedCurve, StrictionCurve
from .errors import (
    AllPointsDegenerate,
    DegenerateSampleSet,
    DomainViolation,
    InconclusiveSampling,
    LightlikeDirectorDerivative,
    RankDeficient,
)
from .minkowski import CausalCharacter, causal_character, euclid_norm2, mink_cross, mink_dot, triple
from .surface import (
    DEGENERACY_TOL,
    ParametricSurface,
    VelocityFit,
    degenerate_mask,
    max_residual,
    residual_eq2,
    ruled_jet,
    ruled_surface,
    solve_velocity,
)

CYLINDRICAL_TOL = 1e-9
STRAIGHTNESS_TOL = 1e-8
PLANARITY_TOL = 1e-8
SOLITON_TOL = 1e-7
N_SAMPLES = 101


class CaseLabel(enum.Enum):
    THM1_SPACELIKE_CYLINDER = "Thm1-SpacelikeCylinder"
    THM1_TIMELIKE_CYLINDER = "Thm1-TimelikeCylinder"
    THM1_NULL_SCROLL = "Thm1-NullScroll"
    THM1_PLANE = "Thm1-Plane"
    THM2_EXCLUDED = "Thm2-Excluded"
    THM3_PLANE = "Thm3-Plane"
    THM3_MUST_BE_CYLINDRICAL = "Thm3-MustBeCylindrical"
    THM4_CANDIDATE = "Thm4-Candidate"
    NOT_A_SOLITON = "NotASoliton"


@dataclass(frozen=True)
class RuledSurfaceSpec:
    gamma: Curve
    director: Curve
    s_range: tuple[float, float]
    t_range: tuple[float, float]
    label: str = "ruled"

    def surface(self) -> ParametricSurface:
        return ruled_surface(self.gamma, self.director, self.s_range, self.t_range, self.label)

    def s_samples(self, n: int = N_SAMPLES) -> np.ndarray:
        """Cell-centred samples, so closed-form families never touch an open end."""
        s0, s1 = self.s_range
        return s0 + (np.arange(n) + 0.5) * (s1 - s0) / n

    @classmethod
    def from_family(cls, family) -> "RuledSurfaceSpec":
        return cls(family.gamma, family.director, family.s_range, family.t_range, family.label)


@dataclass(frozen=True)
class RuledInvariants:
    s: np.ndarray
    delta: CausalCharacter | None
    eta: CausalCharacter | None
    Q: np.ndarray
    R: np.ndarray
    F_ruling: np.ndarray
    cylindrical: bool
    bending: float
    straightness: float

    def summary(self) -> dict:
        name = lambda c: "Mixed" if c is None else c.value
        return {
            "delta": name(self.delta),
            "eta": name(self.eta),
            "cylindrical": self.cylindrical,
            "bending": self.bending,
            "straightness": self.straightness,
            "max_abs_Q": float(np.max(np.abs(self.Q))),
            "max_abs_R": float(np.max(np.abs(self.R))),
            "max_abs_F_ruling": float(np.max(np.abs(self.F_ruling))),
        }


def _common_character(vectors, tol) -> CausalCharacter | None:
    chars = {causal_character(x, tol) for x in vectors}
    return chars.pop() if len(chars) == 1 else None


def ruled_invariants(spec: RuledSurfaceSpec, samples: int = N_SAMPLES, tol: float = CYLINDRICAL_TOL) -> RuledInvariants:
    """Inner products of base and director on a uniform s-sample.

    ``cylindrical`` tests whether the director keeps a fixed direction:
    ``sup |w x w'| / |w|^2 <= tol`` (Euclidean cross product), which does not
    depend on how ``w`` is scaled along the ruling.  ``eta`` is the causal
    character of the derivative of the *normalized* director when ``w`` is
    not lightlike, so it is also independent of that scaling.
    """
    if samples < 3:
        raise ValueError("samples must be at least 3")
    s = spec.s_samples(samples)
    g = spec.gamma.jet(s, 2)
    w = spec.director.jet(s, 2)
    wn2 = euclid_norm2(w[0])
    if np.any(wn2 == 0):
        raise DomainViolation(f"director vanishes at s={s[np.argmin(wn2)]:.6g}")
    bending = float(np.max(np.sqrt(euclid_norm2(np.cross(w[0], w[1]))) / wn2))
    cylindrical = bending <= tol
    delta = _common_character(w[0], 1e-10)
    eta, straight = None, 0.0
    if cylindrical:
        eta = CausalCharacter.ZERO
    elif delta not in (None, CausalCharacter.LIGHTLIKE, CausalCharacter.ZERO):
        wn = NormalizedCurve(spec.director).jet(s, 2)
        d1 = wn[1]
        eta = _common_character(d1, 1e-9)
        n1 = euclid_norm2(d1)
        straight = float(np.max(np.sqrt(euclid_norm2(np.cross(d1, wn[2]))) / np.maximum(n1, 1e-300)))
    elif delta is CausalCharacter.LIGHTLIKE:
        eta = _common_character(w[1], 1e-9)
    return RuledInvariants(
        s=s,
        delta=delta,
        eta=eta,
        Q=mink_dot(g[1], w[1]),
        R=mink_dot(g[1], g[1]),
        F_ruling=mink_dot(g[1], w[0]),
        cylindrical=cylindrical,
        bending=bending,
        straightness=straight,
    )


def striction_reparametrize(spec: RuledSurfaceSpec, samples: int = N_SAMPLES) -> RuledSurfaceSpec:
    """Replace the base by the striction curve of the normalized director.

    The director is rescaled to ``<w,w> = +-1`` (a change of the t-parameter
    only); ``s`` is not reparametrized, so ``|<w',w'>|`` is in general not 1.
    """
    s = spec.s_samples(samples)
    w = spec.director.jet(s, 1)
    if causal_character(w[0][0]) in (CausalCharacter.LIGHTLIKE, CausalCharacter.ZERO) or np.any(
        np.abs(mink_dot(w[0], w[0])) <= 1e-10 * euclid_norm2(w[0])
    ):
        raise DomainViolation("the striction curve needs a non-lightlike director")
    director = NormalizedCurve(spec.director)
    d = director.jet(s, 1)[1]
    if np.any(euclid_norm2(d) <= 1e-24):
        raise DomainViolation("w' vanishes: a cylinder has no striction curve")
    if np.any(np.abs(mink_dot(d, d)) <= 1e-9 * euclid_norm2(d)):
        k = int(np.argmin(np.abs(mink_dot(d, d)) / euclid_norm2(d)))
        raise LightlikeDirectorDerivative(f"w' is lightlike at s={s[k]:.6g}; use the lightlike-derivative pipeline")
    return RuledSurfaceSpec(StrictionCurve(spec.gamma, director), director, spec.s_range, spec.t_range, spec.label)


def _chebyshev(t_range, n):
    t0, t1 = t_range
    k = np.arange(n)
    x = np.cos((2 * k + 1) * np.pi / (2 * n))
    return np.sort(0.5 * (t0 + t1) + 0.5 * (t1 - t0) * x)


def patch_eps(spec: RuledSurfaceSpec, s, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Sign of ``<N,N>`` per s, from the first non-degenerate Chebyshev t-sample."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    tt = _chebyshev(spec.t_range, 7)
    S, T = np.meshgrid(s, tt, indexing="ij")
    jet = ruled_jet(spec.gamma.jet(S, 2), spec.director.jet(S, 2), T)
    n = mink_cross(jet.Ps, jet.Pt)
    nn = mink_dot(n, n)
    bad = degenerate_mask(jet, tol)
    eps = np.zeros(s.shape)
    for i in range(s.size):
        good = np.flatnonzero(~bad[i])
        if good.size == 0:
            raise DegenerateSampleSet(f"every t-sample is degenerate at s={s[i]:.6g}")
        eps[i] = np.sign(nn[i, good[0]])
    return eps


def t_polynomial_coeffs(spec: RuledSurfaceSpec, v, s, degree: int = 3, eps=None, t_range=None) -> np.ndarray:
    """Coefficients ``A_0..A_degree`` of the cleared residual as a polynomial in t.

    The residual ``H1 - eps (EG-F^2)(Xs,Xt,v)`` is sampled at ``degree + 1``
    Chebyshev points of the t-range with ``eps`` held fixed, and the
    Vandermonde system is solved exactly.  ``s`` may be an array; the result
    then has shape ``(degree + 1, len(s))``.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    t_range = tuple(t_range) if t_range is not None else tuple(spec.t_range)
    if not t_range[1] > t_range[0]:
        raise DegenerateSampleSet(f"t-range {t_range} has no interior")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    tt = _chebyshev(t_range, degree + 1)
    if np.unique(tt).size < degree + 1:
        raise DegenerateSampleSet("t-samples are not distinct")
    if eps is None:
        eps = patch_eps(spec, s_arr)
    eps = np.broadcast_to(np.asarray(eps, dtype=float), s_arr.shape)
    S, T = np.meshgrid(s_arr, tt, indexing="ij")
    jet = ruled_jet(spec.gamma.jet(S, 2), spec.director.jet(S, 2), T)
    vals = residual_eq2(jet, np.asarray(v, dtype=float), eps=eps[:, None])
    V = np.vander(tt, degree + 1, increasing=True)
    coeffs = np.linalg.solve(V, vals.T)
    return coeffs[:, 0] if np.ndim(s) == 0 else coeffs


def coefficient_scale(spec: RuledSurfaceSpec, v, s, eps=None) -> float:
    """Magnitude of the cleared residual's terms, for relative tolerances."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if eps is None:
        eps = patch_eps(spec, s_arr)
    tt = _chebyshev(spec.t_range, 5)
    S, T = np.meshgrid(s_arr, tt, indexing="ij")
    jet = ruled_jet(spec.gamma.jet(S, 2), spec.director.jet(S, 2), T)
    from .surface import first_form, h1_numerator

    _, _, _, W2 = first_form(jet)
    v = np.asarray(v, dtype=float)
    term = np.abs(W2 * triple(jet.Ps, jet.Pt, v))
    return float(max(np.max(np.abs(h1_numerator(jet))), np.max(term), 1e-300))


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    normal: np.ndarray
    max_distance: float
    scale: float

    def __bool__(self):
        return self.planar


def planarity_test(target, samples: int = 21, tol: float = PLANARITY_TOL) -> PlanarityResult:
    """Least-squares plane through a sampled grid of the surface (Euclidean)."""
    if samples < 4:
        raise ValueError("samples must be at least 4")
    surface = target.surface() if isinstance(target, RuledSurfaceSpec) else target
    S, T = surface.grid(samples, samples)
    pts = surface.position(S, T).reshape(-1, 3)
    centre = pts.mean(axis=0)
    _, sv, vt = np.linalg.svd(pts - centre, full_matrices=False)
    normal = vt[-1]
    dist = np.abs((pts - centre) @ normal)
    scale = float(max(np.max(np.linalg.norm(pts - centre, axis=1)), 1e-300))
    k = int(np.argmax(np.abs(normal)))
    normal = normal * np.sign(normal[k])
    return PlanarityResult(bool(np.max(dist) <= tol * scale), normal, float(np.max(dist)), scale)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class Evidence:
    condition: str
    value: float
    holds: bool

    def line(self) -> str:
        return f"{self.condition} = {self.value:.6e} ({'holds' if self.holds else 'violated'})"


@dataclass
class ClassificationReport:
    case_label: CaseLabel
    invariants: RuledInvariants
    fitted_v: np.ndarray | None = None
    nullspace_dim: int | None = None
    nullspace: np.ndarray | None = None
    velocity_source: str = "none"
    residual_max: float | None = None
    coefficient_kind: str = "A"
    coefficient_s: np.ndarray | None = None
    coefficient_table: np.ndarray | None = None
    evidence: list[Evidence] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def is_soliton(self) -> bool:
        return self.case_label not in (
            CaseLabel.NOT_A_SOLITON, CaseLabel.THM2_EXCLUDED, CaseLabel.THM3_MUST_BE_CYLINDRICAL
        )

    def violated(self) -> list[Evidence]:
        return [e for e in self.evidence if not e.holds]

    def to_text(self) -> str:
        fmt = lambda x: "none" if x is None else ", ".join(f"{c:.12g}" for c in np.ravel(x))
        lines = [f"case_label: {self.case_label.value}"]
        for key, value in self.invariants.summary().items():
            lines.append(f"{key}: {value}")
        lines.append(f"velocity_source: {self.velocity_source}")
        lines.append(f"fitted_v: {fmt(self.fitted_v)}")
        lines.append(f"nullspace_dim: {self.nullspace_dim if self.nullspace_dim is not None else 'none'}")
        if self.nullspace is not None and len(self.nullspace):
            for row in self.nullspace:
                lines.append(f"nullspace_vector: {fmt(row)}")
        lines.append(
            f"residual_max: {'none' if self.residual_max is None else f'{self.residual_max:.6e}'}"
        )
        for e in self.evidence:
            lines.append(f"evidence: {e.line()}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines) + "\n"

    def coefficients_csv(self) -> str:
        buf = io.StringIO()
        if self.coefficient_table is None:
            return ""
        w = csv.writer(buf, lineterminator="\n")
        k = self.coefficient_table.shape[0]
        w.writerow(["s"] + [f"{self.coefficient_kind}{n}" for n in range(k)])
        for i, s in enumerate(self.coefficient_s):
            w.writerow(["%.17g" % s] + ["%.17g" % c for c in self.coefficient_table[:, i]])
        return buf.getvalue()


def _fit(surface, grid, constraint=None) -> VelocityFit:
    try:
        return solve_velocity(surface, grid=grid, constraint=constraint, allow_rank_deficient=True)
    except RankDeficient as exc:  # too few non-degenerate points
        raise InconclusiveSampling(f"velocity fit impossible: {exc}") from None


def _residual(surface, v, grid):
    try:
        return max_residual(surface, v, grid)[0]
    except AllPointsDegenerate as exc:
        raise InconclusiveSampling(str(exc)) from None


def _table(spec, v, kind, degree, report):
    s = spec.s_samples(9)
    try:
        report.coefficient_table = t_polynomial_coeffs(spec, v, s, degree)
        report.coefficient_s = s
        report.coefficient_kind = kind
    except DegenerateSampleSet as exc:
        report.notes.append(f"coefficient table unavailable: {exc}")


def classify(spec: RuledSurfaceSpec, v=None, tol: float = SOLITON_TOL, grid=(16, 16)) -> ClassificationReport:
    """Match a ruled surface against the classification, fitting ``v`` if not given."""
    inv = ruled_invariants(spec)
    surface = spec.surface()
    report = ClassificationReport(CaseLabel.NOT_A_SOLITON, inv)
    given = v is not None
    if given:
        v = np.asarray(v, dtype=float)
        report.velocity_source = "given"

    def settle_velocity(constraint=None):
        nonlocal v
        fit = _fit(surface, grid, constraint)
        report.nullspace_dim = fit.nullspace_dim
        report.nullspace = fit.nullspace
        if not given:
            v = fit.v
            report.fitted_v = fit.v
            report.velocity_source = "fitted" if constraint is None else "fitted (constrained)"
        report.evidence.append(Evidence("min over v of rms |2H - <N,v>|", fit.fit_residual, fit.fit_residual <= tol))
        return fit

    if inv.cylindrical:
        ruling = inv.delta
        if ruling is None:
            raise InconclusiveSampling("ruling direction changes causal character on the samples")
        settle_velocity()
        res = _residual(surface, v, grid)
        report.residual_max = res
        report.evidence.append(Evidence("max |2H - <N,v>|", res, res <= tol))
        _table(spec, v, "A", 3, report)
        if planarity_test(spec):
            report.case_label = CaseLabel.THM1_PLANE if res <= tol else CaseLabel.NOT_A_SOLITON
            report.notes.append("planar cylinder: a plane is a soliton exactly when v is tangent to it")
            return report
        if res > tol:
            return report
        if ruling is CausalCharacter.SPACELIKE:
            report.case_label = CaseLabel.THM1_SPACELIKE_CYLINDER
        elif ruling is CausalCharacter.TIMELIKE:
            report.case_label = CaseLabel.THM1_TIMELIKE_CYLINDER
        else:
            w0 = spec.director(spec.s_samples(3))[1]
            par = float(np.linalg.norm(np.cross(w0, v)) / max(np.linalg.norm(w0) * np.linalg.norm(v), 1e-300))
            if np.linalg.norm(v) == 0:
                par = 0.0
                report.notes.append("v = 0 on the fit; any multiple of the ruling is admissible")
            report.evidence.append(Evidence("|w x v| / (|w||v|)", par, par <= 1e-6))
            report.case_label = CaseLabel.THM1_NULL_SCROLL if par <= 1e-6 else CaseLabel.NOT_A_SOLITON
        return report

    if inv.delta is None:
        raise InconclusiveSampling("director changes causal character on the samples")

    if inv.delta is CausalCharacter.LIGHTLIKE:
        report.case_label = CaseLabel.THM2_EXCLUDED
        settle_velocity()
        s = spec.s_samples(N_SAMPLES)
        w = spec.director.jet(s, 1)
        cond = float(np.max(np.abs(triple(w[1], w[0], v))))
        report.evidence.append(Evidence("max_s |(w', w, v)|", cond, cond <= tol))
        report.residual_max = _residual(surface, v, grid)
        report.evidence.append(Evidence("max |2H - <N,v>|", report.residual_max, report.residual_max <= tol))
        _table(spec, v, "A", 3, report)
        report.notes.append("lightlike non-cylindrical rulings admit no soliton velocity")
        if not report.violated():
            report.notes.append("no violated condition found on these samples; refinement advised")
        return report

    if inv.eta is None:
        raise InconclusiveSampling("w' changes causal character on the samples")

    if inv.eta is not CausalCharacter.LIGHTLIKE:
        plane = planarity_test(spec)
        report.evidence.append(Evidence("max distance to best plane / scale", plane.max_distance / plane.scale, plane.planar))
        settle_velocity()
        res = _residual(surface, v, grid)
        report.residual_max = res
        report.evidence.append(Evidence("max |2H - <N,v>|", res, res <= tol))
        wn = NormalizedCurve(spec.director).jet(spec.s_samples(N_SAMPLES), 1)
        a3 = float(np.max(np.abs(triple(wn[0], wn[1], v))))
        report.evidence.append(Evidence("max_s |(w, w', v)| (normalized w)", a3, a3 <= tol))
        _table(spec, v, "A", 3, report)
        if plane.planar:
            report.case_label = CaseLabel.THM3_PLANE if res <= tol else CaseLabel.NOT_A_SOLITON
        else:
            report.case_label = CaseLabel.THM3_MUST_BE_CYLINDRICAL
            report.notes.append("non-lightlike w' and non-planar: a soliton would have to be cylindrical")
        return report

    # w' lightlike: the normalized director must trace a lightlike straight line
    straight = inv.straightness <= STRAIGHTNESS_TOL
    report.evidence.append(Evidence("max_s |w' x w''| / |w'|^2 (normalized w)", inv.straightness, straight))
    s = spec.s_samples(N_SAMPLES)
    wn = NormalizedCurve(spec.director).jet(s, 1)
    a = wn[1][len(s) // 2]
    a = a / np.linalg.norm(a)
    q = float(np.min(np.abs(mink_dot(spec.gamma.jet(s, 1)[1], wn[1]))))
    report.evidence.append(Evidence("min_s |<gamma', w'>|", q, q > 1e-9))
    fit = settle_velocity(constraint=a)
    orth = float(abs(mink_dot(a, v)))
    report.evidence.append(Evidence("|<w', v>| (unit w')", orth, orth <= tol))
    res = _residual(surface, v, grid)
    report.residual_max = res
    report.evidence.append(Evidence("max |2H - <N,v>|", res, res <= tol))
    _table(spec, v, "B", 2, report)
    if straight and res <= tol and orth <= tol:
        report.case_label = CaseLabel.THM4_CANDIDATE
        if fit.nullspace_dim:
            report.notes.append(f"velocity determined up to a {fit.nullspace_dim}-dimensional nullspace")
    return report
