"""Command-line front end.

Exit status: 0 on success/PASS, 1 when a checked quantity exceeds ``--tol``,
2 on precondition, domain or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .classifier import RuledSurfaceSpec, classify
from .config import load_spec, parse_floats, read_key_values
from .errors import ParseError, RankDeficient, SolitonError
from .reaper import OdeId, ReaperODE, integrate, lift_cylinder, node_grid_residual, write_csv
from .surface import max_residual, residual_eq1_masked, solve_velocity

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

ODE_ALIASES = {
    "eq31-spacelike": OdeId.EQ31_SPACELIKE,
    "eq31-timelike": OdeId.EQ31_TIMELIKE,
    "eq32": OdeId.EQ32,
    "gr0-spacelike": OdeId.GR0_SPACELIKE,
    "gr0-timelike": OdeId.GR0_TIMELIKE,
}
# the Gr0 defaults are representatives only; the figures they feed state no initial data
DEFAULT_INIT = {OdeId.GR0_SPACELIKE: (0.0, 0.0), OdeId.GR0_TIMELIKE: (0.0, 2.0)}
DEFAULT_RANGE = {OdeId.GR0_SPACELIKE: (0.0, 2.0), OdeId.GR0_TIMELIKE: (0.0, 2.0)}
LIFT_TOL = 1e-6


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str
    tol: float | None = None
    grid: tuple[int, int] = (30, 30)
    out: str | None = None
    fmt: str = "csv"
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.tol is not None and not self.tol > 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if min(self.grid) < 2:
            raise UsageError(f"--grid needs at least 2x2, got {self.grid[0]}x{self.grid[1]}")
        if self.fmt not in ("csv", "obj"):
            raise UsageError(f"--format must be csv or obj, got {self.fmt}")


def parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise UsageError(f"--grid expects WxH, got {text!r}") from None


def _extra_params(tokens) -> dict:
    params, i = {}, 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) < 3:
            raise UsageError(f"unexpected argument {tok!r}")
        if "=" in tok:
            key, value = tok[2:].split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise UsageError(f"missing value for {tok}")
            key, value = tok[2:], tokens[i + 1]
            i += 2
        params[key.replace("-", "_")] = value
    return params


def _vec(text, name="v"):
    return np.array(parse_floats(text, 3, name))


def _range(text, name):
    lo, hi = parse_floats(text, 2, name)
    if not hi > lo:
        raise UsageError(f"{name} must be increasing, got {lo}, {hi}")
    return lo, hi


def _fmt_vec(v):
    return ", ".join(f"{c:.12g}" for c in np.ravel(v))


# -- target resolution ----------------------------------------------------------


def _family_or_spec(target, params, s_range=None, t_range=None):
    """A catalog family (by id) or a ruled spec file; returns (surface, velocity, label, spec)."""
    try:
        fid = catalog.family_id(target)
    except KeyError:
        fid = None
    if fid is not None:
        fam = catalog.build_family(fid, s_range=s_range, t_range=t_range, **params)
        return fam.surface, fam.velocity, fam.label, RuledSurfaceSpec.from_family(fam)
    if os.path.isfile(target):
        with open(target) as fh:
            spec, v = load_spec(fh.read(), label=os.path.basename(target))
        if s_range or t_range:
            spec = RuledSurfaceSpec(spec.gamma, spec.director, s_range or spec.s_range, t_range or spec.t_range, spec.label)
        return spec.surface(), v, spec.label, spec
    raise UsageError(f"{target!r} is neither a family id nor a spec file")


def _ranges(args):
    s_range = _range(args.s_range, "--s-range") if args.s_range else None
    t_range = _range(args.t_range, "--t-range") if args.t_range else None
    return s_range, t_range


# -- commands -----------------------------------------------------------------------


def cmd_list(job: JobConfig, args, out) -> int:
    entries = list(catalog.REGISTRY.values())
    if args.family:
        entries = [catalog.REGISTRY[catalog.family_id(args.family)]]
    rows = [
        {
            "id": e.family_id.value,
            "params": [{"name": p.name, "default": p.default, "type": p.kind.__name__} for p in e.params],
            "anchor": e.anchor,
            "summary": e.summary,
        }
        for e in entries
    ]
    if args.json:
        json.dump(rows, out, indent=2)
        out.write("\n")
        return EXIT_OK
    for r in rows:
        schema = ", ".join(f"{p['name']}={p['default']}" for p in r["params"]) or "-"
        out.write(f"{r['id']:16s} {schema:46s} {r['anchor']}\n")
        if args.family:
            out.write(f"  {r['summary']}\n")
    return EXIT_OK


def sample_grid(surface, grid):
    ns, nt = grid
    s = np.linspace(*surface.s_range, ns)
    t = np.linspace(*surface.t_range, nt)
    S, T = np.meshgrid(s, t, indexing="ij")
    return S, T, surface.position(S, T)


def write_mesh(S, T, P, fmt, fh):
    ns, nt = S.shape
    if fmt == "csv":
        fh.write("s,t,x,y,z\n")
        for i in range(ns):
            for j in range(nt):
                fh.write(",".join("%.17g" % x for x in (S[i, j], T[i, j], *P[i, j])) + "\n")
        return
    for i in range(ns):
        for j in range(nt):
            fh.write("v %.17g %.17g %.17g\n" % tuple(P[i, j]))
    idx = lambda i, j: i * nt + j + 1
    for i in range(ns - 1):
        for j in range(nt - 1):
            fh.write(f"f {idx(i, j)} {idx(i + 1, j)} {idx(i + 1, j + 1)} {idx(i, j + 1)}\n")


def cmd_sample(job: JobConfig, args, out) -> int:
    s_range, t_range = _ranges(args)
    surface, _, label, _ = _family_or_spec(args.target, job.params, s_range, t_range)
    S, T, P = sample_grid(surface, job.grid)
    if job.out:
        with open(job.out, "w") as fh:
            write_mesh(S, T, P, job.fmt, fh)
        out.write(f"wrote {S.size} vertices of {label} to {job.out}\n")
    else:
        write_mesh(S, T, P, job.fmt, out)
    return EXIT_OK


def _random_points(surface, n, seed):
    rng = np.random.default_rng(seed)
    S = rng.uniform(*surface.s_range, size=n)
    T = rng.uniform(*surface.t_range, size=n)
    return S, T


def cmd_residual(job: JobConfig, args, out) -> int:
    s_range, t_range = _ranges(args)
    surface, v_default, label, _ = _family_or_spec(args.target, job.params, s_range, t_range)
    v = _vec(args.v) if args.v else v_default
    if v is None:
        raise UsageError("no velocity: pass --v x,y,z or put v in the spec file")
    tol = job.tol if job.tol is not None else 1e-8
    out.write(f"target: {label}\nvelocity: {_fmt_vec(v)}\n")
    if job.seed is not None:
        S, T = _random_points(surface, job.grid[0] * job.grid[1], job.seed)
        r, bad = residual_eq1_masked(surface.jet(S, T), v)
        ok = ~bad
        if not ok.any():
            raise SolitonError("all sampled points are degenerate")
        worst = float(np.max(np.abs(r[ok])))
        out.write(f"seed: {job.seed}\nmax_residual: {worst:.6e}\npoints: {int(ok.sum())}\n")
        out.write(f"degenerate_points: {int(bad.sum())}\n")
    else:
        worst, report = max_residual(surface, v, job.grid)
        out.write("\n".join(report.lines()) + "\n")
    status = worst <= tol
    out.write(f"tolerance: {tol:.3e}\nstatus: {'PASS' if status else 'FAIL'}\n")
    return EXIT_OK if status else EXIT_FAIL


def cmd_fit_velocity(job: JobConfig, args, out) -> int:
    s_range, t_range = _ranges(args)
    surface, v_true, label, _ = _family_or_spec(args.target, job.params, s_range, t_range)
    grid = (min(job.grid[0], 16), min(job.grid[1], 16))
    constraint = _vec(args.constraint, "--constraint") if args.constraint else None
    try:
        fit = solve_velocity(surface, grid=grid, constraint=constraint, allow_rank_deficient=True)
    except RankDeficient as exc:
        raise SolitonError(str(exc)) from None
    out.write(f"target: {label}\nfitted_v: {_fmt_vec(fit.v)}\nfit_residual: {fit.fit_residual:.6e}\n")
    out.write(f"nullspace_dim: {fit.nullspace_dim}\n")
    for row in fit.nullspace:
        out.write(f"nullspace_vector: {_fmt_vec(row)}\n")
    if v_true is not None:
        out.write(f"reference_v: {_fmt_vec(v_true)}\nagrees: {fit.agrees_with(v_true)}\n")
    tol = job.tol if job.tol is not None else 1e-8
    status = fit.fit_residual <= tol
    out.write(f"tolerance: {tol:.3e}\nstatus: {'PASS' if status else 'FAIL'}\n")
    return EXIT_OK if status else EXIT_FAIL


def cmd_solve_ode(job: JobConfig, args, out) -> int:
    key = args.ode.lower()
    ode_id = ODE_ALIASES.get(key)
    if ode_id is None:
        try:
            ode_id = OdeId(args.ode)
        except ValueError:
            raise UsageError(f"unknown ODE {args.ode!r}; choose from {', '.join(ODE_ALIASES)}") from None
    ode = ReaperODE(ode_id, float(args.v1), float(args.v2), float(args.v3))
    notes = []
    if args.init:
        u0, up0 = parse_floats(args.init, 2, "--init")
    else:
        u0, up0 = DEFAULT_INIT.get(ode_id, (0.0, 0.0))
        notes.append(f"initial data u(s0)={u0:g}, u'(s0)={up0:g} is a default representative, not derived")
    s0, s1 = parse_floats(args.range, 2, "--range") if args.range else DEFAULT_RANGE.get(ode_id, (0.0, 1.0))
    tol = job.tol if job.tol is not None else 1e-10
    sol = integrate(ode, s0, u0, up0, s1, tol=tol)
    report = sys.stderr if not job.out else out
    if job.out:
        sol.to_csv(job.out)
        report.write(f"wrote {sol.nodes.size} nodes to {job.out}\n")
    else:
        write_csv(sol, out)
    report.write(f"ode: {ode.id.value}\nvelocity: {_fmt_vec(ode.velocity)}\n")
    report.write(f"stop_reason: {sol.stop_reason}\nlast_s: {sol.nodes[-1]:.12g}\n")
    if sol.regime_exit is not None:
        report.write(f"regime_exit: {sol.regime_exit:.12g}\n")
    for n in notes:
        report.write(f"note: {n}\n")
    if not args.lift:
        return EXIT_OK
    res = node_grid_residual(sol)
    surf_res, _ = max_residual(lift_cylinder(sol), ode.velocity, job.grid)
    worst = max(res, surf_res)
    report.write(f"lift_residual_nodes: {res:.6e}\nlift_residual_grid: {surf_res:.6e}\n")
    ok = worst <= LIFT_TOL
    report.write(f"lift_tolerance: {LIFT_TOL:.1e}\nstatus: {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(job: JobConfig, args, out) -> int:
    s_range, t_range = _ranges(args)
    _, v_file, _, spec = _family_or_spec(args.target, job.params, s_range, t_range)
    v = _vec(args.v) if args.v else (v_file if os.path.isfile(args.target) else None)
    kw = {"tol": job.tol} if job.tol is not None else {}
    report = classify(spec, v, **kw)
    out.write(report.to_text())
    if job.out:
        with open(job.out, "w") as fh:
            fh.write(report.coefficients_csv())
        out.write(f"coefficients: {job.out}\n")
    return EXIT_OK


COMMANDS = {
    "list": cmd_list,
    "sample": cmd_sample,
    "residual": cmd_residual,
    "solve-ode": cmd_solve_ode,
    "classify": cmd_classify,
    "fit-velocity": cmd_fit_velocity,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="pass/fail threshold (solver tolerance for solve-ode)")
    common.add_argument("--grid", default=None, help="sample grid WxH (default 30x30)")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--format", dest="fmt", default=None, choices=["csv", "obj"])
    common.add_argument("--seed", type=int, default=None, help="random sample points instead of a grid")
    common.add_argument("--config", default=None, help="key = value file; flags override it")

    parser = argparse.ArgumentParser(prog="ruledsolitons", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", parents=[common], help="catalog families")
    p.add_argument("--family", default=None)
    p.add_argument("--json", action="store_true")

    for name, helptext in (("sample", "write a mesh"), ("residual", "soliton residual report"),
                           ("classify", "classify a ruled surface"), ("fit-velocity", "least-squares velocity")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("target", help="family id or spec file")
        p.add_argument("--s-range", default=None)
        p.add_argument("--t-range", default=None)
        if name in ("residual", "classify"):
            p.add_argument("--v", default=None, help="velocity x,y,z")
        if name == "fit-velocity":
            p.add_argument("--constraint", default=None, help="fit under <c, v> = 0")

    p = sub.add_parser("solve-ode", parents=[common], help="integrate a profile ODE")
    p.add_argument("ode", help=", ".join(ODE_ALIASES))
    p.add_argument("--v1", default="0")
    p.add_argument("--v2", default="0")
    p.add_argument("--v3", default="0")
    p.add_argument("--init", default=None, help="u(s0),u'(s0)")
    p.add_argument("--range", default=None, help="s0,s_end")
    p.add_argument("--lift", action="store_true")
    return parser


_GLOBAL_KEYS = {"tol", "grid", "out", "format", "seed"}


def make_job(args, extras) -> JobConfig:
    file_values = {}
    if args.config:
        with open(args.config) as fh:
            file_values = {k: e.value for k, e in read_key_values(fh.read()).items()}
    params = {k: v for k, v in file_values.items() if k not in _GLOBAL_KEYS}
    # command-specific options present in the config fill unset flags
    for key in list(params):
        if hasattr(args, key):
            value = params.pop(key)
            if getattr(args, key) in (None, False, "0"):
                setattr(args, key, value)
    params.update(_extra_params(extras))

    def pick(flag, key, convert):
        if flag is not None:
            return flag
        return convert(file_values[key]) if key in file_values else None

    tol = pick(args.tol, "tol", float)
    grid = pick(parse_grid(args.grid) if args.grid else None, "grid", parse_grid) or (30, 30)
    fmt = pick(args.fmt, "format", str) or "csv"
    job = JobConfig(args.command, tol, grid, pick(args.out, "out", str), fmt, pick(args.seed, "seed", int), params)
    job.validate()
    return job


_BOOLEAN_FLAGS = {"--json", "--lift", "--help"}


def _attach_negative_values(argv):
    """Turn ``--s-range -1,1`` into ``--s-range=-1,1`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        takes_value = tok.startswith("--") and "=" not in tok and tok not in _BOOLEAN_FLAGS
        if takes_value and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args, extras = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_ERROR
    try:
        job = make_job(args, extras)
        if args.command in ("list", "solve-ode") and job.params:
            raise UsageError(f"unexpected arguments: {' '.join('--' + k for k in job.params)}")
        return COMMANDS[args.command](job, args, out)
    except (UsageError, SolitonError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_ERROR


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
