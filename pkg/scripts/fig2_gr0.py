"""Numerical solutions of the gr0 profile equations for a fan of initial slopes.

The equations have no closed-form solution; each curve is integrated with the
adaptive RK4 solver from u(0) = 0.  Initial slopes are representative choices.

    python3 scripts/fig2_gr0.py --out figs/
"""

import argparse
import pathlib

import numpy as np

from ruledsolitons.reaper import ReaperODE, integrate, lift_cylinder
from ruledsolitons.surface import max_residual

FANS = {
    "Gr0Spacelike": np.linspace(-0.9, 0.9, 7),
    "Gr0Timelike": np.concatenate([np.linspace(-3, -1.2, 4), np.linspace(1.2, 3, 4)]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figs")
    ap.add_argument("--s-end", type=float, default=2.0)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    curves = {name: [] for name in FANS}
    for name, slopes in FANS.items():
        ode = ReaperODE(name, 0.0)
        for up0 in slopes:
            # integrate both ways so the curve is centred on s = 0
            parts = [integrate(ode, 0, 0, up0, end) for end in (-args.s_end, args.s_end)]
            for k, sol in enumerate(parts):
                sol.to_csv(out / f"{name.lower()}_{up0:+.2f}_{'left' if k == 0 else 'right'}.csv")
            s = np.concatenate([parts[0].nodes, parts[1].nodes[1:]])
            u = np.concatenate([parts[0].u, parts[1].u[1:]])
            curves[name].append((up0, s, u))
            lift = max(max_residual(lift_cylinder(sol), ode.velocity)[0] for sol in parts if sol.nodes.size > 3)
            stops = "/".join(sol.stop_reason for sol in parts)
            print(f"{name} u'(0)={up0:+.2f}: s in [{s[0]:.3f}, {s[-1]:.3f}] ({stops}), lift residual {lift:.1e}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipped the PNG")
        return
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, (name, items) in zip(axes, curves.items()):
        for up0, s, u in items:
            ax.plot(s, u, label=f"u'(0)={up0:+.1f}")
        ax.set_title(name)
        ax.set_xlabel("s")
        ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(out / "fig2_gr0.png", dpi=150)
    print(f"wrote {out / 'fig2_gr0.png'}")


if __name__ == "__main__":
    main()
