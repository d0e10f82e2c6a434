"""Data behind the Lorentzian grim reaper figure: profiles and meshes.

Writes one profile CSV and one OBJ mesh per spacelike-ruling family and, when
matplotlib is available, a PNG of the four profiles.

    python3 scripts/fig1_profiles.py --out figs/
"""

import argparse
import pathlib

import numpy as np

from ruledsolitons import make_gr1, make_gr2
from ruledsolitons.cli import sample_grid, write_mesh
from ruledsolitons.surface import max_residual

FAMILIES = {
    "gr1_cosh": lambda: make_gr1("cosh", 0, 0, 0, s_range=(-2, 2)),
    "gr1_sinh": lambda: make_gr1("sinh", 0, 0, 0, s_range=(0.2, 2.5)),
    "gr2_exp": lambda: make_gr2("exp", 1, 0, 0, 1, s_range=(-2, 2)),
    "gr2_arctanh": lambda: make_gr2("arctanh", 1, 0, 0, 1, s_range=(-2.5, -0.05)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figs")
    ap.add_argument("--grid", type=int, default=40)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    profiles = {}
    for name, build in FAMILIES.items():
        fam = build()
        s = np.linspace(*fam.s_range, 200)
        u = np.asarray(fam.profile(s), dtype=float)
        profiles[name] = (s, u)
        np.savetxt(out / f"{name}_profile.csv", np.column_stack([s, u]), delimiter=",",
                   header="s,u", comments="", fmt="%.17g")
        S, T, P = sample_grid(fam.surface, (args.grid, args.grid))
        with open(out / f"{name}.obj", "w") as fh:
            write_mesh(S, T, P, "obj", fh)
        r, _ = max_residual(fam.surface, fam.velocity)
        print(f"{fam.label:40s} v = {fam.velocity}  max residual {r:.2e}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipped the PNG")
        return
    fig, axes = plt.subplots(1, 4, figsize=(12, 3))
    for ax, (name, (s, u)) in zip(axes, profiles.items()):
        ax.plot(s, u)
        ax.set_title(name)
        ax.set_xlabel("s")
    axes[0].set_ylabel("u(s)")
    fig.tight_layout()
    fig.savefig(out / "fig1_profiles.png", dpi=150)
    print(f"wrote {out / 'fig1_profiles.png'}")


if __name__ == "__main__":
    main()
