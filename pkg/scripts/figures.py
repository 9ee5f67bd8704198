"""Write the density-profile and limit-density tables, and plot them if matplotlib is installed."""

import csv
import sys
from pathlib import Path

from hardwall.cli import main

HERE = Path(__file__).resolve().parent


def read(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return [list(map(float, col)) for col in zip(*rows[1:])]


def run_all(out_root):
    for name in ("profile_free", "profile_wall", "limit_density"):
        code = main(["run", "--config", str(HERE / "configs" / f"{name}.json"), "--out", str(out_root / name)])
        if code:
            sys.exit(code)


def plot(out_root):
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; CSV tables written only")
        return
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(10, 4))
    for f, label in [(out_root / "profile_free" / "profile_free_N100.csv", "free"), (out_root / "profile_wall" / "profile_wall0.8_N100.csv", "wall at 0.8")]:
        r, d = read(f)
        a1.plot(r, d, label=label)
    a1.set_xlabel("r")
    a1.set_ylabel("K_N(r,r)/N")
    a1.legend()
    for a in ("0", "-0.5", "1"):
        x, k = read(out_root / "limit_density" / f"limit_density_alpha{a}.csv")
        a2.plot(x, k, label=f"alpha={a}")
    a2.set_xlim(0, 4)
    a2.set_ylim(0, 1.5)  # alpha < 0 diverges at x = 0
    a2.set_xlabel("x")
    a2.set_ylabel("K^(alpha)(x,x)")
    a2.legend()
    fig.tight_layout()
    fig.savefig(out_root / "figures.png", dpi=120)
    print(f"wrote {out_root / 'figures.png'}")


if __name__ == "__main__":
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
    run_all(root)
    plot(root)
