"""Distance of the exact max-modulus law from the Weibull limit, and I_N against x^(alpha+1)."""

import argparse

import numpy as np

from hardwall import HardWallEnsemble, build_context, ginibre, i_n
from hardwall.extremes import weibull_sup_error

p = argparse.ArgumentParser()
p.add_argument("--alpha", type=float, default=0.0)
p.add_argument("--N", type=int, nargs="+", default=[125, 250, 500, 1000, 2000])
args = p.parse_args()

xs = np.array([0.5, 1.0, 2.0])
print("     N   sup_err   I_N(0.5)   I_N(1)   I_N(2)")
for N in args.N:
    ctx = build_context(HardWallEnsemble(ginibre(), 0.8, args.alpha, N))
    iv = i_n(ctx, xs)
    print(f"{N:6d} {weibull_sup_error(ctx):9.5f} " + " ".join(f"{v:8.4f}" for v in iv))
print("limit I(x) = x^(alpha+1):", " ".join(f"{v:.4f}" for v in xs ** (args.alpha + 1)))
