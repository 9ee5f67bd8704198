"""Sup error of the rescaled one-point function against K^(alpha) along an N ladder."""

import argparse

import numpy as np

from hardwall import HardWallEnsemble, build_context, ginibre, k_alpha, rescaled_kernel

p = argparse.ArgumentParser()
p.add_argument("--alphas", type=float, nargs="+", default=[0.0, 1.0, -0.5])
p.add_argument("--N", type=int, nargs="+", default=[100, 200, 400, 800, 1600])
p.add_argument("--rho-star", type=float, default=0.8)
args = p.parse_args()

x = np.linspace(0.25, 3.0, 111)
print("alpha      N    sup_err   N*sup_err")
for a in args.alphas:
    lim = np.real(k_alpha(a, x, x))
    for N in args.N:
        ctx = build_context(HardWallEnsemble(ginibre(), args.rho_star, a, N))
        err = np.max(np.abs(np.real(rescaled_kernel(ctx, x, x)) - lim))
        print(f"{a:5g} {N:6d} {err:10.5f} {N * err:10.2f}")
