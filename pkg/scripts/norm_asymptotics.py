"""Ratios of the asymptotic norm predictions to the quadrature values."""

import argparse
import math

from hardwall import HardWallEnsemble, compute_norms, ginibre, norm_asymptotic_crit, norm_asymptotic_high
from hardwall.equilibrium import equilibrium_measure
from hardwall.norms import critical_window

p = argparse.ArgumentParser()
p.add_argument("--N", type=int, nargs="+", default=[500, 1000, 2000, 4000])
p.add_argument("--alpha", type=float, default=0.0)
args = p.parse_args()

for N in args.N:
    e = HardWallEnsemble(ginibre(), 0.8, args.alpha, N)
    t = compute_norms(e)
    ts = equilibrium_measure(e).tau_star
    M = 0.1 * math.sqrt(N)
    print(f"N={N}")
    for tau in (ts + 0.1, ts + 0.2, 0.9, 0.99):
        j = min(math.ceil(N * tau), N - 1)
        r = math.exp(norm_asymptotic_high(e, j, M) - t.log_norms[j])
        print(f"  high  j={j:5d} tau={j / N:.3f} ratio={r:.4f}")
    lo, hi = critical_window(e)
    for j in (max(lo, 1), math.floor(N * ts), hi):
        r = math.exp(norm_asymptotic_crit(e, j) - t.log_norms[j])
        print(f"  crit  j={j:5d} tau={j / N:.3f} ratio={r:.4f}")
