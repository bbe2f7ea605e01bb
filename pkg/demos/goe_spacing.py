"""Spacing statistics of a 49-vertex circulant graph with random edge lengths.

Prints the integrated spacing distribution next to the Wigner surmise on a
coarse grid, plus the sup-norm distance.  About a minute with the defaults.

    python3 demos/goe_spacing.py [--levels 50000] [--seed 7]
"""
import argparse
import math

import numpy as np

from quantum_circulant import MetricGraph, integrated_nnsd, spectrum_generic, unfold, validate_spec, wigner_goe_cdf

parser = argparse.ArgumentParser()
parser.add_argument("--levels", type=int, default=50_000)
parser.add_argument("--skip", type=int, default=1000, help="lowest levels to drop")
parser.add_argument("--seed", type=int, default=7)
args = parser.parse_args()

g = MetricGraph.random_generic(validate_spec(49, [3, 4, 9, 12, 15, 19, 20]), seed=args.seed)
kmax = (args.levels + args.skip + 500) * math.pi / g.total_length
u = unfold(spectrum_generic(g, kmax)).values[args.skip:args.skip + args.levels]

grid = np.linspace(0.0, 3.0, 13)
emp, goe = integrated_nnsd(u, grid), wigner_goe_cdf(grid)
print(f"{u.size} unfolded levels")
print("    s   empirical   Wigner")
for s, a, b in zip(grid, emp, goe):
    print(f"{s:5.2f}   {a:9.4f}  {b:7.4f}")
fine = np.linspace(0.0, 4.0, 4001)
print(f"sup |difference| = {np.max(np.abs(integrated_nnsd(u, fine) - wigner_goe_cdf(fine))):.4f}")
