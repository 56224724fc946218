"""Growth of the quasimode norms across the truncation radius.

Sweeps R over a dyadic grid, measures the mixed norms by quadrature,
and fits log-log slopes. The datum norm grows like R^(A/4) with
A = (n-1) beta + 2 gamma, the solution norm like R^(alpha/p + A/(2q)),
and the solution-to-forcing ratios grow like R^kappa and R^delta:
positive exponents, which is the whole point.
"""

import argparse

import numpy as np

from strichartzlab import build_family
from strichartzlab.scaling_lab import ExponentPlan, fit_slopes, run_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--sigma", type=float, default=0.0)
    parser.add_argument("--p", type=float, default=4.0)
    parser.add_argument("--profile", default="sin2")
    parser.add_argument("--gamma", type=float, default=0.6)
    parser.add_argument("--alpha", type=float, default=1.15)
    parser.add_argument("--max-exp", type=int, default=10)
    args = parser.parse_args()

    plan = ExponentPlan(n=args.n, sigma=args.sigma, p=args.p,
                        gamma=args.gamma, alpha=args.alpha)
    Q = build_family(args.n, args.sigma, args.profile, gamma=args.gamma)
    grid = 2.0 ** np.arange(4, args.max_exp + 1)
    print(f"kappa = {plan.kappa:.4f}, delta = {plan.delta:.4f}")
    print(f"sweeping R = 2^4 ... 2^{args.max_exp}")

    result = run_sweep(plan, Q, grid)
    print(f"\n{'R':>8} {'|f_R|':>12} {'|W_R|':>12} {'|F_R|':>12} {'W/F':>10}")
    for i, R in enumerate(result.R_values):
        print(f"{R:8.0f} {result.norm_f[i]:12.4f} {result.norm_W[i]:12.4f} "
              f"{result.norm_FR[i]:12.4f} {result.ratio_WF[i]:10.5f}")

    fits = fit_slopes(result, plan)
    print(f"\n{'quantity':>15} {'slope':>9} {'predicted':>10}")
    for name in ("norm_f", "norm_W", "ratio_Wf", "ratio_WF", "ratio_blowup"):
        e = fits[name]
        print(f"{name:>15} {e['slope']:9.4f} {e['predicted']:10.4f}")


if __name__ == "__main__":
    main()
