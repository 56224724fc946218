"""The full counterexample pipeline at desk scale.

Auto-selects (gamma, alpha) from the positivity window, runs the sweep,
audits every bound, and reports where the Strichartz quotient
|W_R| / (|f_R| + |F~_R|) crosses 10. A bounded Strichartz constant for
the perturbed equation would force this quotient to stay bounded; its
fitted positive growth exponent is the numerical contradiction.
"""

import argparse

import numpy as np

from strichartzlab import BoundViolated, build_family
from strichartzlab.scaling_lab import (
    fit_slopes,
    quotient_crossing,
    run_sweep,
    select_parameters,
    upper_bound_audit,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--sigma", type=float, default=0.0)
    parser.add_argument("--p", type=float, default=4.0)
    parser.add_argument("--profile", default="sin2")
    parser.add_argument("--max-exp", type=int, default=10)
    args = parser.parse_args()

    plan = select_parameters(args.n, args.sigma, args.p)
    print(f"selected gamma = {plan.gamma:.4f} (window {plan.gamma_window[0]:.4f}"
          f"..{plan.gamma_window[1]:.4f}), alpha = {plan.alpha:.4f}")
    print(f"q = {plan.q:.4f}, delta = {plan.delta:.4f} > 0: blow-up predicted")

    Q = build_family(args.n, args.sigma, args.profile, gamma=plan.gamma)
    cert = Q.residual_certificate(32.0, alpha=plan.alpha)
    print(f"PDE certificate: residual {cert['max_rel_residual']:.1e}, "
          f"order {cert['convergence_order']:.2f}, "
          f"{'pass' if cert['passed'] else 'FAIL'}")

    grid = 2.0 ** np.arange(4, args.max_exp + 1)
    result = run_sweep(plan, Q, grid)
    fits = fit_slopes(result, plan)
    print(f"slope checks: {'all pass' if fits['all_passed'] else 'FAILURES'}")
    try:
        upper_bound_audit(result, plan)
        print("forcing upper bounds: pass")
    except BoundViolated as exc:
        print(f"forcing upper bounds: VIOLATED ({exc})")

    blow = fits["ratio_blowup"]
    print(f"quotient lower-bound slope {blow['slope']:.4f} "
          f">= delta - tol = {blow['predicted'] - blow['tol']:.4f}")
    cx = quotient_crossing(result, M=10.0)
    if cx["first_crossing_R"] is not None:
        print(f"Strichartz quotient crosses 10 at R = {cx['first_crossing_R']:g}")
    else:
        print(f"Strichartz quotient crosses 10 at log10(R) ~ "
              f"{cx['extrapolated_log10_R']:.1f} (extrapolated, "
              f"slope {cx['fitted_slope']:.4f})")


if __name__ == "__main__":
    main()
