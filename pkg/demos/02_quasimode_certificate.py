"""Finite-difference certificate of the truncated quasimode equation.

The truncated solution W_R is built from the oscillator ground state,
a phase, and two smooth cutoffs; its forcing F_R collects the model
forcing and every cutoff commutator term. The certificate checks

    i dt W_R - Lap W_R + z^(-2 beta) (y.a.y) W_R = F_R

at quasi-random points of the support slab with central differences.
A transcription error in any term of F_R shows up immediately as a
residual that does not shrink like h^2.
"""

import argparse
import json

from strichartzlab import build_family


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--sigma", type=float, default=0.0)
    parser.add_argument("--profile", default="sin2")
    parser.add_argument("--gamma", type=float, default=0.6)
    parser.add_argument("--R", type=float, nargs="+", default=[16.0, 64.0, 256.0])
    args = parser.parse_args()

    Q = build_family(args.n, args.sigma, args.profile, gamma=args.gamma)
    print(f"beta = {Q.beta}, lambda = {Q.eigen.lam:.6f}, "
          f"remainder constant = {Q.morse.remainder_constant:.4f}")
    for R in args.R:
        cert = Q.residual_certificate(R)
        print(f"\nR = {R:g}")
        print(json.dumps({k: cert[k] for k in (
            "max_rel_residual", "max_rel_residual_half_step",
            "halving_ratio", "convergence_order", "passed")}, indent=2))


if __name__ == "__main__":
    main()
