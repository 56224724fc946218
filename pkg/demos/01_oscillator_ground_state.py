"""Ground state of the anisotropic oscillator, checked against a
finite-difference Laplacian.

The operator -Lap + y.a.y on R^d has the Gaussian ground state
exp(-y.B.y/2) with B = a^(1/2) and eigenvalue trace(B). This script
builds the pair for a random SPD matrix and prints the residual of the
eigen-equation at sampled points, halving the FD step to show the
second-order convergence of the check itself.
"""

import argparse

import numpy as np

from strichartzlab import eigen_residual, eval_v, ground_state


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    g = rng.standard_normal((args.dim, args.dim))
    a = g @ g.T + args.dim * np.eye(args.dim)
    e = ground_state(a)

    print("a =")
    print(np.array_str(a, precision=4))
    print(f"lambda = trace(sqrt(a)) = {e.lam:.6f}")
    print(f"v(0) = {eval_v(e, np.zeros(args.dim)):.6f}")

    samples = rng.uniform(-2.0, 2.0, size=(300, args.dim))
    for h in (1e-2, 5e-3, 2.5e-3):
        r = eigen_residual(e, a, samples, fd_step=h)
        print(f"fd_step {h:8.2e}  max relative residual {r:.3e}")
    print("the residual falls by ~4x per halving: the eigenpair is exact,")
    print("only the finite-difference truncation error remains")


if __name__ == "__main__":
    main()
