"""Homogeneous generalized-Morse potentials.

A potential V on R^(n-1) x (0, inf) homogeneous of order -sigma is fixed
by its restriction to the hyperplane z = 1:

    V(y, z) = z^(-sigma) * profile(y / z)

The caller supplies the profile already rotated so the spherical minimum
sits on the z axis, i.e. profile(0) = 0 with vanishing gradient.  The
quadratic part of the profile at the origin feeds the oscillator module;
the cubic-order Taylor remainder is what the counterexample has to keep
small, so we also estimate a sampled remainder constant.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateMinimum,
    DimensionMismatch,
    NonpositiveZ,
    NonzeroMinimum,
    OutOfCone,
    UnknownProfile,
)
from .oscillator import SpdMatrix


@dataclass
class HomogeneousPotential:
    """Potential of homogeneity order -sigma with Morse minimum on the z axis.

    profile must be vectorized: it maps arrays of shape (..., n-1) to
    shape (...).
    """

    n: int
    sigma: float
    profile: callable
    name: str = "custom"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension n must be at least 2")
        if not 0.0 <= self.sigma < 2.0:
            raise ValueError("homogeneity order sigma must lie in [0, 2)")

    @property
    def dim(self):
        return self.n - 1


@dataclass
class MorseData:
    """Quadratic form at the minimum plus a sampled cubic remainder bound."""

    a: SpdMatrix
    remainder_constant: float


def _pts(V, y):
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y[None]
    if y.shape[-1] != V.dim:
        raise DimensionMismatch(
            f"expected points in R^{V.dim}, got trailing dimension {y.shape[-1]}"
        )
    return y


def eval_potential(V, y, z):
    """V(y, z) = z^(-sigma) * profile(y / z); requires z > 0."""
    y = _pts(V, y)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise NonpositiveZ("potential evaluation requires z > 0")
    return z ** (-V.sigma) * V.profile(y / z[..., None])


def extract_morse(V, fd_step=1e-4, sample_count=10_000, seed=0):
    """Quadratic form and remainder constant of the profile at the origin.

    The coefficients are half the finite-difference Hessian (one Richardson
    halving, since the profile is only assumed C^3), so that

        profile(y) = y.a.y + R(y).

    The remainder constant is 1.1 * sup |R(y)| / |y|^3 over sampled
    0 < |y| < 1; a 10% margin stands in for the constant the Taylor bound
    only asserts to exist.
    """
    d = V.dim
    f = V.profile
    origin = np.zeros(d)
    f0 = float(f(origin))
    if abs(f0) > 1e-12:
        raise NonzeroMinimum(f"profile(0) = {f0:g}, expected 0")

    def fd_grad(h):
        g = np.empty(d)
        for i in range(d):
            e = np.zeros(d)
            e[i] = h
            g[i] = (f(e) - f(-e)) / (2.0 * h)
        return g

    grad = (4.0 * fd_grad(fd_step / 2) - fd_grad(fd_step)) / 3.0
    if np.max(np.abs(grad)) > 1e-8:
        raise NonzeroMinimum(
            f"profile gradient at 0 has magnitude {np.max(np.abs(grad)):g}"
        )

    def fd_hess(h):
        hess = np.empty((d, d))
        for i in range(d):
            ei = np.zeros(d)
            ei[i] = h
            hess[i, i] = (f(ei) - 2.0 * f0 + f(-ei)) / (h * h)
            for j in range(i + 1, d):
                ej = np.zeros(d)
                ej[j] = h
                hess[i, j] = hess[j, i] = (
                    f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)
                ) / (4.0 * h * h)
        return hess

    hess = (4.0 * fd_hess(fd_step / 2) - fd_hess(fd_step)) / 3.0
    a_entries = 0.5 * (hess + hess.T) / 2.0
    if np.linalg.eigvalsh(a_entries)[0] <= 1e-10:
        raise DegenerateMinimum(
            "quadratic form at the minimum has an eigenvalue <= 1e-10"
        )
    a = SpdMatrix(a_entries)

    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((sample_count, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(0.0, 1.0, sample_count) ** (1.0 / d)
    radii = np.maximum(radii, 1e-3)
    ys = dirs * radii[:, None]
    resid = np.abs(
        f(ys) - np.einsum("ki,ij,kj->k", ys, a.entries, ys)
    )
    sup = float(np.max(resid / radii**3))
    return MorseData(a=a, remainder_constant=max(1.1 * sup, 1e-12))


def remainder(V, m, y, z):
    """Taylor remainder z^(-sigma) * R(y/z) inside the cone |y| < z."""
    y = _pts(V, y)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0):
        raise NonpositiveZ("remainder evaluation requires z > 0")
    if np.any(np.linalg.norm(y, axis=-1) >= z):
        raise OutOfCone("remainder is only controlled for |y| < z")
    u = y / z[..., None]
    quad = np.einsum("...i,ij,...j->...", u, m.a.entries, u)
    return z ** (-V.sigma) * (V.profile(u) - quad)


def _sin2(y):
    r2 = np.sum(np.square(y), axis=-1)
    return r2 / (1.0 + r2)


def _quad(y):
    return np.sum(np.square(y), axis=-1)


def _aniso(y):
    return 2.0 * y[..., 0] ** 2 + 3.0 * y[..., 1] ** 2 + y[..., 0] ** 3


# name -> (profile, required n or None for any)
PROFILES = {
    "sin2": (_sin2, None),
    "quad": (_quad, None),
    "aniso": (_aniso, 3),
}


def make_potential(name, n, sigma):
    """Build one of the shipped named profiles."""
    if name not in PROFILES:
        raise UnknownProfile(
            f"unknown profile {name!r}; available: {sorted(PROFILES)}"
        )
    profile, required_n = PROFILES[name]
    if required_n is not None and n != required_n:
        raise UnknownProfile(f"profile {name!r} requires n = {required_n}")
    return HomogeneousPotential(n=n, sigma=sigma, profile=profile, name=name)
