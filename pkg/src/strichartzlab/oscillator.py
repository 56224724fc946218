"""Ground eigenpair of the anisotropic harmonic oscillator.

The operator is -Laplacian + y.a.y on R^d with a symmetric positive
definite.  Writing B = a^(1/2), the Gaussian

    v(y) = exp(-y.B.y / 2)

satisfies -Lap v + (y.a.y) v = trace(B) v and lies in every L^p, which is
all the quasimode construction needs.  The helper fields

    G(y) = y.grad v(y)   = -(y.B.y) v(y)
    H(y) = y.Hess v(y).y = ((y.B.y)^2 - y.B.y) v(y)

show up in the forcing of the truncated Cauchy problem and are kept in
closed form here; finite-difference cross checks live in the test suite.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonSpd

SPD_REL_TOL = 1e-12


@dataclass
class SpdMatrix:
    """Symmetric positive definite matrix, stored symmetrized."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.entries, dtype=float))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NonSpd(f"expected a square matrix, got shape {a.shape}")
        a = 0.5 * (a + a.T)
        if np.linalg.eigvalsh(a)[0] <= 0.0:
            raise NonSpd("matrix has a nonpositive eigenvalue")
        self.entries = a

    @property
    def dim(self):
        return self.entries.shape[0]


@dataclass
class Eigenpair:
    """Ground eigenvalue lam = trace(a^(1/2)) together with B = a^(1/2)."""

    lam: float
    sqrt_a: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        self.sqrt_a = np.asarray(self.sqrt_a, dtype=float)
        self.dim = self.sqrt_a.shape[0]


def _as_spd(a):
    return a if isinstance(a, SpdMatrix) else SpdMatrix(a)


def spd_sqrt(a):
    """Symmetric square root via eigendecomposition.

    Raises NonSpd when the input has a nonpositive eigenvalue.
    """
    a = _as_spd(a)
    vals, vecs = np.linalg.eigh(a.entries)
    b = (vecs * np.sqrt(vals)) @ vecs.T
    return 0.5 * (b + b.T)


def ground_state(a):
    """Ground eigenpair of -Lap + y.a.y: (trace(a^(1/2)), a^(1/2))."""
    b = spd_sqrt(a)
    return Eigenpair(lam=float(np.trace(b)), sqrt_a=b)


def _points(e, y):
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y[None]
    if y.shape[-1] != e.dim:
        raise DimensionMismatch(
            f"expected points in R^{e.dim}, got trailing dimension {y.shape[-1]}"
        )
    return y


def _qform(e, y):
    """y.B.y for B = a^(1/2), batched over leading axes of y."""
    y = _points(e, y)
    return np.einsum("...i,ij,...j->...", y, e.sqrt_a, y)


def eval_v(e, y):
    """Gaussian ground state exp(-y.B.y / 2); equals 1 only at y = 0."""
    return np.exp(-0.5 * _qform(e, y))


def eval_G(e, y):
    """y.grad v(y) = -(y.B.y) v(y); nonpositive everywhere."""
    s = _qform(e, y)
    return -s * np.exp(-0.5 * s)


def eval_H(e, y):
    """y.Hess v(y).y = ((y.B.y)^2 - y.B.y) v(y)."""
    s = _qform(e, y)
    return (s * s - s) * np.exp(-0.5 * s)


def eigen_residual(e, a, samples, fd_step=1e-4):
    """Max relative eigen-equation residual over the sample points.

    The Laplacian is replaced by a second-order central finite difference
    with step fd_step, so for an exact eigenpair the returned value is
    pure truncation error, O(fd_step^2).  Empty sample lists return 0.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        return 0.0
    samples = samples.reshape(-1, e.dim)
    a = _as_spd(a)
    h = float(fd_step)

    v0 = eval_v(e, samples)
    lap = np.zeros_like(v0)
    for i in range(e.dim):
        step = np.zeros(e.dim)
        step[i] = h
        lap += eval_v(e, samples + step) - 2.0 * v0 + eval_v(e, samples - step)
    lap /= h * h

    pot = np.einsum("...i,ij,...j->...", samples, a.entries, samples)
    resid = np.abs(-lap + pot * v0 - e.lam * v0)
    return float(np.max(resid / np.maximum(np.abs(v0), 1e-300)))
