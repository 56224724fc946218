"""Mixed Lebesgue norms of slab-supported fields by nested quadrature.

All fields of interest are supported in the slab |z - R| <= R^gamma,
|y| <= z, and decay like the oscillator Gaussian in the substituted
variable u = y / z^(beta/2).  The substitution

    int int |f(y, z)|^q dy dz
        = int_slab z^((n-1) beta / 2) [ int |f(u z^(beta/2), z)|^q du ] dz

turns the unbounded y-integral into a Gaussian-weighted one with an
R-uniform truncation radius, which is what makes the largest grid radii
feasible.  The z panels are split at the cutoff seam ordinates; the
u-integral uses a radial rule when the oscillator is isotropic and a
tensorized rule in diagonalized coordinates otherwise.  Every norm is
re-computed at doubled resolution until the relative drift falls below
the configured tolerance.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InsufficientPoints, NonconvergedQuadrature

GL_NODES_PER_PANEL = 4


@dataclass
class NormSpec:
    """Space-time norm exponents and time horizon for L^p((0,T); L^q)."""

    p: float
    q: float
    T: float

    def __post_init__(self):
        if self.p < 1.0 or self.q < 1.0:
            raise ValueError("norm exponents must satisfy p, q >= 1")
        if not self.T > 0.0:
            raise ValueError("time horizon must be positive")


@dataclass
class QuadratureConfig:
    """Resolution knobs for the nested slab quadrature."""

    rel_tol: float = 1e-7
    z_panels: int = 64
    u_radius: float = 12.0
    t_nodes: int = 65
    max_levels: int = 5

    def __post_init__(self):
        if min(self.rel_tol, self.z_panels, self.u_radius, self.t_nodes) <= 0:
            raise ValueError("all quadrature parameters must be positive")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def _leggauss(order):
    return np.polynomial.legendre.leggauss(order)


def _composite_gl(a, b, panels):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    x, w = _leggauss(GL_NODES_PER_PANEL)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def slab_z_quadrature(R, gamma, panels):
    """z nodes/weights over [R - R^gamma, R + R^gamma], split at the
    seam ordinates R +- R^gamma / 2 where the z-cutoff changes regime."""
    rg = R**gamma
    side = max(panels // 4, 2)
    mid = max(panels - 2 * side, 2)
    zs, ws = [], []
    for a, b, m in (
        (R - rg, R - rg / 2.0, side),
        (R - rg / 2.0, R + rg / 2.0, mid),
        (R + rg / 2.0, R + rg, side),
    ):
        nodes, weights = _composite_gl(a, b, m)
        zs.append(nodes)
        ws.append(weights)
    return np.concatenate(zs), np.concatenate(ws)


def _sphere_area(d):
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def u_quadrature(sqrt_a, q, dim, config=None, level=0, u_max_cap=None):
    """Quadrature points/weights in the substituted variable u.

    Points cover the region where the Gaussian weight exp(-q u.B.u / 2)
    is above the tail threshold implied by config.u_radius (a multiple of
    the widest Gaussian standard deviation).  Returns (points, weights)
    with points of shape (m, dim); weights include the surface-area or
    tensor-product factors so that sum(w * f(points)) approximates the
    integral of f over R^dim for any radially compatible integrand.
    """
    cfg = config or DEFAULT_CONFIG
    sqrt_a = np.atleast_2d(np.asarray(sqrt_a, dtype=float))
    vals, vecs = np.linalg.eigh(sqrt_a)
    panels = max(cfg.z_panels // 2, 4) * 2**level
    iso = np.allclose(vals, vals[0], rtol=1e-12, atol=0.0)
    if iso:
        r = cfg.u_radius / math.sqrt(q * vals[0])
        if u_max_cap is not None:
            r = min(r, u_max_cap)
        rho, w = _composite_gl(0.0, r, panels)
        weights = w * _sphere_area(dim) * rho ** (dim - 1)
        points = np.zeros((rho.size, dim))
        points[:, 0] = rho
        return points, weights
    if dim > 3:
        raise NonconvergedQuadrature(
            "tensorized anisotropic quadrature is limited to n <= 4"
        )
    axes = []
    axis_panels = panels
    for b in vals:
        r = cfg.u_radius / math.sqrt(q * b)
        if u_max_cap is not None:
            r = min(r, u_max_cap)
        axes.append(_composite_gl(-r, r, axis_panels))
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    wgrids = np.meshgrid(*[a[1] for a in axes], indexing="ij")
    pts_principal = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return pts_principal @ vecs.T, weights


def _space_grid(Q, R, q, cfg, level):
    """Slab quadrature grid: (y, z, combined weights wz*jac, wu)."""
    beta = Q.beta
    panels = max(cfg.z_panels // 2, 4) * 2**level
    z, wz = slab_z_quadrature(R, Q.gamma, panels)
    # the y-cutoff kills |u| > z^((2-beta)/2); capping the node range at
    # the widest such radius keeps small-R runs resolved
    u_cap = float(np.max(z) ** ((2.0 - beta) / 2.0))
    upts, wu = u_quadrature(
        Q.eigen.sqrt_a, q, Q.n - 1, cfg, level=level, u_max_cap=u_cap
    )
    y = upts[None, :, :] * z[:, None, None] ** (beta / 2.0)
    wz_jac = wz * z ** ((Q.n - 1) * beta / 2.0)
    return y, z, wz_jac, wu


def _z_block(nu):
    return max(1, int(250_000 // nu))


def _space_pow(field, Q, R, q, cfg, level):
    """int int |field|^q dy dz over the slab, at one resolution level."""
    y, z, wz_jac, wu = _space_grid(Q, R, q, cfg, level)
    # block over z so the temporaries stay bounded at high levels
    block = _z_block(wu.size)
    total = 0.0
    for i in range(0, z.size, block):
        vals = np.abs(field(y[i:i + block], z[i:i + block, None])) ** q
        total += float(np.dot(wz_jac[i:i + block], vals @ wu))
    return total


def _refine(compute, cfg, what):
    """Double the resolution until the estimated relative error of the
    finest value drops below rel_tol.

    The error of the finest level is estimated from the last inter-level
    drift via Richardson extrapolation: with observed convergence order o
    (from the ratio of consecutive drifts, conservatively clipped to at
    least first order) the error is about drift / (2^o - 1).
    """
    vals = []
    for level in range(cfg.max_levels):
        cur = compute(level)
        vals.append(cur)
        if len(vals) < 2:
            continue
        scale = cfg.rel_tol * max(abs(cur), 1e-300)
        drift = abs(vals[-1] - vals[-2])
        if drift <= scale:
            return cur
        if len(vals) >= 3:
            prev_drift = abs(vals[-2] - vals[-3])
            if drift > 0.0 and prev_drift > drift:
                order = min(np.log2(prev_drift / drift), 8.0)
                if order > 1.0 and drift / (2.0**order - 1.0) <= scale:
                    return cur
    raise NonconvergedQuadrature(
        f"{what}: refinement stalled above rel_tol={cfg.rel_tol:g}"
    )


def space_norm(field, Q, R, q, config=None):
    """L^q norm over the slab of a spatial field field(y, z).

    field must be vectorized: y of shape (..., n-1), z broadcastable.
    Raises NonconvergedQuadrature if panel refinement stalls.
    """
    cfg = config or DEFAULT_CONFIG
    val = _refine(lambda lv: _space_pow(field, Q, R, q, cfg, lv), cfg, "space_norm")
    return val ** (1.0 / q)


def _t_nodes(T, count):
    panels = max(count // GL_NODES_PER_PANEL, 1)
    return _composite_gl(0.0, T, panels)


def spacetime_norm(field, Q, R, spec, config=None, time_invariant=False):
    """L^p((0, T); L^q) norm of field(t, y, z) over the slab.

    With time_invariant=True the field is spatial (called as field(y, z))
    and the exact identity ||F|| = T^(1/p) * ||F(0)||_q is used; this is
    the shortcut for fields whose modulus carries no t dependence.
    """
    cfg = config or DEFAULT_CONFIG
    if time_invariant:
        return spec.T ** (1.0 / spec.p) * space_norm(field, Q, R, spec.q, cfg)

    def compute(level):
        t, wt = _t_nodes(spec.T, cfg.t_nodes * 2**level // 2)
        y, z, wz_jac, wu = _space_grid(Q, R, spec.q, cfg, level)
        # fields broadcast in t, so a whole chunk of time nodes shares one
        # pass over the cutoff and profile evaluations; chunk and block
        # sizes shrink with grid size to keep the temporaries bounded
        block = _z_block(wu.size)
        chunk = max(1, int(2_000_000 // (min(block, z.size) * wu.size)))
        acc = 0.0
        for k in range(0, t.size, chunk):
            tk = t[k:k + chunk, None, None]
            pow_q = np.zeros(tk.shape[0])
            for i in range(0, z.size, block):
                vals = np.abs(
                    field(tk, y[i:i + block], z[i:i + block, None])
                ) ** spec.q
                pow_q += (vals @ wu) @ wz_jac[i:i + block]
            acc += np.sum(wt[k:k + chunk] * pow_q ** (spec.p / spec.q))
        return float(acc)

    val = _refine(compute, cfg, "spacetime_norm")
    return val ** (1.0 / spec.p)


def loglog_fit(xs, ys):
    """Least-squares slope of log(y) against log(x).

    Returns (slope, intercept, rms_residual); non-finite or nonpositive
    values are dropped.  Needs at least two surviving points.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(ys) & (ys > 0.0)
    if keep.sum() < 2:
        raise InsufficientPoints("need at least two positive values to fit")
    lx, ly = np.log(xs[keep]), np.log(ys[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    rms = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return float(slope), float(intercept), rms


def sandwich_check(L, derivs, Q, R_grid, q, config=None, slope_tol=0.02,
                   strict=False):
    """Fit the growth exponent of ||Lambda phiR^(d1) phi^(d2)||_q.

    Lambda(y, z) = L(y / z^(beta/2)) for a supplied profile L that lies in
    every L^q; d1 and d2 select derivative orders of the z- and y-cutoffs
    (chain factors R^(-d1 gamma) included, matching the two-sided slab
    bounds whose exponent is (n-1) beta + 2 gamma over 2q, minus d1 gamma).
    """
    cfg = config or DEFAULT_CONFIG
    d1, d2 = derivs
    beta, gamma = Q.beta, Q.gamma
    cut = Q.cutoff

    norms = []
    for R in np.asarray(R_grid, dtype=float):
        rg = R**gamma

        def field(y, z, R=R, rg=rg):
            u = y / z[..., None] ** (beta / 2.0)
            zparts = cut._parts((z - R) / rg)
            yparts = cut._parts(np.sum(np.square(y), axis=-1) / z**2)
            return L(u) * zparts[d1] / rg**d1 * yparts[d2]

        norms.append(space_norm(field, Q, R, q, cfg))

    slope, intercept, rms = loglog_fit(R_grid, norms)
    predicted = ((Q.n - 1) * beta + 2.0 * gamma) / (2.0 * q) - d1 * gamma
    report = {
        "derivs": (d1, d2),
        "q": q,
        "R_grid": list(map(float, R_grid)),
        "norms": list(map(float, norms)),
        "slope": slope,
        "intercept": intercept,
        "rms_residual": rms,
        "predicted": predicted,
        "slope_tol": slope_tol,
        "passed": bool(abs(slope - predicted) <= slope_tol),
    }
    if strict and not report["passed"]:
        from .errors import BoundViolated

        raise BoundViolated(
            f"sandwich slope {slope:.4f} != predicted {predicted:.4f}", report
        )
    return report
