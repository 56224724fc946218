"""Quasimode family for the perturbed Schrodinger operator.

Starting from the oscillator ground state v and the scaling exponent
beta = 1 + sigma/2, the building blocks are

    w(y, z)      = v(y / z^(beta/2))
    W(t, y, z)   = exp(i lam t / z^beta) w(y, z)
    W_R          = W * phiR * phi          (slab truncation)

where phiR cuts z to the slab |z - R| <= R^gamma and phi cuts |y| <= z.
W solves the model equation with an explicit forcing F; the truncation
adds a cutoff-commutator forcing G_R, so W_R solves the truncated Cauchy
problem with data f_R and forcing F_R = phiR phi F + G_R.  Every formula
here is validated operationally by residual_certificate: a central
finite-difference residual of the truncated equation that is the single
ground truth against transcription errors.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.stats import qmc

from .errors import NonpositiveZ
from .oscillator import Eigenpair, eval_G, eval_H, eval_v
from .potential import HomogeneousPotential, MorseData


def _smoothstep_parts(x):
    """(psi, psi', psi'') for psi = expit(1/(1-x) - 1/x) on 0 < x < 1."""
    h = 1.0 / x - 1.0 / (1.0 - x)
    psi = expit(-h)
    # expit(-h) * expit(h) is a stable form of psi * (1 - psi)
    bell = psi * expit(h)
    h1 = -1.0 / x**2 - 1.0 / (1.0 - x) ** 2
    h2 = 2.0 / x**3 - 2.0 / (1.0 - x) ** 3
    d1 = -h1 * bell
    d2 = -h2 * bell - h1 * d1 * (1.0 - 2.0 * psi)
    return psi, d1, d2


class CutoffProfile:
    """Smooth bump: identically 1 on |s| < 1/2 and 0 on |s| > 1.

    On the shoulders the profile is psi(2(1 - |s|)) with the standard
    exponential smooth step, so all derivatives vanish to machine
    precision at the seam points and the first two derivatives have
    closed forms.
    """

    def _parts(self, s):
        s_arr = np.atleast_1d(np.asarray(s, dtype=float))
        u = np.abs(s_arr)
        val = np.where(u <= 0.5, 1.0, 0.0)
        d1 = np.zeros_like(val)
        d2 = np.zeros_like(val)
        shoulder = (u > 0.5) & (u < 1.0)
        if np.any(shoulder):
            x = 2.0 * (1.0 - u[shoulder])
            psi, p1, p2 = _smoothstep_parts(x)
            val[shoulder] = psi
            d1[shoulder] = -2.0 * p1 * np.sign(s_arr[shoulder])
            d2[shoulder] = 4.0 * p2
        if np.ndim(s) == 0:
            return val[0], d1[0], d2[0]
        shape = np.shape(s)
        return val.reshape(shape), d1.reshape(shape), d2.reshape(shape)

    def value(self, s):
        return self._parts(s)[0]

    def first(self, s):
        return self._parts(s)[1]

    def second(self, s):
        return self._parts(s)[2]


@dataclass
class QuasimodeFamily:
    """All parameters and evaluators of the truncated quasimode pipeline.

    Immutable after construction; every evaluator is a pure function and
    broadcasts over numpy arrays (points y carry a trailing axis of
    length n - 1).
    """

    n: int
    sigma: float
    gamma: float
    eigen: Eigenpair
    morse: MorseData
    potential: HomogeneousPotential
    cutoff: CutoffProfile

    def __post_init__(self):
        if not 0.0 <= self.sigma < 2.0:
            raise ValueError("sigma must lie in [0, 2)")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.eigen.dim != self.n - 1:
            raise ValueError("eigenpair dimension must equal n - 1")

    @property
    def beta(self):
        return 1.0 + self.sigma / 2.0

    # -- coordinate helpers ------------------------------------------------

    def _yz(self, y, z):
        y = np.asarray(y, dtype=float)
        if y.ndim == 0:
            y = y[None]
        z = np.asarray(z, dtype=float)
        lead = np.broadcast_shapes(y.shape[:-1], z.shape)
        y = np.broadcast_to(y, lead + y.shape[-1:])
        z = np.broadcast_to(z, lead)
        return y, z

    def _require_positive_z(self, z):
        if np.any(np.asarray(z) <= 0.0):
            raise NonpositiveZ("evaluation requires z > 0")

    def _u(self, y, z):
        return y / np.asarray(z, dtype=float)[..., None] ** (self.beta / 2.0)

    # -- untruncated pieces ------------------------------------------------

    def eval_w(self, y, z):
        """Rescaled ground state v(y / z^(beta/2))."""
        y, z = self._yz(y, z)
        self._require_positive_z(z)
        return eval_v(self.eigen, self._u(y, z))

    def eval_W(self, t, y, z):
        """Phase-rotated profile exp(i lam t / z^beta) w(y, z)."""
        y, z = self._yz(y, z)
        self._require_positive_z(z)
        t = np.asarray(t, dtype=float)
        phase = np.exp(1j * self.eigen.lam * t / z**self.beta)
        return phase * self.eval_w(y, z)

    def eval_F(self, t, y, z):
        """Forcing of the untruncated equation (pure z-curvature of W).

        At fixed (y, z) the phase-stripped bracket is an exact degree-2
        polynomial in t with real coefficients P, Q, S:
        z^2 e^(-i theta) F = P + i t Q + t^2 S.
        """
        y, z = self._yz(y, z)
        self._require_positive_z(z)
        t = np.asarray(t, dtype=float)
        P, Q, S = self._f_bracket(y, z)
        phase = np.exp(1j * self.eigen.lam * t / z**self.beta)
        return phase * (P + 1j * t * Q + t * t * S) / z**2

    def _f_bracket(self, y, z):
        """Real coefficients (P, Q, S) of z^2 e^(-i theta) F."""
        beta, lam = self.beta, self.eigen.lam
        u = self._u(y, z)
        v = eval_v(self.eigen, u)
        g = eval_G(self.eigen, u)
        hh = eval_H(self.eigen, u)
        zb = z**beta
        P = -beta * (beta + 2.0) / 4.0 * g - beta**2 / 4.0 * hh
        Q = -(beta * (beta + 1.0) * lam / zb) * v - (beta**2 * lam / zb) * g
        S = (beta**2 * lam**2 / zb**2) * v
        return P, Q, S

    # -- cutoffs -----------------------------------------------------------

    def _check_R(self, R):
        if not R > 2.0:
            raise ValueError("truncation radius R must exceed 2")

    def _cut_z(self, R, z):
        """phiR and its z-derivatives (chain factors 1/R^gamma included)."""
        rg = R**self.gamma
        s = (z - R) / rg
        val, d1, d2 = self.cutoff._parts(s)
        return val, d1 / rg, d2 / rg**2

    def _cut_y(self, y, z):
        """phi(|y|^2 / z^2) and its raw derivatives at that argument."""
        m = np.sum(np.square(y), axis=-1) / z**2
        return self.cutoff._parts(m)

    def _safe_z(self, z, R):
        mask = np.asarray(z) > 0.0
        return np.where(mask, z, R), mask

    # -- truncated pieces --------------------------------------------------

    def eval_fR(self, R, y, z):
        """Initial datum phiR phi w; zero outside the support slab."""
        self._check_R(R)
        y, z = self._yz(y, z)
        zs, mask = self._safe_z(z, R)
        phiR = self._cut_z(R, zs)[0]
        phiy = self._cut_y(y, zs)[0]
        return np.where(mask, phiR * phiy * self.eval_w(y, zs), 0.0)

    def eval_WR(self, R, t, y, z):
        """Truncated solution W phiR phi; zero outside the slab."""
        self._check_R(R)
        y, z = self._yz(y, z)
        zs, mask = self._safe_z(z, R)
        phiR = self._cut_z(R, zs)[0]
        phiy = self._cut_y(y, zs)[0]
        return np.where(mask, phiR * phiy * self.eval_W(t, y, zs), 0.0)

    def eval_GR(self, R, t, y, z):
        """Cutoff-commutator forcing from truncating W to the slab.

        Collects one group proportional to w (cutoff derivatives from the
        Laplacian plus two time-proportional transport terms) and one
        proportional to Gamma = G(y / z^(beta/2)).
        """
        self._check_R(R)
        y, z = self._yz(y, z)
        self._require_positive_z(z)
        return self._GR_core(R, np.asarray(t, dtype=float), y, z)

    def _GR_core(self, R, t, y, z):
        beta, lam = self.beta, self.eigen.lam
        n = self.n
        phiR, phiR1, phiR2 = self._cut_z(R, z)
        phiy, phiy1, phiy2 = self._cut_y(y, z)
        u = self._u(y, z)
        w = eval_v(self.eigen, u)
        gamma_fn = eval_G(self.eigen, u)
        y2 = np.sum(np.square(y), axis=-1)

        w_group = (
            2.0 * (n - 1) / z**2 * phiR * phiy1
            + 4.0 * y2 / z**4 * phiR * phiy2
            + phiR2 * phiy
            - 4.0 * y2 / z**3 * phiR1 * phiy1
            + 6.0 * y2 / z**4 * phiR * phiy1
            + 4.0 * y2**2 / z**6 * phiR * phiy2
            + 1j * (
                -2.0 * beta * lam * t / z ** (beta + 1.0) * phiR1 * phiy
                + 4.0 * beta * lam * t * y2 / z ** (beta + 4.0) * phiR * phiy1
            )
        )
        g_group = (
            4.0 / z**2 * phiR * phiy1
            - beta / z * phiR1 * phiy
            + 2.0 * beta * y2 / z**4 * phiR * phiy1
        )
        phase = np.exp(1j * lam * t / z**beta)
        return phase * (-w * w_group - gamma_fn * g_group)

    def eval_FR(self, R, t, y, z):
        """Total forcing of the truncated problem: phiR phi F + G_R."""
        self._check_R(R)
        y, z = self._yz(y, z)
        self._require_positive_z(z)
        return self._FR_core(R, np.asarray(t, dtype=float), y, z)

    def _FR_core(self, R, t, y, z):
        phiR = self._cut_z(R, z)[0]
        phiy = self._cut_y(y, z)[0]
        return phiR * phiy * self.eval_F(t, y, z) + self._GR_core(R, t, y, z)

    def eval_remainder_forcing(self, R, t, y, z):
        """Taylor-remainder channel z^(-sigma) R(y/z) W_R of the potential.

        Identically zero outside the cone |y| < z (the y-cutoff support),
        so no cone precondition is needed.
        """
        self._check_R(R)
        y, z = self._yz(y, z)
        zs, mask = self._safe_z(z, R)
        phiy, _, _ = self._cut_y(y, zs)
        inside = mask & (phiy > 0.0)
        u = y / zs[..., None]
        quad = np.einsum("...i,ij,...j->...", u, self.morse.a.entries, u)
        rem = zs ** (-self.sigma) * (self.potential.profile(u) - quad)
        out = np.where(inside, rem, 0.0) * self.eval_WR(R, t, y, zs)
        return np.where(mask, out, 0.0)

    def eval_Ftilde(self, R, alpha, t, y, z):
        """Forcing of the auxiliary problem for the true potential.

        Indicator-gated to t in (0, R^alpha): F_R plus the remainder
        channel inside the window, exactly zero outside.
        """
        self._check_R(R)
        y, z = self._yz(y, z)
        t = np.asarray(t, dtype=float)
        window = (t > 0.0) & (t < R**alpha)
        zs, mask = self._safe_z(z, R)
        val = self._FR_core(R, t, y, zs) + self.eval_remainder_forcing(
            R, t, y, zs
        )
        return np.where(window & mask, val, 0.0)

    # -- finite-difference ground truth -------------------------------------

    def residual_certificate(
        self,
        R,
        sample_count=200,
        fd_step=1e-3,
        alpha=1.15,
        tol=1e-3,
        seed=0,
    ):
        """Finite-difference residual of the truncated Cauchy problem.

        Checks i dt W_R - Lap W_R + z^(-2 beta) (y.a.y) W_R = F_R at
        quasi-random points in the support slab, with central differences
        at fd_step and fd_step/2.  Residuals are relative to the natural
        field scale max(|lam z^-beta W_R| + |F_R|).  Passing requires the
        coarse residual below tol and a halving ratio consistent with
        second-order truncation error.
        """
        self._check_R(R)
        d = self.n - 1
        sampler = qmc.Halton(d=d + 2, scramble=True, seed=seed)
        pts = sampler.random(sample_count)
        t = pts[:, 0] * R**alpha
        z = R - R**self.gamma + 2.0 * R**self.gamma * pts[:, 1]
        b_min = float(np.linalg.eigvalsh(self.eigen.sqrt_a)[0])
        u = (2.0 * pts[:, 2:] - 1.0) * 3.0 / np.sqrt(b_min)
        y = u * z[:, None] ** (self.beta / 2.0)

        a = self.morse.a.entries
        pot = np.einsum("ki,ij,kj->k", y, a, y) / z ** (2.0 * self.beta)
        W0 = self.eval_WR(R, t, y, z)
        FR = self.eval_FR(R, t, y, z)
        scale = float(
            np.max(np.abs(self.eigen.lam / z**self.beta * W0) + np.abs(FR))
        )

        def max_resid(h):
            dt = (self.eval_WR(R, t + h, y, z) - self.eval_WR(R, t - h, y, z)) / (
                2.0 * h
            )
            lap = (
                self.eval_WR(R, t, y, z + h)
                - 2.0 * W0
                + self.eval_WR(R, t, y, z - h)
            )
            for i in range(d):
                step = np.zeros(d)
                step[i] = h
                lap += (
                    self.eval_WR(R, t, y + step, z)
                    - 2.0 * W0
                    + self.eval_WR(R, t, y - step, z)
                )
            lap /= h * h
            resid = 1j * dt - lap + pot * W0 - FR
            return float(np.max(np.abs(resid)))

        h = float(fd_step)
        r1 = max_resid(h) / scale
        r2 = max_resid(h / 2.0) / scale
        ratio = r1 / r2 if r2 > 0 else np.inf
        # at large R the truncation error of the differences falls below
        # the fixed cancellation noise eps/h^2, so the halving ratio
        # degenerates; residuals a thousandfold below tol still certify
        # the identity
        roundoff_limited = r1 <= tol * 1e-3
        return {
            "R": float(R),
            "alpha": float(alpha),
            "fd_step": h,
            "sample_count": int(sample_count),
            "scale": scale,
            "max_rel_residual": r1,
            "max_rel_residual_half_step": r2,
            "halving_ratio": ratio,
            "convergence_order": float(np.log2(ratio)) if np.isfinite(ratio) else np.inf,
            "tol": float(tol),
            "roundoff_limited": bool(roundoff_limited),
            "passed": bool(
                r1 <= tol and (roundoff_limited or 2.8 <= ratio <= 5.2)
            ),
        }


def build_family(n, sigma, profile="sin2", gamma=0.6):
    """Assemble the full pipeline for a named profile."""
    from .oscillator import ground_state
    from .potential import extract_morse, make_potential

    pot = make_potential(profile, n, sigma)
    morse = extract_morse(pot)
    eigen = ground_state(morse.a)
    return QuasimodeFamily(
        n=n,
        sigma=sigma,
        gamma=gamma,
        eigen=eigen,
        morse=morse,
        potential=pot,
        cutoff=CutoffProfile(),
    )
