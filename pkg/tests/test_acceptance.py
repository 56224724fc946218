"""Acceptance gate: one check per criterion, one printed verdict line each.

All expected numbers are either closed-form hand substitutions into the
exponent formulas or oracle values derived independently in the unit
tests; nothing here is tuned to the implementation.
"""

import math

import numpy as np
import pytest

import strichartzlab as sl
from strichartzlab.mixed_norm import QuadratureConfig, sandwich_check, space_norm
from strichartzlab.oscillator import eigen_residual
from strichartzlab.scaling_lab import (
    fit_slopes,
    forcing_bound_slope,
    quotient_crossing,
    remainder_bound_slope,
    upper_bound_audit,
)


def _verdict(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name} {detail}".rstrip())
    assert ok, f"{name}: {detail}"


def test_criterion_1_eigenpair(ref_family):
    Q = ref_family
    rng = np.random.default_rng(0)
    samples = rng.uniform(-2.0, 2.0, size=(200, 1))
    resid = eigen_residual(Q.eigen, Q.morse.a, samples, fd_step=1e-4)
    # the convergence order is measured at steps where truncation error
    # still dominates double-precision roundoff in the second difference
    r_coarse = eigen_residual(Q.eigen, Q.morse.a, samples, fd_step=1e-2)
    r_half = eigen_residual(Q.eigen, Q.morse.a, samples, fd_step=5e-3)
    order = math.log2(r_coarse / r_half)
    ok = resid <= 1e-5 and abs(order - 2.0) <= 0.2
    _verdict(
        "criterion 1: eigenpair residual",
        ok,
        f"residual={resid:.2e} (<=1e-5), order={order:.3f} (2 +- 0.2)",
    )


def test_criterion_2_pde_identity(ref_family):
    Q = ref_family
    worst = []
    for R in (16.0, 64.0, 256.0):
        cert = Q.residual_certificate(R, sample_count=200, fd_step=1e-3)
        worst.append(
            (R, cert["max_rel_residual"], cert["halving_ratio"], cert["passed"])
        )
    ok = all(w[3] for w in worst)
    detail = "; ".join(
        f"R={int(R)}: resid={r:.1e}, ratio={ratio:.2f}" for R, r, ratio, _ in worst
    )
    _verdict("criterion 2: PDE residual certificate", ok, detail)


def test_criterion_3_two_sided_slopes(ref_sweep, ref_plan):
    fits = fit_slopes(ref_sweep, ref_plan, fit_tol=0.02)
    sf, sW = fits["norm_f"], fits["norm_W"]
    ok = (
        abs(sf["slope"] - 0.55) <= 0.02
        and abs(sW["slope"] - 0.5625) <= 0.02
        and sf["predicted"] == pytest.approx(0.55)
        and sW["predicted"] == pytest.approx(0.5625)
    )
    _verdict(
        "criterion 3: datum/solution norm slopes",
        ok,
        f"slope_f={sf['slope']:.4f} (0.55 +- 0.02), "
        f"slope_W={sW['slope']:.4f} (0.5625 +- 0.02)",
    )


def test_criterion_4_sandwich_slopes(ref_family):
    Q = ref_family
    grid = 2.0 ** np.arange(4, 15)
    L = lambda u: sl.eval_G(Q.eigen, u)
    results = []
    for derivs, predicted in (((0, 0), 0.55), ((1, 0), -0.05), ((2, 0), -0.65)):
        rep = sandwich_check(L, derivs, Q, grid, 2.0, slope_tol=0.02)
        results.append((derivs, rep["slope"], predicted, rep["passed"]))
    ok = all(r[3] for r in results)
    detail = "; ".join(
        f"d={d}: {s:.4f} ({p} +- 0.02)" for d, s, p, _ in results
    )
    _verdict("criterion 4: sandwich-bound slopes", ok, detail)


def test_criterion_5_upper_bound_audits(ref_sweep, ref_plan):
    # formula: alpha/p' + A/(2 q') + max{-2 gamma, 2 alpha - (2 beta + 2)}
    # at the reference configuration: 0.8625 + 0.825 - 1.2 = 0.4875, and
    # the remainder channel 0.8625 - 1.5 + 0.825 = 0.1875
    fb = forcing_bound_slope(ref_plan)
    rb = remainder_bound_slope(ref_plan)
    assert fb == pytest.approx(0.4875, abs=1e-12)
    assert rb == pytest.approx(0.1875, abs=1e-12)
    report = upper_bound_audit(ref_sweep, ref_plan, fit_tol=0.02)
    comp = report["components"]
    mf = comp["norm_FR"]["measured_slope"]
    mr = comp["norm_rem"]["measured_slope"]
    ok = report["passed"] and mf <= fb + 0.02 and mr <= rb + 0.02
    _verdict(
        "criterion 5: forcing upper-bound audits",
        ok,
        f"forcing slope {mf:.4f} <= {fb:.4f}+0.02, "
        f"remainder slope {mr:.4f} <= {rb:.4f}+0.02",
    )


def test_criterion_6_exponent_engine():
    k = sl.compute_kappa(2, 0.0, 0.6, 1.15, 4.0)
    d = sl.compute_delta(2, 0.0, 0.6, 1.15, 4.0)
    dc = sl.delta_at_critical(2, 0.0, 0.6)
    rng = np.random.default_rng(6)
    max_gap = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 8))
        sigma = float(rng.uniform(0.0, 2.0))
        gamma = float(rng.uniform(0.05, 0.95))
        gap = abs(
            sl.delta_at_critical(n, sigma, gamma)
            - sl.delta_at_critical_closed_form(n, sigma, gamma)
        )
        max_gap = max(max_gap, gap)
    ok = (
        abs(k - 0.075) <= 1e-12
        and abs(d - 0.075) <= 1e-12
        and abs(dc - 0.1) <= 1e-12
        and max_gap <= 1e-12
    )
    _verdict(
        "criterion 6: exponent engine",
        ok,
        f"kappa={k:.4f}, delta={d:.4f}, delta_at_critical={dc:.4f}, "
        f"route gap={max_gap:.1e}",
    )


def test_criterion_7_counterexample(ref_sweep, ref_plan, sigma1_case, n3_case):
    lines = []
    ok = True
    for label, (plan, result) in (
        ("n=2 sigma=0", (ref_plan, ref_sweep)),
        ("n=2 sigma=1", sigma1_case),
        ("n=3 sigma=0 p=2", n3_case),
    ):
        r = result.ratio_blowup
        finite = np.isfinite(r)
        increasing = bool(np.all(np.diff(r[finite][2:]) > 0.0))
        slope = sl.loglog_fit(result.R_values[finite], r[finite])[0]
        crossing = quotient_crossing(result, M=10.0)
        crossed = (
            crossing["first_crossing_R"] is not None
            or crossing["extrapolated_log10_R"] is not None
        )
        case_ok = increasing and slope >= plan.delta - 0.02 and crossed
        ok = ok and case_ok
        lines.append(
            f"{label}: slope={slope:.4f} (>= {plan.delta - 0.02:.4f}), "
            f"increasing={increasing}, crossing={'grid' if crossing['first_crossing_R'] else 'extrapolated'}"
        )
    _verdict("criterion 7: Strichartz quotient blow-up", ok, "; ".join(lines))


def test_criterion_8_quadrature_oracle(ref_family):
    from strichartzlab.mixed_norm import u_quadrature

    Q = ref_family
    worst = 0.0
    for q in (1.0, 2.0, 4.0):
        pts, w = u_quadrature(Q.eigen.sqrt_a, q, 1)
        val = np.sum(w * np.exp(-q * np.sum(pts**2, axis=-1) / 2.0))
        worst = max(worst, abs(val - math.sqrt(2.0 * math.pi / q)))
    base = QuadratureConfig()
    fine = QuadratureConfig(z_panels=base.z_panels * 2, t_nodes=base.t_nodes * 2)
    R = 64.0
    a = space_norm(lambda y, z: Q.eval_fR(R, y, z), Q, R, 2.0, base)
    b = space_norm(lambda y, z: Q.eval_fR(R, y, z), Q, R, 2.0, fine)
    drift = abs(a - b) / a
    ok = worst <= 1e-8 and drift <= 10.0 * base.rel_tol
    _verdict(
        "criterion 8: quadrature oracle",
        ok,
        f"gaussian error={worst:.1e} (<=1e-8), doubling drift={drift:.1e} "
        f"(<= {10.0 * base.rel_tol:.0e})",
    )
