"""Command-line front end for the quasimode laboratory.

Subcommands:

    eigen-check     oscillator eigenpair with a finite-difference residual
    pde-residual    finite-difference certificate of the truncated problem
    exponents       derived exponents and parameter selection
    sweep           norms across an R grid, written as CSV
    fit             log-log slope fits of a sweep CSV against predictions
    counterexample  full pipeline: certificate, sweep, fits, audits, report

Configuration comes from an optional JSON file (--config) with per-flag
overrides; flags win.  Exit codes: 0 success, 1 numerical check failure,
2 invalid configuration; counterexample additionally uses 3 for a
quadrature failure and 4 for an upper-bound audit violation.
"""

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .errors import (
    BoundViolated,
    InsufficientPoints,
    InvalidConfig,
    NonconvergedQuadrature,
    StrichartzLabError,
)
from .mixed_norm import QuadratureConfig
from .oscillator import eigen_residual
from .potential import PROFILES
from .quasimode import build_family
from .scaling_lab import (
    ExponentPlan,
    SweepResult,
    fit_slopes,
    forcing_bound_slope,
    quotient_crossing,
    remainder_bound_slope,
    run_sweep,
    select_parameters,
    upper_bound_audit,
)

CSV_VERSION_LINE = "# strichartz-lab sweep csv v1"

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3
EXIT_AUDIT = 4


@dataclass
class RunConfig:
    """Resolved run parameters; serialized verbatim into every report."""

    n: int = 2
    sigma: float = 0.0
    p: float = 4.0
    profile: str = "sin2"
    gamma: float = None
    alpha: float = None
    R_min_exp: int = 4
    R_max_exp: int = 14
    R_base: float = 2.0
    R: float = 32.0
    fd_step: float = 1e-3
    sample_count: int = 200
    fit_tol: float = 0.02
    rel_tol: float = 1e-7
    z_panels: int = 64
    u_radius: float = 12.0
    t_nodes: int = 65
    max_levels: int = 5
    seed: int = 0
    csv_path: str = "sweep.csv"
    report_path: str = "report.json"

    def validate(self):
        if self.n < 2:
            raise InvalidConfig("n must be at least 2")
        if not 0.0 <= self.sigma < 2.0:
            raise InvalidConfig("sigma must lie in [0, 2)")
        if not np.isfinite(self.p) or self.p < 2.0:
            raise InvalidConfig("p must be finite and at least 2")
        if self.n == 2 and self.p == 2.0:
            raise InvalidConfig("the pair (n, p) = (2, 2) is excluded")
        if self.profile not in PROFILES:
            raise InvalidConfig(
                f"unknown profile {self.profile!r}; available: {sorted(PROFILES)}"
            )
        if self.gamma is not None and not 0.0 < self.gamma < 1.0:
            raise InvalidConfig("gamma must lie in (0, 1)")
        if self.alpha is not None and self.alpha <= 0.0:
            raise InvalidConfig("alpha must be positive")
        if not self.R > 2.0:
            raise InvalidConfig("R must exceed 2")
        if self.R_min_exp > self.R_max_exp:
            raise InvalidConfig("R_min_exp must not exceed R_max_exp")
        if self.R_base**self.R_min_exp < 4.0:
            raise InvalidConfig("R grid must start at 4 or above")
        if self.fd_step <= 0.0 or self.rel_tol <= 0.0:
            raise InvalidConfig("fd_step and rel_tol must be positive")
        return self

    def quadrature(self):
        return QuadratureConfig(
            rel_tol=self.rel_tol,
            z_panels=self.z_panels,
            u_radius=self.u_radius,
            t_nodes=self.t_nodes,
            max_levels=self.max_levels,
        )

    def r_grid(self):
        exps = np.arange(self.R_min_exp, self.R_max_exp + 1)
        return self.R_base ** exps.astype(float)

    def plan(self):
        if self.gamma is None or self.alpha is None:
            auto = select_parameters(self.n, self.sigma, self.p)
            gamma = self.gamma if self.gamma is not None else auto.gamma
            alpha = self.alpha if self.alpha is not None else auto.alpha
        else:
            gamma, alpha = self.gamma, self.alpha
        return ExponentPlan(
            n=self.n, sigma=self.sigma, p=self.p, gamma=gamma, alpha=alpha
        )

    def family(self, gamma):
        return build_family(self.n, self.sigma, profile=self.profile, gamma=gamma)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _emit(obj, stream=None):
    print(json.dumps(_jsonable(obj), indent=2), file=stream or sys.stdout)


def load_config(args):
    """Merge defaults, the optional JSON config file, and flag overrides."""
    values = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise InvalidConfig("config file must contain a JSON object")
        unknown = set(loaded) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for key in RunConfig.__dataclass_fields__:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise InvalidConfig(str(exc))
    return cfg.validate()


def write_sweep_csv(path, result):
    with open(path, "w", newline="") as fh:
        fh.write(CSV_VERSION_LINE + "\n")
        writer = csv.writer(fh)
        writer.writerow(SweepResult.CSV_COLUMNS)
        for row in result.rows():
            writer.writerow([f"{v:.12g}" for v in row])


def read_sweep_csv(path):
    with open(path) as fh:
        first = fh.readline().strip()
        if first != CSV_VERSION_LINE:
            raise InvalidConfig(f"unrecognized sweep CSV version line: {first!r}")
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != SweepResult.CSV_COLUMNS:
            raise InvalidConfig("sweep CSV columns do not match the frozen schema")
        data = np.array([[float(v) for v in row] for row in reader])
    if data.size == 0:
        raise InvalidConfig("sweep CSV contains no data rows")
    cols = {name: data[:, i] for i, name in enumerate(SweepResult.CSV_COLUMNS)}
    with np.errstate(divide="ignore", invalid="ignore"):
        blowup = cols["norm_W"] / cols["norm_Ftilde"]
    return SweepResult(
        R_values=cols["R"],
        T_values=cols["T"],
        norm_f=cols["norm_f"],
        norm_W=cols["norm_W"],
        norm_FR=cols["norm_FR"],
        norm_rem=cols["norm_rem"],
        norm_Ftilde=cols["norm_Ftilde"],
        ratio_Wf=cols["ratio_Wf"],
        ratio_WF=cols["ratio_WF"],
        ratio_ben=cols["ratio_ben"],
        ratio_blowup=blowup,
        ratio_quotient=cols["ratio_quotient"],
        failures=[],
    )


def cmd_eigen_check(cfg):
    Q = cfg.family(gamma=cfg.gamma if cfg.gamma is not None else 0.6)
    rng = np.random.default_rng(cfg.seed)
    samples = rng.uniform(-2.0, 2.0, size=(200, cfg.n - 1))
    # large enough that truncation error dominates roundoff in the
    # second difference, so the printed order is meaningful
    h = 1e-3
    r1 = eigen_residual(Q.eigen, Q.morse.a, samples, fd_step=h)
    r2 = eigen_residual(Q.eigen, Q.morse.a, samples, fd_step=h / 2.0)
    order = float(np.log2(r1 / r2)) if r2 > 0 else np.inf
    passed = r1 <= 1e-5
    print(f"profile         {cfg.profile}")
    print(f"lambda          {Q.eigen.lam:.12g}")
    print(f"residual        {r1:.3e}  (fd_step {h:g})")
    print(f"residual/2      {r2:.3e}")
    print(f"fd order        {order:.3f}")
    print(f"status          {'pass' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_NUMERIC


def cmd_pde_residual(cfg):
    gamma = cfg.gamma if cfg.gamma is not None else 0.6
    alpha = cfg.alpha if cfg.alpha is not None else 1.15
    Q = cfg.family(gamma=gamma)
    cert = Q.residual_certificate(
        cfg.R,
        sample_count=cfg.sample_count,
        fd_step=cfg.fd_step,
        alpha=alpha,
        seed=cfg.seed,
    )
    _emit(cert)
    return EXIT_OK if cert["passed"] else EXIT_NUMERIC


def cmd_exponents(cfg):
    plan = cfg.plan()
    out = plan.as_dict()
    out["auto_selected"] = cfg.gamma is None or cfg.alpha is None
    _emit(out)
    lo, hi = plan.gamma_window
    if not lo < plan.gamma < hi:
        print(
            f"warning: gamma = {plan.gamma:g} is outside the window "
            f"({lo:g}, {hi:g})",
            file=sys.stderr,
        )
    if plan.delta_at_critical <= 0.0:
        print(
            "warning: delta at the critical alpha is nonpositive",
            file=sys.stderr,
        )
    if plan.delta <= 0.0:
        print("warning: delta <= 0, no blow-up predicted", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(cfg):
    plan = cfg.plan()
    Q = cfg.family(gamma=plan.gamma)
    result = run_sweep(plan, Q, cfg.r_grid(), cfg.quadrature())
    write_sweep_csv(cfg.csv_path, result)
    print(f"wrote {cfg.csv_path} ({len(result.R_values)} rows)")
    if result.failures:
        _emit({"quadrature_failures": result.failures}, stream=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_fit(cfg):
    plan = cfg.plan()
    result = read_sweep_csv(cfg.csv_path)
    slopes = fit_slopes(result, plan, fit_tol=cfg.fit_tol)
    _emit({"plan": plan.as_dict(), "slopes": slopes})
    return EXIT_OK if slopes["all_passed"] else EXIT_NUMERIC


def cmd_counterexample(cfg):
    plan = cfg.plan()
    Q = cfg.family(gamma=plan.gamma)
    report = {"config": asdict(cfg), "plan": plan.as_dict()}

    cert = Q.residual_certificate(
        cfg.R, sample_count=cfg.sample_count, fd_step=cfg.fd_step,
        alpha=plan.alpha, seed=cfg.seed,
    )
    report["certificate"] = cert

    result = run_sweep(plan, Q, cfg.r_grid(), cfg.quadrature())
    write_sweep_csv(cfg.csv_path, result)
    report["quadrature_failures"] = result.failures

    status = EXIT_OK
    if result.failures or not np.all(np.isfinite(result.norm_W)):
        status = EXIT_QUADRATURE

    slopes = fit_slopes(result, plan, fit_tol=cfg.fit_tol)
    report["slopes"] = slopes
    report["predicted_bounds"] = {
        "norm_FR_slope": forcing_bound_slope(plan),
        "norm_rem_slope": remainder_bound_slope(plan),
    }

    try:
        report["audit"] = upper_bound_audit(result, plan, fit_tol=cfg.fit_tol)
        audit_ok = True
    except BoundViolated as exc:
        report["audit"] = exc.report
        audit_ok = False

    report["crossing"] = quotient_crossing(result, M=10.0)
    crossing_ok = (
        report["crossing"]["first_crossing_R"] is not None
        or report["crossing"]["extrapolated_log10_R"] is not None
    )

    report["passed"] = bool(
        cert["passed"]
        and slopes["all_passed"]
        and audit_ok
        and crossing_ok
        and status == EXIT_OK
    )
    with open(cfg.report_path, "w") as fh:
        json.dump(_jsonable(report), fh, indent=2)
    print(f"wrote {cfg.csv_path} and {cfg.report_path}")
    print(f"certificate     {'pass' if cert['passed'] else 'FAIL'}")
    print(f"slope checks    {'pass' if slopes['all_passed'] else 'FAIL'}")
    print(f"bound audit     {'pass' if audit_ok else 'FAIL'}")
    cx = report["crossing"]
    if cx["first_crossing_R"] is not None:
        print(f"quotient > 10   at R = {cx['first_crossing_R']:g}")
    elif cx["extrapolated_log10_R"] is not None:
        print(f"quotient > 10   extrapolated at log10 R = "
              f"{cx['extrapolated_log10_R']:.2f}")
    else:
        print("quotient > 10   no crossing predicted")

    if status != EXIT_OK:
        return status
    if not audit_ok:
        return EXIT_AUDIT
    if not report["passed"]:
        return EXIT_NUMERIC
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--n", type=int)
    sub.add_argument("--sigma", type=float)
    sub.add_argument("--p", type=float)
    sub.add_argument("--profile")
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--alpha", type=float)
    sub.add_argument("--seed", type=int)


def _add_sweep_args(sub):
    sub.add_argument("--R-min-exp", dest="R_min_exp", type=int)
    sub.add_argument("--R-max-exp", dest="R_max_exp", type=int)
    sub.add_argument("--R-base", dest="R_base", type=float)
    sub.add_argument("--fit-tol", dest="fit_tol", type=float)
    sub.add_argument("--rel-tol", dest="rel_tol", type=float)
    sub.add_argument("--z-panels", dest="z_panels", type=int)
    sub.add_argument("--u-radius", dest="u_radius", type=float)
    sub.add_argument("--t-nodes", dest="t_nodes", type=int)
    sub.add_argument("--max-levels", dest="max_levels", type=int)
    sub.add_argument("--csv", dest="csv_path")
    sub.add_argument("--report", dest="report_path")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="strichartz-lab",
        description="numerical laboratory for a Strichartz-estimate counterexample",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("eigen-check", help="oscillator eigenpair residual")
    _add_common(s)
    s.set_defaults(func=cmd_eigen_check)

    s = subs.add_parser("pde-residual", help="finite-difference certificate")
    _add_common(s)
    s.add_argument("--R", type=float)
    s.add_argument("--fd-step", dest="fd_step", type=float)
    s.add_argument("--sample-count", dest="sample_count", type=int)
    s.set_defaults(func=cmd_pde_residual)

    s = subs.add_parser("exponents", help="derived exponents and windows")
    _add_common(s)
    s.set_defaults(func=cmd_exponents)

    s = subs.add_parser("sweep", help="norms across an R grid, written as CSV")
    _add_common(s)
    _add_sweep_args(s)
    s.set_defaults(func=cmd_sweep)

    s = subs.add_parser("fit", help="slope fits of an existing sweep CSV")
    _add_common(s)
    _add_sweep_args(s)
    s.set_defaults(func=cmd_fit)

    s = subs.add_parser("counterexample", help="full pipeline with report")
    _add_common(s)
    _add_sweep_args(s)
    s.add_argument("--R", type=float)
    s.add_argument("--fd-step", dest="fd_step", type=float)
    s.add_argument("--sample-count", dest="sample_count", type=int)
    s.set_defaults(func=cmd_counterexample)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
    except (InvalidConfig, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(cfg)
    except InvalidConfig as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonconvergedQuadrature as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE if args.command == "counterexample" else EXIT_NUMERIC
    except InsufficientPoints as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except StrichartzLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
