"""Command-line interface: run, sweep, corrector, reinit-demo, stretch-check.

Every RunConfig field is a flag; --config reads the same flat key = value
format the driver writes, and explicit flags override the file.  Exit codes:
0 success, 1 at least one failed run, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .driver import (
    RunConfig,
    parse_config,
    run_corrector,
    run_single,
    run_sweep,
    write_sweep_csv,
)
from .errors import ConfigError
from .flow import (
    AffineUnitNormal3D,
    FlowSpec,
    PolyVelocity3D,
    segment_stretch_oracle,
    stretch_rate_curl_form,
    stretch_rate_general,
)
from .grid import Grid
from .reinit import ReinitProfile, max_gradient, reinit_field, squeezing_field

STRETCH_SEED = 2013  # fixed: runs are seed-free and reproducible


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--model", choices=("inviscid", "curvature", "viscous", "strain"))
    p.add_argument("--A", type=float, help="cellular flow amplitude")
    p.add_argument("--d", type=float, help="Markstein number")
    p.add_argument("--s-L", dest="s_L", type=float, help="laminar speed")
    p.add_argument("--n", type=int, help="grid nodes per axis")
    p.add_argument("--t-max", dest="t_max", type=float, help="simulated time (<=0: auto)")
    p.add_argument("--cfl-safety", dest="cfl_safety", type=float)
    p.add_argument("--scheme", choices=("auto", "explicit", "semi_implicit"))
    p.add_argument("--reinit-every", dest="reinit_every", type=int)
    p.add_argument("--reinit-eps", dest="reinit_eps", type=float)
    p.add_argument("--reinit-iters", dest="reinit_iters", type=int)
    p.add_argument("--reinit-pseudo", dest="reinit_pseudo", type=float)
    p.add_argument("--grad-trigger", dest="grad_trigger", type=float)
    p.add_argument("--probe-x", dest="probe_x", type=float)
    p.add_argument("--probe-y", dest="probe_y", type=float)
    p.add_argument("--outdir")


def _config_from_args(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    for name in (
        "model", "A", "d", "s_L", "n", "t_max", "cfl_safety", "scheme",
        "reinit_every", "reinit_eps", "reinit_iters", "reinit_pseudo",
        "grad_trigger", "probe_x", "probe_y", "outdir",
    ):
        v = getattr(args, name, None)
        if v is not None:
            setattr(cfg, name, v)
    cfg.validate()
    return cfg


def _parse_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    res = run_single(cfg)
    if res.failed:
        print(f"run failed: {res.failure_reason}", file=sys.stderr)
        return 1
    w, p = res.estimate_window, res.estimate_pointwise
    print(f"{cfg.run_name()}: s_T(window)={w.s_T:.6g} s_T(pointwise)={p.s_T:.6g}")
    if res.quenched:
        print(f"quenched at t={res.quench_time:.4g}")
    return 0


def _cmd_sweep(args) -> int:
    base = _config_from_args(args)
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    A_values = _parse_list(args.A_list)
    d_values = _parse_list(args.d_list)
    if not A_values or not models or not d_values:
        rows = []
    else:
        rows = run_sweep(base, A_values, d_values, models, workers=args.workers)
    out = Path(base.outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(rows, out / "sweep.csv")
    failed = [r for r in rows if r["failed"]]
    for r in rows:
        tag = "FAILED " + r["failure_reason"] if r["failed"] else f"s_T={r['s_T']:.6g}"
        print(f"{r['model']:>9} A={r['A']:<6g} d={r['d']:<6g} {tag}")
    return 1 if failed else 0


def _cmd_corrector(args) -> int:
    base = _config_from_args(args)
    rows = run_corrector(base, _parse_list(args.A_list), _parse_list(args.d_list))
    for r in rows:
        regime = "" if r["guaranteed_regime"] else " (outside guaranteed regime)"
        conv = "converged" if r["converged"] else "NOT converged"
        print(
            f"A={r['A']:<6g} d={r['d']:<6g} H={r['H_bar']:.8g} "
            f"{conv} in {r['iterations']} iters, bound {r['bound']:.4g}{regime}"
        )
    return 0


def _cmd_reinit_demo(args) -> int:
    grid = Grid(args.n, args.n)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    phi0 = squeezing_field(grid)
    rows = []
    for iters in (0, 1, 10):
        phi = phi0
        profile = ReinitProfile(smooth_iters=iters)
        trace = [max_gradient(phi)]
        for _ in range(args.steps):
            phi, _ = reinit_field(phi, profile, pseudo_time=grid.hx)
            trace.append(max_gradient(phi))
        rows.append((iters, trace))
        print(f"smooth_iters={iters}: max|Dphi| {trace[0]:.3f} -> {trace[-1]:.3f}")
    with open(out / "reinit-demo.csv", "w") as fh:
        fh.write("step," + ",".join(f"smooth_{it}" for it, _ in rows) + "\n")
        for k in range(args.steps + 1):
            fh.write(
                f"{k}," + ",".join(f"{tr[k]:.17g}" for _, tr in rows) + "\n"
            )
    return 0


def _cmd_stretch_check(args) -> int:
    rng = np.random.default_rng(STRETCH_SEED)
    bad = 0
    print("2D segment-transport oracle vs closed form (tol 1e-3):")
    for k in range(20):
        A = rng.uniform(0.5, 4.0)
        flow = FlowSpec("cellular", A)
        x = rng.uniform(0, 1, 2)
        theta = rng.uniform(0, 2 * np.pi)
        tangent = np.array([np.cos(theta), np.sin(theta)])
        normal = np.array([-tangent[1], tangent[0]])
        sample = flow.sample(x[0], x[1])
        exact = stretch_rate_general(sample, normal)
        measured = segment_stretch_oracle(flow, x, tangent)
        err = abs(exact - measured)
        ok = err <= 1e-3
        bad += not ok
        print(f"  case {k:2d}: A={A:5.2f} exact={exact:+.6f} "
              f"oracle={measured:+.6f} err={err:.2e} {'ok' if ok else 'FAIL'}")
    print("3D curl-form identity (tol 1e-10):")
    for k in range(10):
        vel = PolyVelocity3D.random(rng)
        nf = AffineUnitNormal3D.random(rng)
        x = rng.uniform(-1, 1, 3)
        sample = vel.sample(x)
        n, Dn = nf.sample(x)
        general = stretch_rate_general(sample, n)
        curl = stretch_rate_curl_form(sample.V, sample.DV, n, Dn)
        err = abs(general - curl)
        ok = err <= 1e-10
        bad += not ok
        print(f"  case {k:2d}: general={general:+.8f} curl={curl:+.8f} "
              f"err={err:.2e} {'ok' if ok else 'FAIL'}")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfront",
        description="Front propagation and flame-speed computation in cellular flows",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single simulation run")
    _add_config_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="Cartesian sweep over (model, A, d)")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--models", default="inviscid", help="comma-separated models")
    p_sweep.add_argument("--A-list", dest="A_list", default="", help="comma-separated A values")
    p_sweep.add_argument("--d-list", dest="d_list", default="0", help="comma-separated d values")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_corr = sub.add_parser("corrector", help="effective-speed fixed-point solves")
    _add_config_flags(p_corr)
    p_corr.add_argument("--A-list", dest="A_list", default="0")
    p_corr.add_argument("--d-list", dest="d_list", default="1")
    p_corr.set_defaults(func=_cmd_corrector)

    p_re = sub.add_parser("reinit-demo", help="level-bundle squeezing demonstration")
    p_re.add_argument("--n", type=int, default=128)
    p_re.add_argument("--steps", type=int, default=25)
    p_re.add_argument("--outdir", default="out")
    p_re.set_defaults(func=_cmd_reinit_demo)

    p_st = sub.add_parser("stretch-check", help="stretch-rate oracle suite")
    p_st.set_defaults(func=_cmd_stretch_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
