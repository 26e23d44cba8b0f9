"""Single-run driver, parameter sweeps, and artifact output.

A run advances u from zero with the scheme matched to the model, records the
burned volume and a probe value every step, applies reinitialization on its
cadence, and estimates the front speed two ways.  Artifacts land in
outdir/run-<model>-A<val>-d<val>-n<grid>/ as flat text files so sweep
post-processing can go by filename convention.
"""

from __future__ import annotations

import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .corrector import corrector_iterate
from .errors import ConfigError, GFrontError
from .flow import FlowSpec
from .grid import AffineField, Grid, evaluate_stencils, write_snapshot
from .hamiltonian import (
    curvature_term,
    hamiltonian_inviscid,
    hamiltonian_strain,
    laplacian_field,
    strain_rate_field,
)
from .metrics import (
    DiagnosticsSeries,
    SpeedEstimate,
    detect_quench,
    estimate_pointwise,
    estimate_window_average,
    extract_zero_level,
    record_diagnostics,
)
from .reinit import ReinitProfile, reinit_field
from .stepping import (
    SimState,
    compute_dt,
    rk_step_explicit,
    semi_implicit_curvature_step,
    semi_implicit_viscous_step,
)
from .weno import weno_derivatives

MODELS = ("inviscid", "curvature", "viscous", "strain")
SEMI_IMPLICIT_THRESHOLD = 2.0  # in units of h: semi-implicit when d > 2h


@dataclass
class RunConfig:
    """Flat, fully deterministic description of one simulation run."""

    model: str = "inviscid"
    A: float = 0.0
    d: float = 0.0
    s_L: float = 1.0
    n: int = 200
    t_max: float = 0.0  # <= 0 selects the duration policy max(3, 30/(1+A))
    cfl_safety: float = 0.5
    scheme: str = "auto"  # auto | explicit | semi_implicit
    reinit_every: int = -1  # -1: model default (100 hyperbolic, 0 diffusive)
    reinit_eps: float = 0.1
    reinit_iters: int = 5
    reinit_pseudo: float = 2.0  # pseudo-time per reinit call, in units of h
    grad_trigger: float = 20.0
    probe_x: float = 0.0
    probe_y: float = 0.0
    outdir: str = "out"

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"unknown model '{self.model}'")
        if self.scheme not in ("auto", "explicit", "semi_implicit"):
            raise ConfigError(f"unknown scheme '{self.scheme}'")
        if self.model == "strain" and self.scheme == "semi_implicit":
            raise ConfigError("the strain model only has an explicit scheme")
        if self.s_L <= 0:
            raise ConfigError("s_L must be positive")
        if self.d < 0:
            raise ConfigError("d must be nonnegative")
        if self.n < 8:
            raise ConfigError("grid must be at least 8")

    def resolved_t_max(self) -> float:
        if self.t_max > 0:
            return self.t_max
        return max(3.0, 30.0 / (1.0 + abs(self.A)))

    def run_name(self) -> str:
        return f"run-{self.model}-A{self.A:g}-d{self.d:g}-n{self.n}"


def write_config(cfg: RunConfig, path) -> None:
    with open(path, "w") as fh:
        fh.write("# gfront run configuration\n")
        for f in fields(cfg):
            v = getattr(cfg, f.name)
            if isinstance(v, float):
                fh.write(f"{f.name} = {v:.17g}\n")
            else:
                fh.write(f"{f.name} = {v}\n")


def parse_config(path) -> RunConfig:
    """Read a flat key = value file; '#' starts a comment."""
    known = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
            values[key] = val
    cfg = RunConfig()
    for key, val in values.items():
        current = getattr(cfg, key)
        if isinstance(current, bool):
            parsed = val.lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            parsed = int(val)
        elif isinstance(current, float):
            parsed = float(val)
        else:
            parsed = val
        setattr(cfg, key, parsed)
    cfg.validate()
    return cfg


def _resolve_scheme(cfg: RunConfig) -> str:
    """Pick explicit vs semi-implicit per model, d, and grid spacing."""
    model = cfg.model if cfg.d > 0 else "inviscid"
    if model in ("inviscid", "strain"):
        return "explicit"
    if cfg.scheme != "auto":
        return cfg.scheme
    h = 1.0 / cfg.n
    return "semi_implicit" if cfg.d > SEMI_IMPLICIT_THRESHOLD * h else "explicit"


def _resolve_reinit_every(cfg: RunConfig) -> int:
    if cfg.reinit_every >= 0:
        return cfg.reinit_every
    model = cfg.model if cfg.d > 0 else "inviscid"
    # hyperbolic models pile up level sets and need a fixed cadence; the
    # diffusive models stay smooth and only reinitialize on the gradient
    # trigger.  The cadence is deliberately light: each call erodes thin
    # burned tongues a little, and heavy reinitialization visibly slows
    # marginal fronts (worst for the strain model near quenching).
    return 100 if model in ("inviscid", "strain") else 0


def build_rhs(cfg: RunConfig, flow: FlowSpec, grid: Grid):
    """Explicit-scheme nodal du/dt operator for the configured model."""
    sample = flow.sample_grid(grid)
    V1 = np.broadcast_to(sample.V[0], grid.shape)
    V2 = np.broadcast_to(sample.V[1], grid.shape)
    DV = sample.DV
    s_L, d = cfg.s_L, cfg.d
    model = cfg.model if d > 0 else "inviscid"

    if model == "inviscid":

        def rhs(f: AffineField) -> np.ndarray:
            g = weno_derivatives(f, order=5)
            return -hamiltonian_inviscid(g, V1, V2, s_L).value

    elif model == "strain":
        # the strain scheme is the monotone Hamiltonian alone (hyperbolic
        # pairing: WENO5 + RK3, advective-only step bound)

        def rhs(f: AffineField) -> np.ndarray:
            g = weno_derivatives(f, order=5)
            st = evaluate_stencils(f)
            strain = strain_rate_field(f, DV, stencils=st)
            return -hamiltonian_strain(g, strain, V1, V2, s_L, d).value

    elif model == "curvature":

        def rhs(f: AffineField) -> np.ndarray:
            g = weno_derivatives(f, order=3)
            return -hamiltonian_inviscid(g, V1, V2, s_L).value + d * s_L * curvature_term(f)

    elif model == "viscous":

        def rhs(f: AffineField) -> np.ndarray:
            g = weno_derivatives(f, order=3)
            return -hamiltonian_inviscid(g, V1, V2, s_L).value + d * s_L * laplacian_field(f)

    else:
        raise ConfigError(f"unknown model '{model}'")
    return rhs


@dataclass
class RunResult:
    config: RunConfig
    estimate_window: SpeedEstimate | None
    estimate_pointwise: SpeedEstimate | None
    series: DiagnosticsSeries
    final_state: SimState
    quenched: bool
    quench_time: float | None
    runtime: float
    failed: bool = False
    failure_reason: str = ""


def _probe_node(cfg: RunConfig, grid: Grid) -> tuple[int, int]:
    i = int(round(cfg.probe_x / grid.hx)) % grid.nx
    j = int(round(cfg.probe_y / grid.hy)) % grid.ny
    return (j, i)


def init_run(cfg: RunConfig) -> tuple[SimState, DiagnosticsSeries]:
    """Fresh planar-front state plus a diagnostics series holding t = 0."""
    cfg.validate()
    grid = Grid(cfg.n, cfg.n)
    state = SimState(field=AffineField.zeros(grid), t=0.0, step=0)
    series = DiagnosticsSeries()
    record_diagnostics(series, state.field, state.t, _probe_node(cfg, grid))
    return state, series


def simulate(cfg: RunConfig, t_end: float | None = None, state: SimState | None = None,
             series: DiagnosticsSeries | None = None) -> tuple[SimState, DiagnosticsSeries]:
    """Advance (or continue) a run to t_end, recording diagnostics every step."""
    cfg.validate()
    grid = Grid(cfg.n, cfg.n)
    flow = FlowSpec("cellular", cfg.A)
    scheme = _resolve_scheme(cfg)
    model = cfg.model if cfg.d > 0 else "inviscid"
    dt = compute_dt(model, flow, grid, cfg.s_L, cfg.d, cfg.cfl_safety,
                    scheme="semi_implicit" if scheme == "semi_implicit" else "explicit")
    probe = _probe_node(cfg, grid)
    reinit_every = _resolve_reinit_every(cfg)
    profile = ReinitProfile(eps_band=cfg.reinit_eps, smooth_iters=cfg.reinit_iters)
    sample = flow.sample_grid(grid)
    flow_nodes = (
        np.broadcast_to(sample.V[0], grid.shape),
        np.broadcast_to(sample.V[1], grid.shape),
    )
    rhs = build_rhs(cfg, flow, grid) if scheme == "explicit" else None
    rk_order = 3 if model in ("inviscid", "strain") else 2

    if state is None:
        state, series = init_run(cfg)
    if t_end is None:
        t_end = cfg.resolved_t_max()

    while state.t < t_end - 1e-12:
        if scheme == "explicit":
            state = rk_step_explicit(state, rhs, rk_order, dt)
        elif model == "curvature":
            state, _ = semi_implicit_curvature_step(
                state, flow_nodes, cfg.s_L, cfg.d, dt
            )
        else:
            state, _ = semi_implicit_viscous_step(
                state, flow_nodes, cfg.s_L, cfg.d, dt
            )
        needs_reinit = reinit_every > 0 and state.step % reinit_every == 0
        if not needs_reinit and cfg.grad_trigger > 0 and state.step % 10 == 0:
            gx = np.abs(np.diff(state.field.u, axis=1)).max() / grid.hx
            gy = np.abs(np.diff(state.field.u, axis=0)).max() / grid.hy
            needs_reinit = max(gx, gy) > cfg.grad_trigger
        if needs_reinit:
            new_field, _ = reinit_field(state.field, profile, cfg.reinit_pseudo * grid.hx)
            state = SimState(field=new_field, t=state.t, step=state.step)
        record_diagnostics(series, state.field, state.t, probe)
    return state, series


def run_single(cfg: RunConfig, write_artifacts: bool = True) -> RunResult:
    """Execute one run end to end: simulate, estimate, emit artifacts.

    The run extends itself (up to 3x the initial duration) when the window
    estimator cannot fit two detected periods after the transient.
    """
    cfg.validate()
    t0 = _time.perf_counter()
    t_initial = cfg.resolved_t_max()
    state, series = init_run(cfg)
    try:
        state, series = simulate(cfg, t_end=t_initial, state=state, series=series)
        quenched, quench_time = detect_quench(series, cfg.s_L)
        est_w = estimate_window_average(series)
        while (
            not quenched
            and est_w.flags
            and state.t < 3.0 * t_initial - 1e-9
        ):
            state, series = simulate(
                cfg, t_end=min(state.t + 0.5 * t_initial, 3.0 * t_initial),
                state=state, series=series,
            )
            quenched, quench_time = detect_quench(series, cfg.s_L)
            est_w = estimate_window_average(series)
        est_p = estimate_pointwise(series)
        est_w.quenched = est_p.quenched = quenched
        est_w.quench_time = est_p.quench_time = quench_time
        result = RunResult(
            config=cfg,
            estimate_window=est_w,
            estimate_pointwise=est_p,
            series=series,
            final_state=state,
            quenched=quenched,
            quench_time=quench_time,
            runtime=_time.perf_counter() - t0,
        )
    except GFrontError as exc:
        result = RunResult(
            config=cfg,
            estimate_window=None,
            estimate_pointwise=None,
            series=series,
            final_state=state,
            quenched=False,
            quench_time=None,
            runtime=_time.perf_counter() - t0,
            failed=True,
            failure_reason=str(exc),
        )
    if write_artifacts:
        _write_run_artifacts(result)
    return result


def _write_series_csv(series: DiagnosticsSeries, path) -> None:
    t, a, g = series.as_arrays()
    if len(t) >= 3:
        ar, gr = series.rates()
    else:
        ar = np.zeros_like(t)
        gr = np.zeros_like(t)
    with open(path, "w") as fh:
        fh.write("t,burned_volume,burned_rate,G_probe,dG_probe\n")
        for row in zip(t, a, ar, g, gr):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _write_estimate(result: RunResult, path) -> None:
    with open(path, "w") as fh:
        for est in (result.estimate_window, result.estimate_pointwise):
            if est is None:
                continue
            p = est.method
            fh.write(f"{p}.s_T = {est.s_T:.17g}\n")
            fh.write(f"{p}.T1 = {est.window[0]:.17g}\n")
            fh.write(f"{p}.T2 = {est.window[1]:.17g}\n")
            fh.write(f"{p}.samples = {est.samples}\n")
            fh.write(f"{p}.period = {'' if est.period is None else format(est.period, '.17g')}\n")
            fh.write(f"{p}.drift = {'' if est.drift is None else format(est.drift, '.17g')}\n")
            fh.write(f"{p}.flags = {';'.join(est.flags)}\n")
        fh.write(f"quenched = {str(result.quenched).lower()}\n")
        qt = "" if result.quench_time is None else f"{result.quench_time:.17g}"
        fh.write(f"quench_time = {qt}\n")
        fh.write(f"failed = {str(result.failed).lower()}\n")
        if result.failed:
            fh.write(f"failure_reason = {result.failure_reason}\n")


def _auto_strip(f: AffineField) -> tuple[int, int]:
    g = f.g_values()
    gmax, gmin = float(np.max(g)), float(np.min(g))
    a = int(np.ceil(-gmax))
    b = int(np.floor(-gmin)) + 1
    if b <= a:
        b = a + 1
    return a, b


def _write_contour_csv(f: AffineField, path) -> None:
    polylines = extract_zero_level(f, strip=_auto_strip(f))
    with open(path, "w") as fh:
        fh.write("polyline,x,y\n")
        for idx, poly in enumerate(polylines):
            for x, y in poly:
                fh.write(f"{idx},{x:.17g},{y:.17g}\n")


def _write_run_artifacts(result: RunResult) -> Path:
    rundir = Path(result.config.outdir) / result.config.run_name()
    rundir.mkdir(parents=True, exist_ok=True)
    write_config(result.config, rundir / "config.txt")
    _write_series_csv(result.series, rundir / "series.csv")
    _write_estimate(result, rundir / "estimate.txt")
    if not result.failed:
        write_snapshot(result.final_state.field, result.final_state.t, rundir / "final.field")
        _write_contour_csv(result.final_state.field, rundir / "contour.csv")
    return rundir


def _sweep_one(cfg: RunConfig) -> dict:
    res = run_single(cfg)
    est = res.estimate_window
    return {
        "model": cfg.model,
        "A": cfg.A,
        "d": cfg.d,
        "grid": cfg.n,
        "s_T": float("nan") if est is None else est.s_T,
        "method": "" if est is None else est.method,
        "quenched": res.quenched,
        "quench_time": res.quench_time,
        "runtime": res.runtime,
        "failed": res.failed,
        "failure_reason": res.failure_reason,
    }


def run_sweep(
    base: RunConfig,
    A_values,
    d_values,
    models,
    workers: int = 1,
) -> list[dict]:
    """Cartesian sweep over (model, A, d); failures recorded, not fatal."""
    jobs = [
        replace(base, model=m, A=float(a), d=float(dd))
        for m in models
        for a in A_values
        for dd in d_values
    ]
    for job in jobs:
        job.validate()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(job) for job in jobs]
    rows.sort(key=lambda r: (r["model"], r["A"], r["d"]))
    return rows


def write_sweep_csv(rows: list[dict], path) -> None:
    cols = [
        "model", "A", "d", "grid", "s_T", "method",
        "quenched", "quench_time", "runtime", "failed", "failure_reason",
    ]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for r in rows:
            vals = []
            for c in cols:
                v = r[c]
                if v is None:
                    vals.append("")
                elif isinstance(v, bool):
                    vals.append(str(v).lower())
                elif isinstance(v, float):
                    vals.append(f"{v:.17g}")
                else:
                    vals.append(str(v))
            fh.write(",".join(vals) + "\n")


def run_corrector(
    base: RunConfig, A_values, d_values, outdir: str | None = None
) -> list[dict]:
    """Corrector solves over (A, d) with per-iteration CSVs and a summary."""
    out = Path(outdir if outdir is not None else base.outdir)
    out.mkdir(parents=True, exist_ok=True)
    guaranteed = np.sqrt(2.0) / np.pi
    rows = []
    for a in A_values:
        for dd in d_values:
            grid = Grid(base.n, base.n)
            flow = FlowSpec("cellular", float(a))
            state, report = corrector_iterate(flow, grid, float(dd), base.s_L)
            name = f"corrector-A{float(a):g}-d{float(dd):g}-n{base.n}.csv"
            with open(out / name, "w") as fh:
                fh.write("k,H_k,grad_diff_norm,ratio,bound\n")
                for k, gd in enumerate(report.grad_diffs, start=1):
                    hk = report.H_history[k - 1]
                    ratio = report.ratios[k - 2] if k >= 2 else float("nan")
                    fh.write(
                        f"{k},{hk:.17g},{gd:.17g},{ratio:.17g},{report.bound:.17g}\n"
                    )
            rows.append(
                {
                    "A": float(a),
                    "d": float(dd),
                    "grid": base.n,
                    "H_bar": report.final_H,
                    "iterations": state.iterations,
                    "converged": report.converged,
                    "bound": report.bound,
                    "guaranteed_regime": float(dd) > guaranteed,
                }
            )
    with open(out / "corrector-summary.csv", "w") as fh:
        fh.write("A,d,grid,H_bar,iterations,converged,bound,guaranteed_regime\n")
        for r in rows:
            fh.write(
                f"{r['A']:.17g},{r['d']:.17g},{r['grid']},{r['H_bar']:.17g},"
                f"{r['iterations']},{str(r['converged']).lower()},"
                f"{r['bound']:.17g},{str(r['guaranteed_regime']).lower()}\n"
            )
    return rows
