"""Time integrators: explicit TVD Runge-Kutta and the semi-implicit steppers.

Pairings follow the spatial accuracy of each model: RK3 with the fifth-order
reconstruction for the purely hyperbolic models, RK2 with third order plus
central second-order terms for the diffusive ones, and first-order splitting
for the semi-implicit schemes.

The constant-coefficient resolvent (I - c*lap) on the torus is inverted
spectrally with the exact symbol of the 5-point Laplacian, so that solve is
a direct method accurate to round-off.  The variable-coefficient operator of
the semi-implicit advection-diffusion step is solved by GMRES preconditioned
with the spectral resolvent, to a relative residual of 1e-10.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .errors import ConfigError, IntegrationError, SolveError
from .flow import FlowSpec
from .grid import AffineField, Grid
from .hamiltonian import hamiltonian_inviscid, infinity_laplacian
from .weno import weno_derivatives

BLOWUP_LIMIT = 1e8
SOLVE_RTOL = 1e-10


@dataclass
class StepPlan:
    """Scheme choice and the time step that satisfies its stability bound."""

    scheme: str  # rk3_explicit | rk2_explicit | semi_implicit_curvature | semi_implicit_viscous
    dt: float
    cfl_safety: float


@dataclass
class LinearSolveReport:
    iterations: int
    residual: float
    tolerance: float


@dataclass
class SimState:
    field: AffineField
    t: float = 0.0
    step: int = 0


def compute_dt(
    model: str,
    flow: FlowSpec,
    grid: Grid,
    s_L: float,
    d: float,
    cfl_safety: float = 0.5,
    scheme: str = "explicit",
) -> float:
    """Largest stable time step for the given model/scheme, scaled by safety.

    Explicit hyperbolic models bound dt by the advective speeds plus the
    normal speed; explicit diffusive models add the second-order term
    2 s_L d / h^2 per axis; semi-implicit schemes are restricted only by the
    normal speed.  The strain model folds the worst-case strain enhancement
    of the normal speed into the bound, which is stricter than the plain
    advective form but never looser.
    """
    if not 0.0 < cfl_safety < 1.0:
        raise ConfigError("cfl_safety must lie in (0, 1)")
    v1, v2 = flow.max_speed_bounds(grid)
    hx, hy = grid.hx, grid.hy
    if scheme.startswith("semi_implicit"):
        rate = s_L / hx + s_L / hy
    elif model in ("inviscid",):
        rate = (v1 + s_L) / hx + (v2 + s_L) / hy
    elif model == "strain":
        s_eff = s_L + d * flow.max_strain_bound(grid)
        rate = (v1 + s_eff) / hx + (v2 + s_eff) / hy
    elif model in ("curvature", "viscous"):
        rate = (v1 + s_L) / hx + (v2 + s_L) / hy
        rate += 2.0 * s_L * d / hx**2 + 2.0 * s_L * d / hy**2
    else:
        raise ConfigError(f"unknown model: {model}")
    return cfl_safety / rate


def _check_finite(u: np.ndarray, t: float, grid: Grid, P) -> None:
    if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > BLOWUP_LIMIT:
        raise IntegrationError(
            f"integration blew up at t={t:.6g}",
            field=AffineField(grid, np.where(np.isfinite(u), u, 0.0), P),
            time=t,
        )


def rk_step_explicit(state: SimState, rhs, order: int, dt: float) -> SimState:
    """One TVD Runge-Kutta step of u_t = rhs(field).

    rhs maps an AffineField to nodal du/dt values.  Convex combinations of
    forward-Euler substeps (Shu-Osher form); u stays periodic throughout.
    """
    f = state.field
    u0 = f.u
    k1 = rhs(f)
    u1 = u0 + dt * k1
    _check_finite(u1, state.t, f.grid, f.P)
    if order == 2:
        k2 = rhs(f.copy_with(u1))
        un = 0.5 * (u0 + u1 + dt * k2)
    elif order == 3:
        k2 = rhs(f.copy_with(u1))
        u2 = 0.75 * u0 + 0.25 * (u1 + dt * k2)
        _check_finite(u2, state.t, f.grid, f.P)
        k3 = rhs(f.copy_with(u2))
        un = u0 / 3.0 + (2.0 / 3.0) * (u2 + dt * k3)
    else:
        raise ConfigError(f"RK order must be 2 or 3, got {order}")
    _check_finite(un, state.t + dt, f.grid, f.P)
    return SimState(field=f.copy_with(un), t=state.t + dt, step=state.step + 1)


def _laplacian_symbol(grid: Grid) -> np.ndarray:
    """Eigenvalues of the 5-point Laplacian on the Fourier basis (negative)."""
    kx = np.arange(grid.nx)
    ky = np.arange(grid.ny)
    lx = (2.0 * np.cos(2.0 * np.pi * kx / grid.nx) - 2.0) / grid.hx**2
    ly = (2.0 * np.cos(2.0 * np.pi * ky / grid.ny) - 2.0) / grid.hy**2
    return lx[None, :] + ly[:, None]


def solve_helmholtz_periodic(rhs: np.ndarray, c: float, grid: Grid) -> np.ndarray:
    """Direct solve of (I - c*lap_h) u = rhs on the periodic grid.

    Diagonalized by the discrete Fourier transform with the exact symbol of
    the 5-point stencil; the result inverts the actual matrix to round-off.
    """
    sym = 1.0 - c * _laplacian_symbol(grid)
    return np.real(np.fft.ifft2(np.fft.fft2(rhs) / sym))


class SpectralPreconditioner:
    """Fourier-diagonal preconditioner given the symbol of a reference operator.

    Modes whose symbol is set to inf are annihilated, which restricts the
    action to the mean-zero subspace when the constant mode is singular.
    """

    def __init__(self, grid: Grid, symbol: np.ndarray):
        self.grid = grid
        self.sym = symbol

    def matvec(self, x: np.ndarray) -> np.ndarray:
        r = x.reshape(self.grid.shape)
        out = np.real(np.fft.ifft2(np.fft.fft2(r) / self.sym))
        return out.ravel()


def solve_advection_diffusion(
    grid: Grid,
    V1: np.ndarray,
    V2: np.ndarray,
    adv_coeff: float,
    diff_coeff: float,
    rhs: np.ndarray,
    x0: np.ndarray | None = None,
    rtol: float = SOLVE_RTOL,
    maxiter: int = 2000,
) -> tuple[np.ndarray, LinearSolveReport]:
    """GMRES solve of (I + adv_coeff * V . D - diff_coeff * lap) u = rhs.

    Advection and diffusion are central-differenced; the spectral resolvent
    of the diffusive part serves as preconditioner.  Raises SolveError if the
    relative residual target is not met.
    """
    hx, hy = grid.hx, grid.hy

    def apply_op(xflat):
        u = xflat.reshape(grid.shape)
        dux = (np.roll(u, -1, 1) - np.roll(u, 1, 1)) / (2 * hx)
        duy = (np.roll(u, -1, 0) - np.roll(u, 1, 0)) / (2 * hy)
        lap = (np.roll(u, -1, 1) - 2 * u + np.roll(u, 1, 1)) / hx**2 + (
            np.roll(u, -1, 0) - 2 * u + np.roll(u, 1, 0)
        ) / hy**2
        return (u + adv_coeff * (V1 * dux + V2 * duy) - diff_coeff * lap).ravel()

    n = grid.nx * grid.ny
    op = spla.LinearOperator((n, n), matvec=apply_op, dtype=float)
    precond = SpectralPreconditioner(grid, 1.0 - diff_coeff * _laplacian_symbol(grid))
    M = spla.LinearOperator((n, n), matvec=precond.matvec, dtype=float)
    b = rhs.ravel()
    iters = 0

    def count(_):
        nonlocal iters
        iters += 1

    x, info = spla.gmres(
        op,
        b,
        x0=None if x0 is None else x0.ravel(),
        rtol=rtol,
        atol=0.0,
        restart=60,
        maxiter=maxiter,
        M=M,
        callback=count,
        callback_type="pr_norm",
    )
    bnorm = float(np.linalg.norm(b))
    res = float(np.linalg.norm(apply_op(x) - b)) / (bnorm if bnorm > 0 else 1.0)
    report = LinearSolveReport(iterations=iters, residual=res, tolerance=rtol)
    if info != 0 or res > 10 * rtol:
        raise SolveError(
            f"advection-diffusion solve stalled (info={info}, residual={res:.3e})",
            report=report,
        )
    return x.reshape(grid.shape), report


def semi_implicit_curvature_step(
    state: SimState, flow_nodes, s_L: float, d: float, dt: float
) -> tuple[SimState, LinearSolveReport]:
    """Curvature-model step with the Laplacian implicit.

    (I - dt d s_L lap) G_next = G - dt (V.DG + s_L|DG| + d s_L lap_inf G),
    everything on the right explicit (WENO3 Hamiltonian, central infinity
    Laplacian).  The solve acts on the periodic part only, since the affine
    part is harmonic.
    """
    f = state.field
    V1, V2 = flow_nodes
    g = weno_derivatives(f, order=3)
    expl = hamiltonian_inviscid(g, V1, V2, s_L).value + d * s_L * infinity_laplacian(f)
    rhs = f.u - dt * expl
    un = solve_helmholtz_periodic(rhs, dt * d * s_L, f.grid)
    _check_finite(un, state.t + dt, f.grid, f.P)
    report = LinearSolveReport(iterations=1, residual=0.0, tolerance=0.0)
    return (
        SimState(field=f.copy_with(un), t=state.t + dt, step=state.step + 1),
        report,
    )


def semi_implicit_viscous_step(
    state: SimState,
    flow_nodes,
    s_L: float,
    d: float,
    dt: float,
) -> tuple[SimState, LinearSolveReport]:
    """Viscous-model step with advection and diffusion implicit.

    (I + dt V.D - dt d s_L lap) G_next = G - dt s_L |DG|, the normal term by
    Godunov/WENO3 and the implicit side central.  In terms of the periodic
    part, the constant advective drift V.P moves to the right-hand side.
    """
    f = state.field
    V1, V2 = flow_nodes
    g = weno_derivatives(f, order=3)
    zero = np.zeros_like(f.u)
    normal = hamiltonian_inviscid(g, zero, zero, s_L).value
    rhs = f.u - dt * normal - dt * (V1 * f.P[0] + V2 * f.P[1])
    un, report = solve_advection_diffusion(
        f.grid, V1, V2, adv_coeff=dt, diff_coeff=dt * d * s_L, rhs=rhs, x0=f.u
    )
    _check_finite(un, state.t + dt, f.grid, f.P)
    return (
        SimState(field=f.copy_with(un), t=state.t + dt, step=state.step + 1),
        report,
    )
