"""Periodic-domain reinitialization toward a sawtooth distance profile.

The level function satisfies phi(x + e1) = phi(x) + 1, so every integer level
carries a front copy and the usual signed-distance reinitialization must be
made 1-periodic in the *value* of phi.  The sign profile S is a mollified
sign wave vanishing at every integer level; between levels the opposing
distance bundles squeeze the field near the half-integer values, which the
masked Jacobi smoothing (active only away from the levels) keeps bounded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import AffineField, central_gradient
from .hamiltonian import _godunov_sq
from .stepping import SimState, rk_step_explicit
from .weno import weno_derivatives


@dataclass
class ReinitProfile:
    """Shape parameters of the periodic sign and smoothing-mask profiles.

    eps_band: the smoothing mask vanishes within eps_band of each integer
    level and ramps to one by 2*eps_band (cubic smoothstep ramp).
    sign_width: mollification width of the sign profile.  None selects the
    subcell scaling |Dphi| * h, which keeps the levels pinned even when the
    profile is steep; a number fixes the width (useful for profile tests).
    smooth_iters: Jacobi sweeps applied after each pseudo-time step.
    """

    eps_band: float = 0.1
    smooth_iters: int = 5
    sign_width: float | None = None


@dataclass
class ReinitReport:
    steps: int
    band_gradient_deviation: float
    smooth_iters_applied: int


def periodic_offset(values: np.ndarray) -> np.ndarray:
    """Offset from the nearest integer, mapped into (-1/2, 1/2]."""
    v = np.asarray(values, dtype=float)
    return v - np.ceil(v - 0.5)


def sign_profile(values: np.ndarray, width: float) -> np.ndarray:
    """Mollified 1-periodic sign wave: odd around each integer level."""
    off = periodic_offset(values)
    return off / np.sqrt(off * off + width * width)


def smoothing_mask(values: np.ndarray, eps_band: float) -> np.ndarray:
    """1-periodic mask: 0 within eps_band of integer levels, 1 beyond 2*eps_band."""
    m = np.abs(periodic_offset(values))
    t = np.clip((m - eps_band) / eps_band, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def smooth_sweep(phi: AffineField, profile: ReinitProfile) -> AffineField:
    """One Jacobi sweep of the masked 4-neighbor average.

    Nodes with zero mask are untouched; nodes with full mask take the plain
    neighbor average.  The average of the affine part is itself, so the sweep
    acts on the periodic part with wraparound neighbors.
    """
    X, Y = phi.grid.node_coords()
    vals = phi.P[0] * X + phi.P[1] * Y + phi.u
    mask = smoothing_mask(vals, profile.eps_band)
    u = phi.u
    avg = 0.25 * (
        np.roll(u, -1, 1) + np.roll(u, 1, 1) + np.roll(u, -1, 0) + np.roll(u, 1, 0)
    )
    return phi.copy_with((1.0 - mask) * u + mask * avg)


def _reinit_rhs(profile: ReinitProfile):
    def rhs(f: AffineField) -> np.ndarray:
        X, Y = f.grid.node_coords()
        vals = f.P[0] * X + f.P[1] * Y + f.u
        g = weno_derivatives(f, order=5)
        if profile.sign_width is None:
            # subcell width: distance to the level in value space scales with
            # the local slope, so the node ladder near a steep level still
            # sees a graded sign and the level cannot drift
            gx = 0.5 * (g.px_minus + g.px_plus)
            gy = 0.5 * (g.py_minus + g.py_plus)
            width = np.maximum(np.sqrt(gx * gx + gy * gy), 0.5) * f.grid.hx
        else:
            width = profile.sign_width
        s = sign_profile(vals, width)
        flip = s < 0.0
        grad = np.sqrt(
            _godunov_sq(g.px_minus, g.px_plus, flip)
            + _godunov_sq(g.py_minus, g.py_plus, flip)
        )
        return -s * (grad - 1.0)

    return rhs


def reinit_residual(phi: AffineField, profile: ReinitProfile) -> np.ndarray:
    """Nodal right-hand side of the reinitialization flow at phi.

    Zero wherever phi already carries a unit (Godunov) gradient or sits on an
    integer level; the flow is stationary exactly where this vanishes.
    """
    return _reinit_rhs(profile)(phi)


def band_gradient_deviation(phi: AffineField, band: float = 0.25) -> float:
    """max | |Dphi| - 1 | over nodes within `band` of an integer level."""
    X, Y = phi.grid.node_coords()
    vals = phi.P[0] * X + phi.P[1] * Y + phi.u
    in_band = np.abs(periodic_offset(vals)) < band
    gx, gy = central_gradient(phi)
    mag = np.sqrt(gx * gx + gy * gy)
    if not np.any(in_band):
        return 0.0
    return float(np.max(np.abs(mag[in_band] - 1.0)))


def squeezing_field(
    grid, amp: float = 0.68, center: float = 0.45, wobble: float = 0.03
) -> AffineField:
    """Synthetic multi-bundle field whose reinitialization squeezes mid-band.

    A broad bump lifts the profile just past the next integer level, planting
    a second level bundle well under one unit away from the first.  The
    distance wedges spreading from the two bundles need a combined width of
    one but have less, so the values in between pile up against the half
    level and the gradient grows without bound unless the masked smoothing
    intervenes.  Calibrated on a 32x32 grid with eps_band 0.05: pseudo-time
    1.0 drives max|Dphi| past 14 unsmoothed but keeps it under 4 with ten
    sweeps per step.
    """
    X, Y = grid.node_coords()
    bump = 0.5 * (1.0 + np.cos(2 * np.pi * (X - center)))
    a = amp + wobble * np.sin(2 * np.pi * Y)
    return AffineField(grid, a * bump)


def max_gradient(phi: AffineField) -> float:
    """max |Dphi| by central differences, used by the squeezing diagnostics."""
    gx, gy = central_gradient(phi)
    return float(np.max(np.sqrt(gx * gx + gy * gy)))


def reinit_field(
    phi: AffineField, profile: ReinitProfile, pseudo_time: float
) -> tuple[AffineField, ReinitReport]:
    """Advance the reinitialization flow for the given pseudo-time.

    WENO5/RK3 with pseudo-time step equal to the grid spacing, followed by
    the configured number of smoothing sweeps after each step.  Restores
    |Dphi| toward 1 near every integer level without moving those levels by
    more than a cell.
    """
    grid = phi.grid
    dtau = grid.hx
    steps = max(1, int(round(pseudo_time / dtau)))
    rhs = _reinit_rhs(profile)
    state = SimState(field=phi, t=0.0, step=0)
    sweeps = 0
    for _ in range(steps):
        state = rk_step_explicit(state, rhs, order=3, dt=dtau)
        for _ in range(profile.smooth_iters):
            state.field = smooth_sweep(state.field, profile)
            sweeps += 1
    report = ReinitReport(
        steps=steps,
        band_gradient_deviation=band_gradient_deviation(state.field),
        smooth_iters_applied=sweeps,
    )
    return state.field, report
