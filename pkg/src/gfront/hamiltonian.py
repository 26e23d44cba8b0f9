"""Monotone numerical Hamiltonians and the central second-order terms.

The advective part is upwinded by the sign of each velocity component; the
normal part uses a Godunov selection.  For the basic front Hamiltonian the
Godunov branches depend on how the velocity compares with the laminar speed;
for the strain variant they depend only on the sign of the effective normal
speed (s_L - d * S), with S frozen from central differences of the current
field so the scheme stays monotone in the one-sided arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import (
    AffineField,
    central_gradient,
    evaluate_stencils,
    laplacian,
)
from .weno import OneSidedGradients

GRAD_EPS = 1e-8


@dataclass
class HamiltonianValue:
    """Nodal Hamiltonian values plus optional per-node diagnostics."""

    value: np.ndarray
    effective_speed: np.ndarray | None = None


def _upwind(pm, pp, v):
    return np.where(v > 0.0, pm, pp)


def _godunov_sq(pm, pp, flip=None):
    """Godunov choice for p^2 in the normal term.

    The default branch handles a front advancing with positive speed; `flip`
    marks nodes where the effective speed is negative and the selection
    mirrors (larger magnitude wins instead of the rarefaction zero).
    """
    fwd = np.maximum(np.maximum(pm, 0.0) ** 2, np.minimum(pp, 0.0) ** 2)
    if flip is None:
        return fwd
    bwd = np.maximum(np.minimum(pm, 0.0) ** 2, np.maximum(pp, 0.0) ** 2)
    return np.where(flip, bwd, fwd)


def hamiltonian_inviscid(
    g: OneSidedGradients, V1, V2, s_L: float, impl: str = "numba"
) -> HamiltonianValue:
    """Monotone Hamiltonian for V . DG + s_L |DG|.

    Fast advection (|V| > s_L) fixes the upwind side of the normal term too;
    otherwise the Godunov selection arbitrates.
    """
    if impl == "numba" and g.px_minus.ndim == 2:
        value = kernels.hamiltonian_inviscid_kernel(
            g.px_minus, g.px_plus, g.py_minus, g.py_plus,
            np.ascontiguousarray(np.broadcast_to(V1, g.px_minus.shape)),
            np.ascontiguousarray(np.broadcast_to(V2, g.px_minus.shape)),
            float(s_L),
        )
        return HamiltonianValue(value=value)
    px_vel = _upwind(g.px_minus, g.px_plus, V1)
    py_vel = _upwind(g.py_minus, g.py_plus, V2)
    gx = _godunov_sq(g.px_minus, g.px_plus)
    pxn2 = np.where(
        V1 > s_L, g.px_minus**2, np.where(V1 < -s_L, g.px_plus**2, gx)
    )
    gy = _godunov_sq(g.py_minus, g.py_plus)
    pyn2 = np.where(
        V2 > s_L, g.py_minus**2, np.where(V2 < -s_L, g.py_plus**2, gy)
    )
    value = V1 * px_vel + V2 * py_vel + s_L * np.sqrt(pxn2 + pyn2)
    return HamiltonianValue(value=value)


def strain_rate_field(f: AffineField, DV, eps: float = GRAD_EPS, stencils=None):
    """Nodal strain rate -(p . DV . p)/|p|^2 with p from central differences.

    The denominator is regularized by eps^2 so cone tips (where the gradient
    degenerates) produce a bounded, vanishing strain contribution.
    """
    if stencils is not None:
        px, py = stencils.gx, stencils.gy
    else:
        px, py = central_gradient(f)
    quad = px * px * DV[0, 0] + px * py * (DV[0, 1] + DV[1, 0]) + py * py * DV[1, 1]
    return -quad / (px * px + py * py + eps * eps)


def hamiltonian_strain(
    g: OneSidedGradients,
    strain: np.ndarray,
    V1,
    V2,
    s_L: float,
    d: float,
    impl: str = "numba",
) -> HamiltonianValue:
    """Monotone Hamiltonian for V . DG + (s_L - d*S) |DG|.

    `strain` is the frozen per-node strain rate (see strain_rate_field).
    Where the effective speed goes negative the Godunov branches mirror.
    """
    speed = s_L - d * np.asarray(strain, dtype=float)
    if impl == "numba" and g.px_minus.ndim == 2:
        value = kernels.hamiltonian_strain_kernel(
            g.px_minus, g.px_plus, g.py_minus, g.py_plus,
            np.ascontiguousarray(np.broadcast_to(V1, g.px_minus.shape)),
            np.ascontiguousarray(np.broadcast_to(V2, g.px_minus.shape)),
            np.ascontiguousarray(np.broadcast_to(speed, g.px_minus.shape)),
        )
        return HamiltonianValue(value=value, effective_speed=speed)
    px_vel = _upwind(g.px_minus, g.px_plus, V1)
    py_vel = _upwind(g.py_minus, g.py_plus, V2)
    flip = speed < 0.0
    pxn2 = _godunov_sq(g.px_minus, g.px_plus, flip)
    pyn2 = _godunov_sq(g.py_minus, g.py_plus, flip)
    value = V1 * px_vel + V2 * py_vel + speed * np.sqrt(pxn2 + pyn2)
    return HamiltonianValue(value=value, effective_speed=speed)


def curvature_term(f: AffineField, eps: float = GRAD_EPS, stencils=None) -> np.ndarray:
    """|DG| div(DG/|DG|) by central differencing.

    (G_y^2 G_xx - 2 G_x G_y G_xy + G_x^2 G_yy) / (G_x^2 + G_y^2 + eps^2).
    """
    st = stencils if stencils is not None else evaluate_stencils(f)
    gx, gy = st.gx, st.gy
    num = gy * gy * st.gxx - 2.0 * gx * gy * st.gxy + gx * gx * st.gyy
    return num / (gx * gx + gy * gy + eps * eps)


def infinity_laplacian(f: AffineField, eps: float = GRAD_EPS, stencils=None) -> np.ndarray:
    """Second derivative of G along its own gradient direction, central.

    Together with curvature_term this splits the Laplacian:
    lap G = curvature + infinity-Laplacian (up to the eps regularization).
    """
    st = stencils if stencils is not None else evaluate_stencils(f)
    gx, gy = st.gx, st.gy
    num = gx * gx * st.gxx + 2.0 * gx * gy * st.gxy + gy * gy * st.gyy
    return num / (gx * gx + gy * gy + eps * eps)


def laplacian_field(f: AffineField) -> np.ndarray:
    """Alias of the 5-point Laplacian for use beside the terms above."""
    return laplacian(f)
