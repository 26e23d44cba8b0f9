"""One-sided WENO derivative reconstructions for Hamilton-Jacobi terms.

Both the third- and fifth-order variants act on one-point divided differences
of the periodic part u; the affine offset P is added after the nonlinear
combination, which is exact because every candidate stencil has coefficients
summing to one and the smoothness indicators only see differences.

A numba kernel carries the production load; a pure numpy path remains for
reference and is cross-checked in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import AffineField
from . import kernels

WENO_EPS = 1e-6


@dataclass
class OneSidedGradients:
    """Left/right biased nodal approximations of G_x and G_y."""

    px_minus: np.ndarray
    px_plus: np.ndarray
    py_minus: np.ndarray
    py_plus: np.ndarray


def _combine5(v1, v2, v3, v4, v5):
    p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0
    p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0
    p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0
    s1 = (13.0 / 12.0) * (v1 - 2 * v2 + v3) ** 2 + 0.25 * (v1 - 4 * v2 + 3 * v3) ** 2
    s2 = (13.0 / 12.0) * (v2 - 2 * v3 + v4) ** 2 + 0.25 * (v2 - v4) ** 2
    s3 = (13.0 / 12.0) * (v3 - 2 * v4 + v5) ** 2 + 0.25 * (3 * v3 - 4 * v4 + v5) ** 2
    a1 = 0.1 / (WENO_EPS + s1) ** 2
    a2 = 0.6 / (WENO_EPS + s2) ** 2
    a3 = 0.3 / (WENO_EPS + s3) ** 2
    return (a1 * p1 + a2 * p2 + a3 * p3) / (a1 + a2 + a3)


def _combine3(v1, v2, v3):
    p1 = (-v1 + 3.0 * v2) / 2.0
    p2 = (v2 + v3) / 2.0
    a1 = (1.0 / 3.0) / (WENO_EPS + (v2 - v1) ** 2) ** 2
    a2 = (2.0 / 3.0) / (WENO_EPS + (v3 - v2) ** 2) ** 2
    return (a1 * p1 + a2 * p2) / (a1 + a2)


def _pair_numpy(dm: np.ndarray, order: int, axis: int):
    """(minus, plus) biased derivatives from divided differences dm."""
    r = lambda k: np.roll(dm, k, axis=axis)
    if order == 5:
        minus = _combine5(r(2), r(1), dm, r(-1), r(-2))
        plus = _combine5(r(-3), r(-2), r(-1), dm, r(1))
    else:
        minus = _combine3(r(1), dm, r(-1))
        plus = _combine3(r(-2), r(-1), dm)
    return minus, plus


def weno_derivatives(
    f: AffineField, order: int = 5, impl: str = "numba"
) -> OneSidedGradients:
    """Biased WENO approximations of the gradient of G.

    order 5 pairs with RK3 (hyperbolic models), order 3 with RK2 and the
    central second-order terms.  Exact on globally affine G by construction.
    """
    if order not in (3, 5):
        raise ConfigError(f"WENO order must be 3 or 5, got {order}")
    g = f.grid
    if g.nx < 2 * order or g.ny < 2 * order:
        raise ConfigError(
            f"grid {g.nx}x{g.ny} too small for WENO{order} stencils"
        )
    u = f.u
    dmx = (u - np.roll(u, 1, axis=1)) / g.hx
    dmy = (u - np.roll(u, 1, axis=0)) / g.hy
    if impl == "numba":
        pxm, pxp = kernels.weno_pair_lastaxis(dmx, order)
        pym_t, pyp_t = kernels.weno_pair_lastaxis(np.ascontiguousarray(dmy.T), order)
        pym, pyp = pym_t.T, pyp_t.T
    else:
        pxm, pxp = _pair_numpy(dmx, order, axis=1)
        pym, pyp = _pair_numpy(dmy, order, axis=0)
    return OneSidedGradients(
        px_minus=pxm + f.P[0],
        px_plus=pxp + f.P[0],
        py_minus=pym + f.P[1],
        py_plus=pyp + f.P[1],
    )
