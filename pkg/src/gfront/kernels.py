"""Numba inner loops for the per-step hot path.

Only the WENO reconstructions live here; everything else is cheap enough in
vectorized numpy.  Kernels write each output node independently, so parallel
execution is deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

WENO_EPS = 1e-6


@njit(cache=True, parallel=True, fastmath=False)
def _weno5_pair_padded(dmp, nx):
    ny = dmp.shape[0]
    minus = np.empty((ny, nx))
    plus = np.empty((ny, nx))
    for j in prange(ny):
        for i in range(nx):
            c = i + 3  # padded index of dm[i]
            # minus side: dm[i-2] .. dm[i+2]
            v1 = dmp[j, c - 2]
            v2 = dmp[j, c - 1]
            v3 = dmp[j, c]
            v4 = dmp[j, c + 1]
            v5 = dmp[j, c + 2]
            p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0
            p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0
            p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0
            s1 = (13.0 / 12.0) * (v1 - 2 * v2 + v3) ** 2 + 0.25 * (
                v1 - 4 * v2 + 3 * v3
            ) ** 2
            s2 = (13.0 / 12.0) * (v2 - 2 * v3 + v4) ** 2 + 0.25 * (v2 - v4) ** 2
            s3 = (13.0 / 12.0) * (v3 - 2 * v4 + v5) ** 2 + 0.25 * (
                3 * v3 - 4 * v4 + v5
            ) ** 2
            a1 = 0.1 / (WENO_EPS + s1) ** 2
            a2 = 0.6 / (WENO_EPS + s2) ** 2
            a3 = 0.3 / (WENO_EPS + s3) ** 2
            minus[j, i] = (a1 * p1 + a2 * p2 + a3 * p3) / (a1 + a2 + a3)
            # plus side: dm[i+3] .. dm[i-1]
            w1 = dmp[j, c + 3]
            w2 = dmp[j, c + 2]
            w3 = dmp[j, c + 1]
            w4 = v3
            w5 = dmp[j, c - 1]
            q1 = w1 / 3.0 - 7.0 * w2 / 6.0 + 11.0 * w3 / 6.0
            q2 = -w2 / 6.0 + 5.0 * w3 / 6.0 + w4 / 3.0
            q3 = w3 / 3.0 + 5.0 * w4 / 6.0 - w5 / 6.0
            t1 = (13.0 / 12.0) * (w1 - 2 * w2 + w3) ** 2 + 0.25 * (
                w1 - 4 * w2 + 3 * w3
            ) ** 2
            t2 = (13.0 / 12.0) * (w2 - 2 * w3 + w4) ** 2 + 0.25 * (w2 - w4) ** 2
            t3 = (13.0 / 12.0) * (w3 - 2 * w4 + w5) ** 2 + 0.25 * (
                3 * w3 - 4 * w4 + w5
            ) ** 2
            b1 = 0.1 / (WENO_EPS + t1) ** 2
            b2 = 0.6 / (WENO_EPS + t2) ** 2
            b3 = 0.3 / (WENO_EPS + t3) ** 2
            plus[j, i] = (b1 * q1 + b2 * q2 + b3 * q3) / (b1 + b2 + b3)
    return minus, plus


@njit(cache=True, parallel=True, fastmath=False)
def _weno3_pair_padded(dmp, nx):
    ny = dmp.shape[0]
    minus = np.empty((ny, nx))
    plus = np.empty((ny, nx))
    for j in prange(ny):
        for i in range(nx):
            c = i + 3
            v1 = dmp[j, c - 1]
            v2 = dmp[j, c]
            v3 = dmp[j, c + 1]
            p1 = (-v1 + 3.0 * v2) / 2.0
            p2 = (v2 + v3) / 2.0
            a1 = (1.0 / 3.0) / (WENO_EPS + (v2 - v1) ** 2) ** 2
            a2 = (2.0 / 3.0) / (WENO_EPS + (v3 - v2) ** 2) ** 2
            minus[j, i] = (a1 * p1 + a2 * p2) / (a1 + a2)
            w1 = dmp[j, c + 2]
            w2 = v3
            w3 = v2
            q1 = (-w1 + 3.0 * w2) / 2.0
            q2 = (w2 + w3) / 2.0
            b1 = (1.0 / 3.0) / (WENO_EPS + (w2 - w1) ** 2) ** 2
            b2 = (2.0 / 3.0) / (WENO_EPS + (w3 - w2) ** 2) ** 2
            plus[j, i] = (b1 * q1 + b2 * q2) / (b1 + b2)
    return minus, plus


def weno_pair_lastaxis(dm: np.ndarray, order: int):
    """(minus, plus) one-sided derivatives along the last axis, periodic."""
    ny, nx = dm.shape
    dmp = np.empty((ny, nx + 7))
    dmp[:, 3 : nx + 3] = dm
    dmp[:, :3] = dm[:, -3:]
    dmp[:, nx + 3 :] = dm[:, :4]
    if order == 5:
        return _weno5_pair_padded(dmp, nx)
    return _weno3_pair_padded(dmp, nx)


@njit(cache=True, parallel=True, fastmath=False)
def _central_stencils_padded(up, hx, hy):
    ny = up.shape[0] - 2
    nx = up.shape[1] - 2
    gx = np.empty((ny, nx))
    gy = np.empty((ny, nx))
    gxx = np.empty((ny, nx))
    gyy = np.empty((ny, nx))
    gxy = np.empty((ny, nx))
    for j in prange(ny):
        for i in range(nx):
            c = up[j + 1, i + 1]
            w = up[j + 1, i]
            e = up[j + 1, i + 2]
            s = up[j, i + 1]
            n = up[j + 2, i + 1]
            gx[j, i] = (e - w) / (2.0 * hx)
            gy[j, i] = (n - s) / (2.0 * hy)
            gxx[j, i] = (e - 2.0 * c + w) / (hx * hx)
            gyy[j, i] = (n - 2.0 * c + s) / (hy * hy)
            gxy[j, i] = (
                up[j + 2, i + 2] + up[j, i] - up[j + 2, i] - up[j, i + 2]
            ) / (4.0 * hx * hy)
    return gx, gy, gxx, gyy, gxy


def central_stencils(u: np.ndarray, hx: float, hy: float):
    """One-pass periodic central stencils (gx, gy, gxx, gyy, gxy) of u."""
    ny, nx = u.shape
    up = np.empty((ny + 2, nx + 2))
    up[1:-1, 1:-1] = u
    up[0, 1:-1] = u[-1]
    up[-1, 1:-1] = u[0]
    up[:, 0] = up[:, -2]
    up[:, -1] = up[:, 1]
    return _central_stencils_padded(up, hx, hy)


@njit(cache=True, parallel=True, fastmath=False)
def hamiltonian_inviscid_kernel(pxm, pxp, pym, pyp, V1, V2, s_L):
    ny, nx = pxm.shape
    out = np.empty((ny, nx))
    for j in prange(ny):
        for i in range(nx):
            v1 = V1[j, i]
            v2 = V2[j, i]
            am, ap = pxm[j, i], pxp[j, i]
            bm, bp = pym[j, i], pyp[j, i]
            adv = v1 * (am if v1 > 0.0 else ap) + v2 * (bm if v2 > 0.0 else bp)
            if v1 > s_L:
                px2 = am * am
            elif v1 < -s_L:
                px2 = ap * ap
            else:
                lo = am if am > 0.0 else 0.0
                hi = ap if ap < 0.0 else 0.0
                px2 = max(lo * lo, hi * hi)
            if v2 > s_L:
                py2 = bm * bm
            elif v2 < -s_L:
                py2 = bp * bp
            else:
                lo = bm if bm > 0.0 else 0.0
                hi = bp if bp < 0.0 else 0.0
                py2 = max(lo * lo, hi * hi)
            out[j, i] = adv + s_L * np.sqrt(px2 + py2)
    return out


@njit(cache=True, parallel=True, fastmath=False)
def hamiltonian_strain_kernel(pxm, pxp, pym, pyp, V1, V2, speed):
    ny, nx = pxm.shape
    out = np.empty((ny, nx))
    for j in prange(ny):
        for i in range(nx):
            v1 = V1[j, i]
            v2 = V2[j, i]
            am, ap = pxm[j, i], pxp[j, i]
            bm, bp = pym[j, i], pyp[j, i]
            adv = v1 * (am if v1 > 0.0 else ap) + v2 * (bm if v2 > 0.0 else bp)
            c = speed[j, i]
            if c >= 0.0:
                lo = am if am > 0.0 else 0.0
                hi = ap if ap < 0.0 else 0.0
                px2 = max(lo * lo, hi * hi)
                lo = bm if bm > 0.0 else 0.0
                hi = bp if bp < 0.0 else 0.0
                py2 = max(lo * lo, hi * hi)
            else:
                lo = am if am < 0.0 else 0.0
                hi = ap if ap > 0.0 else 0.0
                px2 = max(lo * lo, hi * hi)
                lo = bm if bm < 0.0 else 0.0
                hi = bp if bp > 0.0 else 0.0
                py2 = max(lo * lo, hi * hi)
            out[j, i] = adv + c * np.sqrt(px2 + py2)
    return out
