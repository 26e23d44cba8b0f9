"""Uniform periodic grids on the unit torus and affine-periodic scalar fields.

The propagating front is represented by a scalar G(x, y) = P.(x, y) + u(x, y)
where u is fully periodic on [0,1)^2 and P is a fixed direction vector.  G
itself satisfies G(x + z) = G(x) + P.z for integer shifts z, so every stencil
below acts on the periodic part u and accounts for the affine offset at the
wrap (crossing the x-seam adds or subtracts P1, likewise P2 in y).

Arrays are nodal, shape (ny, nx), with u[j, i] = u(i*hx, j*hy) (y outer,
x inner, matching the snapshot file layout).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError

FLOOR_SNAP = 1e-12


@lru_cache(maxsize=64)
def _cached_coords(nx: int, ny: int):
    x = np.arange(nx) / nx
    y = np.arange(ny) / ny
    X, Y = np.meshgrid(x, y)
    X.setflags(write=False)
    Y.setflags(write=False)
    return X, Y


@dataclass(frozen=True)
class Grid:
    """Uniform nodal grid on [0,1)^2 with periodic wraparound indexing."""

    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ConfigError(f"grid must be at least 8x8, got {self.nx}x{self.ny}")

    @property
    def hx(self) -> float:
        return 1.0 / self.nx

    @property
    def hy(self) -> float:
        return 1.0 / self.ny

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    def node_coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid arrays (X, Y) of node coordinates, shape (ny, nx).

        Cached and marked read-only; copy before mutating.
        """
        return _cached_coords(self.nx, self.ny)


@dataclass
class AffineField:
    """Scalar field G(x) = P.x + u(x) with periodic nodal values u.

    P defaults to e1 = (1, 0); P = (0, 0) gives a plain periodic field,
    which is convenient for patch tests.
    """

    grid: Grid
    u: np.ndarray
    P: tuple[float, float] = (1.0, 0.0)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape != self.grid.shape:
            raise ConfigError(
                f"field shape {self.u.shape} does not match grid {self.grid.shape}"
            )
        self.P = (float(self.P[0]), float(self.P[1]))

    @classmethod
    def zeros(cls, grid: Grid, P=(1.0, 0.0)) -> "AffineField":
        return cls(grid, np.zeros(grid.shape), P)

    @classmethod
    def from_function(cls, grid: Grid, fn, P=(1.0, 0.0)) -> "AffineField":
        """Build a field from u = fn(X, Y) evaluated at the nodes."""
        X, Y = grid.node_coords()
        return cls(grid, np.asarray(fn(X, Y), dtype=float), P)

    def g_values(self) -> np.ndarray:
        """Nodal values of G = P.x + u on the fundamental cell."""
        X, Y = self.grid.node_coords()
        return self.P[0] * X + self.P[1] * Y + self.u

    def copy_with(self, u: np.ndarray) -> "AffineField":
        return AffineField(self.grid, u, self.P)

    def tiled_g(self, kx: int, ky: int = 0) -> np.ndarray:
        """G on the shifted cell [kx, kx+1) x [ky, ky+1): G + P.(kx, ky)."""
        return self.g_values() + self.P[0] * kx + self.P[1] * ky


@dataclass
class StencilSet:
    """Central-difference stencils of G evaluated on every node."""

    gx: np.ndarray
    gy: np.ndarray
    gxx: np.ndarray
    gyy: np.ndarray
    gxy: np.ndarray
    lap: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.lap is None:
            self.lap = self.gxx + self.gyy


def _dx_central(u: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(u, -1, axis=1) - np.roll(u, 1, axis=1)) / (2.0 * h)


def _dy_central(u: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(u, -1, axis=0) - np.roll(u, 1, axis=0)) / (2.0 * h)


def central_gradient(f: AffineField) -> tuple[np.ndarray, np.ndarray]:
    """Second-order central gradient of G, affine offset included.

    The offset enters additively: G_x = P1 + u_x and G_y = P2 + u_y, and the
    periodic wrap on u realises the seam correction exactly.
    """
    g = f.grid
    return (f.P[0] + _dx_central(f.u, g.hx), f.P[1] + _dy_central(f.u, g.hy))


def laplacian(f: AffineField) -> np.ndarray:
    """5-point Laplacian of G; the affine part is harmonic so lap G = lap u."""
    g = f.grid
    u = f.u
    return (np.roll(u, -1, 1) - 2.0 * u + np.roll(u, 1, 1)) / g.hx**2 + (
        np.roll(u, -1, 0) - 2.0 * u + np.roll(u, 1, 0)
    ) / g.hy**2


def second_derivatives(f: AffineField) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Central (G_xx, G_yy, G_xy); affine part drops out of all three."""
    g = f.grid
    u = f.u
    gxx = (np.roll(u, -1, 1) - 2.0 * u + np.roll(u, 1, 1)) / g.hx**2
    gyy = (np.roll(u, -1, 0) - 2.0 * u + np.roll(u, 1, 0)) / g.hy**2
    upp = np.roll(np.roll(u, -1, 0), -1, 1)
    umm = np.roll(np.roll(u, 1, 0), 1, 1)
    upm = np.roll(np.roll(u, -1, 0), 1, 1)
    ump = np.roll(np.roll(u, 1, 0), -1, 1)
    gxy = (upp + umm - upm - ump) / (4.0 * g.hx * g.hy)
    return gxx, gyy, gxy


def evaluate_stencils(f: AffineField, impl: str = "numba") -> StencilSet:
    """All central stencils of G in one pass (gradient includes the offset)."""
    if impl == "numba":
        from . import kernels

        gx, gy, gxx, gyy, gxy = kernels.central_stencils(f.u, f.grid.hx, f.grid.hy)
        return StencilSet(gx=gx + f.P[0], gy=gy + f.P[1], gxx=gxx, gyy=gyy, gxy=gxy)
    gx, gy = central_gradient(f)
    gxx, gyy, gxy = second_derivatives(f)
    return StencilSet(gx=gx, gy=gy, gxx=gxx, gyy=gyy, gxy=gxy)


def snapped_floor(values: np.ndarray) -> np.ndarray:
    """Floor with deterministic handling of near-integer values.

    A value within FLOOR_SNAP below an integer is treated as that integer,
    so round-off cannot flip the result across platforms.
    """
    return np.floor(np.asarray(values) + FLOOR_SNAP)


def floor_integral(f: AffineField) -> float:
    """Cell-averaged integral of floor(G) over the unit cell.

    Nodal average; the O(h) quadrature error is negligible against the
    long-time averaging this feeds.  The summation order is numpy's fixed
    pairwise tree, so results are bit-reproducible.
    """
    return float(np.mean(snapped_floor(f.g_values())))


def write_snapshot(f: AffineField, time: float, path) -> None:
    """Write the 'gfront-field v1' text snapshot (full double precision)."""
    with open(path, "w") as fh:
        fh.write(
            f"gfront-field v1 {f.grid.nx} {f.grid.ny} {time:.17g} "
            f"{f.P[0]:.17g} {f.P[1]:.17g}\n"
        )
        for row in f.u:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def read_snapshot(path) -> tuple[AffineField, float]:
    """Read a snapshot written by write_snapshot; returns (field, time)."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 7 or header[0] != "gfront-field" or header[1] != "v1":
            raise ConfigError(f"not a gfront-field v1 snapshot: {path}")
        nx, ny = int(header[2]), int(header[3])
        time = float(header[4])
        P = (float(header[5]), float(header[6]))
        rows = [np.array(fh.readline().split(), dtype=float) for _ in range(ny)]
    u = np.vstack(rows)
    if u.shape != (ny, nx):
        raise ConfigError(f"snapshot body {u.shape} does not match header {(ny, nx)}")
    return AffineField(Grid(nx, ny), u, P), time
