"""Analytic velocity fields and surface-stretch quantities.

The cellular flow is the divergence-free field

    V = (-A sin(2 pi x) cos(2 pi y),  A cos(2 pi x) sin(2 pi y)),

a periodic array of counter-rotating vortices with saddle points at the cell
corners.  Velocities and their gradients are always evaluated in closed form,
never by differencing a sampled field: the strain Hamiltonian needs pointwise
DV and analytic evaluation removes one discretization error source.

Stretch-rate helpers work in 2D and 3D; the PDE solvers themselves stay 2D.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Grid

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class VelocitySample:
    """Pointwise velocity V and gradient DV with DV[i, j] = dV_i / dx_j."""

    V: np.ndarray
    DV: np.ndarray


@dataclass(frozen=True)
class FlowSpec:
    """Velocity field selection: 'cellular', 'zero', or a user sampler.

    A user sampler is a callable (x, y) -> VelocitySample; amplitude is
    ignored for it.
    """

    kind: str = "cellular"
    amplitude: float = 0.0
    sampler: Callable | None = None

    def sample(self, x, y) -> VelocitySample:
        if self.kind == "cellular":
            return eval_cellular(x, y, self.amplitude)
        if self.kind == "zero":
            x = np.asarray(x, dtype=float)
            z = np.zeros_like(x)
            return VelocitySample(
                V=np.stack([z, z]), DV=np.stack([np.stack([z, z]), np.stack([z, z])])
            )
        if self.kind == "user":
            return self.sampler(x, y)
        raise ValueError(f"unknown flow kind: {self.kind}")

    def sample_grid(self, grid: Grid) -> VelocitySample:
        """Velocity and gradient arrays on all nodes, components stacked first."""
        X, Y = grid.node_coords()
        return self.sample(X, Y)

    def max_speed_bounds(self, grid: Grid) -> tuple[float, float]:
        """(max|V1|, max|V2|) over the nodes; equals (A, A) for cellular flow."""
        if self.kind == "cellular":
            return abs(self.amplitude), abs(self.amplitude)
        if self.kind == "zero":
            return 0.0, 0.0
        s = self.sample_grid(grid)
        return float(np.max(np.abs(s.V[0]))), float(np.max(np.abs(s.V[1])))

    def max_strain_bound(self, grid: Grid) -> float:
        """Upper bound on |n . DV . n| over nodes and unit directions n.

        For a 2x2 gradient this is the largest absolute eigenvalue of the
        symmetric part; for the cellular flow it equals 2 pi A.
        """
        if self.kind == "cellular":
            return TWO_PI * abs(self.amplitude)
        if self.kind == "zero":
            return 0.0
        s = self.sample_grid(grid)
        a11, a12 = s.DV[0, 0], 0.5 * (s.DV[0, 1] + s.DV[1, 0])
        a22 = s.DV[1, 1]
        mean = 0.5 * (a11 + a22)
        rad = np.sqrt((0.5 * (a11 - a22)) ** 2 + a12**2)
        return float(np.max(np.maximum(np.abs(mean + rad), np.abs(mean - rad))))


def eval_cellular(x, y, A: float) -> VelocitySample:
    """Cellular-flow velocity and its exact gradient at (x, y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx, cx = np.sin(TWO_PI * x), np.cos(TWO_PI * x)
    sy, cy = np.sin(TWO_PI * y), np.cos(TWO_PI * y)
    v1 = -A * sx * cy
    v2 = A * cx * sy
    d11 = -TWO_PI * A * cx * cy
    d12 = TWO_PI * A * sx * sy
    d21 = -TWO_PI * A * sx * sy
    d22 = TWO_PI * A * cx * cy
    return VelocitySample(
        V=np.stack([v1, v2]), DV=np.stack([np.stack([d11, d12]), np.stack([d21, d22])])
    )


def strain_rate(sample: VelocitySample, p) -> float:
    """Compressive flow action along p: -(p . DV . p) / |p|^2.

    Homogeneous of degree zero in p; raises for p = 0 (callers that need a
    regularized version add their own floor, see the strain Hamiltonian).
    """
    p = np.asarray(p, dtype=float)
    norm2 = float(p @ p)
    if norm2 == 0.0:
        raise ValueError("strain_rate undefined for zero direction vector")
    return -float(p @ sample.DV @ p) / norm2


def stretch_rate_general(sample: VelocitySample, n) -> float:
    """Relative surface-element growth rate div(V) - n . DV . n.

    Valid in any dimension for a unit normal n; reduces to -n . DV . n for
    incompressible flows.
    """
    n = np.asarray(n, dtype=float)
    if abs(n @ n - 1.0) > 1e-12:
        raise ValueError("stretch_rate_general requires a unit normal")
    return float(np.trace(sample.DV)) - float(n @ sample.DV @ n)


def stretch_rate_curl_form(V, DV, n, Dn) -> float:
    """Alternative 3D stretch rate (n . V) div(n) - curl(V x n) . n.

    Requires an extension of the unit normal off the surface: n and its
    Jacobian Dn (with rows d n_i / dx_j) must describe a unit vector field
    near the evaluation point.  Used purely as a cross-check of
    stretch_rate_general, to which it is identical in R^3.
    """
    V = np.asarray(V, dtype=float)
    n = np.asarray(n, dtype=float)
    DV = np.asarray(DV, dtype=float)
    Dn = np.asarray(Dn, dtype=float)
    if V.shape != (3,) or n.shape != (3,):
        raise ValueError("curl form is 3D only")
    if abs(n @ n - 1.0) > 1e-12:
        raise ValueError("stretch_rate_curl_form requires a unit normal field")

    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0

    # DW[k, j] = d/dx_j (V x n)_k by the product rule
    DW = np.einsum("klm,lj,m->kj", eps, DV, n) + np.einsum(
        "klm,l,mj->kj", eps, V, Dn
    )
    curl_W = np.einsum("ijk,kj->i", eps, DW)
    return float((n @ V) * np.trace(Dn) - curl_W @ n)


def front_stretch_rate(sample: VelocitySample, n, kappa: float, s_L: float) -> float:
    """Stretch rate of a front moving with the flow plus normal speed s_L.

    For incompressible flow this is strain_rate + s_L * kappa where kappa is
    the front curvature.
    """
    return strain_rate(sample, n) + s_L * float(kappa)


@dataclass(frozen=True)
class PolyVelocity3D:
    """3D polynomial velocity a + Bx + quadratic, with exact gradient.

    The quadratic coefficient array C has C[i] symmetric so the gradient is
    simply B[i, :] + 2 (C[i] x).  Used by the 3D stretch-rate cross-checks.
    """

    a: np.ndarray
    B: np.ndarray
    C: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator) -> "PolyVelocity3D":
        a = rng.uniform(-1, 1, 3)
        B = rng.uniform(-1, 1, (3, 3))
        C = rng.uniform(-1, 1, (3, 3, 3))
        C = 0.5 * (C + np.transpose(C, (0, 2, 1)))
        return cls(a=a, B=B, C=C)

    def sample(self, x) -> VelocitySample:
        x = np.asarray(x, dtype=float)
        V = self.a + self.B @ x + np.einsum("ijk,j,k->i", self.C, x, x)
        DV = self.B + 2.0 * np.einsum("ijk,k->ij", self.C, x)
        return VelocitySample(V=V, DV=DV)


@dataclass(frozen=True)
class AffineUnitNormal3D:
    """Unit normal field n = m/|m| for affine m, with exact Jacobian."""

    m0: np.ndarray
    M: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator) -> "AffineUnitNormal3D":
        m0 = rng.uniform(-1, 1, 3)
        m0 += np.sign(m0) + (m0 == 0)  # keep |m| away from zero near origin
        M = rng.uniform(-1, 1, (3, 3))
        return cls(m0=m0, M=M)

    def sample(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        m = self.m0 + self.M @ x
        norm = float(np.linalg.norm(m))
        n = m / norm
        Dn = (np.eye(3) - np.outer(n, n)) @ self.M / norm
        return n, Dn


def segment_stretch_oracle(
    flow: FlowSpec, x, tangent, eps_len: float = 1e-4, dt: float = 1e-6
) -> float:
    """Finite-difference stretch rate of a short material segment (2D).

    Places endpoints x +/- (eps_len/2) * tangent, transports both under the
    flow map for dt (one RK4 step), and returns (sigma(dt) - sigma(0)) /
    (sigma(0) * dt).  Independent of the closed-form stretch formulas, so it
    serves as their oracle: for a segment with unit tangent t and normal n,
    the measured rate approaches t . DV . t = div(V) - n . DV . n.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(tangent, dtype=float)
    t = t / np.linalg.norm(t)
    a = x - 0.5 * eps_len * t
    b = x + 0.5 * eps_len * t

    def vel(p):
        return flow.sample(p[0], p[1]).V

    def rk4(p):
        k1 = vel(p)
        k2 = vel(p + 0.5 * dt * k1)
        k3 = vel(p + 0.5 * dt * k2)
        k4 = vel(p + dt * k3)
        return p + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    sigma0 = np.linalg.norm(b - a)
    sigma1 = np.linalg.norm(rk4(b) - rk4(a))
    return float((sigma1 - sigma0) / (sigma0 * dt))
