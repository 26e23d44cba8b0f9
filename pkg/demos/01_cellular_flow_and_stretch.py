"""Tour of the cellular flow and the surface stretch-rate machinery.

Samples the vortex lattice, verifies incompressibility pointwise, and pits
the closed-form stretch rate against a brute-force material-segment
transport oracle, in 2D and (via the curl identity) in 3D.
"""

import numpy as np

from gfront import (
    FlowSpec,
    eval_cellular,
    segment_stretch_oracle,
    strain_rate,
    stretch_rate_curl_form,
    stretch_rate_general,
)
from gfront.flow import AffineUnitNormal3D, PolyVelocity3D

A = 4.0
flow = FlowSpec("cellular", A)

print(f"cellular flow, amplitude A = {A}")
for x, y, label in (
    (0.25, 0.25, "vortex center"),
    (0.0, 0.0, "saddle"),
    (0.25, 0.0, "edge midpoint"),
):
    s = eval_cellular(x, y, A)
    div = s.DV[0, 0] + s.DV[1, 1]
    print(f"  ({x:.2f},{y:.2f}) {label:>14}: V = ({s.V[0]:+.3f}, {s.V[1]:+.3f})"
          f"  div V = {div:+.1e}")

print("\nstrain rate at the saddle for a few directions:")
s = eval_cellular(0.0, 0.0, A)
for p in ((1, 0), (0, 1), (1, 1)):
    print(f"  p = {p}: S = {strain_rate(s, np.array(p, float)):+.4f}")

print("\nsegment-transport oracle vs closed form (20 random cases):")
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(20):
    x = rng.uniform(0, 1, 2)
    theta = rng.uniform(0, 2 * np.pi)
    tangent = np.array([np.cos(theta), np.sin(theta)])
    normal = np.array([-tangent[1], tangent[0]])
    exact = stretch_rate_general(flow.sample(x[0], x[1]), normal)
    measured = segment_stretch_oracle(flow, x, tangent)
    worst = max(worst, abs(exact - measured))
print(f"  max |closed form - oracle| = {worst:.2e}  (tolerance 1e-3)")

print("\n3D curl-form identity on random polynomial flows:")
worst = 0.0
for _ in range(10):
    vel = PolyVelocity3D.random(rng)
    nf = AffineUnitNormal3D.random(rng)
    x = rng.uniform(-1, 1, 3)
    sample = vel.sample(x)
    n, Dn = nf.sample(x)
    a = stretch_rate_general(sample, n)
    b = stretch_rate_curl_form(sample.V, sample.DV, n, Dn)
    worst = max(worst, abs(a - b))
print(f"  max |general - curl form| = {worst:.2e}  (tolerance 1e-10)")
