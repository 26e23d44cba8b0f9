import numpy as np
import pytest

from gfront.flow import eval_cellular
from gfront.grid import AffineField, Grid, laplacian
from gfront.hamiltonian import (
    curvature_term,
    hamiltonian_inviscid,
    hamiltonian_strain,
    infinity_laplacian,
    strain_rate_field,
)
from gfront.weno import OneSidedGradients


def _g(pxm, pxp, pym, pyp):
    return OneSidedGradients(
        px_minus=np.asarray(pxm, dtype=float),
        px_plus=np.asarray(pxp, dtype=float),
        py_minus=np.asarray(pym, dtype=float),
        py_plus=np.asarray(pyp, dtype=float),
    )


class TestInviscidHamiltonian:
    def test_consistency_345(self):
        g = _g(3.0, 3.0, 4.0, 4.0)
        out = hamiltonian_inviscid(g, 0.0, 0.0, 1.0, impl="numpy")
        assert out.value == pytest.approx(5.0, abs=1e-14)

    def test_fast_advection_picks_minus(self):
        g = _g(1.0, 5.0, 0.0, 0.0)
        out = hamiltonian_inviscid(g, 2.0, 0.0, 1.0, impl="numpy")
        assert out.value == pytest.approx(3.0, abs=1e-14)

    def test_rarefaction_gives_zero(self):
        g = _g(-1.0, 1.0, 0.0, 0.0)
        out = hamiltonian_inviscid(g, 0.0, 0.0, 1.0, impl="numpy")
        assert out.value == pytest.approx(0.0, abs=1e-14)

    def test_consistency_random(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            px, py = rng.uniform(-5, 5, 2)
            v1, v2 = rng.uniform(-4, 4, 2)
            s_L = rng.uniform(0.1, 2.0)
            g = _g(px, px, py, py)
            out = hamiltonian_inviscid(g, v1, v2, s_L, impl="numpy").value
            exact = v1 * px + v2 * py + s_L * np.hypot(px, py)
            assert out == pytest.approx(exact, abs=1e-14)

    def test_branch_coverage(self):
        # all three branches of the normal-term selection in each axis
        for v1, expected in ((2.0, 4.0), (-2.0, 9.0), (0.5, 4.0)):
            g = _g(2.0, 3.0, 0.0, 0.0)
            out = hamiltonian_inviscid(g, v1, 0.0, 1.0, impl="numpy").value
            adv = v1 * (2.0 if v1 > 0 else 3.0)
            assert out == pytest.approx(adv + np.sqrt(expected), abs=1e-13)

    def test_monotonicity_scan(self):
        rng = np.random.default_rng(42)
        delta = 1e-6
        for _ in range(1000):
            p = rng.uniform(-5, 5, 4)
            v1, v2 = rng.uniform(-4, 4, 2)
            s_L = rng.uniform(0.1, 2.0)
            base = hamiltonian_inviscid(_g(*p), v1, v2, s_L, impl="numpy").value
            for k, sign in ((0, 1), (1, -1), (2, 1), (3, -1)):
                q = p.copy()
                q[k] += delta
                bumped = hamiltonian_inviscid(_g(*q), v1, v2, s_L, impl="numpy").value
                assert sign * (bumped - base) >= -1e-12


class TestStrainHamiltonian:
    def test_zero_markstein_matches_inviscid_moderate_advection(self):
        # with |V| <= s_L the selections coincide exactly for d = 0
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = rng.uniform(-5, 5, 4)
            v1, v2 = rng.uniform(-1, 1, 2)
            s_L = 1.0
            s = rng.normal()
            a = hamiltonian_strain(_g(*p), s, v1, v2, s_L, 0.0, impl="numpy").value
            b = hamiltonian_inviscid(_g(*p), v1, v2, s_L, impl="numpy").value
            assert a == pytest.approx(b, abs=1e-13)

    def test_positive_speed_for_weak_strain(self):
        # 2 pi A d < s_L keeps the effective speed positive on the whole grid
        g = Grid(64, 64)
        A, d, s_L = 4.0, 0.01, 1.0
        rng = np.random.default_rng(1)
        f = AffineField(g, 0.1 * rng.standard_normal(g.shape))
        DV = eval_cellular(*g.node_coords(), A).DV
        speed = s_L - d * strain_rate_field(f, DV)
        assert np.all(speed > 0)
        assert 2 * np.pi * A * d < s_L

    def test_flipped_branch_value(self):
        g = _g(-1.0, 2.0, 0.0, 0.0)
        # effective speed -1: mirrored selection takes the larger magnitude
        out = hamiltonian_strain(g, 2.0, 0.0, 0.0, 1.0, 1.0, impl="numpy")
        assert out.value == pytest.approx(-2.0, abs=1e-14)
        assert out.effective_speed == pytest.approx(-1.0)

    def test_consistency_random(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            px, py = rng.uniform(-5, 5, 2)
            v1, v2 = rng.uniform(-4, 4, 2)
            s_L = rng.uniform(0.1, 2.0)
            d = rng.uniform(0, 1.0)
            s = rng.normal(scale=3)
            g = _g(px, px, py, py)
            out = hamiltonian_strain(g, s, v1, v2, s_L, d, impl="numpy").value
            exact = v1 * px + v2 * py + (s_L - d * s) * np.hypot(px, py)
            assert out == pytest.approx(exact, abs=1e-13)

    def test_monotonicity_scan_frozen_strain(self):
        rng = np.random.default_rng(11)
        delta = 1e-6
        for _ in range(1000):
            p = rng.uniform(-5, 5, 4)
            v1, v2 = rng.uniform(-4, 4, 2)
            s_L = rng.uniform(0.1, 2.0)
            s = rng.normal(scale=3)  # frozen coefficient during the scan
            d = rng.uniform(0, 1.0)
            base = hamiltonian_strain(_g(*p), s, v1, v2, s_L, d, impl="numpy").value
            for k, sign in ((0, 1), (1, -1), (2, 1), (3, -1)):
                q = p.copy()
                q[k] += delta
                bumped = hamiltonian_strain(
                    _g(*q), s, v1, v2, s_L, d, impl="numpy"
                ).value
                assert sign * (bumped - base) >= -1e-12

    def test_numba_matches_numpy(self):
        rng = np.random.default_rng(8)
        shape = (32, 32)
        g = _g(*(rng.uniform(-4, 4, shape) for _ in range(4)))
        v1 = rng.uniform(-4, 4, shape)
        v2 = rng.uniform(-4, 4, shape)
        s = rng.normal(scale=3, size=shape)
        a = hamiltonian_strain(g, s, v1, v2, 1.0, 0.4, impl="numba").value
        b = hamiltonian_strain(g, s, v1, v2, 1.0, 0.4, impl="numpy").value
        assert np.array_equal(a, b)
        a = hamiltonian_inviscid(g, v1, v2, 1.0, impl="numba").value
        b = hamiltonian_inviscid(g, v1, v2, 1.0, impl="numpy").value
        assert np.array_equal(a, b)


class TestCurvatureTerms:
    def test_planar_front_flat(self):
        f = AffineField.zeros(Grid(32, 32))
        assert np.allclose(curvature_term(f), 0.0, atol=1e-10)
        assert np.allclose(infinity_laplacian(f), 0.0, atol=1e-10)

    def test_paraboloid_patch(self):
        # G = x^2 + y^2 has |DG| div(DG/|DG|) = 2 away from the origin
        for n, tol in ((64, 0.02), (128, 0.005)):
            g = Grid(n, n)
            X, Y = g.node_coords()
            Xc, Yc = X - 0.5, Y - 0.5
            f = AffineField(g, Xc**2 + Yc**2, P=(0.0, 0.0))
            r2 = Xc**2 + Yc**2
            patch = (r2 > 0.1**2) & (np.maximum(np.abs(Xc), np.abs(Yc)) < 0.5 - 3.0 / n)
            curv = curvature_term(f)
            assert np.max(np.abs(curv[patch] - 2.0)) < tol

    def test_aligned_infinity_laplacian_patch(self):
        # G = x^2: gradient aligned with x so the infinity Laplacian is G_xx = 2
        g = Grid(128, 128)
        X, _ = g.node_coords()
        Xc = X - 0.5
        f = AffineField(g, Xc**2, P=(0.0, 0.0))
        patch = (np.abs(Xc) > 0.05) & (np.abs(Xc) < 0.5 - 3.0 / 128)
        lap_inf = infinity_laplacian(f)
        assert np.max(np.abs(lap_inf[patch] - 2.0)) < 0.01

    def test_splitting_identity(self):
        # curvature + infinity Laplacian = Laplacian wherever |DG| >= 0.5
        rng = np.random.default_rng(15)
        g = Grid(64, 64)
        X, Y = g.node_coords()
        for _ in range(10):
            a, b = rng.uniform(-0.05, 0.05, 2)
            u = a * np.sin(2 * np.pi * X) + b * np.cos(2 * np.pi * (X + Y))
            f = AffineField(g, u)  # |DG| stays near 1 for small perturbations
            resid = (
                curvature_term(f, eps=1e-12)
                + infinity_laplacian(f, eps=1e-12)
                - laplacian(f)
            )
            assert np.max(np.abs(resid)) < 1e-8
