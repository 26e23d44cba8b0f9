import numpy as np
import pytest

from gfront.errors import ConfigError
from gfront.grid import (
    AffineField,
    Grid,
    central_gradient,
    evaluate_stencils,
    floor_integral,
    laplacian,
    read_snapshot,
    second_derivatives,
    snapped_floor,
    write_snapshot,
)

TWO_PI = 2.0 * np.pi


def test_grid_spacing_exact():
    g = Grid(100, 50)
    assert g.hx == 1.0 / 100
    assert g.hy == 1.0 / 50
    assert g.shape == (50, 100)


def test_grid_too_small_rejected():
    with pytest.raises(ConfigError):
        Grid(4, 100)
    with pytest.raises(ConfigError):
        Grid(100, 7)


def test_affine_field_shape_check():
    g = Grid(16, 16)
    with pytest.raises(ConfigError):
        AffineField(g, np.zeros((8, 16)))


def test_gradient_of_plane_is_direction():
    # u = 0 means G = x1: gradient (1, 0) at every node
    f = AffineField.zeros(Grid(32, 32))
    gx, gy = central_gradient(f)
    assert np.allclose(gx, 1.0, atol=1e-14)
    assert np.allclose(gy, 0.0, atol=1e-14)


def test_gradient_of_constant_field_is_direction():
    g = Grid(16, 16)
    f = AffineField(g, np.full(g.shape, 3.7), P=(0.6, 0.8))
    gx, gy = central_gradient(f)
    assert np.allclose(gx, 0.6, atol=1e-14)
    assert np.allclose(gy, 0.8, atol=1e-14)


def test_gradient_second_order_convergence():
    # u = sin(2 pi y)/(2 pi) gives G_y = cos(2 pi y) exactly
    errs = []
    for n in (32, 64, 128):
        g = Grid(n, n)
        f = AffineField.from_function(g, lambda X, Y: np.sin(TWO_PI * Y) / TWO_PI)
        gx, gy = central_gradient(f)
        _, Yc = g.node_coords()
        errs.append(np.max(np.abs(gy - np.cos(TWO_PI * Yc))))
        assert np.allclose(gx, 1.0, atol=1e-13)
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.9)


def test_laplacian_eigenfunctions():
    for n in (32, 64):
        g = Grid(n, n)
        f = AffineField.from_function(
            g, lambda X, Y: np.sin(TWO_PI * X) * np.sin(TWO_PI * Y)
        )
        lap = laplacian(f)
        # discrete eigenvalue of the 5-point stencil for mode (1, 1)
        lam = 2.0 * (2.0 * np.cos(TWO_PI / n) - 2.0) * n * n
        assert np.allclose(lap, lam * f.u, atol=1e-9 * n * n)
        # and it approaches -8 pi^2 u at second order
        assert np.max(np.abs(lap + 8 * np.pi**2 * f.u)) < 60.0 / n**2 * 8 * np.pi**2


def test_laplacian_of_plane_vanishes():
    f = AffineField.zeros(Grid(16, 16))
    assert np.allclose(laplacian(f), 0.0, atol=1e-12)


def test_laplacian_1d_mode():
    g = Grid(128, 128)
    f = AffineField.from_function(g, lambda X, Y: np.cos(TWO_PI * Y))
    lap = laplacian(f)
    assert np.max(np.abs(lap + 4 * np.pi**2 * f.u)) < 0.02 * 4 * np.pi**2


def test_mixed_derivative():
    g = Grid(128, 128)
    f = AffineField.from_function(
        g, lambda X, Y: np.sin(TWO_PI * X) * np.sin(TWO_PI * Y)
    )
    _, _, gxy = second_derivatives(f)
    X, Y = g.node_coords()
    exact = 4 * np.pi**2 * np.cos(TWO_PI * X) * np.cos(TWO_PI * Y)
    assert np.max(np.abs(gxy - exact)) < 0.01 * 4 * np.pi**2


def test_stencilset_matches_pieces():
    g = Grid(24, 24)
    rng = np.random.default_rng(7)
    f = AffineField(g, rng.standard_normal(g.shape))
    st = evaluate_stencils(f)
    gx, gy = central_gradient(f)
    gxx, gyy, gxy = second_derivatives(f)
    assert np.allclose(st.gx, gx, atol=1e-11)
    assert np.allclose(st.gy, gy, atol=1e-11)
    assert np.allclose(st.gxx, gxx, atol=1e-9)
    assert np.allclose(st.gyy, gyy, atol=1e-9)
    assert np.allclose(st.gxy, gxy, atol=1e-9)
    assert np.allclose(st.lap, laplacian(f), atol=1e-9)


def test_affine_seam_consistency():
    # stencils computed through the wrap must match a brute-force evaluation
    # on explicitly tiled G values
    g = Grid(16, 16)
    rng = np.random.default_rng(3)
    f = AffineField(g, 0.3 * rng.standard_normal(g.shape))
    gx, gy = central_gradient(f)
    gv = f.g_values()
    tiled = np.concatenate([gv - 1.0, gv, gv + 1.0], axis=1)  # P = e1 offsets
    brute = (np.roll(tiled, -1, 1) - np.roll(tiled, 1, 1)) / (2 * g.hx)
    inner = brute[:, g.nx : 2 * g.nx]
    assert np.allclose(gx, inner, atol=1e-12)
    # column 0 and wrapped column nx agree once the offset is applied
    assert np.allclose(brute[:, g.nx], brute[:, 2 * g.nx], atol=1e-12)


def test_stencils_linear_in_u():
    g = Grid(16, 16)
    rng = np.random.default_rng(11)
    u1 = rng.standard_normal(g.shape)
    u2 = rng.standard_normal(g.shape)
    a, b = 0.7, -1.3
    f1 = AffineField(g, u1, P=(0, 0))
    f2 = AffineField(g, u2, P=(0, 0))
    f12 = AffineField(g, a * u1 + b * u2, P=(0, 0))
    gx1, _ = central_gradient(f1)
    gx2, _ = central_gradient(f2)
    gx12, _ = central_gradient(f12)
    assert np.allclose(gx12, a * gx1 + b * gx2, atol=1e-11)
    assert np.allclose(
        laplacian(f12), a * laplacian(f1) + b * laplacian(f2), atol=1e-9
    )


class TestFloorIntegral:
    def test_plane_through_origin(self):
        f = AffineField.zeros(Grid(64, 64))
        assert floor_integral(f) == 0.0

    def test_shifted_plane(self):
        g = Grid(64, 64)
        f = AffineField(g, np.full(g.shape, -0.5))
        assert floor_integral(f) == pytest.approx(-0.5, abs=1e-14)

    @pytest.mark.parametrize("m", [1, 2, 7])
    def test_integer_shift(self, m):
        g = Grid(32, 32)
        base = AffineField(g, np.zeros(g.shape))
        shifted = AffineField(g, np.full(g.shape, -float(m)))
        assert floor_integral(shifted) == pytest.approx(-m, abs=1e-13)

    def test_plus_one_identity(self):
        g = Grid(32, 32)
        rng = np.random.default_rng(5)
        u = rng.uniform(-2, 2, g.shape)
        f = AffineField(g, u)
        f1 = AffineField(g, u + 1.0)
        assert floor_integral(f1) == pytest.approx(floor_integral(f) + 1.0, abs=1e-12)

    def test_snap_is_deterministic(self):
        vals = np.array([1.0 - 1e-13, 1.0, 1.0 + 1e-13, -1e-13, 0.25])
        assert snapped_floor(vals).tolist() == [1.0, 1.0, 1.0, 0.0, 0.0]


def test_snapshot_roundtrip(tmp_path):
    g = Grid(16, 12)
    rng = np.random.default_rng(9)
    f = AffineField(g, rng.standard_normal(g.shape), P=(1.0, 0.0))
    path = tmp_path / "field.txt"
    write_snapshot(f, 1.234567890123, path)
    f2, t2 = read_snapshot(path)
    assert t2 == 1.234567890123
    assert f2.grid.nx == 16 and f2.grid.ny == 12
    assert f2.P == f.P
    assert np.array_equal(f2.u, f.u)  # 17 significant digits round-trip doubles

    header = path.read_text().splitlines()[0]
    assert header.startswith("gfront-field v1 16 12 ")
