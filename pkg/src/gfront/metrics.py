"""Front-speed estimation, quench detection, and zero-level extraction.

Two estimators observe the same run: the burned-volume rate (the negative
floor integral of G grows linearly at the front speed) and the pointwise
growth rate of -G at a probe node.  Both average over an integer number of
detected periods after a transient, falling back to a trailing-half average
when no period is found.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EstimationError
from .grid import AffineField, floor_integral

MIN_SAMPLES = 16


@dataclass
class DiagnosticsSeries:
    """Per-step scalars recorded by the simulation loop."""

    times: list = field(default_factory=list)
    burned_volume: list = field(default_factory=list)
    g_probe: list = field(default_factory=list)

    def append(self, t: float, volume: float, probe: float) -> None:
        if self.times and t <= self.times[-1]:
            raise ValueError("diagnostic times must be strictly increasing")
        self.times.append(t)
        self.burned_volume.append(volume)
        self.g_probe.append(probe)

    def as_arrays(self):
        t = np.asarray(self.times)
        a = np.asarray(self.burned_volume)
        g = np.asarray(self.g_probe)
        return t, a, g

    def rates(self):
        """(A'(t), G'(t)) by centered differences of the recorded samples."""
        t, a, g = self.as_arrays()
        if len(t) < 3:
            raise EstimationError("need at least 3 samples for rates")
        return np.gradient(a, t), np.gradient(g, t)


@dataclass
class SpeedEstimate:
    s_T: float
    method: str  # window_average | pointwise | corrector
    window: tuple[float, float]
    samples: int
    quenched: bool = False
    quench_time: float | None = None
    period: float | None = None
    drift: float | None = None
    flags: list = field(default_factory=list)


def record_diagnostics(
    series: DiagnosticsSeries, f: AffineField, t: float, probe=(0, 0)
) -> None:
    """Append t, the burned volume -integral(floor G), and G at the probe node."""
    j, i = probe
    g_val = (
        f.P[0] * (i * f.grid.hx) + f.P[1] * (j * f.grid.hy) + f.u[j, i]
    )
    series.append(t, -floor_integral(f), g_val)


def detect_period(t: np.ndarray, signal: np.ndarray) -> float | None:
    """Dominant period of a roughly periodic signal via autocorrelation.

    Looks at the trailing 60% of the samples, detrends, and picks the lag of
    the autocorrelation maximum past the first zero crossing.  Returns None
    for constant or aperiodic signals.
    """
    n = len(signal)
    if n < MIN_SAMPLES:
        return None
    start = int(0.4 * n)
    x = np.asarray(signal[start:], dtype=float)
    x = x - np.mean(x)
    m = len(x)
    scale = float(np.sqrt(np.mean(x * x)))
    if scale < 1e-10 * max(1.0, float(np.max(np.abs(signal)))):
        return None
    corr = np.correlate(x, x, mode="full")[m - 1 :]
    denom = np.arange(m, 0, -1, dtype=float)
    corr = corr / denom  # unbiased-ish normalization
    corr /= corr[0]
    # first zero crossing, then the global max beyond it
    below = np.nonzero(corr < 0.0)[0]
    if len(below) == 0:
        return None
    lag0 = below[0]
    search = corr[lag0 : max(lag0 + 1, int(0.9 * m))]
    if len(search) == 0:
        return None
    peak = lag0 + int(np.argmax(search))
    if corr[peak] < 0.2 or peak <= 1:
        return None
    dt = float(np.median(np.diff(t)))
    return float(peak * dt)


def _windowed_rate(
    t: np.ndarray, accum: np.ndarray, rate: np.ndarray, method: str
) -> SpeedEstimate:
    """Shared window-selection logic for both estimators.

    `accum` is the running integral whose endpoint differences give the
    average of `rate` exactly; the window is an integer number of detected
    periods of `rate` ending at the final sample.
    """
    n = len(t)
    if n < MIN_SAMPLES:
        raise EstimationError(f"series too short for estimation ({n} samples)")
    span = t[-1] - t[0]
    cut_time = t[0] + 0.25 * span
    flags: list[str] = []
    period = detect_period(t, rate)
    t1_idx = None
    if period is not None and period > 0:
        avail = t[-1] - cut_time
        m = int(np.floor(avail / period))
        if m >= 2:
            target = t[-1] - m * period
            t1_idx = int(np.searchsorted(t, target))
            t1_idx = min(max(t1_idx, 0), n - 2)
        else:
            flags.append("window_too_short_for_periods")
    if t1_idx is None:
        if period is None:
            flags.append("no_period_detected")
        t1_idx = int(np.searchsorted(t, t[0] + 0.5 * span))
        t1_idx = min(max(t1_idx, 0), n - 2)
    T1, T2 = float(t[t1_idx]), float(t[-1])
    s_T = float((accum[-1] - accum[t1_idx]) / (T2 - T1))
    est = SpeedEstimate(
        s_T=s_T,
        method=method,
        window=(T1, T2),
        samples=n - t1_idx,
        period=period,
        flags=flags,
    )
    # trend of the rate over the window, per unit time (damping diagnostic)
    seg_t = t[t1_idx:]
    seg_r = rate[t1_idx:]
    if len(seg_t) >= 4:
        est.drift = float(np.polyfit(seg_t, seg_r, 1)[0])
    if s_T < 0:
        est.flags.append("negative_speed")
    return est


def estimate_window_average(series: DiagnosticsSeries) -> SpeedEstimate:
    """Front speed from the linear growth of the burned volume."""
    t, a, _ = series.as_arrays()
    rate, _ = series.rates()
    return _windowed_rate(t, a, rate, "window_average")


def estimate_pointwise(series: DiagnosticsSeries) -> SpeedEstimate:
    """Front speed from the pointwise decay rate of G at the probe."""
    t, _, g = series.as_arrays()
    _, g_rate = series.rates()
    return _windowed_rate(t, -g, -g_rate, "pointwise")


def detect_quench(
    series: DiagnosticsSeries,
    s_L: float,
    threshold: float = 0.05,
    hold_time: float = 0.5,
) -> tuple[bool, float | None]:
    """Front-arrest detection on the burned-volume rate.

    Quenched when the rate stays below threshold * s_L continuously for
    hold_time; returns the earliest such onset time.  The rate is measured
    over a short sliding window rather than sample-to-sample, since the
    volume advances in floor-quantized increments whose single-sample spikes
    would otherwise mask a genuinely arrested front.
    """
    t, a, _ = series.as_arrays()
    if len(t) < 3:
        return False, None
    span = t[-1] - t[0]
    half = min(hold_time / 10.0, 0.25 * span)
    rate = np.empty_like(a)
    for i in range(len(t)):
        lo = int(np.searchsorted(t, t[i] - half))
        hi = min(int(np.searchsorted(t, t[i] + half)), len(t) - 1)
        lo = min(lo, hi - 1)
        rate[i] = (a[hi] - a[lo]) / (t[hi] - t[lo])
    below = rate < threshold * s_L
    start = None
    for i in range(len(t)):
        if below[i]:
            if start is None:
                start = i
            if t[i] - t[start] >= hold_time:
                return True, float(t[start])
        else:
            start = None
    return False, None


# ---------------------------------------------------------------------------
# zero-level extraction (marching squares on the tiled strip)

_EDGE_LOOKUP = {
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    6: [(0, 2)],
    7: [(3, 2)],
    8: [(2, 3)],
    9: [(2, 0)],
    11: [(2, 1)],
    12: [(1, 3)],
    13: [(1, 0)],
    14: [(0, 3)],
}
# cases 5 and 10 are the ambiguous saddles, resolved by the cell average


def _cell_segments(case: int, center_positive: bool):
    if case in (0, 15):
        return []
    if case == 5:
        # positive center joins SW-NE: isolate the negative corners
        return [(0, 1), (2, 3)] if center_positive else [(3, 0), (1, 2)]
    if case == 10:
        # positive center joins SE-NW: isolate the negative corners
        return [(3, 0), (1, 2)] if center_positive else [(0, 1), (2, 3)]
    return _EDGE_LOOKUP[case]


def extract_zero_level(
    f: AffineField, strip: tuple[int, int] = (0, 1), level: float = 0.0
) -> list[np.ndarray]:
    """Marching-squares contour of {G = level} over [a, b] x [0, 1].

    The periodic part is tiled across the strip with the affine offset added
    per period.  Returns polylines as (k, 2) arrays of (x, y) vertices; each
    vertex sits on a grid-cell edge where linear interpolation of G crosses
    the level.
    """
    a, b = int(strip[0]), int(strip[1])
    if b <= a:
        raise ValueError("strip must span at least one period")
    grid = f.grid
    nx, ny = grid.nx, grid.ny
    g0 = f.g_values()
    tiles = [g0 + f.P[0] * k for k in range(a, b)]
    gv = np.concatenate(tiles, axis=1)
    # close the seams: one extra column (next tile start) and row (y wrap)
    right = g0[:, :1] + f.P[0] * b
    gv = np.concatenate([gv, right], axis=1)
    top = np.concatenate(
        [gv[:1, : (b - a) * nx] + f.P[1], gv[:1, -1:] + f.P[1]], axis=1
    )
    gv = np.concatenate([gv, top], axis=0)
    gv = gv - level

    ncx = (b - a) * nx  # cells per row
    hx, hy = grid.hx, grid.hy
    x0 = float(a)

    corner_sw = gv[:-1, :-1]
    corner_se = gv[:-1, 1:]
    corner_ne = gv[1:, 1:]
    corner_nw = gv[1:, :-1]
    case = (
        (corner_sw >= 0).astype(int)
        + 2 * (corner_se >= 0).astype(int)
        + 4 * (corner_ne >= 0).astype(int)
        + 8 * (corner_nw >= 0).astype(int)
    )
    cells = np.argwhere((case != 0) & (case != 15))

    def edge_vertex(jj, ii, edge):
        # edges: 0 bottom, 1 right, 2 top, 3 left; interpolate the crossing
        if edge == 0:
            va, vb = gv[jj, ii], gv[jj, ii + 1]
            frac = va / (va - vb)
            return (x0 + (ii + frac) * hx, jj * hy)
        if edge == 1:
            va, vb = gv[jj, ii + 1], gv[jj + 1, ii + 1]
            frac = va / (va - vb)
            return (x0 + (ii + 1) * hx, (jj + frac) * hy)
        if edge == 2:
            va, vb = gv[jj + 1, ii], gv[jj + 1, ii + 1]
            frac = va / (va - vb)
            return (x0 + (ii + frac) * hx, (jj + 1) * hy)
        va, vb = gv[jj, ii], gv[jj + 1, ii]
        frac = va / (va - vb)
        return (x0 + ii * hx, (jj + frac) * hy)

    def edge_key(jj, ii, edge):
        # canonical (orientation, j, i) so shared edges match across cells
        if edge == 0:
            return ("h", jj, ii)
        if edge == 2:
            return ("h", jj + 1, ii)
        if edge == 3:
            return ("v", jj, ii)
        return ("v", jj, ii + 1)

    segments = []
    for jj, ii in cells:
        c = int(case[jj, ii])
        center = (
            corner_sw[jj, ii] + corner_se[jj, ii] + corner_ne[jj, ii] + corner_nw[jj, ii]
        ) >= 0
        for e1, e2 in _cell_segments(c, center):
            k1, k2 = edge_key(jj, ii, e1), edge_key(jj, ii, e2)
            if k1 == k2:
                continue
            segments.append(
                (k1, k2, edge_vertex(jj, ii, e1), edge_vertex(jj, ii, e2))
            )

    # chain segments into polylines by shared edge keys
    adjacency: dict = {}
    coords: dict = {}
    for k1, k2, p1, p2 in segments:
        coords[k1] = p1
        coords[k2] = p2
        adjacency.setdefault(k1, []).append(k2)
        adjacency.setdefault(k2, []).append(k1)

    visited = set()
    polylines = []
    # open chains first (endpoints have a single neighbor), then closed loops
    keys = sorted(adjacency.keys(), key=lambda k: (len(adjacency[k]), str(k)))
    for start in keys:
        if start in visited or len(adjacency[start]) > 1:
            continue
        chain = [start]
        visited.add(start)
        cur = start
        while True:
            nxt = [k for k in adjacency[cur] if k not in visited]
            if not nxt:
                break
            cur = nxt[0]
            visited.add(cur)
            chain.append(cur)
        polylines.append(np.array([coords[k] for k in chain]))
    for start in sorted(adjacency.keys(), key=str):
        if start in visited:
            continue
        chain = [start]
        visited.add(start)
        cur = start
        while True:
            nxt = [k for k in adjacency[cur] if k not in visited]
            if not nxt:
                break
            cur = nxt[0]
            visited.add(cur)
            chain.append(cur)
        chain.append(start)  # close the loop
        polylines.append(np.array([coords[k] for k in chain]))
    return polylines
