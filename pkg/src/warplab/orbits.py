"""Deck-transformation orbit tables, counting, and growth-order fits.

The deck group is the integers acting by v -> v + 2*pi*l on the halfplane
reduction; d_l is the distance from an axis point to its l-th translate.
Counting uses the closed-ball convention #(R) = 2 max{l : d_l <= R} + 1
(identity plus both signs).

Window machinery: on a stretch where h(r) = (1+r^2)^(-a), minimizing the
radial-out, wind-l-times, radial-back test loop 2r + 2*pi*l*h(r) at
r = (2*pi*a*l)^(1/(2a+1)) gives cost

    C(a) = (2 + 1/a) (2*pi*a)^(1/(2a+1))

per l^(1/(2a+1)).  Requiring the loop and its circumradius to stay inside
the stretch [S, S^2] (S twice the stretch's opening radius) confines the
index to l in [rho1 S^(2a+1), rho2 S^(4a+2)] with

    rho1 = C(a)^((2a+1)/(2a)),      rho2 = C(a)^-(2a+1),

and there the distance obeys the two-sided power law

    C1 l^(1/(2a+1)) <= d_l <= C2 l^(1/(2a+1)),
    C1 = (2*pi/C(a))^(1/(2a)),      C2 = C(a).

Counts at radius rho inside the corresponding distance window then grow
like rho^(2a+1), which growth_slope fits on log-log samples.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .cache import OrbitCache
from .halfplane import (
    HalfplaneMetric,
    QuadSettings,
    axis_count_at_radius,
    orbit_distance,
)


class WindowEmpty(ValueError):
    """The admissible index window for this scale is empty."""


def loop_cost_coefficient(a: float) -> float:
    """C(a): minimized radial+winding loop cost per l^(1/(2a+1))."""
    return (2.0 + 1.0 / a) * (2.0 * math.pi * a) ** (1.0 / (2.0 * a + 1.0))


def window_index_bounds(a: float, S: float) -> tuple[float, float]:
    """(rho1 S^(2a+1), rho2 S^(4a+2)): indices with two-sided power control."""
    C = loop_cost_coefficient(a)
    rho1 = C ** ((2.0 * a + 1.0) / (2.0 * a))
    rho2 = C ** (-(2.0 * a + 1.0))
    lo = rho1 * S ** (2.0 * a + 1.0)
    hi = rho2 * S ** (4.0 * a + 2.0)
    if lo > hi:
        raise WindowEmpty(f"rho1 S^(2a+1)={lo} > rho2 S^(4a+2)={hi}: S too small")
    return lo, hi


def sandwich_constants(a: float) -> tuple[float, float]:
    """(C1, C2) with C1 l^(1/(2a+1)) <= d_l <= C2 l^(1/(2a+1)) on the window."""
    C = loop_cost_coefficient(a)
    return (2.0 * math.pi / C) ** (1.0 / (2.0 * a)), C


@dataclass(frozen=True)
class GrowthWindow:
    lo: float
    hi: float
    exponent: float  # decay exponent of the controlling stretch
    scale: float  # S, twice the stretch opening radius

    def __post_init__(self):
        if not (0 < self.lo < self.hi):
            raise WindowEmpty(f"invalid window [{self.lo}, {self.hi}]")

    @staticmethod
    def for_stretch(a: float, S: float) -> "GrowthWindow":
        """Distance window on which counts are power-controlled: map the
        index window through the two-sided power law."""
        l_lo, l_hi = window_index_bounds(a, S)
        C1, C2 = sandwich_constants(a)
        e = 1.0 / (2.0 * a + 1.0)
        return GrowthWindow(C2 * l_lo**e, C1 * l_hi**e, a, S)


class OrbitTable:
    """Memoized distances l -> (d_l, clairaut_c, r_max) for one model."""

    def __init__(self, metric: HalfplaneMetric, cache: OrbitCache | None = None,
                 settings: QuadSettings | None = None):
        self.metric = metric
        self.cache = cache
        self.settings = settings or QuadSettings()
        self.entries: dict = {}
        if cache is not None:
            self.entries.update(cache.load())

    def distance(self, l) -> float:
        l = abs(int(l)) if abs(l) < 2**53 else abs(l)
        if l == 0:
            return 0.0
        hit = self.entries.get(l)
        if hit is not None:
            return hit[0]
        d, sol = orbit_distance(self.metric, l, settings=self.settings)
        rec = (d, sol.clairaut_c if sol else 0.0, sol.r_max if sol else 0.0)
        self.entries[l] = rec
        if self.cache is not None:
            self.cache.append(l, *rec)
        return d

    def tabulate(self, ls):
        return {int(l): self.distance(l) for l in ls}

    def max_index_within(self, R: float) -> int:
        """max{l : d_l <= R} by doubling + integer bisection on monotone d."""
        if self.distance(1) > R:
            return 0
        hi = 1
        while self.distance(2 * hi) <= R:
            hi *= 2
        lo = hi
        hi = 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.distance(mid) <= R:
                lo = mid
            else:
                hi = mid
        return lo


def orbit_count(table: OrbitTable, R: float) -> int:
    """#{g : d(g p, p) <= R} = 2 max{l >= 0 : d_l <= R} + 1, using d_{-l} = d_l."""
    if R < 0:
        return 0
    return 2 * table.max_index_within(R) + 1


def fast_orbit_count(metric: HalfplaneMetric, R: float, settings=None) -> float:
    """Same count through the turning-parameter inversion; usable when the
    threshold index is astronomically large.  Returns a float count."""
    n = axis_count_at_radius(metric, R, settings=settings)
    return 2.0 * n + 1.0


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    residual: float  # rms of log-count residuals
    samples: list = field(default_factory=list)  # (R, count)


def growth_slope(
    metric_or_table,
    window: GrowthWindow,
    samples: int = 14,
    settings: QuadSettings | None = None,
) -> SlopeFit:
    """Least-squares slope of log #(R) vs log R across the window.

    Requires at least 10 sample radii.  Accepts an OrbitTable (integer
    bisection counting) or a bare metric (fast inversion counting, needed
    when indices overflow tabulation).
    """
    if samples < 10:
        raise ValueError("need >= 10 window samples")
    Rs = np.exp(np.linspace(math.log(window.lo), math.log(window.hi), samples))
    pts = []
    for R in Rs:
        if isinstance(metric_or_table, OrbitTable):
            cnt = float(orbit_count(metric_or_table, float(R)))
        else:
            cnt = fast_orbit_count(metric_or_table, float(R), settings=settings)
        pts.append((float(R), cnt))
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return SlopeFit(float(slope), float(intercept), resid, pts)


def fit_count_constants(metric_or_table, k: float, R_lo: float, R_hi: float,
                        samples: int = 24, settings=None):
    """(c1, c2) = min/max of #(R)/R^k over log-spaced R in [R_lo, R_hi]."""
    Rs = np.exp(np.linspace(math.log(R_lo), math.log(R_hi), samples))
    ratios = []
    for R in Rs:
        if isinstance(metric_or_table, OrbitTable):
            cnt = float(orbit_count(metric_or_table, float(R)))
        else:
            cnt = fast_orbit_count(metric_or_table, float(R), settings=settings)
        ratios.append(cnt / float(R) ** k)
    return min(ratios), max(ratios)


def check_distance_sandwich(table_or_metric, a: float, S: float, n_samples: int = 25,
                            settings=None):
    """Sample indices log-spaced across the window of scale S and check
    C1 l^(1/(2a+1)) <= d_l <= C2 l^(1/(2a+1)).  Returns (ok, rows)."""
    l_lo, l_hi = window_index_bounds(a, S)
    C1, C2 = sandwich_constants(a)
    e = 1.0 / (2.0 * a + 1.0)
    ls = np.exp(np.linspace(math.log(l_lo), math.log(l_hi), n_samples))
    rows = []
    ok = True
    for lf in ls:
        l = math.floor(lf)
        if isinstance(table_or_metric, OrbitTable):
            d = table_or_metric.distance(l)
        else:
            d, _ = orbit_distance(table_or_metric, l, settings=settings)
        lo = C1 * l**e
        hi = C2 * l**e
        good = lo <= d <= hi
        ok = ok and good
        rows.append((l, d, lo, hi, good))
    return ok, rows
