"""Capacity, covering content, and box-dimension fits for orbit metrics.

An orbit of the integer deck group carries the translation-invariant
metric rho(a, b) = d_{|a-b|} / scale with d nondecreasing and subadditive.
On such path-ordered metrics a maximal separated subset can be taken
greedily left to right: consecutive gaps >= eps force all pairwise
distances >= eps (index differences add, d is nondecreasing), and any
separated set can be pushed left index by index without losing
separation, so the greedy sweep is optimal.  Translation invariance
collapses the sweep to a constant index stride, which keeps capacities of
astronomically large balls computable.

Conventions: balls are closed (d <= R), separation is closed (d >= eps),
matching the counting function #(R) = 2 max{l : d_l <= R} + 1.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq


class DegenerateRange(ValueError):
    """Fit range spans too little to mean anything."""


class MetricInvariantViolation(ValueError):
    """The distance table is not monotone/subadditive where sampled."""


class LinearOrbitMetric:
    """Distances d_l on the integer orbit, divided by a viewing scale.

    Backed either by an explicit table (random instances, small orbits) or
    by a callable l -> d_l (geodesic-backed orbits), where the index of the
    largest ball entry and the smallest separated stride come from integer
    bisection on the monotone d.
    """

    def __init__(self, dist, scale=1.0, l_max=None, validate=True):
        self.scale = float(scale)
        if callable(dist):
            self._d = None
            self._fn = dist
            self.l_max = l_max  # may be None: unbounded
        else:
            self._d = np.asarray(dist, dtype=float)
            if self._d[0] != 0.0:
                raise MetricInvariantViolation("d_0 must be 0")
            self._fn = None
            self.l_max = len(self._d) - 1
            if validate:
                self.check_invariants()

    def raw(self, l) -> float:
        l = abs(int(l))
        if l == 0:
            return 0.0
        if self._d is not None:
            return float(self._d[l])
        return float(self._fn(l))

    def dist(self, l) -> float:
        return self.raw(l) / self.scale

    def check_invariants(self, triple_samples: int = 200, seed: int = 0):
        d = self._d
        if d is None:
            return
        if np.any(np.diff(d) < 0):
            i = int(np.argmin(np.diff(d)))
            raise MetricInvariantViolation(f"d not nondecreasing at l={i}->{i+1}")
        n = len(d)
        rng = np.random.default_rng(seed)
        for _ in range(triple_samples):
            a = int(rng.integers(1, n))
            b = int(rng.integers(1, n - a + 1)) if n - a > 1 else 1
            if a + b >= n:
                continue
            if d[a + b] > d[a] + d[b] + 1e-9 * (d[a] + d[b] + 1):
                raise MetricInvariantViolation(
                    f"subadditivity fails: d[{a + b}] > d[{a}] + d[{b}]"
                )

    def ball_index(self, R: float) -> int:
        """max{l >= 0 : d_l/scale <= R}."""
        target = R * self.scale
        if self.raw(1) > target:
            return 0
        if self._d is not None:
            return int(np.searchsorted(self._d, target, side="right")) - 1
        lo, hi = 1, 2
        cap = self.l_max or 2**200
        while self.raw(hi) <= target:
            lo = hi
            hi *= 2
            if hi > cap:
                hi = cap
                break
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.raw(mid) <= target:
                lo = mid
            else:
                hi = mid
        return lo

    def min_stride(self, eps: float) -> int:
        """min{g >= 1 : d_g/scale >= eps}; inf stride returns 0."""
        target = eps * self.scale
        if self._d is not None:
            idx = int(np.searchsorted(self._d, target, side="left"))
            if idx >= len(self._d):
                return 0  # no stride within the table
            return max(idx, 1)
        if self.raw(1) >= target:
            return 1
        lo, hi = 1, 2
        cap = self.l_max or 2**200
        while self.raw(hi) < target:
            lo = hi
            hi *= 2
            if hi > cap:
                return 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.raw(mid) < target:
                lo = mid
            else:
                hi = mid
        return hi


class GeodesicOrbitMetric(LinearOrbitMetric):
    """Orbit metric backed by halfplane geodesics, with ball indices and
    separation strides found by turning-parameter inversion, so capacities
    stay computable when threshold indices overflow any table."""

    def __init__(self, metric, scale=1.0, settings=None, table=None):
        # imported here only to keep module load order flat; no cycle exists
        from .halfplane import QuadSettings
        from .orbits import OrbitTable

        self._metric = metric
        self._table = table or OrbitTable(metric, settings=settings)
        self._settings = settings or QuadSettings()
        super().__init__(self._table.distance, scale=scale, l_max=None, validate=False)

    def ball_index(self, R: float) -> int:
        from .halfplane import axis_count_at_radius

        return int(axis_count_at_radius(self._metric, R * self.scale, settings=self._settings))

    def min_stride(self, eps: float) -> int:
        from .halfplane import _bracket_c_for, _representable_floor, delta_v_of_c, length_of_c

        target = eps * self.scale
        if self.raw(1) >= target:
            return 1
        _, c_floor = _representable_floor(self._metric)
        lo, hi = _bracket_c_for(
            self._metric, lambda c: length_of_c(self._metric, c, self._settings),
            target, c_floor, self._settings,
        )
        x = brentq(
            lambda x: math.log(length_of_c(self._metric, math.exp(x), self._settings) / target),
            math.log(lo), math.log(hi), xtol=1e-12, rtol=8.9e-16,
        )
        l_star = delta_v_of_c(self._metric, math.exp(x), settings=self._settings) / (2.0 * math.pi)
        g = max(int(math.floor(l_star - 1e-12)) + 1, 1)
        # the straight axis loop can undercut the arc only at small indices;
        # verify and adjust exactly there
        if g < 10**6:
            while self.raw(g) < target:
                g += 1
            while g > 1 and self.raw(g - 1) >= target:
                g -= 1
        return g


def capacity(s: LinearOrbitMetric, R: float, lam: float) -> int:
    """Maximum cardinality of a lam-separated subset of the closed ball
    B_R(0), via the constant-stride form of the greedy sweep."""
    if not (0 < lam < R):
        raise ValueError("need 0 < lam < R")
    N = s.ball_index(R)
    if N == 0:
        return 1
    g = s.min_stride(lam)
    if g == 0 or g > 2 * N:
        return 1
    return 2 * N // g + 1


def capacity_sweep(s: LinearOrbitMetric, R: float, lam: float) -> int:
    """Literal left-to-right greedy sweep over the ball's integer points
    (explicit tables only; cross-validates the stride formula)."""
    N = s.ball_index(R)
    pts = range(-N, N + 1)
    count = 0
    last = None
    for a in pts:
        if last is None or s.dist(a - last) >= lam:
            count += 1
            last = a
    return count


def capacity_exhaustive(s: LinearOrbitMetric, R: float, lam: float) -> int:
    """Exact maximum by dynamic programming over (position, last chosen);
    exhausts every separated subset implicitly.  For path-ordered metrics
    consecutive separation already forces pairwise separation, which the
    returned witness re-checks."""
    N = s.ball_index(R)
    pts = list(range(-N, N + 1))
    n = len(pts)
    best = [1] * n  # best[i]: max size of separated set ending at pts[i]
    for i in range(n):
        for j in range(i):
            if s.dist(pts[i] - pts[j]) >= lam and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best) if n else 0


@dataclass
class CapacityProfile:
    samples: list = field(default_factory=list)  # (R, lam, cap)
    k_hat: float = float("nan")
    c1_hat: float = float("nan")
    c2_hat: float = float("nan")

    def check_monotone(self):
        """cap nonincreasing in lam at fixed R, nondecreasing in R at fixed lam."""
        by_R = {}
        by_lam = {}
        for R, lam, cap in self.samples:
            by_R.setdefault(R, []).append((lam, cap))
            by_lam.setdefault(lam, []).append((R, cap))
        for R, rows in by_R.items():
            rows.sort()
            for (l1, c1), (l2, c2) in zip(rows, rows[1:]):
                if c2 > c1:
                    return False
        for lam, rows in by_lam.items():
            rows.sort()
            for (r1, c1), (r2, c2) in zip(rows, rows[1:]):
                if c2 < c1:
                    return False
        return True


def build_capacity_profile(s: LinearOrbitMetric, R_values, ratios) -> CapacityProfile:
    prof = CapacityProfile()
    for R in R_values:
        for q in ratios:
            lam = R / q
            prof.samples.append((float(R), float(lam), capacity(s, float(R), float(lam))))
    return prof


def fit_growth_constants(s: LinearOrbitMetric, k: float, R_range, samples: int = 32):
    """(c1, c2) = min/max over the range of #B_R / R^k, counting closed balls."""
    lo, hi = R_range
    if not (hi / lo >= 10.0):
        raise DegenerateRange(f"fit range [{lo}, {hi}] spans less than one decade")
    ratios = []
    for R in np.exp(np.linspace(math.log(lo), math.log(hi), samples)):
        n = s.ball_index(float(R))
        ratios.append((2 * n + 1) / float(R) ** k)
    c1, c2 = min(ratios), max(ratios)
    if not (c1 > 0 and math.isfinite(c2)):
        raise DegenerateRange("degenerate growth constants")
    return c1, c2


@dataclass
class SandwichReport:
    k: float
    c1: float
    c2: float
    rows: list  # (R, lam, cap, lower, upper, ok)
    violations: int

    @property
    def ok(self):
        return self.violations == 0


def check_capacity_sandwich(profile: CapacityProfile, k: float, c1: float, c2: float) -> SandwichReport:
    """Against fitted growth constants: per sample,
    (c1/c2)(R/lam)^k <= cap <= 3^(k+1)(c2/c1)(R/lam)^k."""
    rows = []
    bad = 0
    up_const = 3.0 ** (k + 1) * c2 / c1
    lo_const = c1 / c2
    for R, lam, cap in profile.samples:
        q = (R / lam) ** k
        lo = lo_const * q
        up = up_const * q
        ok = lo <= cap <= up
        bad += 0 if ok else 1
        rows.append((R, lam, cap, lo, up, ok))
    return SandwichReport(k, c1, c2, rows, bad)


@dataclass
class HausdorffEstimate:
    k: float
    delta: float
    content: float
    direction: str  # "upper" or "lower"
    chain_ok: bool = True


def hausdorff_content(
    s: LinearOrbitMetric, k: float, R: float, delta: float, direction: str = "upper",
    fitted=None,
) -> HausdorffEstimate:
    """Covering content of the ball B_R at scale delta.

    upper: cover by delta-balls centered at a maximal delta-separated set
    (count = capacity) and return count * delta^k.  lower: the same greedy
    cover's sum of radius^k, checked against the capacity chain bound
    c1^2/(3^(k+1) c2^2) R^k when fitted constants (c1, c2) are given.
    """
    if not (0 < delta < R):
        raise ValueError("need 0 < delta < R")
    cap = capacity(s, R, delta)
    content = cap * delta**k
    if direction == "upper":
        return HausdorffEstimate(k, delta, content, "upper")
    chain_ok = True
    if fitted is not None:
        c1, c2 = fitted
        lower_bound = c1**2 / (3.0 ** (k + 1) * c2**2) * R**k
        chain_ok = content >= lower_bound
    return HausdorffEstimate(k, delta, content, "lower", chain_ok)


def box_dimension_fit(profile: CapacityProfile) -> float:
    """Least-squares slope of log cap against log(R/lam)."""
    if len(profile.samples) < 8:
        raise DegenerateRange("need at least 8 samples")
    x = np.log([R / lam for R, lam, _ in profile.samples])
    y = np.log([cap for _, _, cap in profile.samples])
    if x.max() - x.min() < math.log(10.0) / 2:
        raise DegenerateRange("R/lam span below half a decade")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def counting_chain_holds(s: LinearOrbitMetric, R: float, lam: float) -> bool:
    """Cap(B_{R-lam/3}; lam) #B_{lam/3} <= #B_R <= Cap(B_R; lam) #B_lam."""
    if not (0 < lam < R):
        raise ValueError("need 0 < lam < R")
    nR = 2 * s.ball_index(R) + 1
    n_third = 2 * s.ball_index(lam / 3.0) + 1
    n_lam = 2 * s.ball_index(lam) + 1
    cap_inner = capacity(s, R - lam / 3.0, lam) if R - lam / 3.0 > lam else 1
    cap_R = capacity(s, R, lam)
    return cap_inner * n_third <= nR <= cap_R * n_lam
