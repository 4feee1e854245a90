"""Cutoff smoothing of piecewise warping functions.

Each junction R gets a one-sided blend: entering a steeper piece the blend
sits on [R, 1.2R], entering a shallower one on [0.8R, R]; this is what
keeps the smoothed function strictly decreasing.  The cutoff is the unique
quintic with value/slope/curvature-matched plateaus, affinely placed so
the plateaus occupy the outer 5% of the blend (fractions 1.01/1.19 of R on
the upper side, mirrored below) and the midpoint takes value 1/2.  Its
normalized slope and curvature sups,

        R |phi'|  <= 1.875 / 0.18          ~ 10.417
        R^2|phi''| <= (10/sqrt(3)) / 0.18^2 ~ 178.20

are recorded on the CutoffSpec; the curvature changes sign exactly once, at the
midpoint (concave then convex), which the downstream curvature estimates
rely on.

Blended jets are exact: phi is polynomial and the pieces are closed forms,
so no divided differences enter this path.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .jets import Jet2
from .ladder import ExponentSchedule, OscillationParams, build_scale_ladder
from .piecewise import PiecewiseH, Segment, build_piecewise_h, build_schedule_pieces
from .warping import WarpingFunction

_Q1_SUP = 1.875  # sup |q'| of the unit quintic
_Q2_SUP = 10.0 / math.sqrt(3.0)  # sup |q''|
_MP_EVAL_CUTOFF = 1e70  # promote float queries beyond this radius


class BlendOverlap(RuntimeError):
    """Two smoothing blends intersect (corrupted ladder)."""


class MonotonicityLoss(RuntimeError):
    """The smoothed function stopped decreasing somewhere on a blend."""


class NotCertified(RuntimeError):
    """No sphere dimension up to the cap makes the Ricci grid positive."""

    def __init__(self, k_max, worst):
        super().__init__(f"no k <= {k_max} certifies positivity; worst margins {worst}")
        self.k_max = k_max
        self.worst = worst


def _quintic(x):
    """q, q', q'' of the plateau quintic on the unit interval."""
    if x <= 0.0:
        return 1.0, 0.0, 0.0
    if x >= 1.0:
        return 0.0, 0.0, 0.0
    q = 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
    d1 = -30.0 * x * x * (1.0 - x) ** 2
    d2 = -60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)
    return q, d1, d2


@dataclass(frozen=True)
class CutoffSpec:
    """Placement and observed bounds of the cutoff at one junction."""

    side: str  # "above": blend on [R, 1.2R]; "below": blend on [0.8R, R]
    lo_frac: float = None
    mid_frac: float = None
    hi_frac: float = None
    c1_bound: float = field(default=_Q1_SUP / 0.18)
    c2_bound: float = field(default=_Q2_SUP / 0.18**2)

    def __post_init__(self):
        if self.side not in ("above", "below"):
            raise ValueError(f"side must be 'above' or 'below', got {self.side!r}")
        base = (1.01, 1.1, 1.19) if self.side == "above" else (0.81, 0.9, 0.99)
        object.__setattr__(self, "lo_frac", base[0] if self.lo_frac is None else self.lo_frac)
        object.__setattr__(self, "mid_frac", base[1] if self.mid_frac is None else self.mid_frac)
        object.__setattr__(self, "hi_frac", base[2] if self.hi_frac is None else self.hi_frac)

    def blend_fracs(self):
        return (1.0, 1.2) if self.side == "above" else (0.8, 1.0)

    def span_frac(self):
        return self.hi_frac - self.lo_frac

    def phi(self, r, R):
        """(phi, phi', phi'') at radius r for junction radius R."""
        span = self.span_frac() * R
        x = (r - self.lo_frac * R) / span
        xf = float(x) if not isinstance(x, mpmath.mpf) else x
        q, d1, d2 = _quintic(float(xf))
        one = r * 0 + 1.0  # scalar-type carrier
        return q * one, (d1 / span) * one, (d2 / (span * span)) * one


@dataclass(frozen=True)
class Blend:
    R: object  # junction radius (mpf)
    spec: CutoffSpec
    left: Segment
    right: Segment
    lo: object  # blend interval (mpf)
    hi: object

    def jet(self, r) -> Jet2:
        lo_plateau = self.spec.lo_frac * self.R
        hi_plateau = self.spec.hi_frac * self.R
        if r <= lo_plateau:
            return self.left.jet(r)
        if r >= hi_plateau:
            return self.right.jet(r)
        Rs = float(self.R) if isinstance(r, float) else self.R
        p, p1, p2 = self.spec.phi(r, Rs)
        hl = self.left.jet(r)
        hr = self.right.jet(r)
        phi_jet = Jet2(p, p1, p2)
        out = phi_jet * hl + (1.0 - phi_jet) * hr
        if isinstance(r, float) and isinstance(out.value, float) and (
            out.value <= 0.0 or out.d1 == 0.0 or not math.isfinite(out.value)
        ):
            return self.jet(mpmath.mpf(r))  # degenerate in doubles: redo exactly
        return out


class SmoothedH:
    """Piecewise warping with quintic blends across every junction.

    Outside all blend intervals evaluation is bit-identical to the base
    piecewise function; on each blend the value is sandwiched between the
    two pieces being joined.
    """

    def __init__(self, base: PiecewiseH, blends):
        self.base = base
        self.blends = sorted(blends, key=lambda b: mpmath.mpf(b.lo))
        for a, b in zip(self.blends, self.blends[1:]):
            if not (a.hi < b.lo):
                raise BlendOverlap(f"blends at {a.R} and {b.R} intersect")
        self._keys = [_clamped_float(b.lo) for b in self.blends]
        self._his = [b.hi for b in self.blends]

    def _blend_at(self, r):
        idx = bisect_right(self._keys, _clamped_float(r)) - 1
        if idx >= 0 and r < self._his[idx]:
            b = self.blends[idx]
            if r >= b.lo:
                return b
        return None

    def jet(self, r) -> Jet2:
        b = self._blend_at(r)
        if b is not None:
            return b.jet(r)
        return self.base.jet(r)

    def value(self, r):
        return self.jet(r).value

    def __call__(self, r) -> Jet2:
        return self.jet(r)

    def as_warping(self, label="smoothed-h") -> WarpingFunction:
        return WarpingFunction(label, lambda x: self.jet(x.value))

    def last_radius(self):
        return self.base.segments[-1].r_lo

    def breakpoints_float(self, r_max=None):
        """Junctions and blend edges below r_max, as floats (for quadrature
        panel splitting)."""
        pts = []
        for b in self.blends:
            for x in (b.lo, b.R, b.hi):
                pts.append(_clamped_float(x))
        for s in self.base.segments[1:]:
            pts.append(_clamped_float(s.r_lo))
        pts = sorted(set(p for p in pts if math.isfinite(p)))
        if r_max is not None:
            pts = [p for p in pts if p < r_max]
        return pts


def _clamped_float(x):
    try:
        return float(x)
    except OverflowError:
        return float("inf")


def smooth(
    hp: PiecewiseH,
    specs: dict | None = None,
    monotonicity_samples: int = 10_000,
    check: bool = True,
) -> SmoothedH:
    """Blend every junction of hp with its one-sided quintic cutoff.

    specs optionally overrides the CutoffSpec per junction index.  The
    smoothed function is sampled at `monotonicity_samples` points per blend
    and must be strictly decreasing there (MonotonicityLoss otherwise);
    disjointness of blends is asserted (BlendOverlap).
    """
    blends = []
    for idx, (left, right) in enumerate(zip(hp.segments, hp.segments[1:])):
        R = right.r_lo
        side = "above" if right.p > left.p else "below"
        spec = (specs or {}).get(idx) or CutoffSpec(side=side)
        f_lo, f_hi = spec.blend_fracs()
        blends.append(Blend(R, spec, left, right, f_lo * R, f_hi * R))
    sm = SmoothedH(hp, blends)
    if check:
        _check_blend_monotonicity(sm, monotonicity_samples)
    return sm


def _check_blend_monotonicity(sm: SmoothedH, n: int):
    for b in sm.blends:
        use_mp = float(b.R) > _MP_EVAL_CUTOFF if math.isfinite(_clamped_float(b.R)) else True
        lo, hi = b.lo, b.hi
        for i in range(n):
            t = (i + 0.5) / n
            r = lo + (hi - lo) * t
            r = r if use_mp else float(r)
            j = b.jet(r)
            if not (j.d1 < 0):
                raise MonotonicityLoss(
                    f"h_s' = {j.d1} >= 0 at r = {r} inside blend at R = {b.R}"
                )


@dataclass
class ObservationCheck:
    ok: bool
    c: float
    C: float
    reason: str = ""


def verify_observation(h_old, h_new, interval, n: int = 2000) -> ObservationCheck:
    """Largest c and smallest C with, on the sampled interval,

        h_new' < 0,   |h_new'/h_new| > c |h_old'/h_old|,
        h_new''/h_new < C h_old''/h_old.

    Both arguments are jet-valued callables positive on the interval.  The
    returned constants carry 0.99/1.01 safety margins off the grid inf/sup;
    ok is False when h_new fails to decrease somewhere or when no positive
    constants exist (e.g. the reference curvature ratio changes sign).
    """
    a, b = interval
    use_mp = isinstance(a, mpmath.mpf) or isinstance(b, mpmath.mpf) or float(b) > _MP_EVAL_CUTOFF
    c_inf = None
    C_sup = None
    for i in range(n):
        t = (i + 0.5) / n
        r = a + (b - a) * t
        if not use_mp:
            r = float(r)
        jo = h_old(r) if not isinstance(h_old, (SmoothedH,)) else h_old.jet(r)
        jn = h_new(r) if not isinstance(h_new, (SmoothedH,)) else h_new.jet(r)
        if not (jn.d1 < 0):
            return ObservationCheck(False, 0.0, float("inf"), f"h_new' >= 0 at r={r}")
        lo_old = jo.d1 / jo.value
        lo_new = jn.d1 / jn.value
        ratio1 = abs(lo_new) / abs(lo_old)
        c_inf = ratio1 if c_inf is None else min(c_inf, ratio1)
        q_old = jo.d2 / jo.value
        q_new = jn.d2 / jn.value
        if q_old <= 0:
            return ObservationCheck(
                False, 0.0, float("inf"), f"reference curvature ratio <= 0 at r={r}"
            )
        ratio2 = q_new / q_old
        C_sup = ratio2 if C_sup is None else max(C_sup, ratio2)
    c = 0.99 * float(c_inf)
    C = 1.01 * float(C_sup) if C_sup > 0 else float(C_sup) / 1.01
    return ObservationCheck(c > 0, c, C)


# -- positivity certification ------------------------------------------------


@dataclass
class RegimeMargin:
    label: str
    r: float  # log10 of the radius when beyond float range
    margin: float  # min over the regime of (1+r^2) * min-direction Ricci


@dataclass
class Certificate:
    k: int
    k_max: int
    margins: list
    grid_size: int

    def worst(self):
        return min(self.margins, key=lambda m: m.margin)


def certification_grid(sm: SmoothedH, r_min: float = 1e-3, per_interval: int = 240):
    """Log-spaced radii covering [r_min, 1.3 * last junction], densified per
    structural interval (pieces, bridges, blends) with regime labels."""
    # structural edges: blend lo/hi and segment junctions
    marks = []
    for b in sm.blends:
        marks.append((b.lo, f"blend@{_short(b.R)}"))
        marks.append((b.hi, None))
    for s in sm.base.segments[1:]:
        marks.append((s.r_lo, None))
    marks.sort(key=lambda t: mpmath.mpf(t[0]))
    last = sm.last_radius()
    top = mpmath.mpf(last) * mpmath.mpf("1.3") if last and mpmath.mpf(last) > 0 else mpmath.mpf(1e6)

    cuts = [mpmath.mpf(r_min)]
    for x, _ in marks:
        if r_min < x < top:
            cuts.append(mpmath.mpf(x))
    cuts.append(top)

    grid, glabels = [], []
    for lo, hi in zip(cuts, cuts[1:]):
        la, lb = mpmath.log10(lo), mpmath.log10(hi)
        for i in range(per_interval):
            e = la + (lb - la) * (i + 0.5) / per_interval
            r = mpmath.mpf(10) ** e
            if float(e) <= math.log10(_MP_EVAL_CUTOFF):
                grid.append(float(r))
            else:
                grid.append(r)
            glabels.append(_regime_label(sm, grid[-1]))
    return grid, glabels


def _short(x):
    return mpmath.nstr(mpmath.mpf(x), 4)


def _regime_label(sm: SmoothedH, r):
    b = sm._blend_at(r)
    if b is not None:
        return f"blend@{_short(b.R)}"
    seg = sm.base.segment_at(r)
    return f"{seg.kind}(p={seg.p})"


def effective_exponent_max(sm: SmoothedH, grid=None) -> float:
    """sup over the grid of |h'/h| (1+r^2) / (2r): the local decay exponent,
    equal to p on a pure (1+r^2)^(-p) stretch and larger inside blends."""
    if grid is None:
        grid, _ = certification_grid(sm, per_interval=60)
    worst = 0.0
    for r in grid:
        j = sm.jet(r)
        val = abs(j.d1) * (1 + r * r) / (2 * r * j.value)
        worst = max(worst, float(val))
    return worst


def dimension_threshold(p: float) -> float:
    """max(4p+2, 16p^2+8p): the asymptotic sphere dimension above which a
    pure decay exponent p yields positive Ricci in all directions."""
    return max(4.0 * p + 2.0, 16.0 * p * p + 8.0 * p)


def certify_positive_ricci(
    sm_or_h, f: WarpingFunction, k_max: int, grid=None, labels=None
) -> Certificate:
    """Smallest sphere dimension k <= k_max with positive Ricci on the grid.

    All three directions are nondecreasing in k, so the minimal certified k
    is found by scanning the per-point affine components once.  Margins are
    reported as (1+r^2)-scaled minima per structural regime, which keeps
    huge-radius tails away from float underflow without changing signs.
    """
    if isinstance(sm_or_h, SmoothedH):
        if grid is None:
            grid, labels = certification_grid(sm_or_h)
        h_jet = sm_or_h.jet
    else:
        if grid is None:
            raise ValueError("explicit grid required for plain warping functions")
        h_jet = lambda r: sm_or_h(r)
    if labels is None:
        labels = ["all"] * len(grid)

    n = len(grid)
    t_h = np.empty(n)
    t_fr = np.empty(n)
    t_cr = np.empty(n)
    t_s1 = np.empty(n)
    t_s2 = np.empty(n)
    t_s3 = np.empty(n)
    logr = np.empty(n)
    for i, r in enumerate(grid):
        hj = h_jet(r)
        fj = f(r)
        w = 1 + r * r  # positive scale factor, keeps tails representable
        t_h[i] = float(-hj.d2 / hj.value * w)
        t_fr[i] = float(-fj.d2 / fj.value * w)
        t_cr[i] = float(-(fj.d1 / fj.value) * (hj.d1 / hj.value) * w)
        t_s1[i] = float(-fj.d2 / fj.value * w)
        t_s2[i] = float((1 - fj.d1 * fj.d1) / (fj.value * fj.value) * w)
        t_s3[i] = float(-(fj.d1 / fj.value) * (hj.d1 / hj.value) * w)
        logr[i] = float(mpmath.log10(r)) if isinstance(r, mpmath.mpf) else math.log10(r)

    for k in range(1, k_max + 1):
        radial = t_h + k * t_fr
        circle = t_h + k * t_cr
        sphere = t_s1 + (k - 1) * t_s2 + t_s3
        mins = np.minimum(np.minimum(radial, circle), sphere)
        if np.all(mins > 0):
            margins = {}
            for lab in set(labels):
                idx = [i for i, L in enumerate(labels) if L == lab]
                j = min(idx, key=lambda i: mins[i])
                margins[lab] = RegimeMargin(lab, logr[j], float(mins[j]))
            return Certificate(k, k_max, sorted(margins.values(), key=lambda m: m.margin), n)

    radial = t_h + k_max * t_fr
    circle = t_h + k_max * t_cr
    sphere = t_s1 + (k_max - 1) * t_s2 + t_s3
    mins = np.minimum(np.minimum(radial, circle), sphere)
    j = int(np.argmin(mins))
    raise NotCertified(k_max, RegimeMargin(labels[j], logr[j], float(mins[j])))


# -- top-level builders ------------------------------------------------------


def build_oscillating_h(p: OscillationParams, radius_bound: float = 1e300, check: bool = True):
    """Ladder -> piecewise -> smoothed, returning (ladder, piecewise, smoothed)."""
    ladder = build_scale_ladder(p, radius_bound)
    hp = build_piecewise_h(ladder, p)
    return ladder, hp, smooth(hp, check=check)


def build_schedule_h(s: ExponentSchedule, radius_bound: float = 1e300, check: bool = True) -> SmoothedH:
    """Smoothed warping visiting the scheduled exponents in order."""
    return smooth(build_schedule_pieces(s, radius_bound), check=check)


def pure_model_h(alpha: float) -> SmoothedH:
    """Degenerate single-exponent schedule: (1+r^2)^(-alpha) with no blends."""
    seg = Segment(mpmath.mpf(0), None, float(alpha), mpmath.mpf(1), "piece")
    return SmoothedH(PiecewiseH([seg]), [])
