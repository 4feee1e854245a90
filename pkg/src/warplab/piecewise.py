"""Continuous piecewise warping functions C (1+r^2)^(-p) per segment.

Segments store their scale constants as mpmath scalars (they overflow
doubles from period 2 on); evaluation stays in the caller's arithmetic
where the constants are float-representable and silently promotes to
mpmath otherwise.  Pure pieces carry C = 1 exactly and skip the constant
multiply, so their values are bit-identical to a standalone power-decay
profile on the same radii.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass

import mpmath

from .jets import Jet2
from .ladder import (
    ExponentSchedule,
    OscillationParams,
    ScaleLadder,
    bridge_constant,
    build_scale_ladder,
    _next_junction,
)

# doubles hold |log10| < ~308; stay clear so squares/ratios inside jet
# algebra never denormalize
_FLOAT_SAFE_LOG10 = 290.0


class ContinuityViolation(RuntimeError):
    """Adjacent segments disagree at their junction beyond tolerance."""


@dataclass(frozen=True)
class Segment:
    r_lo: object  # mpf
    r_hi: object  # mpf or None for +inf
    p: float
    C: object  # mpf scale constant, 1 for pure pieces
    kind: str  # "piece" or "bridge"

    def is_pure(self):
        return self.kind == "piece"

    def c_float(self):
        """Float constant when representable, else None."""
        if self.C == 1:
            return 1.0
        mag = mpmath.log10(abs(self.C))
        if abs(mag) > _FLOAT_SAFE_LOG10:
            return None
        return float(self.C)

    def jet(self, r) -> Jet2:
        if self.C == 1:  # pure pieces share bits with a standalone profile
            x = Jet2.variable(r)
            return (1 + x * x) ** (-self.p)
        if isinstance(r, (mpmath.mpf, mpmath.mpc)):
            x = Jet2.variable(r)
            return ((1 + x * x) ** (-self.p)) * self.C
        cf = self.c_float()
        if cf is None:  # constant outside float range: promote the query
            xm = Jet2.variable(mpmath.mpf(r))
            return ((1 + xm * xm) ** (-self.p)) * self.C
        # scale first, then form derivatives in ratio form: the bare power's
        # jets can underflow where C * (1+r^2)^(-p) is still representable
        p = self.p
        u0 = 1.0 + r * r
        g1 = 2.0 * r / u0
        v = cf * u0 ** (-p)
        d1 = v * (-p) * g1
        if r > 0 and (v == 0.0 or d1 == 0.0 or not math.isfinite(v)):
            # value or slope underflowed doubles: recompute exactly
            xm = Jet2.variable(mpmath.mpf(r))
            return ((1 + xm * xm) ** (-self.p)) * self.C
        d2 = v * (p * (p + 1.0) * g1 * g1 - p * 2.0 / u0)
        return Jet2(v, d1, d2)

    def value(self, r):
        return self.jet(r).value


class PiecewiseH:
    """Ordered continuous segments covering [0, inf), strictly decreasing."""

    def __init__(self, segments, check_continuity=True):
        if not segments:
            raise ValueError("need at least one segment")
        if segments[-1].r_hi is not None:
            raise ValueError("last segment must extend to infinity")
        self.segments = list(segments)
        # float keys for fast locate; huge junctions clamp to +inf which is
        # fine because float queries can never reach them
        self._keys = []
        for s in self.segments[1:]:
            lo = s.r_lo
            self._keys.append(float(lo) if mpmath.log10(max(lo, 1)) < 308 else float("inf"))
        if check_continuity:
            self.check_continuity()

    def junctions(self):
        return [s.r_lo for s in self.segments[1:]]

    def segment_at(self, r):
        idx = bisect_right(self._keys, float(r) if not isinstance(r, mpmath.mpf) else _safe_float(r))
        return self.segments[idx]

    def jet(self, r) -> Jet2:
        return self.segment_at(r).jet(r)

    def value(self, r):
        return self.segment_at(r).value(r)

    def check_continuity(self, rel_tol: float = 1e-10):
        """Junction mismatch beyond rel_tol means ladder/constant corruption."""
        with mpmath.workdps(40):
            for left, right in zip(self.segments, self.segments[1:]):
                rj = mpmath.mpf(right.r_lo)
                lv = left.C * (1 + rj * rj) ** mpmath.mpf(-left.p)
                rv = right.C * (1 + rj * rj) ** mpmath.mpf(-right.p)
                if abs(lv - rv) > rel_tol * abs(rv):
                    raise ContinuityViolation(
                        f"junction at r={mpmath.nstr(rj, 10)}: {mpmath.nstr(lv, 18)} vs "
                        f"{mpmath.nstr(rv, 18)}"
                    )

    def junction_mismatches(self):
        """Relative junction gaps, for reporting."""
        out = []
        with mpmath.workdps(40):
            for left, right in zip(self.segments, self.segments[1:]):
                rj = mpmath.mpf(right.r_lo)
                lv = left.C * (1 + rj * rj) ** mpmath.mpf(-left.p)
                rv = right.C * (1 + rj * rj) ** mpmath.mpf(-right.p)
                out.append(float(abs(lv - rv) / abs(rv)))
        return out


def _safe_float(x):
    return float(x) if mpmath.log10(max(abs(x), 1)) < 308 else float("inf")


def _expand_pieces(exponents, A, B, R11, radius_bound, cyclic=True):
    """Pure pieces [T, 5T^2] per exponent, bridged continuously.

    Ascending steps bridge above through B, descending below through A.
    With `cyclic`, the final piece is bridged back toward the first
    exponent and that tail extends to infinity; otherwise the final listed
    piece extends.  Returns (segments, truncated flag).
    """
    with mpmath.workdps(40):
        bound = mpmath.mpf(radius_bound)
        chain = []
        for a in exponents:  # consecutive duplicates add no contrast
            if not chain or chain[-1] != a:
                chain.append(float(a))
        if cyclic and chain[-1] != chain[0]:
            chain.append(chain[0])

        segs = []
        truncated = False
        T = mpmath.mpf(0)
        end = mpmath.mpf(R11)
        for i, a in enumerate(chain):
            if i == len(chain) - 1:
                segs.append(Segment(T, None, a, mpmath.mpf(1), "piece"))
                break
            b = chain[i + 1]
            E = B if b > a else A
            if end > bound:
                segs.append(Segment(T, None, a, mpmath.mpf(1), "piece"))
                truncated = True
                break
            C = bridge_constant(end, E, a)
            T_next = _next_junction(end, E, a, b)
            if T_next > bound:
                segs.append(Segment(T, None, a, mpmath.mpf(1), "piece"))
                truncated = True
                break
            segs.append(Segment(T, end, a, mpmath.mpf(1), "piece"))
            segs.append(Segment(end, T_next, E, C, "bridge"))
            T = T_next
            end = 5 * T_next * T_next
        return segs, truncated


def build_piecewise_h(ladder: ScaleLadder, p: OscillationParams) -> PiecewiseH:
    """The alternating-exponent warping attached to a built ladder.

    Rows translate to pure-alpha, rising-bridge, pure-beta, falling-bridge
    segments; after the last complete row the function continues with the
    pure-alpha tail.  A truncated ladder yields the same prefix with the
    last computed piece extended to infinity.
    """
    segs = []
    rows = ladder.rows
    if not rows:
        segs.append(Segment(mpmath.mpf(0), None, p.alpha, mpmath.mpf(1), "piece"))
        return PiecewiseH(segs)
    for row in rows:
        if row.R2 is None:  # truncated inside the alpha piece
            segs.append(Segment(row.R0, None, p.alpha, mpmath.mpf(1), "piece"))
            return PiecewiseH(segs)
        segs.append(Segment(row.R0, row.R1, p.alpha, mpmath.mpf(1), "piece"))
        segs.append(
            Segment(row.R1, row.R2, p.B, bridge_constant(row.R1, p.B, p.alpha), "bridge")
        )
        if row.R3 is None:
            segs.append(Segment(row.R2, None, p.beta, mpmath.mpf(1), "piece"))
            return PiecewiseH(segs)
        segs.append(Segment(row.R2, row.R3, p.beta, mpmath.mpf(1), "piece"))
        if row.R4 is None:
            segs.append(Segment(row.R3, None, p.beta, mpmath.mpf(1), "piece"))
            return PiecewiseH(segs)
        segs.append(
            Segment(row.R3, row.R4, p.A, bridge_constant(row.R3, p.A, p.beta), "bridge")
        )
    segs.append(Segment(rows[-1].R4, None, p.alpha, mpmath.mpf(1), "piece"))
    return PiecewiseH(segs)


def build_schedule_pieces(s: ExponentSchedule, radius_bound: float = 1e300) -> PiecewiseH:
    """Piecewise warping visiting each scheduled exponent in order, with the
    cyclic tail (bridge back to the first exponent, then extend)."""
    segs, _ = _expand_pieces(s.exponents, s.A, s.B, s.R11, radius_bound, cyclic=True)
    return PiecewiseH(segs)


def oscillating_piecewise(p: OscillationParams, radius_bound: float = 1e300):
    """Ladder and piecewise warping in one step."""
    ladder = build_scale_ladder(p, radius_bound)
    return ladder, build_piecewise_h(ladder, p)
