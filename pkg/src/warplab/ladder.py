"""Junction-radius ladders for piecewise warping exponents.

The oscillating circle factor alternates between decay exponents on huge,
rapidly growing radius windows, bridged by steeper/shallower pieces that
meet continuously.  Radii grow doubly exponentially (the second period
already overflows doubles for the default parameters), so every junction
radius and bridge constant is carried as an mpmath scalar; geometry code
receives floats only where they are representable.

Recursions, for a piece of exponent p ending at radius T and a bridge of
exponent E toward a piece of exponent q (E above or below both p and q):

    bridge constant  C = (1 + T^2)^(E - p)
    next junction    T' = ((1 + T^2)^((E-p)/(E-q)) - 1)^(1/2)

and each pure piece of exponent q then spans [T', 5 T'^2].
"""

from dataclasses import dataclass

import mpmath

PRECISION_DPS = 40  # ~133 bits; radii serialize as mantissa/exponent strings


class LadderOverflow(RuntimeError):
    """Internal marker: a radius exceeded the configured bound."""


@dataclass(frozen=True)
class OscillationParams:
    """Two-exponent oscillation: decay alpha on early windows, beta on the
    middle of each period, bridged by B above and A below."""

    alpha: float
    beta: float
    A: float
    B: float
    R11: float = 100.0
    periods: int = 2

    def __post_init__(self):
        if not (self.B > self.beta > self.alpha > self.A > 0):
            raise ValueError(
                f"need B > beta > alpha > A > 0, got B={self.B}, beta={self.beta}, "
                f"alpha={self.alpha}, A={self.A}"
            )
        if self.R11 < 100:
            raise ValueError(f"first junction radius must be >= 100, got {self.R11}")
        if self.periods < 0:
            raise ValueError("periods must be >= 0")


@dataclass(frozen=True)
class ExponentSchedule:
    """Finite list of decay exponents visited in order, with the same
    junction policy (A below all, B above all, first junction at R11)."""

    exponents: tuple
    A: float
    B: float
    R11: float = 100.0
    band: tuple = (0.5, None)

    def __post_init__(self):
        exps = tuple(float(a) for a in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps:
            raise ValueError("schedule must contain at least one exponent")
        lo, hi = self.band
        hi = max(exps) if hi is None else hi
        object.__setattr__(self, "band", (lo, hi))
        if lo < 0.5:
            raise ValueError(f"declared band floor must be >= 1/2, got {lo}")
        for a in exps:
            if not (lo <= a <= hi):
                raise ValueError(f"exponent {a} outside declared band [{lo}, {hi}]")
        if not (self.A < min(exps) and self.B > max(exps)):
            raise ValueError("bridge exponents must satisfy A < min(exponents) < max(exponents) < B")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.R11 < 100:
            raise ValueError(f"first junction radius must be >= 100, got {self.R11}")


@dataclass(frozen=True)
class LadderRow:
    """Junction radii of one period: pure-alpha on [R0,R1], rising bridge on
    [R1,R2], pure-beta on [R2,R3], falling bridge on [R3,R4].  Entries are
    None past the truncation point of an overflowed build."""

    R0: object
    R1: object
    R2: object = None
    R3: object = None
    R4: object = None

    def radii(self):
        return [x for x in (self.R0, self.R1, self.R2, self.R3, self.R4) if x is not None]


@dataclass
class ScaleLadder:
    params: OscillationParams
    rows: list
    truncated: bool
    radius_bound: float

    def last_radius(self):
        return self.rows[-1].radii()[-1] if self.rows else mpmath.mpf(self.params.R11)

    def complete_rows(self):
        return [row for row in self.rows if row.R4 is not None]


def _next_junction(T, E, p, q):
    """Radius where the E-bridge leaving exponent p at T meets exponent q."""
    with mpmath.workdps(PRECISION_DPS):
        expo = (mpmath.mpf(E) - mpmath.mpf(p)) / (mpmath.mpf(E) - mpmath.mpf(q))
        return mpmath.sqrt((1 + T * T) ** expo - 1)


def bridge_constant(T, E, p):
    """C with C (1+r^2)^(-E) continuous at T against (1+r^2)^(-p)."""
    with mpmath.workdps(PRECISION_DPS):
        return (1 + T * T) ** (mpmath.mpf(E) - mpmath.mpf(p))


def build_scale_ladder(p: OscillationParams, radius_bound: float = 1e300) -> ScaleLadder:
    """Junction radii for `p.periods` periods.

    If a radius exceeds radius_bound before all periods are produced, the
    ladder is truncated there and flagged; the rows built so far (possibly
    ending in a partial row) are returned.  Growth ratios between successive
    junctions are asserted to be >= 5, which the recursions guarantee for
    R11 >= 100 and keeps later smoothing blends disjoint.
    """
    with mpmath.workdps(PRECISION_DPS):
        bound = mpmath.mpf(radius_bound)
        rows = []
        truncated = False
        R0 = mpmath.mpf(0)
        R1 = mpmath.mpf(p.R11)
        for _ in range(p.periods):
            entries = [R0, R1]
            try:
                if R1 > bound:
                    raise LadderOverflow
                R2 = _next_junction(R1, p.B, p.alpha, p.beta)
                if R2 > bound:
                    raise LadderOverflow
                entries.append(R2)
                R3 = 5 * R2 * R2
                if R3 > bound:
                    raise LadderOverflow
                entries.append(R3)
                R4 = _next_junction(R3, p.A, p.beta, p.alpha)
                if R4 > bound:
                    raise LadderOverflow
                entries.append(R4)
            except LadderOverflow:
                truncated = True
                rows.append(LadderRow(*entries))
                break
            rows.append(LadderRow(R0, R1, R2, R3, R4))
            R0 = R4
            R1 = 5 * R4 * R4

        ladder = ScaleLadder(p, rows, truncated, radius_bound)
        _assert_growth(ladder)
        return ladder


def _assert_growth(ladder: ScaleLadder):
    # chain R_{i,1} < ... < R_{i,4} < R_{i+1,1} < ...; each row's R0 repeats
    # the previous row's R4 and is skipped
    chain = []
    for i, row in enumerate(ladder.rows):
        radii = row.radii()
        chain.extend(radii if i == 0 else radii[1:])
    prev = None
    for r in chain:
        if prev is not None and prev > 0 and not (r / prev >= 5):
            raise AssertionError(f"ladder growth ratio below 5 between {prev} and {r}")
        prev = r


def mantissa_exponent(x, digits: int = 25) -> str:
    """Radius as a mantissa/exponent string round-trippable through mpmath."""
    with mpmath.workdps(max(digits, 5)):
        return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False)
