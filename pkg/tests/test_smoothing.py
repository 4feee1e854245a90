import math

import mpmath
import numpy as np
import pytest

from warplab.ladder import ExponentSchedule, OscillationParams
from warplab.piecewise import PiecewiseH, Segment
from warplab.smoothing import (
    Blend,
    CutoffSpec,
    MonotonicityLoss,
    NotCertified,
    SmoothedH,
    build_oscillating_h,
    build_schedule_h,
    certification_grid,
    certify_positive_ricci,
    dimension_threshold,
    effective_exponent_max,
    pure_model_h,
    smooth,
    verify_observation,
    _quintic,
)
from warplab.warping import power_decay_h, standard_f


def test_quintic_shape():
    assert _quintic(0.0) == (1.0, 0.0, 0.0)
    assert _quintic(1.0) == (0.0, 0.0, 0.0)
    q, d1, d2 = _quintic(0.5)
    assert q == pytest.approx(0.5)  # midpoint value 1/2 exactly
    assert d2 == pytest.approx(0.0, abs=1e-12)  # inflection at the midpoint
    # concave then convex, slope never positive
    xs = np.linspace(1e-3, 1 - 1e-3, 201)
    for x in xs:
        q, d1, d2 = _quintic(float(x))
        assert d1 <= 0
        assert (d2 <= 1e-12) if x < 0.5 else (d2 >= -1e-12)


def test_cutoff_spec_bounds():
    spec = CutoffSpec(side="above")
    assert (spec.lo_frac, spec.mid_frac, spec.hi_frac) == (1.01, 1.1, 1.19)
    below = CutoffSpec(side="below")
    assert (below.lo_frac, below.mid_frac, below.hi_frac) == (0.81, 0.9, 0.99)
    # R |phi'| and R^2 |phi''| sups over a dense sample stay within the
    # recorded bounds (and within 2% of them at the extremes)
    R = 1000.0
    xs = np.linspace(1.0 * R, 1.2 * R, 4001)
    sup1 = max(abs(spec.phi(x, R)[1]) for x in xs) * R
    sup2 = max(abs(spec.phi(x, R)[2]) for x in xs) * R * R
    assert sup1 <= spec.c1_bound * (1 + 1e-12) <= sup1 * 1.02
    assert sup2 <= spec.c2_bound * (1 + 1e-12) <= sup2 * 1.02


def test_midpoint_value_and_plateaus(osc_build):
    lad, hp, sm = osc_build
    R = float(lad.rows[0].R1)
    left = hp.segments[0]
    right = hp.segments[1]
    v = sm.value(1.1 * R)
    assert v == pytest.approx(0.5 * (left.value(1.1 * R) + right.value(1.1 * R)), rel=1e-12)
    # plateau regions reproduce the pieces bit for bit
    assert sm.value(1.005 * R) == left.value(1.005 * R)
    assert sm.value(1.195 * R) == right.value(1.195 * R)


def test_equal_outside_blends(osc_build):
    lad, hp, sm = osc_build
    for r in (13.0, 5e3, 1e9, 3e30):
        assert sm.value(r) == hp.value(r)


def test_regime_fidelity_bit_for_bit(osc_build):
    lad, hp, sm = osc_build
    pa = power_decay_h(0.6)
    pb = power_decay_h(1.2)
    rows = lad.rows
    # pure-alpha on [1.2 R_{i,0}, 0.8 R_{i,1}], pure-beta on [1.2 R_{i,2}, 0.8 R_{i,3}]
    for r in (50.0, 79.9, 1.5e38, 6.0e76):
        assert sm.value(r) == pa.value(r)
    for r in (1.3e6, 3.9e12):
        assert sm.value(r) == pb.value(r)


def test_sandwich_on_blends(osc_build):
    lad, hp, sm = osc_build
    for b in sm.blends[:4]:
        lo, hi = float(b.lo), float(b.hi)
        for r in np.linspace(lo, hi, 97):
            v = sm.value(float(r))
            va = b.left.value(float(r))
            vb = b.right.value(float(r))
            assert min(va, vb) * (1 - 1e-12) <= v <= max(va, vb) * (1 + 1e-12)
    # huge-radius blends evaluate in extended precision; sandwich holds there too
    for b in sm.blends[4:]:
        for t in np.linspace(0.01, 0.99, 9):
            r = b.lo + (b.hi - b.lo) * mpmath.mpf(float(t))
            v = sm.value(r)
            va, vb = b.left.value(r), b.right.value(r)
            assert min(va, vb) * (1 - mpmath.mpf("1e-12")) <= v
            assert v <= max(va, vb) * (1 + mpmath.mpf("1e-12"))


def test_blend_overlap_rejected(osc_build):
    lad, hp, sm = osc_build
    from warplab.smoothing import Blend, BlendOverlap, SmoothedH

    b = sm.blends[0]
    clone = Blend(b.R * mpmath.mpf("1.1"), b.spec, b.left, b.right,
                  b.lo * mpmath.mpf("1.1"), b.hi * mpmath.mpf("1.1"))
    with pytest.raises(BlendOverlap):
        SmoothedH(hp, [b, clone])


def test_blend_edges_jet_consistent(osc_build):
    # second-order contact at blend boundaries: jets from inside match the
    # adjacent closed form to 1e-8 relative
    lad, hp, sm = osc_build
    for b in sm.blends[:4]:
        for edge, seg in ((float(b.lo), None), (float(b.hi), None)):
            eps = edge * 1e-9
            inside = sm.jet(edge + eps if edge == float(b.lo) else edge - eps)
            outside = sm.jet(edge - eps if edge == float(b.lo) else edge + eps)
            assert inside.value == pytest.approx(outside.value, rel=1e-8)
            assert inside.d1 == pytest.approx(outside.d1, rel=1e-6)


def test_global_monotonicity_sampled(osc_build):
    lad, hp, sm = osc_build
    top = mpmath.mpf(sm.last_radius()) * mpmath.mpf("1.3")
    from warplab.curvature import mixed_log_grid

    grid = mixed_log_grid(1e-3, float(mpmath.log10(top)), 3000)
    prev = None
    for r in grid:
        v = sm.value(r)
        if prev is not None:
            assert v < prev
        prev = v


def test_monotonicity_loss_detected():
    # a deliberate non-decreasing blend: join a plateau piece (p=0) on the
    # right so the blended value must stall
    one = mpmath.mpf(1)
    left = Segment(mpmath.mpf(0), mpmath.mpf(100), 0.6, one, "piece")
    flat_c = (1 + mpmath.mpf(100) ** 2) ** mpmath.mpf(-0.6)
    right = Segment(mpmath.mpf(100), None, 0.0, flat_c, "bridge")
    hp = PiecewiseH([left, right], check_continuity=False)
    with pytest.raises(MonotonicityLoss):
        smooth(hp, monotonicity_samples=2000)


def test_observation_identity():
    h = power_decay_h(0.7)
    chk = verify_observation(lambda r: h(r), lambda r: h(r), (120.0, 200.0), n=200)
    assert chk.ok
    assert chk.c == pytest.approx(0.99, rel=1e-12)
    assert chk.C == pytest.approx(1.01, rel=1e-12)


def test_observation_rejects_increasing():
    h = power_decay_h(0.7)
    grow = power_decay_h(0.7)
    increasing = lambda r: -h(r)  # h' > 0
    chk = verify_observation(lambda r: h(r), increasing, (120.0, 200.0), n=50)
    assert not chk.ok


def test_observation_on_blends(osc_build):
    lad, hp, sm = osc_build
    for b in sm.blends[:2]:
        chk = verify_observation(
            lambda r, seg=b.left: seg.jet(r), sm, (float(b.lo), float(b.hi)), n=400
        )
        assert chk.ok
        assert chk.c > 0 and math.isfinite(chk.C)


def test_certify_pure_half_is_eight():
    from warplab.curvature import log_grid

    sm = pure_model_h(0.5)
    grid = list(log_grid(1e-3, 1e6, 2000))
    cert = certify_positive_ricci(sm, standard_f(), 16, grid, ["pure"] * len(grid))
    assert cert.k == 8


def test_certify_below_threshold_fails():
    from warplab.curvature import log_grid

    sm = pure_model_h(0.5)
    grid = list(log_grid(1e-3, 1e6, 2000))
    with pytest.raises(NotCertified):
        certify_positive_ricci(sm, standard_f(), 7, grid, ["pure"] * len(grid))


def test_certified_k_recheck_idempotent(osc_build):
    # certification soundness: the returned k passes the plain grid check
    from warplab.curvature import DoublyWarpedMetric, ricci_positive_on_grid

    lad, hp, sm = osc_build
    grid, labels = certification_grid(sm, per_interval=40)
    cap = int(4 * dimension_threshold(effective_exponent_max(sm, grid)))
    cert = certify_positive_ricci(sm, standard_f(), cap, grid, labels)
    m = DoublyWarpedMetric(cert.k, standard_f(), sm.as_warping())
    ok, worst = ricci_positive_on_grid(m, grid)  # same grid, full re-check
    assert ok, worst


def test_schedule_h_monotone_and_observed():
    s = ExponentSchedule((0.5, 0.75, 1.0), A=0.25, B=1.3)
    sm = build_schedule_h(s, check=True)  # monotonicity scan inside
    for b in sm.blends:
        use_float = float(b.R) < 1e70
        lo, hi = (float(b.lo), float(b.hi)) if use_float else (b.lo, b.hi)
        chk = verify_observation(lambda r, seg=b.left: seg.jet(r), sm, (lo, hi), n=200)
        assert chk.ok
