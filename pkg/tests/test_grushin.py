import math

import numpy as np
import pytest

from warplab.grushin import (
    ComparisonReport,
    GrushinMetric,
    RescaledModel,
    UnsupportedPair,
    WindowTooNarrow,
    coefficient_error,
    convergence_report,
    grushin_distance,
    probe_pairs,
    rescaled_distance,
    self_similarity_error,
)
from warplab.smoothing import pure_model_h


G_HALF = GrushinMetric(0.5)


def test_validation():
    with pytest.raises(ValueError):
        GrushinMetric(0.3)


def test_radial_and_identical_pairs():
    assert grushin_distance(G_HALF, (1.0, 0.0), (2.0, 0.0))[0] == 1.0
    assert grushin_distance(G_HALF, (0.7, 3.0), (0.7, 3.0))[0] == 0.0


def test_unsupported_pair_without_budget():
    with pytest.raises(UnsupportedPair):
        grushin_distance(G_HALF, (1.0, 0.0), (2.0, 1.0))


def test_equal_t_matches_grid_oracle():
    d_arc, _ = grushin_distance(G_HALF, (1.0, 0.0), (1.0, 1.0))
    d_orc, info = grushin_distance(
        G_HALF, (1.0, 0.0), (1.0001, 1.0), oracle_budget=60_000_000, oracle_r_hi=4.0
    )
    assert info["class"] == "oracle"
    assert abs(d_arc - d_orc) / d_orc < 0.02
    # probe box never needs the axis: doubling the excluded band moves the
    # estimate only by re-gridding noise, far below the 2% comparison scale
    assert info["floor_sensitivity"] < 0.01 * d_orc


def test_rescaled_radial_is_lambda_invariant():
    sm = pure_model_h(0.5)
    for lam in (10.0, 1e3):
        model = RescaledModel.build(sm, lam, 0.5, (0.0, math.inf))
        d, info = rescaled_distance(model, (0.5, 1.0), (2.5, 1.0))
        assert d == 2.0 and info["class"] == "radial"


def test_rescaled_equal_t_close_to_target():
    sm = pure_model_h(0.5)
    lam = 1e3
    model = RescaledModel.build(sm, lam, 0.5, (0.0, math.inf))
    for t, dw in ((0.3, 0.05), (1.0, 1.0), (4.0, 8.0)):
        d_target, _ = grushin_distance(G_HALF, (t, 0.0), (t, dw))
        d_model, _ = rescaled_distance(model, (t, 0.0), (t, dw))
        assert abs(d_model - d_target) / d_target < 0.05


def test_rescaled_beta_regime_close_to_steeper_target(osc_build):
    # in the middle stretch the cover rescales toward the steeper-exponent
    # halfplane: equal-t probes within 5% of the exponent-1.2 target
    lad, hp, sm = osc_build
    row = lad.rows[0]
    stretch = (1.2 * float(row.R2), 0.8 * float(row.R3))
    lam = math.sqrt(stretch[0] * stretch[1] / (0.2 * 5.0))  # geometric-mean placement
    model = RescaledModel.build(sm, lam, 1.2, stretch)
    target = GrushinMetric(1.2)
    for t, dw in ((0.5, 0.2), (2.0, 3.0)):
        d_t, _ = grushin_distance(target, (t, 0.0), (t, dw))
        d_m, info = rescaled_distance(model, (t, 0.0), (t, dw))
        assert info["class"] == "equal-t"
        assert abs(d_m - d_t) / d_t < 0.05


def test_coefficient_error_one_sided_monotone():
    # closed form: error = 1 - (x/(1+x))^a with x = lam^2 t^2; positive and
    # decreasing in lam for every probe t
    for t in (0.2, 1.0, 5.0):
        errs = [coefficient_error(0.5, lam, t) for lam in (1e2, 1e3, 1e4)]
        assert all(e > 0 for e in errs)
        assert errs[0] > errs[1] > errs[2]


def test_convergence_report_pure_model():
    sm = pure_model_h(0.5)
    rep = convergence_report(sm, 0.5, (0.0, math.inf), [1e2, 1e3, 1e4], n_pairs=12, seed=4)
    assert rep.trend_decreasing
    assert rep.final_error() < 0.05
    assert rep.max_rel_errors[0] > rep.max_rel_errors[-1]


def test_convergence_report_oscillating_alpha_regime(osc_build):
    lad, hp, sm = osc_build
    row = lad.rows[0]
    stretch = (1.2 * float(row.R0), 0.8 * float(row.R1))  # (0, 80)
    lam_hi = 0.8 * float(row.R1) / 5.0
    ladder = list(np.geomspace(4.0, lam_hi, 3))
    rep = convergence_report(sm, 0.6, stretch, ladder, n_pairs=10, seed=6)
    assert rep.trend_decreasing
    assert len(rep.lambdas) == 3


def test_window_too_narrow(osc_build):
    lad, hp, sm = osc_build
    row = lad.rows[0]
    stretch = (1.2 * float(row.R0), 0.8 * float(row.R1))
    with pytest.raises(WindowTooNarrow):
        convergence_report(sm, 0.6, stretch, [1e5, 1e6, 1e7], n_pairs=4)
    with pytest.raises(WindowTooNarrow):
        convergence_report(sm, 0.6, stretch, [4.0, 8.0], n_pairs=4)


def test_probe_exclusion_counts(osc_build):
    # probes whose comparison arc exits the stretch image are excluded, not
    # scored: with a stretch top close to lambda * t_max, wide equal-t pairs
    # must drop out
    lad, hp, sm = osc_build
    row = lad.rows[0]
    stretch = (1.2 * float(row.R0), 0.8 * float(row.R1))
    lam = 0.8 * float(row.R1) / 5.0  # probe box exactly reaches the top
    rep = convergence_report(sm, 0.6, stretch, [lam / 4, lam / 2, lam], n_pairs=16, seed=9)
    assert isinstance(rep, ComparisonReport)


def test_self_similarity():
    rng = np.random.default_rng(13)
    pairs = probe_pairs(rng, 10)
    assert self_similarity_error(G_HALF, pairs, factor=2.0) < 0.01
    g2 = GrushinMetric(0.75)
    assert self_similarity_error(g2, pairs, factor=3.0) < 0.01
