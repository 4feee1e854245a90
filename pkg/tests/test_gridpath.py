import math

import pytest

from warplab.gridpath import ResourceLimit, dijkstra_distance_oracle
from warplab.halfplane import HalfplaneMetric, orbit_distance
from warplab.warping import constant_h, power_decay_h


def test_flat_straight_line():
    flat = HalfplaneMetric.from_warping(constant_h(1.0))
    res = dijkstra_distance_oracle(flat, (0.0, 0.0), (0.0, 5.0), r_hi=3.0, nr=60)
    assert res.relaxed == pytest.approx(5.0, rel=1e-6)
    assert res.raw >= res.relaxed  # grid paths only overestimate


def test_zero_distance():
    flat = HalfplaneMetric.from_warping(constant_h(1.0))
    res = dijkstra_distance_oracle(flat, (1.0, 2.0), (1.0, 2.0), r_hi=3.0, nr=40)
    assert res.relaxed == pytest.approx(0.0, abs=1e-12)


def test_matches_clairaut_l10(pure_half_metric):
    d_arc, sol = orbit_distance(pure_half_metric, 10)
    res = dijkstra_distance_oracle(
        pure_half_metric, (0.0, 0.0), (0.0, 20.0 * math.pi), r_hi=2.2 * sol.r_max, nr=160
    )
    assert abs(d_arc - res.relaxed) / res.relaxed < 0.02
    # and the raw grid value caps the anisotropy factor sanely
    assert 1.0 <= res.anisotropy_factor < 1.15


def test_resource_limit():
    flat = HalfplaneMetric.from_warping(constant_h(1.0))
    with pytest.raises(ResourceLimit):
        dijkstra_distance_oracle(
            flat, (0.0, 0.0), (0.0, 5.0), r_hi=3.0, nr=4000, nv=40000, edge_budget=10**6
        )
