import math

import mpmath
import numpy as np
import pytest

from warplab.jets import Jet2, jet_cos, jet_exp, jet_log, jet_sin
from warplab.warping import exp_decay_h, grushin_h, power_decay_h, standard_f

from .oracles import central_diff_richardson


def test_variable_and_constant():
    x = Jet2.variable(3.0)
    assert (x.value, x.d1, x.d2) == (3.0, 1.0, 0.0)
    c = Jet2.constant(5.0)
    assert (c.value, c.d1, c.d2) == (5.0, 0.0, 0.0)


def test_ring_ops_match_polynomial():
    # p(r) = (2r + 1)(r^2 - 3) / (r + 4), exact jets by hand at r=2
    r = 2.0
    x = Jet2.variable(r)
    j = (2.0 * x + 1.0) * (x * x - 3.0) / (x + 4.0)
    f = lambda t: (2 * t + 1) * (t * t - 3) / (t + 4)
    assert j.value == pytest.approx(f(r), rel=1e-15)
    assert j.d1 == pytest.approx(central_diff_richardson(f, r, 1), rel=1e-10)
    assert j.d2 == pytest.approx(central_diff_richardson(f, r, 2), rel=1e-8)


def test_pow_and_transcendentals():
    r = 1.7
    x = Jet2.variable(r)
    for jet, f in [
        (x ** (-0.75), lambda t: t ** (-0.75)),
        (jet_sin(x), math.sin),
        (jet_cos(x), math.cos),
        (jet_exp(-x), lambda t: math.exp(-t)),
        (jet_log(1 + x * x), lambda t: math.log(1 + t * t)),
    ]:
        assert jet.value == pytest.approx(f(r), rel=1e-14)
        assert jet.d1 == pytest.approx(central_diff_richardson(f, r, 1), rel=1e-9)
        assert jet.d2 == pytest.approx(central_diff_richardson(f, r, 2), rel=1e-7)


@pytest.mark.parametrize(
    "wf,lo,hi",
    [
        (standard_f(), 1e-2, 1e4),
        (power_decay_h(0.5), 1e-2, 1e4),
        (power_decay_h(1.2), 1e-2, 1e4),
        (exp_decay_h(), 1e-2, 20.0),
        (grushin_h(0.5), 1e-2, 1e3),
    ],
)
def test_jet_matches_divided_differences(wf, lo, hi):
    # d1, d2 agree with central differences (Richardson-refined steps) to
    # 1e-6 relative on random radii
    rng = np.random.default_rng(7)
    for r in np.exp(rng.uniform(math.log(lo), math.log(hi), 12)):
        j = wf(float(r))
        f = lambda t: wf.value(t)
        d1 = central_diff_richardson(f, float(r), 1, h0=float(r) * 1e-2)
        d2 = central_diff_richardson(f, float(r), 2, h0=float(r) * 1e-2)
        assert j.d1 == pytest.approx(d1, rel=1e-6, abs=1e-12 * abs(d1) + 1e-300)
        assert j.d2 == pytest.approx(d2, rel=1e-6, abs=1e-10 * abs(d2) + 1e-300)


def test_mpmath_scalars_flow_through():
    r = mpmath.mpf("1e120")
    j = power_decay_h(1.2)(r)
    assert isinstance(j.value, mpmath.mpf)
    # value ~ r^(-2.4), far below double range but exact in mpf
    assert mpmath.log10(j.value) == pytest.approx(-288, abs=1.0)
    assert j.d1 < 0
    assert j.is_finite()


def test_underflow_ratio_form():
    # jets of a pure power stay finite where naive u^(p-2) would underflow
    j = power_decay_h(0.6)(5e76)
    assert j.value > 0 and j.d1 < 0 and j.d2 != 0.0
    assert j.is_finite()


def test_finiteness_flag():
    assert not Jet2(float("nan"), 0.0, 0.0).is_finite()
    assert not Jet2(1.0, float("inf"), 0.0).is_finite()
