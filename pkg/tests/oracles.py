"""Independent oracles used to derive frozen expected values.

Kept separate from the package so the verification paths never share code
with what they check.  The arc oracle integrates in the u-variable of the
h = c cosh u change with tanh-sinh quadrature at 30 digits; the inverse
r(u) is closed-form for the inverse-power family.
"""

import mpmath as mp


def power_arc_oracle(alpha, c, dps=30):
    """(delta_v, length, r_max) for h = (1+r^2)^(-alpha) at Clairaut c."""
    with mp.workdps(dps):
        alpha = mp.mpf(alpha)
        c = mp.mpf(c)
        r_max = mp.sqrt(c ** (-1 / alpha) - 1)
        u0 = mp.acosh(1 / c)

        def r_of_u(u):
            target = c * mp.cosh(u)
            if target >= 1:
                return mp.mpf(0)
            return mp.sqrt(target ** (-1 / alpha) - 1)

        def h(r):
            return (1 + r * r) ** (-alpha)

        def hp_abs(r):
            return 2 * alpha * r * (1 + r * r) ** (-alpha - 1)

        def dv_int(u):
            r = r_of_u(u)
            if r == 0:
                return mp.mpf(0)
            return c / (h(r) * hp_abs(r))

        def len_int(u):
            r = r_of_u(u)
            if r == 0:
                return mp.mpf(0)
            return h(r) / hp_abs(r)

        dv = 2 * mp.quad(dv_int, [0, u0])
        ln = 2 * mp.quad(len_int, [0, u0])
        return dv, ln, r_max


def hyperbolic_arc(c):
    """Closed forms for h = exp(-r): the halfplane is hyperbolic, so
    delta_v = 2 sqrt(1/c^2 - 1) and length = arccosh(1 + delta_v^2/2)."""
    import math

    dv = 2.0 * math.sqrt(1.0 / (c * c) - 1.0)
    return dv, math.acosh(1.0 + dv * dv / 2.0)


def central_diff_richardson(f, x, order=1, h0=None, levels=4):
    """Derivative of f at x by central differences with Richardson step
    refinement; independent of the jet arithmetic."""
    h0 = h0 or max(abs(x), 1.0) * 1e-2

    def d(h):
        if order == 1:
            return (f(x + h) - f(x - h)) / (2.0 * h)
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)

    t = [[d(h0 / 2.0**j)] for j in range(levels)]
    for m in range(1, levels):
        fac = 4.0**m
        for j in range(m, levels):
            t[j].append((fac * t[j][m - 1] - t[j - 1][m - 1]) / (fac - 1.0))
    return t[levels - 1][levels - 1]
