"""Second-order forward-mode differentiation on scalars.

A :class:`Jet2` carries ``(value, d1, d2)`` -- the value and first two
derivatives of a function of one variable.  Arithmetic propagates
derivatives exactly through closed-form expressions, so warping functions
built from jets have machine-accurate jets with no divided differences
anywhere on this path (the independent curvature oracle uses divided
differences; the two mechanisms must stay separate for cross-checks to
mean anything).

The scalar type is duck-typed: ``float`` for ordinary radii, ``mpmath.mpf``
for radii outside double range.  Powers are evaluated in ratio form
``u**p * (p*u1/u, ...)`` so intermediates like ``u**(p-2)`` never underflow
before being multiplied back up.
"""

import math

import mpmath


def _is_mp(x):
    return isinstance(x, (mpmath.mpf, mpmath.mpc))


def _sin(x):
    return mpmath.sin(x) if _is_mp(x) else math.sin(x)


def _cos(x):
    return mpmath.cos(x) if _is_mp(x) else math.cos(x)


def _exp(x):
    return mpmath.exp(x) if _is_mp(x) else math.exp(x)


def _log(x):
    return mpmath.log(x) if _is_mp(x) else math.log(x)


class Jet2:
    """Truncated second-order Taylor scalar: value, d/dr, d^2/dr^2."""

    __slots__ = ("value", "d1", "d2")

    def __init__(self, value, d1=0.0, d2=0.0):
        self.value = value
        self.d1 = d1
        self.d2 = d2

    @staticmethod
    def variable(r):
        one = mpmath.mpf(1) if _is_mp(r) else 1.0
        return Jet2(r, one, 0 * one)

    @staticmethod
    def constant(c):
        zero = mpmath.mpf(0) if _is_mp(c) else 0.0
        return Jet2(c, zero, zero)

    def is_finite(self):
        vals = (self.value, self.d1, self.d2)
        if any(_is_mp(v) for v in vals):
            return all(mpmath.isfinite(v) for v in vals)
        return all(math.isfinite(v) for v in vals)

    def __repr__(self):
        return f"Jet2({self.value!r}, d1={self.d1!r}, d2={self.d2!r})"

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)
        return Jet2(self.value + other, self.d1, self.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.d1, -self.d2)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)
        return Jet2(self.value - other, self.d1, self.d2)

    def __rsub__(self, other):
        return Jet2(other - self.value, -self.d1, -self.d2)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            return Jet2(
                self.value * other.value,
                self.d1 * other.value + self.value * other.d1,
                self.d2 * other.value + 2 * self.d1 * other.d1 + self.value * other.d2,
            )
        return Jet2(self.value * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            w = self.value / other.value
            d1 = (self.d1 - w * other.d1) / other.value
            d2 = (self.d2 - w * other.d2 - 2 * d1 * other.d1) / other.value
            return Jet2(w, d1, d2)
        return Jet2(self.value / other, self.d1 / other, self.d2 / other)

    def __rtruediv__(self, other):
        # other is a plain scalar
        w = other / self.value
        g1 = self.d1 / self.value
        d1 = -w * g1
        d2 = -w * (self.d2 / self.value) + 2 * w * g1 * g1
        return Jet2(w, d1, d2)

    def __pow__(self, p):
        """Real constant power, u > 0.  Ratio form keeps intermediates scaled."""
        u = self.value
        if u == 0:
            raise ZeroDivisionError("Jet2 power at zero base")
        v = u**p
        g1 = self.d1 / u
        d1 = v * (p * g1)
        d2 = v * (p * (p - 1) * g1 * g1 + p * self.d2 / u)
        return Jet2(v, d1, d2)


# -- chain-rule lifts of the few transcendental maps the models need --------


def jet_sin(j):
    s, c = _sin(j.value), _cos(j.value)
    return Jet2(s, c * j.d1, c * j.d2 - s * j.d1 * j.d1)


def jet_cos(j):
    s, c = _sin(j.value), _cos(j.value)
    return Jet2(c, -s * j.d1, -s * j.d2 - c * j.d1 * j.d1)


def jet_exp(j):
    e = _exp(j.value)
    return Jet2(e, e * j.d1, e * (j.d2 + j.d1 * j.d1))


def jet_log(j):
    g1 = j.d1 / j.value
    return Jet2(_log(j.value), g1, j.d2 / j.value - g1 * g1)
