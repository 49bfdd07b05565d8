"""Closed-form minimization of the univariate quartics met in coordinate descent.

The function being minimized is

    f(x) = c3*x^4/4 + c2*x^3/3 + c1*x^2/2 + c0*x  (+ constant)

so its stationary points are the real roots of the cubic
c3*x^3 + c2*x^2 + c1*x + c0.  Cardano's substitution x = t - c2/(3*c3)
reduces this to the depressed cubic t^3 + a*t + b.  When the discriminant
4*a^3 + 27*b^2 is positive there is a single real root; otherwise the two
trigonometric roots that can be minima are compared directly (the middle
root is always a local maximum when c3 >= 0).
"""

from __future__ import annotations

import math
from typing import NamedTuple

_TWO_THIRDS_PI = 2.0 * math.pi / 3.0


class QuarticCoeffs(NamedTuple):
    """Derivative coefficients of the quartic; c3 is nonnegative in CD use."""

    c3: float
    c2: float
    c1: float
    c0: float


def _cbrt(x: float) -> float:
    # Sign-preserving real cube root; the single-root formula needs cube
    # roots of negative operands.
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def quartic_value(coeffs, x: float) -> float:
    """Evaluate c3*x^4/4 + c2*x^3/3 + c1*x^2/2 + c0*x."""
    c3, c2, c1, c0 = coeffs
    return x * (c0 + x * (c1 / 2.0 + x * (c2 / 3.0 + x * c3 / 4.0)))


def cardano_minimize(coeffs) -> float:
    """Global minimizer of the quartic, for a strictly positive leading term.

    Raises ValueError when c3 <= 0; callers with possibly degenerate leading
    coefficients should go through minimize_quartic_safe.
    """
    c3, c2, c1, c0 = coeffs
    if not c3 > 0.0:
        raise ValueError("cardano_minimize requires c3 > 0")
    a = (3.0 * c3 * c1 - c2 * c2) / (3.0 * c3 * c3)
    b = (2.0 * c2 ** 3 - 9.0 * c3 * c2 * c1 + 27.0 * c3 * c3 * c0) / (27.0 * c3 ** 3)
    disc = 4.0 * a ** 3 + 27.0 * b * b
    if disc <= 0.0:
        # disc <= 0 forces a <= 0; a == 0 then forces b == 0 (triple root 0).
        if a == 0.0:
            t = 0.0
        else:
            arg = (3.0 * b / (2.0 * a)) * math.sqrt(-3.0 / a)
            arg = min(1.0, max(-1.0, arg))  # roundoff can leave [-1, 1] near disc == 0
            theta = math.acos(arg) / 3.0
            r = 2.0 * math.sqrt(-a / 3.0)
            t0 = r * math.cos(theta)
            t1 = r * math.cos(theta + _TWO_THIRDS_PI)
            q0 = t0 ** 4 / 4.0 + a * t0 * t0 / 2.0 + b * t0
            q1 = t1 ** 4 / 4.0 + a * t1 * t1 / 2.0 + b * t1
            t = t0 if q0 < q1 else t1
    else:
        s = math.sqrt(disc / 27.0)
        t = _cbrt(0.5 * (-b + s)) + _cbrt(0.5 * (-b - s))
    return t - c2 / (3.0 * c3)


def minimize_quartic_safe(coeffs) -> float:
    """cardano_minimize with a guard for a (near-)vanishing leading coefficient.

    The threshold is relative, 1e-12 scaled by the largest remaining
    coefficient magnitude, because coefficients span many orders of magnitude
    across instances.  With c3 effectively zero the structure of the CD
    subproblems also zeroes c2, so the fallback minimizes the quadratic part:
    the root -c0/c1 when c1 > 0, else 0 (no improving direction).
    """
    c3, c2, c1, c0 = coeffs
    if c3 > 1e-12 * max(1.0, abs(c2), abs(c1), abs(c0)):
        return cardano_minimize(coeffs)
    if c1 > 1e-12 * max(1.0, abs(c0)):
        return -c0 / c1
    return 0.0
