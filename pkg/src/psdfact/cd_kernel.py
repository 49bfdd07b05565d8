"""JIT-compiled inner loops for the coordinate-descent passes.

A single coordinate update is a few dozen scalar operations on k-sized
tables, so at the factor sizes this package targets interpreter dispatch
costs far more than the arithmetic.  These factor-level loops mirror the
pure-numpy implementations in cd.py operation for operation (selection,
coefficient reads, the quartic minimizer, the strict-improvement guard, and
the table refreshes); the numpy path remains the reference and the test
suite checks that both engines agree.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_THIRDS_PI = 2.0 * math.pi / 3.0


@njit(cache=True)
def minimize_quartic(c3, c2, c1, c0):
    # mirrors quartic.minimize_quartic_safe (relative degeneracy thresholds,
    # trigonometric two-root branch with the strict tie rule, signed cube
    # roots in the single-root branch)
    m = max(1.0, abs(c2), abs(c1), abs(c0))
    if c3 > 1e-12 * m:
        a = (3.0 * c3 * c1 - c2 * c2) / (3.0 * c3 * c3)
        b = (2.0 * c2 ** 3 - 9.0 * c3 * c2 * c1 + 27.0 * c3 * c3 * c0) / (27.0 * c3 ** 3)
        disc = 4.0 * a ** 3 + 27.0 * b * b
        if disc <= 0.0:
            if a == 0.0:
                t = 0.0
            else:
                arg = (3.0 * b / (2.0 * a)) * math.sqrt(-3.0 / a)
                if arg > 1.0:
                    arg = 1.0
                elif arg < -1.0:
                    arg = -1.0
                theta = math.acos(arg) / 3.0
                rr = 2.0 * math.sqrt(-a / 3.0)
                t0 = rr * math.cos(theta)
                t1 = rr * math.cos(theta + TWO_THIRDS_PI)
                q0 = t0 ** 4 / 4.0 + a * t0 * t0 / 2.0 + b * t0
                q1 = t1 ** 4 / 4.0 + a * t1 * t1 / 2.0 + b * t1
                t = t0 if q0 < q1 else t1
        else:
            s = math.sqrt(disc / 27.0)
            u0 = 0.5 * (-b + s)
            u1 = 0.5 * (-b - s)
            t = math.copysign(abs(u0) ** (1.0 / 3.0), u0) \
                + math.copysign(abs(u1) ** (1.0 / 3.0), u1)
        return t - c2 / (3.0 * c3)
    if c1 > 1e-12 * max(1.0, abs(c0)):
        return -c0 / c1
    return 0.0


@njit(cache=True)
def _update_entry(a, grad, energy, rmat, lead, row3, mom_p, mom_pp, colm_p,
                  colm_pp, p, q, gamma, target, oldcol):
    """One coordinate update; returns the data-objective change (0 if skipped)."""
    k, r = a.shape
    x = a[p, q]
    c3 = lead[p]
    dot = 0.0
    for s in range(k):
        dot += row3[p, s] * a[s, q]
    c2 = 12.0 * dot - 3.0 * c3 * x
    c1 = 4.0 * rmat[p, p] + 8.0 * energy[p, q] - 2.0 * c2 * x - 3.0 * c3 * x * x
    c0 = grad[p, q] - x * (c1 + x * (c2 + x * c3))
    p1 = c1
    p0 = c0
    if gamma != 0.0:
        p1 += 2.0 * gamma
        p0 -= 2.0 * gamma * target[p, q]
    if c3 == 0.0 and c2 == 0.0 and p1 == 0.0 and p0 == 0.0:
        return 0.0
    xn = minimize_quartic(c3, c2, p1, p0)
    qv_new = xn * (p0 + xn * (p1 / 2.0 + xn * (c2 / 3.0 + xn * c3 / 4.0)))
    qv_old = x * (p0 + x * (p1 / 2.0 + x * (c2 / 3.0 + x * c3 / 4.0)))
    if not qv_new < qv_old:
        return 0.0

    delta = xn - x
    d2 = delta * delta
    dobj = xn * (c0 + xn * (c1 / 2.0 + xn * (c2 / 3.0 + xn * c3 / 4.0))) \
        - x * (c0 + x * (c1 / 2.0 + x * (c2 / 3.0 + x * c3 / 4.0)))
    for s in range(k):
        oldcol[s] = a[s, q]
    a[p, q] = xn
    for u in range(k):
        for v in range(k):
            acc = 0.0
            for t in range(k):
                acc += mom_p[p, u, v, t] * oldcol[t]
            rmat[u, v] += 2.0 * delta * acc + d2 * mom_pp[p, u, v]
    for l in range(k):
        acc = 0.0
        for s in range(k):
            acc += colm_p[p, l, s] * oldcol[s]
        energy[l, q] += 2.0 * delta * acc + d2 * colm_pp[p, l]
    for pp in range(k):
        for qq in range(r):
            acc = 0.0
            for s in range(k):
                acc += rmat[pp, s] * a[s, qq]
            grad[pp, qq] = 4.0 * acc
    return dobj


@njit(cache=True)
def cyclic_factor_pass(a, grad, energy, rmat, lead, row3, mom_p, mom_pp,
                       colm_p, colm_pp, pinned, gamma, target):
    """Sweep the factor's entries in (p, q) order; returns the objective change."""
    k, r = a.shape
    oldcol = np.empty(k)
    dobj = 0.0
    for p in range(k):
        for q in range(r):
            if pinned[p, q]:
                continue
            dobj += _update_entry(a, grad, energy, rmat, lead, row3, mom_p,
                                  mom_pp, colm_p, colm_pp, p, q, gamma, target,
                                  oldcol)
    return dobj


@njit(cache=True)
def gs_factor_pass(a, grad, energy, rmat, lead, row3, mom_p, mom_pp, colm_p,
                   colm_pp, updates, pinned, gamma, target):
    """Greedy updates on the largest absolute (penalized) gradient entry.

    Ties keep the lexicographically smallest coordinate; pinned entries are
    excluded.  Returns the data-objective change.
    """
    k, r = a.shape
    oldcol = np.empty(k)
    dobj = 0.0
    for _ in range(updates):
        best = -1.0
        bp = -1
        bq = -1
        for p in range(k):
            for q in range(r):
                if pinned[p, q]:
                    continue
                g = grad[p, q]
                if gamma != 0.0:
                    g += 2.0 * gamma * (a[p, q] - target[p, q])
                ag = abs(g)
                if ag > best:
                    best = ag
                    bp = p
                    bq = q
        if bp < 0:
            break
        dobj += _update_entry(a, grad, energy, rmat, lead, row3, mom_p, mom_pp,
                              colm_p, colm_pp, bp, bq, gamma, target, oldcol)
    return dobj
