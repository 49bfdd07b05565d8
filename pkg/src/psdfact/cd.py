"""Coordinate descent on tall Gram factors.

One factor entry at a time is set to the exact minimizer of its univariate
restriction, which is a quartic whose coefficients come from maintained
tables rather than from a pass over the data:

  rmat[i]        sum_j (<A_i, B_j> - X_ij) * B_j          (k x k per factor)
  moments        sum_j B_j[u,v] * B_j                      (k x k x k x k)
  col_moments[p] sum_j B_j[:,p] B_j[:,p]^T                 (k x k per column)
  energy[i][p,q] <a_q a_q^T, col_moments[p]>               (k x r_i per factor)
  grad[i][p,q]   gradient of the squared error in a_i[p,q] (k x r_i per factor)

Reading one coordinate's coefficients is O(k); refreshing the tables after
an update is O(k^3) and never touches the data matrix, so a full pass over
the m*k*r entries costs O(m*k^5) independent of n.  Variable order is either
cyclic or greedy (largest absolute gradient within the current factor).

The symmetric variant penalizes gamma * sum_i ||a_i - b_i||^2 to pull the two
sides together, which only shifts the linear and constant coefficients of
each univariate problem.  Fixing entries (masks) just skips coordinates.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .model import (
    EntryMask,
    GramFactorSet,
    ProblemInstance,
    RankProfile,
    random_init,
    sq_error_fast,
)
from .quartic import QuarticCoeffs, minimize_quartic_safe, quartic_value
from .trace import RunTrace

try:
    from . import cd_kernel
except ImportError:  # numba unavailable: the numpy reference path still works
    cd_kernel = None

# Compiled factor passes are the default; tests flip this to exercise and
# cross-check the pure-numpy reference path.
USE_KERNEL = cd_kernel is not None

VARIANTS = ("cyclic", "gauss_southwell")

STALL_WINDOW = 10        # consecutive alternations ...
STALL_REL_GAIN = 1e-12   # ... with less relative improvement than this stop a run


@dataclass(frozen=True)
class CdConfig:
    """Coordinate-descent solver settings.

    Exactly one of time_budget_s / max_outer bounds the run (time gives the
    wall-clock mode, max_outer the deterministic iteration mode; with both
    set, whichever triggers first wins).  outer_tol stops once the relative
    error falls to it.  gamma > 0 turns on the symmetric penalty;
    gamma_growth > 1 escalates gamma geometrically each alternation.
    """

    variant: str = "gauss_southwell"
    alpha: float = 0.5
    gamma: float = 0.0
    gamma_growth: float = 1.0
    mask: Optional[EntryMask] = None
    time_budget_s: Optional[float] = None
    max_outer: Optional[int] = None
    outer_tol: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")
        if self.gamma_growth < 1.0:
            raise ValueError("gamma_growth must be >= 1")
        if self.time_budget_s is None and self.max_outer is None:
            raise ValueError("set a time budget or an outer-iteration budget")
        if self.max_outer is not None and self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")

    @property
    def label(self) -> str:
        return "cd-cyclic" if self.variant == "cyclic" else "cd-gs"


@dataclass
class CdState:
    """Maintained quantities for one side's subproblem; owned by one run.

    The underscored arrays are contiguous per-row rearrangements of the two
    moment tensors, precomputed once so the per-update refresh touches no
    strided four-index slices.
    """

    rmat: np.ndarray         # (m, k, k)
    moments: np.ndarray      # (k, k, k, k)
    col_moments: np.ndarray  # (k, k, k); [p] = sum_j B_j[:,p] B_j[:,p]^T
    energy: list             # m arrays (k, r_i)
    grad: list               # m arrays (k, r_i)
    objective: float         # maintained squared error (data term only)
    _lead: np.ndarray        # (k,); [p] = 4 * moments[p,p,p,p]
    _row3: np.ndarray        # (k, k); [p] = moments[p,p,p,:]
    _mom_p: np.ndarray       # (k, k, k, k); [p][u,v,t] = moments[u,v,p,t]
    _mom_pp: np.ndarray      # (k, k, k);   [p][u,v] = moments[u,v,p,p]
    _colm_p: np.ndarray      # (k, k, k);   [p][l,s] = col_moments[l,s,p]
    _colm_pp: np.ndarray     # (k, k);      [p][l] = col_moments[l,p,p]


def precompute(X, active, fixed) -> CdState:
    """Build every maintained table from scratch.

    ``active`` are the factors being optimized (one per row of X), ``fixed``
    the other side's factors (one per column).  Cost O(m*k^2*max(n, k^2)).
    """
    X = np.asarray(X, dtype=float)
    m, n = X.shape
    if len(active) != m or len(fixed) != n:
        raise ValueError("factor counts do not match the matrix")
    GF = np.stack([f @ f.T for f in fixed])
    GA = np.stack([a @ a.T for a in active])
    R = np.einsum("ist,jst->ij", GA, GF) - X
    rmat = np.einsum("ij,jst->ist", R, GF)
    moments = np.einsum("juv,jst->uvst", GF, GF)
    col_moments = np.einsum("jsp,jtp->pst", GF, GF)
    energy = [np.einsum("pst,sq,tq->pq", col_moments, a, a) for a in active]
    grad = [4.0 * (rmat[i] @ active[i]) for i in range(m)]
    return CdState(
        rmat=rmat, moments=moments, col_moments=col_moments,
        energy=energy, grad=grad, objective=float(np.einsum("ij,ij->", R, R)),
        _lead=np.ascontiguousarray(4.0 * np.einsum("pppp->p", moments)),
        _row3=np.ascontiguousarray(np.einsum("pppt->pt", moments)),
        _mom_p=np.ascontiguousarray(np.moveaxis(moments, 2, 0)),
        _mom_pp=np.ascontiguousarray(np.einsum("uvpp->puv", moments)),
        _colm_p=np.ascontiguousarray(np.moveaxis(col_moments, 2, 0)),
        _colm_pp=np.ascontiguousarray(np.einsum("lpp->pl", col_moments)),
    )


def coeffs_at(state: CdState, active, i, p, q, gamma=0.0, target=0.0) -> QuarticCoeffs:
    """Derivative coefficients of the univariate restriction at entry (i, p, q).

    The returned cubic c3*x^3 + c2*x^2 + c1*x + c0 equals the gradient of the
    objective as a function of the entry's absolute value x.  With gamma > 0
    the symmetric penalty adds 2*gamma to c1 and -2*gamma*target to c0.
    """
    a = active[i]
    x = float(a[p, q])
    c3 = float(state._lead[p])
    c2 = 12.0 * float(state._row3[p] @ a[:, q]) - 3.0 * c3 * x
    c1 = (4.0 * float(state.rmat[i, p, p]) + 8.0 * float(state.energy[i][p, q])
          - 2.0 * c2 * x - 3.0 * c3 * x * x)
    c0 = float(state.grad[i][p, q]) - x * (c1 + x * (c2 + x * c3))
    if gamma:
        c1 += 2.0 * gamma
        c0 -= 2.0 * gamma * float(target)
    return QuarticCoeffs(c3, c2, c1, c0)


def apply_update(state: CdState, active, i, p, q, new_value, coeffs=None) -> None:
    """Set active[i][p, q] and refresh the maintained tables in O(k^3).

    ``coeffs`` may pass the entry's (unpenalized) derivative coefficients to
    avoid recomputing them for the objective bookkeeping.
    """
    a = active[i]
    old = float(a[p, q])
    new = float(new_value)
    delta = new - old
    if delta == 0.0:
        return
    if coeffs is None:
        coeffs = coeffs_at(state, active, i, p, q)
    state.objective += quartic_value(coeffs, new) - quartic_value(coeffs, old)
    old_col = a[:, q].copy()
    a[p, q] = new

    # A_i changes by delta*(e_p c^T + c e_p^T) + delta^2 e_p e_p^T with c the
    # old column q; contracted against the moment slices this is O(k) per
    # entry of rmat[i].
    d2 = delta * delta
    state.rmat[i] += (2.0 * delta) * (state._mom_p[p] @ old_col) + d2 * state._mom_pp[p]

    # energy[i][l, q] is quadratic in column q: linear term plus the delta^2
    # diagonal correction, O(k^2) for the whole column.
    state.energy[i][:, q] += (2.0 * delta) * (state._colm_p[p] @ old_col) \
        + d2 * state._colm_pp[p]

    state.grad[i] = 4.0 * (state.rmat[i] @ a)


def _penalized(coeffs: QuarticCoeffs, gamma: float, target: float) -> QuarticCoeffs:
    return QuarticCoeffs(coeffs.c3, coeffs.c2, coeffs.c1 + 2.0 * gamma,
                         coeffs.c0 - 2.0 * gamma * target)


def _improve_coord(state, active, i, p, q, gamma, target) -> None:
    base = coeffs_at(state, active, i, p, q)
    cc = _penalized(base, gamma, target) if gamma else base
    if cc.c3 == 0.0 and cc.c2 == 0.0 and cc.c1 == 0.0 and cc.c0 == 0.0:
        return  # flat restriction (fixed side has no mass on row p): skip
    x_new = minimize_quartic_safe(cc)
    x_old = float(active[i][p, q])
    # Commit only strict improvement of the fitted quartic: ties (e.g. the
    # mirror well of an exact factorization) keep the current point.
    if quartic_value(cc, x_new) < quartic_value(cc, x_old):
        apply_update(state, active, i, p, q, x_new, coeffs=base)


def _copy_factors(factors):
    return [np.array(f, dtype=float) for f in factors]


def _kernel_args(state, active, i, mask, partner, gamma):
    pinned = mask[i] if mask is not None else np.zeros(active[i].shape, dtype=bool)
    target = partner[i] if partner is not None else np.zeros(active[i].shape)
    use_gamma = float(gamma) if partner is not None else 0.0
    return (active[i], state.grad[i], state.energy[i], state.rmat[i],
            state._lead, state._row3, state._mom_p, state._mom_pp,
            state._colm_p, state._colm_pp), pinned, use_gamma, target


def cd_subproblem_cyclic(X, active0, fixed, passes=1, mask=None, gamma=0.0,
                         partner=None):
    """One-side optimization, sweeping entries in lexicographic (i, p, q) order.

    ``mask`` is a per-factor boolean list marking pinned coordinates; pinned
    entries keep the values present in ``active0``.  Returns new factors.
    """
    X = np.asarray(X, dtype=float)
    active = _copy_factors(active0)
    state = precompute(X, active, fixed)
    for _ in range(passes):
        for i in range(len(active)):
            if USE_KERNEL:
                tables, pinned, g, target = _kernel_args(state, active, i,
                                                         mask, partner, gamma)
                state.objective += cd_kernel.cyclic_factor_pass(
                    *tables, pinned, g, target)
                continue
            k, r = active[i].shape
            pinned = mask[i] if mask is not None else None
            tgt = partner[i] if partner is not None else None
            for p in range(k):
                for q in range(r):
                    if pinned is not None and pinned[p, q]:
                        continue
                    target = float(tgt[p, q]) if tgt is not None else 0.0
                    _improve_coord(state, active, i, p, q, gamma, target)
    return active


def cd_subproblem_gs(X, active0, fixed, alpha=0.5, mask=None, gamma=0.0,
                     partner=None):
    """One-side optimization with Gauss-Southwell selection.

    Within each factor, ceil(alpha * k * r) updates go to the coordinate with
    the largest absolute maintained gradient (the coupled-objective gradient
    in symmetric mode; ties break to the smallest (p, q) lexicographically;
    pinned coordinates are excluded).
    """
    X = np.asarray(X, dtype=float)
    active = _copy_factors(active0)
    state = precompute(X, active, fixed)
    for i in range(len(active)):
        k, r = active[i].shape
        updates = math.ceil(alpha * k * r)
        if USE_KERNEL:
            tables, pinned, g, target = _kernel_args(state, active, i,
                                                     mask, partner, gamma)
            state.objective += cd_kernel.gs_factor_pass(
                *tables, updates, pinned, g, target)
            continue
        pinned = mask[i] if mask is not None else None
        if pinned is not None and pinned.all():
            continue
        tgt = partner[i] if partner is not None else None
        for _ in range(updates):
            if gamma and tgt is not None:
                # selection follows the coupled objective's gradient
                scores = np.abs(state.grad[i] + (2.0 * gamma) * (active[i] - tgt))
            else:
                scores = np.abs(state.grad[i])
            if pinned is not None:
                scores = np.where(pinned, -1.0, scores)
            p, q = divmod(int(np.argmax(scores)), r)
            target = float(tgt[p, q]) if tgt is not None else 0.0
            _improve_coord(state, active, i, p, q, gamma, target)
    return active


def _check_symmetric_input(inst: ProblemInstance, profile: RankProfile):
    X = inst.X
    if X.shape[0] != X.shape[1]:
        raise ValueError("symmetric mode needs a square matrix")
    scale = float(np.abs(X).max()) or 1.0
    if float(np.abs(X - X.T).max()) > 1e-12 * scale:
        raise ValueError("symmetric mode needs a symmetric matrix")
    if profile.r_a != profile.r_b:
        raise ValueError("symmetric mode needs matching rank profiles on both sides")


def cd_solve(inst: ProblemInstance, profile: RankProfile, config: CdConfig,
             init: Optional[GramFactorSet] = None):
    """Alternating coordinate descent; returns (best factor set, trace).

    Each alternation optimizes the a-side against X and then the b-side
    against X^T, re-running the precomputation at every subproblem so that
    incremental-table drift never accumulates across passes.  The trace
    records the best-so-far error after every half-alternation from a full
    objective recomputation.
    """
    X = inst.X if isinstance(inst, ProblemInstance) else np.asarray(inst, float)
    if config.gamma > 0.0 and isinstance(inst, ProblemInstance):
        _check_symmetric_input(inst, profile)
    fs = init if init is not None else random_init(inst, profile, config.seed)
    if fs.m != X.shape[0] or fs.n != X.shape[1]:
        raise ValueError("initial factors do not match the matrix")
    a, b = fs.copies()
    mask_a = mask_b = None
    if config.mask is not None:
        prof = fs.profile()
        mask_a = config.mask.bool_arrays("a", prof)
        mask_b = config.mask.bool_arrays("b", prof)
        config.mask.pin_values(a, "a")
        config.mask.pin_values(b, "b")

    sub = cd_subproblem_cyclic if config.variant == "cyclic" else cd_subproblem_gs
    sub_kw = {"passes": 1} if config.variant == "cyclic" else {"alpha": config.alpha}

    xnorm = float(np.linalg.norm(X))
    t0 = time.perf_counter()
    err = math.sqrt(sq_error_fast(X, a, b))
    trace = RunTrace(e0=err, meta={"solver": config.label, "seed": config.seed,
                                   "alpha": config.alpha, "gamma": config.gamma})
    best = err
    best_a, best_b = _copy_factors(a), _copy_factors(b)
    gamma = config.gamma
    stall = 0
    outer = 0

    def out_of_time():
        return (config.time_budget_s is not None
                and time.perf_counter() - t0 >= config.time_budget_s)

    def record():
        nonlocal best, best_a, best_b
        e = math.sqrt(sq_error_fast(X, a, b))
        if e < best:
            best = e
            best_a, best_b = _copy_factors(a), _copy_factors(b)
        trace.record(time.perf_counter() - t0, e)
        return best <= config.outer_tol * xnorm

    def progress():
        # the quantity the alternations actually drive down: the data error,
        # plus the coupling penalty in symmetric mode
        if not gamma:
            return best
        pen = sum(float(((ai - bi) ** 2).sum()) for ai, bi in zip(a, b))
        return math.sqrt(sq_error_fast(X, a, b) + gamma * pen)

    prev_progress = progress()
    while True:
        a = sub(X, a, b, mask=mask_a, gamma=gamma, partner=b if gamma else None,
                **sub_kw)
        if record() or out_of_time():
            break
        b = sub(X.T, b, a, mask=mask_b, gamma=gamma, partner=a if gamma else None,
                **sub_kw)
        done = record()
        outer += 1
        gamma *= config.gamma_growth
        if done or out_of_time():
            break
        if config.max_outer is not None and outer >= config.max_outer:
            break
        cur = progress()
        gain = (prev_progress - cur) / prev_progress if prev_progress > 0 else 0.0
        stall = stall + 1 if gain < STALL_REL_GAIN else 0
        prev_progress = cur
        if stall >= STALL_WINDOW:
            break

    return GramFactorSet(tuple(best_a), tuple(best_b)), trace
