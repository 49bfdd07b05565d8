"""Best-so-far error traces for solver runs.

A trace holds (elapsed seconds, error) samples where the error is the
running minimum of ||X - X~||_F, so the curve is nonincreasing by
construction and starts at the scaled initial error e0.  The normalized
curve e(t)/e0 lives in [0, 1] and equals 1 at t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class RunTrace:
    e0: float
    meta: dict = field(default_factory=dict)
    samples: list = field(init=False)

    def __post_init__(self):
        self.e0 = float(self.e0)
        self.samples = [(0.0, self.e0)]

    def record(self, elapsed_s: float, error: float) -> float:
        """Append a sample; the stored error is the running minimum."""
        best = min(float(error), self.samples[-1][1])
        self.samples.append((float(elapsed_s), best))
        return best

    @property
    def best_error(self) -> float:
        return self.samples[-1][1]

    @property
    def final_error(self) -> float:
        return self.samples[-1][1]

    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    def errors(self) -> np.ndarray:
        return np.array([e for _, e in self.samples])

    def normalized(self) -> np.ndarray:
        """E(t) = e(t)/e0 per sample; identically 0 when e0 == 0 (exact start)."""
        errs = self.errors()
        if self.e0 <= 0.0:
            return np.zeros_like(errs)
        return errs / self.e0

    def write_csv(self, path):
        rows = np.column_stack([self.times(), self.errors()])
        np.savetxt(path, rows, delimiter=",", fmt="%.17g")


def average_E(traces, time_grid) -> np.ndarray:
    """Average normalized error across traces on a common time grid.

    Each trace is step-interpolated (last value carried forward); grid points
    before a trace's first sample read as 1.
    """
    if not traces:
        raise ValueError("need at least one trace")
    grid = np.asarray(time_grid, dtype=float)
    curves = []
    for tr in traces:
        ts = tr.times()
        if tr.e0 <= 0.0:
            curves.append(np.zeros_like(grid))
            continue
        es = tr.errors() / tr.e0
        idx = np.searchsorted(ts, grid, side="right") - 1
        vals = np.where(idx >= 0, es[np.maximum(idx, 0)], 1.0)
        curves.append(vals)
    return np.mean(np.stack(curves), axis=0)
