"""Multi-start experiment runner and benchmark aggregation.

Restarts are embarrassingly parallel: run r uses seed base_seed + r, so a
report is deterministic under iteration budgets regardless of scheduling,
and restarts=1 reproduces a plain solver call bit for bit.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .cd import CdConfig, cd_solve
from .fpgm import FpgmConfig, fpgm_solve
from .instances import FamilySpec, default_k
from .model import GramFactorSet, ProblemInstance, RankProfile, relative_error
from .trace import RunTrace, average_E

# (family, n, k) cells of the benchmark suite.
TABLE1 = (
    ("ngon", 12, 5), ("ngon", 16, 5), ("ngon", 20, 6),
    ("ngon", 24, 6), ("ngon", 28, 6), ("ngon", 32, 6),
    ("pn", 5, 4), ("pn", 6, 6), ("pn", 7, 6),
    ("cor", 3, 4), ("cor", 4, 5), ("cor", 5, 6),
)


def run_solver(inst: ProblemInstance, profile: RankProfile, config):
    """Dispatch on the config type; returns (factors, trace)."""
    if isinstance(config, CdConfig):
        return cd_solve(inst, profile, config)
    if isinstance(config, FpgmConfig):
        return fpgm_solve(inst, profile, config)
    raise TypeError(f"unknown solver config {type(config).__name__}")


@dataclass(frozen=True)
class RunRecord:
    seed: int
    rel_error: float
    abs_error: float
    wall_time_s: float
    factors: GramFactorSet
    trace: RunTrace
    sym_gap: Optional[float] = None  # max_i ||a_i - b_i||_F in symmetric mode


@dataclass(frozen=True)
class BenchmarkReport:
    instance_name: str
    solver: str
    records: tuple

    def __post_init__(self):
        if not self.records:
            raise ValueError("a report needs at least one run")

    @property
    def best(self) -> RunRecord:
        return min(self.records, key=lambda r: (r.rel_error, r.seed))

    def mean_E(self, time_grid) -> np.ndarray:
        return average_E([r.trace for r in self.records], time_grid)

    def to_dict(self) -> dict:
        return {
            "instance": self.instance_name,
            "solver": self.solver,
            "best": {"seed": self.best.seed, "rel_error": self.best.rel_error},
            "runs": [
                {
                    "seed": r.seed,
                    "rel_error": r.rel_error,
                    "wall_time_s": r.wall_time_s,
                    **({"sym_gap": r.sym_gap} if r.sym_gap is not None else {}),
                }
                for r in self.records
            ],
        }


def _sym_gap(factors: GramFactorSet) -> float:
    return max(float(np.linalg.norm(ai - bi))
               for ai, bi in zip(factors.a, factors.b))


def _single_run(inst, profile, config, seed):
    cfg = replace(config, seed=seed)
    start = time.perf_counter()
    factors, trace = run_solver(inst, profile, cfg)
    wall = time.perf_counter() - start
    gap = None
    if isinstance(cfg, CdConfig) and cfg.gamma > 0:
        gap = _sym_gap(factors)
    return RunRecord(
        seed=seed,
        rel_error=relative_error(inst, factors),
        abs_error=trace.best_error,
        wall_time_s=wall,
        factors=factors,
        trace=trace,
        sym_gap=gap,
    )


def _worker(payload):
    return _single_run(*payload)


def multi_start(inst: ProblemInstance, profile: RankProfile, config, restarts: int,
                jobs: Optional[int] = 1) -> BenchmarkReport:
    """Run the configured solver from ``restarts`` seeded initializations.

    Run r draws its initialization from seed ``config.seed + r``.  ``jobs``
    spreads runs over processes (None = all cores); aggregation is by run
    index, so results do not depend on scheduling.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    payloads = [(inst, profile, config, config.seed + r) for r in range(restarts)]
    if jobs is None:
        jobs = os.cpu_count() or 1
    jobs = max(1, min(jobs, restarts))
    if jobs == 1:
        records = [_single_run(*p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_worker, payloads))
    return BenchmarkReport(instance_name=inst.name, solver=config.label,
                           records=tuple(records))


def table1_cells():
    """The benchmark suite as (instance, profile) pairs with r_i = k."""
    cells = []
    for family, n, k in TABLE1:
        inst = FamilySpec(family, n).instance()
        cells.append((inst, RankProfile.full(inst.m, inst.n, k)))
    return cells


def benchmark_suite(config, restarts: int, jobs: Optional[int] = 1):
    """Run the whole suite; returns a list of BenchmarkReport."""
    return [multi_start(inst, profile, config, restarts, jobs=jobs)
            for inst, profile in table1_cells()]


def save_reports(path, reports):
    doc = [r.to_dict() for r in reports]
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
