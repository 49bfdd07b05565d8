"""Race the three solvers and plot-ready convergence curves.

Runs FPGM, cyclic CD, and Gauss-Southwell CD from shared seeded starts on a
few benchmark cells, then writes the averaged normalized-error curves
E(t) = e(t)/e0 to CSV (one column per solver).  E starts at 1 and falls
toward 0 when a run approaches an exact factorization; averaging over
restarts makes the curves comparable across instances.  Plotting is left to
external tools (the CSV loads directly into any of them).
"""

import numpy as np

import psdfact as pf

BUDGET_S = 10.0
RESTARTS = 5
CELLS = [("ngon", 12, 5), ("cor", 3, 4)]


def configs():
    return [
        pf.FpgmConfig(delta=5.0, time_budget_s=BUDGET_S, seed=0),
        pf.CdConfig(variant="cyclic", time_budget_s=BUDGET_S, seed=0),
        pf.CdConfig(variant="gauss_southwell", alpha=0.5,
                    time_budget_s=BUDGET_S, seed=0),
    ]


def main():
    grid = np.linspace(0.0, BUDGET_S, 101)
    for family, n, k in CELLS:
        inst = pf.generate(family, n)
        profile = pf.RankProfile.full(inst.m, inst.n, k)
        print(f"\n{inst.name} ({inst.m}x{inst.n}), k={k}, "
              f"{RESTARTS} restarts x {BUDGET_S:.0f}s")
        print(f"{'solver':>10} {'best rel':>12} {'median rel':>12}")
        columns = [grid]
        labels = ["seconds"]
        for cfg in configs():
            report = pf.multi_start(inst, profile, cfg, RESTARTS, jobs=None)
            errs = sorted(r.rel_error for r in report.records)
            print(f"{report.solver:>10} {errs[0]:12.3e} {errs[len(errs) // 2]:12.3e}")
            columns.append(report.mean_E(grid))
            labels.append(report.solver)
        out = f"curves_{inst.name}.csv"
        np.savetxt(out, np.column_stack(columns), delimiter=",",
                   header=",".join(labels), comments="")
        print(f"averaged E(t) curves -> {out}")


if __name__ == "__main__":
    main()
