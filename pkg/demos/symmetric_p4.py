"""Completely-PSD style factorization of P4 with coupled sides.

P4 is symmetric and admits a factorization with one family of PSD factors
(A_i = B_i).  The coordinate-descent solver reaches it by keeping two
families but penalizing their difference with weight gamma: each univariate
update then minimizes the data quartic plus a quadratic pull toward the
partner entry.  With gamma = 1 the sides coalesce to ~1e-6 while the data
error drops below 1e-4.
"""

import numpy as np

import psdfact as pf


def main():
    inst = pf.gen_pn(4)
    profile = pf.RankProfile.uniform(inst.m, inst.n, 4, 2)
    print("P4 (6x6), symmetric mode, k=4, r=2, gamma=1, 8 restarts x 5s")
    print("=" * 68)
    cfg = pf.CdConfig(variant="gauss_southwell", alpha=0.5, gamma=1.0,
                      time_budget_s=5.0, outer_tol=1e-8, seed=0)
    report = pf.multi_start(inst, profile, cfg, restarts=8, jobs=None)
    for r in report.records:
        print(f"seed {r.seed}: relative error {r.rel_error:.2e}   "
              f"max_i ||a_i - b_i||_F = {r.sym_gap:.2e}")

    best = report.best
    print(f"\nbest run (seed {best.seed}): the two sides agree to "
          f"{best.sym_gap:.1e}, so a_i alone factorize the matrix:")
    sym = pf.GramFactorSet(best.factors.a, best.factors.a)
    print(f"  relative error using a-side only: "
          f"{pf.relative_error(inst, sym):.2e}")

    fx = pf.instances.fixture_p4_symmetric()
    rep = pf.verify_factorization(fx.instance, fx.factors, 1e-9)
    print("\nexact hand-built symmetric fixture for comparison:")
    print(" ", rep.summary())


if __name__ == "__main__":
    main()
