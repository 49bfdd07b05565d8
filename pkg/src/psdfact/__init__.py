"""Positive semidefinite factorization of nonnegative matrices.

Find k-by-k PSD matrices {A_i}, {B_j} with X_ij ~ <A_i, B_j> by local
optimization: an alternating fast projected gradient method on explicit PSD
factors, and cyclic / Gauss-Southwell coordinate descent on tall Gram
factors (which also cover the symmetric completely-PSD variant, pinned
entries, and the rank-one square-root mode).
"""

from .cd import (
    CdConfig,
    CdState,
    apply_update,
    cd_solve,
    cd_subproblem_cyclic,
    cd_subproblem_gs,
    coeffs_at,
    precompute,
)
from .fpgm import FpgmConfig, fpgm_solve, fpgm_subproblem
from .harness import BenchmarkReport, RunRecord, benchmark_suite, multi_start, run_solver
from .instances import (
    FamilySpec,
    Fixture,
    SqrtRankFixture,
    default_k,
    fixtures,
    gen_cor,
    gen_ngon,
    gen_pn,
    generate,
)
from .matops import (
    EigenDecomposition,
    frob_inner,
    gram,
    lambda_max,
    project_psd,
    sym_eig,
    symmetrize,
)
from .model import (
    EntryMask,
    GramFactorSet,
    MaskEntry,
    ProblemInstance,
    RankProfile,
    VerifyReport,
    load_factors,
    load_mask,
    load_matrix_csv,
    objective,
    optimal_scale,
    random_init,
    relative_error,
    save_factors,
    save_mask,
    save_matrix_csv,
    scale_factors,
    verify_factorization,
)
from .quartic import QuarticCoeffs, cardano_minimize, minimize_quartic_safe
from .trace import RunTrace, average_E

__version__ = "0.1.0"
