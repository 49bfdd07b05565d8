"""Problem instances, Gram factor sets, objective and initialization.

A factorization approximates a nonnegative matrix X entrywise by Frobenius
inner products of positive semidefinite matrices,

    X_ij ~ <A_i, B_j>,   A_i = a_i a_i^T,  B_j = b_j b_j^T,

where the tall factors a_i (k-by-r_i) and b_j (k-by-r_j) are the canonical
unconstrained representation used everywhere in this package.  Solvers that
need explicit PSD matrices convert at their boundary.

Also holds the on-disk formats: dense CSV matrices, a JSON factor document,
and a JSON mask file for pinned factor entries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .matops import gram, sym_eig

RANK_EIG_REL_TOL = 1e-8  # eigenvalue cutoff, relative to the largest, for rank reports


@dataclass(frozen=True)
class ProblemInstance:
    """A nonnegative data matrix with a display name."""

    X: np.ndarray
    name: str = ""

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2 or X.size == 0:
            raise ValueError(f"expected a nonempty 2-D matrix, got shape {X.shape}")
        if not np.isfinite(X).all():
            raise ValueError("data matrix contains non-finite entries")
        if (X < 0).any():
            raise ValueError("data matrix must be entrywise nonnegative")
        X.setflags(write=False)
        object.__setattr__(self, "X", X)

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.X))

    def transposed(self) -> "ProblemInstance":
        return ProblemInstance(self.X.T.copy(), name=self.name + "^T" if self.name else "")


@dataclass(frozen=True)
class RankProfile:
    """Factor size k plus the per-factor inner ranks on each side."""

    k: int
    r_a: tuple
    r_b: tuple

    def __post_init__(self):
        object.__setattr__(self, "r_a", tuple(int(r) for r in self.r_a))
        object.__setattr__(self, "r_b", tuple(int(r) for r in self.r_b))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.r_a or not self.r_b:
            raise ValueError("rank profile needs at least one factor per side")
        for r in self.r_a + self.r_b:
            if not 1 <= r <= self.k:
                raise ValueError(f"inner rank {r} outside [1, {self.k}]")

    @classmethod
    def uniform(cls, m: int, n: int, k: int, r: int) -> "RankProfile":
        return cls(k, (r,) * m, (r,) * n)

    @classmethod
    def full(cls, m: int, n: int, k: int) -> "RankProfile":
        return cls.uniform(m, n, k, k)

    @classmethod
    def rank_one(cls, m: int, n: int, k: int) -> "RankProfile":
        return cls.uniform(m, n, k, 1)

    def transposed(self) -> "RankProfile":
        return RankProfile(self.k, self.r_b, self.r_a)


def _as_factor(arr, k=None):
    a = np.array(arr, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[1] < 1:
        raise ValueError(f"factor must be k-by-r, got shape {a.shape}")
    if k is not None and a.shape[0] != k:
        raise ValueError(f"inconsistent factor height {a.shape[0]} (expected {k})")
    if not np.isfinite(a).all():
        raise ValueError("factor contains non-finite entries")
    return a


@dataclass(frozen=True)
class GramFactorSet:
    """The two families of tall factors; treated as immutable once built."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(_as_factor(ai) for ai in self.a)
        if not a:
            raise ValueError("empty a-side")
        k = a[0].shape[0]
        a = tuple(_as_factor(ai, k) for ai in a)
        b = tuple(_as_factor(bj, k) for bj in self.b)
        if not b:
            raise ValueError("empty b-side")
        for f in a + b:
            f.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def k(self) -> int:
        return self.a[0].shape[0]

    def profile(self) -> RankProfile:
        return RankProfile(
            self.k,
            tuple(ai.shape[1] for ai in self.a),
            tuple(bj.shape[1] for bj in self.b),
        )

    def swapped(self) -> "GramFactorSet":
        return GramFactorSet(self.b, self.a)

    def copies(self):
        """Writable per-side lists for solver internals."""
        return [ai.copy() for ai in self.a], [bj.copy() for bj in self.b]


class MaskEntry(NamedTuple):
    side: str    # "a" or "b"
    index: int   # factor index on that side
    row: int
    col: int
    value: float


@dataclass(frozen=True)
class EntryMask:
    """Factor entries pinned to fixed values; CD solvers never touch them."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(MaskEntry(str(e[0]), int(e[1]), int(e[2]), int(e[3]), float(e[4]))
                        for e in self.entries)
        seen = set()
        for e in entries:
            if e.side not in ("a", "b"):
                raise ValueError(f"mask side must be 'a' or 'b', got {e.side!r}")
            key = (e.side, e.index, e.row, e.col)
            if key in seen:
                raise ValueError(f"duplicate mask record for coordinate {key}")
            seen.add(key)
        object.__setattr__(self, "entries", entries)

    def for_side(self, side: str):
        return [e for e in self.entries if e.side == side]

    def bool_arrays(self, side: str, profile: RankProfile):
        """Per-factor boolean arrays marking pinned coordinates."""
        ranks = profile.r_a if side == "a" else profile.r_b
        out = [np.zeros((profile.k, r), dtype=bool) for r in ranks]
        for e in self.for_side(side):
            if not 0 <= e.index < len(out):
                raise ValueError(f"mask factor index {e.index} out of range on side {side}")
            if not (0 <= e.row < profile.k and 0 <= e.col < ranks[e.index]):
                raise ValueError(f"mask coordinate ({e.row}, {e.col}) out of range "
                                 f"for factor {e.index} on side {side}")
            out[e.index][e.row, e.col] = True
        return out

    def pin_values(self, factors, side: str):
        """Write the fixed values into a list of writable factors, in place."""
        for e in self.for_side(side):
            factors[e.index][e.row, e.col] = e.value


# ---------------------------------------------------------------------------
# Objective and scaling


def _data_matrix(inst):
    return inst.X if isinstance(inst, ProblemInstance) else np.asarray(inst, dtype=float)


def gram_stacks(factors: Sequence[np.ndarray]):
    """Stack of the Gram matrices a_i a_i^T, shape (len(factors), k, k)."""
    return np.stack([f @ f.T for f in factors])


def gram_inner_matrix(a_factors, b_factors):
    """Matrix of pairwise products P_ij = <a_i a_i^T, b_j b_j^T>."""
    GA = gram_stacks(a_factors)
    GB = gram_stacks(b_factors)
    return np.einsum("ist,jst->ij", GA, GB)


def sq_error(X, a_factors, b_factors) -> float:
    """Squared factorization error sum_ij (X_ij - <A_i, B_j>)^2.

    Each pairwise inner product is evaluated identically under a role swap of
    the two sides, and the final reduction uses an exact (order-independent)
    float sum, so sq_error(X, a, b) == sq_error(X^T, b, a) bit for bit.
    """
    X = _data_matrix(X)
    m, n = X.shape
    if m != len(a_factors) or n != len(b_factors):
        raise ValueError(f"matrix is {m}x{n} but factor sides have "
                         f"{len(a_factors)} and {len(b_factors)} entries")
    GA = gram_stacks(a_factors)
    GB = gram_stacks(b_factors)
    terms = []
    for i in range(m):
        Gi = GA[i]
        Xi = X[i]
        for j in range(n):
            r = float(Xi[j]) - float(np.sum(Gi * GB[j]))
            terms.append(r * r)
    return math.fsum(terms)


def sq_error_fast(X, a_factors, b_factors) -> float:
    """Vectorized squared error for solver-internal bookkeeping.

    Same quantity as sq_error up to summation order (last-ulp differences);
    use sq_error where exact transpose symmetry matters.
    """
    X = _data_matrix(X)
    R = np.einsum("ist,jst->ij", gram_stacks(a_factors), gram_stacks(b_factors)) - X
    return float(np.einsum("ij,ij->", R, R))


def objective(inst, factors: GramFactorSet) -> float:
    """Squared error of a factor set against the instance matrix."""
    return sq_error(inst, factors.a, factors.b)


def relative_error(inst, factors: GramFactorSet) -> float:
    """||X - X~||_F / ||X||_F."""
    X = _data_matrix(inst)
    nx = float(np.linalg.norm(X))
    if nx == 0.0:
        raise ValueError("relative error undefined for an all-zero matrix")
    return math.sqrt(objective(X, factors)) / nx


def optimal_scale(inst, factors: GramFactorSet) -> float:
    """The scalar lam minimizing ||X - lam * X~||_F^2, clipped at zero.

    Raises ValueError when the factor products vanish identically (the scale
    is then undetermined).
    """
    X = _data_matrix(inst)
    P = gram_inner_matrix(factors.a, factors.b)
    if P.shape != X.shape:
        raise ValueError("factor set does not match matrix dimensions")
    den = float(np.sum(P * P))
    if den <= 0.0:
        raise ValueError("factor products vanish; scale undetermined")
    num = float(np.sum(X * P))
    return max(num / den, 0.0)


def scale_factors(inst, factors: GramFactorSet) -> GramFactorSet:
    """Rescale the a-side by sqrt(lam*) so the approximation best matches X."""
    s = math.sqrt(optimal_scale(inst, factors))
    return GramFactorSet(tuple(s * ai for ai in factors.a), factors.b)


def random_init(inst, profile: RankProfile, seed) -> GramFactorSet:
    """Seeded standard-normal factors, rescaled to the optimal initial error.

    The a-side is drawn first (factor by factor), then the b-side, from a
    single PCG64 stream, so equal seeds give identical factor sets.  The
    post-scaling error never exceeds ||X||_F.  Draws whose products vanish
    (scale undetermined or zero) are rejected; ten failures raise.
    """
    X = _data_matrix(inst)
    m, n = X.shape
    if len(profile.r_a) != m or len(profile.r_b) != n:
        raise ValueError("rank profile does not match matrix dimensions")
    rng = np.random.default_rng(seed)
    for _ in range(10):
        a = [rng.standard_normal((profile.k, r)) for r in profile.r_a]
        b = [rng.standard_normal((profile.k, r)) for r in profile.r_b]
        fs = GramFactorSet(tuple(a), tuple(b))
        try:
            lam = optimal_scale(X, fs)
        except ValueError:
            continue
        if lam <= 0.0:
            continue
        s = math.sqrt(lam)
        return GramFactorSet(tuple(s * ai for ai in fs.a), fs.b)
    raise RuntimeError("random initialization failed: factor products vanished "
                       "for 10 consecutive draws")


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of checking a factor set against a matrix."""

    rel_error: float
    tol: float
    passed: bool
    a_ranks: tuple
    b_ranks: tuple
    min_eigenvalue: float

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}: relative error {self.rel_error:.3e} (tol {self.tol:.1e}), "
                f"ranks a={list(self.a_ranks)} b={list(self.b_ranks)}, "
                f"min factor eigenvalue {self.min_eigenvalue:.2e}")


def _gram_rank_and_mineig(factor):
    vals = sym_eig(gram(factor)).eigenvalues
    top = float(vals[0])
    if top <= 0.0:
        return 0, float(vals[-1])
    return int(np.sum(vals > RANK_EIG_REL_TOL * top)), float(vals[-1])


def verify_factorization(inst, factors: GramFactorSet, tol: float) -> VerifyReport:
    """Relative error, per-factor ranks, and a pass/fail verdict at tol.

    Gram form makes every factor PSD by construction; the reported minimum
    eigenvalue only confirms that numerically.
    """
    rel = relative_error(inst, factors)
    a_info = [_gram_rank_and_mineig(f) for f in factors.a]
    b_info = [_gram_rank_and_mineig(f) for f in factors.b]
    min_eig = min(v for _, v in a_info + b_info)
    return VerifyReport(
        rel_error=rel,
        tol=float(tol),
        passed=bool(rel <= tol),
        a_ranks=tuple(r for r, _ in a_info),
        b_ranks=tuple(r for r, _ in b_info),
        min_eigenvalue=min_eig,
    )


# ---------------------------------------------------------------------------
# File formats


def save_matrix_csv(path, inst_or_matrix):
    """Dense CSV, row-major, no header."""
    X = _data_matrix(inst_or_matrix)
    np.savetxt(path, X, delimiter=",", fmt="%.17g")


def load_matrix_csv(path, name=None) -> ProblemInstance:
    X = np.loadtxt(path, delimiter=",", ndmin=2)
    return ProblemInstance(X, name=name if name is not None else Path(path).stem)


def save_factors(path, factors: GramFactorSet, name: str = ""):
    """JSON factor document; floats keep their exact round-trip representation."""
    doc = {
        "name": name,
        "m": factors.m,
        "n": factors.n,
        "k": factors.k,
        "r_a": [ai.shape[1] for ai in factors.a],
        "r_b": [bj.shape[1] for bj in factors.b],
        "a": [ai.tolist() for ai in factors.a],
        "b": [bj.tolist() for bj in factors.b],
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_factors(path):
    """Read a factor document; returns (name, GramFactorSet)."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        fs = GramFactorSet(tuple(np.array(ai, dtype=float) for ai in doc["a"]),
                           tuple(np.array(bj, dtype=float) for bj in doc["b"]))
    except KeyError as exc:
        raise ValueError(f"factor file missing field {exc}") from exc
    prof = fs.profile()
    declared = (doc.get("m"), doc.get("n"), doc.get("k"),
                tuple(doc.get("r_a", ())), tuple(doc.get("r_b", ())))
    actual = (fs.m, fs.n, fs.k, prof.r_a, prof.r_b)
    if declared != actual:
        raise ValueError(f"factor file header {declared} does not match arrays {actual}")
    return doc.get("name", ""), fs


def save_mask(path, mask: EntryMask):
    rows = [{"side": e.side, "index": e.index, "row": e.row, "col": e.col, "value": e.value}
            for e in mask.entries]
    Path(path).write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")


def load_mask(path) -> EntryMask:
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    return EntryMask(tuple((r["side"], r["index"], r["row"], r["col"], r["value"])
                           for r in rows))
