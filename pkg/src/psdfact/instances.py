"""Benchmark matrix generators and certified factorization fixtures.

Three families of nonnegative matrices:

* ``gen_ngon(n)`` -- slack matrix of the regular n-gon.  With unit-circle
  vertices v_j at angle 2*pi*j/n and facet i spanning v_{i-1}, v_i (outward
  normal at angle (2i-1)*pi/n, offset cos(pi/n)), the slack of vertex j in
  facet i depends only on d = (j - i) mod n:

      s(d) = cos(pi/n) - cos((2d+1)*pi/n),

  an exactly palindromic circulant pattern with zeros at d = 0 and d = n-1.
  Rows are scaled so the smallest nonzero slack is 1.  The 10-gon is the one
  exception: it ships in its conventional presentation (adjacent zeros,
  golden-ratio value set {0, phi^-2, 1, phi, 2}), i.e. the generic pattern
  rotated one step and divided by phi^2.  The construction is certified
  entrywise against the known closed forms for n = 4, 5, 8, 10; other sizes
  rest on the derivation above.

* ``gen_pn(n)`` -- intersection-size matrix U V^T of all floor(n/2)- against
  all ceil(n/2)-subsets of {1..n}, both in lexicographic order.

* ``gen_cor(n)`` -- the 2^n-by-2^n matrix (1 - u^T v)^2 over binary vectors,
  counted least-significant-bit first.

The fixtures are exact hand-constructed factorizations (square, pentagon,
octagon, decagon, the symmetric P4, and a rank-one square-root factorization
of the octagon) with every constant evaluated from its closed form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import GramFactorSet, ProblemInstance

PHI = (1.0 + math.sqrt(5.0)) / 2.0

FAMILIES = ("ngon", "pn", "cor")

PN_MAX_ROWS = 10_000
COR_MAX_N = 12


def gen_ngon(n: int) -> ProblemInstance:
    """Slack matrix of the regular n-gon (see module docstring for scaling)."""
    if n < 3:
        raise ValueError("an n-gon needs n >= 3")
    half = [math.cos(math.pi / n) - math.cos((2 * d + 1) * math.pi / n)
            for d in range((n - 1) // 2 + 1)]
    unit = half[1]
    # mirroring d -> n-1-d keeps the palindrome (and the second zero) exact
    c = np.array([half[min(d, n - 1 - d)] / unit for d in range(n)])
    if n == 10:
        c = np.roll(c, 1) / PHI ** 2
    d = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return ProblemInstance(c[d], name=f"S{n}")


def gen_pn(n: int) -> ProblemInstance:
    """Subset-intersection matrix P_n = U_n V_n^T."""
    if n < 3:
        raise ValueError("P_n needs n >= 3")
    rows = math.comb(n, n // 2)
    if rows > PN_MAX_ROWS:
        raise ValueError(f"P_{n} would have {rows} rows (guard is {PN_MAX_ROWS})")
    lo = list(itertools.combinations(range(n), n // 2))
    hi = list(itertools.combinations(range(n), (n + 1) // 2))
    U = np.zeros((len(lo), n))
    V = np.zeros((len(hi), n))
    for i, s in enumerate(lo):
        U[i, list(s)] = 1.0
    for j, t in enumerate(hi):
        V[j, list(t)] = 1.0
    return ProblemInstance(U @ V.T, name=f"P{n}")


def gen_cor(n: int) -> ProblemInstance:
    """Correlation-polytope slack submatrix (1 - u^T v)^2 over {0,1}^n."""
    if not 1 <= n <= COR_MAX_N:
        raise ValueError(f"COR_n supports 1 <= n <= {COR_MAX_N}")
    vecs = ((np.arange(2 ** n)[:, None] >> np.arange(n)) & 1).astype(float)
    G = vecs @ vecs.T
    return ProblemInstance((1.0 - G) ** 2, name=f"COR{n}")


def default_k(family: str, n: int) -> int:
    """Factorization size used in the benchmark for each family.

    n-gons: the conjectured 1 + ceil(log2 n).  P_n: the known upper bound
    2*ceil(sqrt(n)) except P_5, where 4 suffices.  COR_n: the exact n + 1.
    """
    if family == "ngon":
        return 1 + math.ceil(math.log2(n))
    if family == "pn":
        return 4 if n == 5 else 2 * math.ceil(math.sqrt(n))
    if family == "cor":
        return n + 1
    raise ValueError(f"unknown family {family!r}")


def generate(family: str, n: int) -> ProblemInstance:
    if family == "ngon":
        return gen_ngon(n)
    if family == "pn":
        return gen_pn(n)
    if family == "cor":
        return gen_cor(n)
    raise ValueError(f"unknown family {family!r} (choose from {FAMILIES})")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def instance(self) -> ProblemInstance:
        return generate(self.family, self.n)

    def k(self) -> int:
        return default_k(self.family, self.n)


# ---------------------------------------------------------------------------
# Fixtures


@dataclass(frozen=True)
class Fixture:
    """An instance paired with an explicit factorization expected to verify."""

    name: str
    instance: ProblemInstance
    factors: GramFactorSet
    symmetric: bool = False
    expect_pass: bool = True


def fixture_square() -> Fixture:
    """Size-3 factorization of the square's slack matrix; all factors rank one."""
    a = (
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, -1.0, 1.0],
    )
    b = (
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
    )
    return Fixture("square-k3", gen_ngon(4), GramFactorSet(a, b))


def fixture_pentagon() -> Fixture:
    """Size-4 factorization of the pentagon's slack matrix.

    The second entry of b4 is pinned by the factorization equations rather
    than copied: with a2 = e2 and a5 the mixed vector below, matching
    X[1, 3] = phi forces (b4[1])^2 = phi, and matching X[4, 3] = 0 forces
    a5 . b4 = (1 + b4[1])/(1 + sqrt(phi)) - 1 = 0, so b4[1] = +sqrt(phi).
    """
    sp = math.sqrt(PHI)
    beta = (1.0 - sp ** 3) / 2.0
    a = (
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0 / (1.0 + sp), 1.0 / (1.0 + sp), 1.0, PHI - 1.0 / sp],
    )
    b = (
        [[0.0, 0.0],
         [0.0, 0.0],
         [beta, math.sqrt(1.0 - beta * beta)],
         [sp, 0.0]],
        [1.0, 0.0, 0.0, 1.0],
        [sp, 1.0, 0.0, 0.0],
        [1.0, sp, -1.0, 0.0],
        [0.0, -1.0, sp, -1.0],
    )
    return Fixture("pentagon-k4", gen_ngon(5), GramFactorSet(a, b))


def fixture_octagon() -> Fixture:
    """Size-4 factorization of the octagon's slack matrix.

    The bottom-right entry of b5 is pinned by the factorization equations:
    column 5 of the matrix forces, among others, a5 . b5 columns to vanish
    and a8-row entries to match, four conditions consistently solved only by
    -sqrt(2)/g2 = -sqrt(2 - sqrt(2)); a commonly printed -sqrt(2)/2 fails
    all four.
    """
    g1 = math.sqrt(1.0 + math.sqrt(2.0))
    g2 = math.sqrt(2.0 + math.sqrt(2.0))
    g3 = 1.0 / g1 - g1
    g4 = 2.0 ** 0.25
    g5 = math.sqrt(1.0 - 1.0 / g1 ** 2)
    a = (
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, -g1, -g1, 0.0],
        [1.0, g3, g3, -1.0 / g1],
        [0.0, -1.0, -2.0, 1.0],
        [0.0, 0.0, 1.0, -1.0],
        [-1.0, -1.0 / g1, -1.0 / g1, 1.0 / g1],
    )
    b = (
        [[0.0, 0.0], [0.0, 0.0], [-1.0, 0.0], [-1.0, g1]],
        [[-1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, -g2]],
        [[g1, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, g1]],
        [[-g2, 0.0], [-g4, 1.0], [0.0, -1.0], [-g4, 0.0]],
        [[g2, 0.0], [0.0, g2], [1.0 / g4, -g1 ** 2 / g2], [2.0 / g4, -math.sqrt(2.0) / g2]],
        [[g1, 0.0], [-math.sqrt(2.0), g4], [math.sqrt(2.0), -g4], [math.sqrt(2.0), -g4]],
        [[-1.0, 0.0], [g1, 0.0], [-g1, 1.0], [-g1, 1.0]],
        [[0.0, 0.0], [-1.0 / g1, g5], [g1, 0.0], [-g3, g5]],
    )
    return Fixture("octagon-k4", gen_ngon(8), GramFactorSet(a, b))


def fixture_decagon() -> Fixture:
    """Size-5 factorization of the decagon's slack matrix.

    The top entry of a10's third column is pinned by the factorization
    equations for row 10: against b4 its square must close the gap
    phi - phi^-2 = 2/phi, and against b2 (whose fourth coordinate meets the
    -g3 below it) the sign must be positive, giving g3/g1 = 2^(3/4); a
    commonly printed g3/phi satisfies neither.
    """
    g1 = (math.sqrt(2.0) * PHI) ** -0.5
    g2 = (math.sqrt(2.0) / PHI) ** 0.5
    g3 = math.sqrt(2.0 / PHI)
    g4 = 2.0 ** 0.25 * PHI
    g5 = -PHI ** 1.5
    g6 = math.sqrt(math.sqrt(5.0) - 1.0)
    sp = math.sqrt(PHI)
    q = 2.0 ** 0.25
    w = math.sqrt(2.0 * PHI) - 1.0
    v = math.sqrt(2.0) * PHI - sp
    a = (
        [[0.0, 1.0 / g1, 0.0], [0.0, g4, 0.0], [1.0, g5, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]],
        [[0.0, 1.0 / (g1 * PHI), 0.0], [g2, g4 / PHI, 0.0], [-1.0, g5 / PHI, 0.0],
         [0.0, -1.0 / PHI, 0.0], [0.0, 0.0, sp]],
        [[0.0, 0.0, 0.0], [g2, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0 / PHI, 0.0], [0.0, 0.0, sp]],
        [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        [[g2, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, PHI, 0.0], [0.0, 0.0, g3], [0.0, 0.0, 0.0]],
        [[0.0, 0.0, 1.0 / g1], [0.0, 0.0, g2], [1.0, 0.0, w], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]],
        [[0.0, 0.0, g4], [g2, 0.0, q], [-1.0, 0.0, v], [0.0, 1.0 / PHI, 0.0], [0.0, 0.0, -sp]],
        [[0.0, 1.0 / (g1 * PHI), g4], [g2, g4 / PHI, q], [-1.0, g5 / PHI, v],
         [0.0, -1.0 / PHI, 0.0], [0.0, 0.0, -sp]],
        [[0.0, 1.0 / g1, 1.0 / g1], [0.0, g4, g2], [1.0, g5, w], [0.0, -1.0, 0.0],
         [0.0, 0.0, -1.0]],
        [[g2, 0.0, g3 / g1], [0.0, 0.0, g4 * g3], [0.0, PHI, g5 * g3], [0.0, 0.0, -g3],
         [0.0, 0.0, 0.0]],
    )
    b = (
        [0.0, g1, 0.0, sp, 0.0],
        [g1, 0.0, 0.0, 1.0, 0.0],
        [0.0, g1, 1.0 / PHI, 0.0, 0.0],
        [g1, 0.0, 0.0, 0.0, 0.0],
        [0.0, g1, 0.0, 0.0, 0.0],
        [0.0, g1, 0.0, 0.0, 1.0 / PHI],
        [g1, 0.0, 0.0, 0.0, 1.0],
        [0.0, g1, 1.0 / PHI, 0.0, g6],
        [g1, 0.0, 0.0, 1.0, 1.0],
        [0.0, g1, 0.0, sp, 1.0 / PHI],
    )
    return Fixture("decagon-k5", gen_ngon(10), GramFactorSet(a, b))


def fixture_p4_symmetric() -> Fixture:
    """Symmetric size-4 factorization of P_4 (both sides share the factors)."""
    a = (
        [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [0.0, 0.0]],
        [[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
        [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 1.0]],
        [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0]],
        [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
    )
    return Fixture("p4-symmetric-k4", gen_pn(4), GramFactorSet(a, a), symmetric=True)


@dataclass(frozen=True)
class SqrtRankFixture:
    """Rank-one factorization data for the octagon's square-root form.

    ``signs * sqrt(X)`` (entrywise, nonnegative root) equals ``left @ right``,
    so the rows of ``left`` and columns of ``right`` are rank-one Gram factors
    of X itself: X_ij = (left[i] . right[:, j])^2.
    """

    name: str
    instance: ProblemInstance
    signs: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def gram_factors(self) -> GramFactorSet:
        return GramFactorSet(tuple(row for row in self.left),
                             tuple(col for col in self.right.T))


def fixture_octagon_sqrt() -> SqrtRankFixture:
    """Rank-6 signed square root of the octagon slack matrix."""
    g1 = math.sqrt(1.0 + math.sqrt(2.0))
    g2 = math.sqrt(2.0 + math.sqrt(2.0))
    signs = np.array([
        [0, -1, -1, 1, -1, -1, 1, 0],
        [0, 0, 1, 1, 1, -1, 1, -1],
        [1, 0, 0, -1, -1, 1, -1, 1],
        [1, -1, 0, 0, -1, -1, 1, -1],
        [1, -1, 1, 0, 0, 1, 1, 1],
        [1, 1, 1, -1, 0, 0, -1, -1],
        [1, 1, 1, 1, 1, 0, 0, 1],
        [-1, 1, -1, 1, -1, -1, 0, 0],
    ], dtype=float)
    left = np.array([
        [0.0, -1.0, -g1, g2, -g2, -g1],
        [0.0, 0.0, 1.0, g1, g2, -g2],
        [1.0, 0.0, 0.0, -1.0, -g1, g2],
        [g1, -1.0, 0.0, 0.0, -1.0, -g1],
        [g2, -g1, 1.0, 0.0, 0.0, 1.0],
        [g2, g2, g1, -1.0, 0.0, 0.0],
        [g1, g2, g2, g1, 1.0, 0.0],
        [-1.0, g1, -g2, g2, -g1, -1.0],
    ])
    right = np.array([
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, g2 / (g1 - 1.0), 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, (1.0 - g1) / g2],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, (1.0 + g1) / (1.0 - g1), 0.0],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, g2 / (g1 - 1.0), 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, (1.0 + g1) / g2],
    ])
    return SqrtRankFixture("octagon-sqrt-k6", gen_ngon(8), signs, left, right)


def fixtures():
    """Every certified fixture, the square-root one in its Gram-factor view."""
    sqrt_fx = fixture_octagon_sqrt()
    return [
        fixture_square(),
        fixture_pentagon(),
        fixture_octagon(),
        fixture_decagon(),
        fixture_p4_symmetric(),
        Fixture(sqrt_fx.name, sqrt_fx.instance, sqrt_fx.gram_factors()),
    ]
