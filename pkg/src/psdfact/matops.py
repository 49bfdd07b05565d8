"""Small dense symmetric-matrix kernels.

Everything operates on plain numpy arrays.  Factor sizes in this problem
family are tiny (k <= ~10; the largest symmetric matrix that appears is the
k^2-by-k^2 moment matrix of vectorized factors, so at most ~100x100), which
makes a dependency-free cyclic Jacobi eigensolver both adequate and fully
accurate.  Sweeps stop once the off-diagonal Frobenius mass drops below
1e-14 times the input norm, or after 100 sweeps.

Symmetry is enforced on entry: inputs are averaged with their transpose, so
roundoff asymmetry never reaches the eigensolver.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

# Below this dimension raw-Python rotations beat numpy's per-call overhead,
# which matters in the projected-gradient inner loop.
_SMALL_DIM = 12


class EigenDecomposition(NamedTuple):
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray   # shape (k,)
    eigenvectors: np.ndarray  # shape (k, k); column i pairs with eigenvalues[i]


def _check_square(C, name):
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1] or C.shape[0] < 1:
        raise ValueError(f"{name} expects a square matrix, got shape {C.shape}")
    if not np.isfinite(C).all():
        raise ValueError(f"{name}: input contains non-finite entries")
    return C


def symmetrize(C):
    """Average a square matrix with its transpose."""
    C = _check_square(C, "symmetrize")
    return 0.5 * (C + C.T)


def _jacobi_py_lists(S, want_vectors=True):
    # Cyclic Jacobi on nested Python lists; fastest route for tiny matrices.
    # Returns (diagonal, vectors) still as lists, unsorted.
    d = S.shape[0]
    a = [row[:] for row in S.tolist()]
    u = [[1.0 if i == j else 0.0 for j in range(d)] for i in range(d)] if want_vectors else None
    ref = math.sqrt(math.fsum(x * x for row in a for x in row))
    if ref == 0.0:
        return [0.0] * d, u if u is not None else None
    floor = 1e-17 * ref
    stop2 = (JACOBI_REL_TOL * ref) ** 2
    for _ in range(JACOBI_MAX_SWEEPS):
        off2 = 0.0
        for p in range(d - 1):
            ap = a[p]
            for q in range(p + 1, d):
                off2 += 2.0 * ap[q] * ap[q]
        if off2 <= stop2:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p][q]
                if abs(apq) <= floor:
                    continue
                tau = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for r in range(d):
                    arp = a[r][p]
                    arq = a[r][q]
                    a[r][p] = c * arp - s * arq
                    a[r][q] = s * arp + c * arq
                for r in range(d):
                    apr = a[p][r]
                    aqr = a[q][r]
                    a[p][r] = c * apr - s * aqr
                    a[q][r] = s * apr + c * aqr
                a[p][q] = a[q][p] = 0.0
                if u is not None:
                    for r in range(d):
                        urp = u[r][p]
                        urq = u[r][q]
                        u[r][p] = c * urp - s * urq
                        u[r][q] = s * urp + c * urq
    return [a[i][i] for i in range(d)], u


def _jacobi_py(S, want_vectors=True):
    vals, u = _jacobi_py_lists(S, want_vectors)
    if u is None:
        return np.array(vals), None
    return np.array(vals), np.array(u)


def _jacobi_np(S):
    d = S.shape[0]
    a = S.copy()
    u = np.eye(d)
    ref = float(np.linalg.norm(a))
    if ref == 0.0:
        return np.zeros(d), u
    floor = 1e-17 * ref
    stop2 = (JACOBI_REL_TOL * ref) ** 2
    idx = np.arange(d)
    for _ in range(JACOBI_MAX_SWEEPS):
        sq = a * a
        sq[idx, idx] = 0.0  # direct off-diagonal sum; a norm difference cancels
        off2 = float(sq.sum())
        if off2 <= stop2:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= floor:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                up = u[:, p].copy()
                uq = u[:, q].copy()
                u[:, p] = c * up - s * uq
                u[:, q] = s * up + c * uq
    return np.diag(a).copy(), u


def sym_eig(C) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    The reconstruction U diag(lam) U^T matches the (symmetrized) input to
    about 1e-15 relative, and U^T U = I to the same accuracy.
    """
    S = symmetrize(C)
    if S.shape[0] <= _SMALL_DIM:
        vals, vecs = _jacobi_py(S)
    else:
        vals, vecs = _jacobi_np(S)
    order = np.argsort(-vals, kind="stable")
    return EigenDecomposition(vals[order], vecs[:, order])


def project_psd(C):
    """Frobenius-nearest positive semidefinite matrix: clip negative eigenvalues."""
    S = symmetrize(C)
    d = S.shape[0]
    if d <= _SMALL_DIM:
        # Fused list-based path; the projection needs no eigenvalue ordering.
        vals, u = _jacobi_py_lists(S)
        lam = [v if v > 0.0 else 0.0 for v in vals]
        out = np.empty((d, d))
        for i in range(d):
            ui = u[i]
            for j in range(i + 1):
                uj = u[j]
                acc = 0.0
                for r in range(d):
                    acc += ui[r] * lam[r] * uj[r]
                out[i, j] = out[j, i] = acc
        return out
    vals, vecs = _jacobi_np(S)
    P = (vecs * np.maximum(vals, 0.0)) @ vecs.T
    return 0.5 * (P + P.T)


def project_psd_stack(Cs):
    """Apply project_psd to every slice of an (m, k, k) stack."""
    Cs = np.asarray(Cs, dtype=float)
    out = np.empty_like(Cs)
    for i in range(Cs.shape[0]):
        out[i] = project_psd(Cs[i])
    return out


def lambda_max(M) -> float:
    """Largest eigenvalue, taken from the full Jacobi decomposition."""
    S = symmetrize(M)
    if S.shape[0] <= _SMALL_DIM:
        vals, _ = _jacobi_py(S, want_vectors=False)
    else:
        vals, _ = _jacobi_np(S)
    return float(vals.max()) if vals.size else 0.0


def gram(a):
    """Gram matrix a a^T of a tall k-by-r factor (1-D input is taken as k-by-1)."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[1] < 1:
        raise ValueError(f"gram expects a k-by-r factor, got shape {a.shape}")
    return a @ a.T


def psd_root(C):
    """A k-by-k root factor F with F F^T equal to the PSD part of C.

    Used to convert explicit PSD iterates back to tall Gram factors;
    eigenvalues below zero (projection roundoff) are clipped.
    """
    vals, vecs = sym_eig(C)
    return vecs * np.sqrt(np.maximum(vals, 0.0))


def frob_inner(A, B) -> float:
    """Frobenius inner product sum_{p,q} A_pq B_pq (= trace(AB) for symmetric A, B)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return float(np.sum(A * B))
