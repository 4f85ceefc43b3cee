"""Amplituhedron machinery: the Z-map, twisted Vandermonde Z matrices,
kernel-invariance checks, projected driving matrices, and forward sampling.

Membership testing of arbitrary points is not provided; only forward images
of certified totally positive Grassmannian points are produced.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.optimize

from . import flagorbit, jacobi, linalg, positivity
from .errors import CertificationError, DomainError, LinalgError


@dataclass(frozen=True)
class ZData:
    n: int
    k: int
    m: int
    Z: np.ndarray
    orthonormal_rows: bool


def make_zdata(Z, k, tol=1e-9):
    """Validated Z matrix with positive top-order minors.

    Row signs are canonicalized: the lexicographically first nonzero
    top-order minor is made positive by negating row 1 if needed, then all
    top-order minors must certify positive.
    """
    A = linalg.as_matrix(Z)
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A.imag).max() > tol * scale:
        raise DomainError("make_zdata: Z must be real")
    R = A.real.copy()
    r, n = R.shape
    k = int(k)
    if not (0 <= k <= r):
        raise LinalgError(f"make_zdata: k must lie in [0, {r}]")
    if r > n:
        raise LinalgError("make_zdata: Z must have at most as many rows as columns")
    if linalg.rank_of(R) < r:
        raise LinalgError("make_zdata: Z must have full row rank")
    first = None
    for J in combinations(range(1, n + 1), r):
        val = linalg.minor(R, tuple(range(1, r + 1)), J).real
        sub = R[:, [j - 1 for j in J]]
        s = float(np.prod(np.linalg.norm(sub, axis=1))) or 1.0
        if abs(val) > tol * s:
            first = val
            break
    if first is None:
        raise LinalgError("make_zdata: all top-order minors vanish")
    if first < 0:
        R[0, :] = -R[0, :]
    for J in combinations(range(1, n + 1), r):
        val = linalg.minor(R, tuple(range(1, r + 1)), J).real
        sub = R[:, [j - 1 for j in J]]
        s = float(np.prod(np.linalg.norm(sub, axis=1))) or 1.0
        if val <= tol * s:
            raise CertificationError(f"make_zdata: top-order minor on columns {J} is not positive")
    ortho = float(np.abs(R @ R.T - np.eye(r)).max()) <= 1e-10
    return ZData(n, k, r - k, R, ortho)


def zmap(zd, V):
    """Column span of Z V as a point of Gr_{k, k+m}; the input span must miss ker(Z)."""
    A = linalg.as_matrix(V)
    if A.shape != (zd.n, zd.k):
        raise LinalgError(f"zmap: expected an {zd.n} x {zd.k} representative, got {A.shape}")
    W = zd.Z.astype(complex) @ A
    # rank against the input scales: a kernel collision makes W numerically zero
    scale = (np.linalg.svd(zd.Z, compute_uv=False)[0]
             * np.linalg.svd(A, compute_uv=False)[0])
    sv = np.linalg.svd(W, compute_uv=False)
    if int(np.sum(sv > linalg.RANK_RTOL * scale)) < zd.k:
        raise DomainError("zmap: the subspace meets ker(Z); the image is undefined")
    return W


def kernel_basis(zd):
    _, _, Vh = np.linalg.svd(zd.Z)
    r = zd.k + zd.m
    return Vh[r:, :].conj().T


def kernel_invariant(zd, N, rtol=linalg.RANK_RTOL):
    """True when N maps ker(Z) into itself, so Z projects the flow coherently."""
    N = linalg.square(N)
    Kb = kernel_basis(zd)
    if Kb.shape[1] == 0:
        return True
    B = np.hstack([Kb, N @ Kb])
    return linalg.rank_of(B, rtol) == zd.n - zd.k - zd.m


def _check_skew(N):
    A = linalg.square(N)
    if linalg.skew_defect(A) > 1e-8 * max(1.0, float(np.abs(A).max())):
        raise LinalgError("expected a skew-Hermitian matrix")
    return A


def project_N(zd, N, tol=1e-8):
    """M = Z N Z^T, the projected driving matrix; needs orthonormal rows and
    an invariant kernel, and then Z exp(t iN) = exp(t iM) Z."""
    N = _check_skew(N)
    if not zd.orthonormal_rows:
        raise DomainError("project_N: Z must have orthonormal rows")
    if not kernel_invariant(zd, N):
        raise DomainError("project_N: ker(Z) is not invariant under N")
    M = zd.Z @ N @ zd.Z.T
    return (M - M.conj().T) / 2


def commutation_residual(zd, N, t):
    """Max-norm of Z exp(t iN) - exp(t iM) Z."""
    M = project_N(zd, N)
    A = zd.Z @ linalg.mat_exp(t * 1j * N)
    B = linalg.mat_exp(t * 1j * M) @ zd.Z
    return float(np.abs(A - B).max())


def twisted_vdm_Z(d, r, k=None):
    """Z whose rows are the first r columns of the canonical representative of
    the twisted Vandermonde flag; all top-order minors are positive."""
    if not (1 <= r <= len(d.lam)):
        raise LinalgError("twisted_vdm_Z: need 1 <= r <= n")
    tw = flagorbit.twist_flag(jacobi.vandermonde_flag(d))
    Z = np.real(tw.rep[:, :r]).T.copy()
    if k is None:
        k = r
    return make_zdata(Z, k)


def sample_amplituhedron(zd, count, rng):
    """Interior amplituhedron points: images of spans of the first k columns
    of certified totally positive matrices."""
    if zd.k < 1:
        raise LinalgError("sample_amplituhedron: k must be >= 1")
    out = []
    for _ in range(int(count)):
        A = positivity.sample_tp(zd.n, rng)
        out.append(zmap(zd, A[:, :zd.k].astype(complex)))
    return out


def in_conic_hull(y, vertices, tol=1e-9):
    """Feasibility of y = sum_i c_i v_i with c >= 0 (projective membership for
    k = 1 points), decided by linear programming."""
    y = np.asarray(y, dtype=float).reshape(-1)
    Vm = np.asarray(vertices, dtype=float)
    y = y / np.linalg.norm(y)
    res = scipy.optimize.linprog(
        c=np.zeros(Vm.shape[1]), A_eq=Vm, b_eq=y,
        bounds=[(0, None)] * Vm.shape[1], method="highs")
    return bool(res.status == 0)
