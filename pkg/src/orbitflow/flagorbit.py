"""Partial flags, Plucker coordinates, the flag <-> orbit dictionary,
projection matrices, the reversal/duality/twist involutions, eigenflags,
and Bruhat cell location.

A PartialFlag stores a unitary n x n representative whose column prefixes
span the flag's subspaces; only the projection matrices P_k for k in K are
contractually meaningful. An OrbitPoint is a skew-Hermitian matrix with
cached weakly decreasing spectrum of -iL.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import linalg, perms, positivity
from .errors import DomainError, LinalgError

CHART_ATOL = 1e-10    # minor-sum threshold for the totally nonnegative chart
FLAG_ATOL = 1e-8      # flag equality: max projection-matrix deviation


@dataclass(frozen=True)
class PartialFlag:
    n: int
    K: tuple
    rep: np.ndarray

    def projection(self, k):
        cols = self.rep[:, :k]
        return cols @ cols.conj().T

    def projections(self):
        return {k: self.projection(k) for k in self.K}


@dataclass(frozen=True)
class OrbitPoint:
    L: np.ndarray
    lam: np.ndarray
    K: tuple


@dataclass(frozen=True)
class CellLabel:
    v: tuple
    w: tuple


def complete_K(n):
    return tuple(range(1, n))


def flag_from_matrix(A, K=None, skew_tol=1e-10):
    """Flag spanned by the column prefixes of an invertible matrix."""
    A = linalg.square(A)
    n = A.shape[0]
    K = complete_K(n) if K is None else tuple(sorted(set(int(k) for k in K)))
    if not K or K[0] < 1 or K[-1] > n - 1:
        raise LinalgError(f"flag dimension set must be a nonempty subset of [1, {n - 1}]")
    rep = A if linalg.unitary_defect(A) <= skew_tol else linalg.k_factor(A)
    return PartialFlag(n, K, rep)


def flag_distance(V, W):
    """Representative-independent distance: max over shared k of |P_k - P'_k|."""
    ks = set(V.K) & set(W.K)
    if not ks:
        raise LinalgError("flags share no dimensions")
    return max(float(np.abs(V.projection(k) - W.projection(k)).max()) for k in ks)


def flags_equal(V, W, tol=FLAG_ATOL):
    return V.K == W.K and flag_distance(V, W) < tol


def orbit_point(L, lam=None, tol=1e-8):
    """Validated orbit point; lam defaults to the spectrum of -iL."""
    A = linalg.square(L)
    if linalg.skew_defect(A) > 1e-10 * max(1.0, float(np.abs(A).max())):
        raise LinalgError("orbit_point: matrix is not skew-Hermitian within tolerance")
    w, _ = linalg.herm_eig(-1j * A)
    if lam is None:
        lam = w
    else:
        lam = np.asarray(lam, dtype=float)
        if len(lam) != len(w) or np.abs(lam - w).max() > tol * max(1.0, np.abs(w).max()):
            raise LinalgError("orbit_point: cached spectrum does not match the matrix")
    return OrbitPoint(A, lam, linalg.multiplicity_set(lam))


def canonical_tnn_rep(A, chart_atol=CHART_ATOL):
    """Canonical real orthogonal representative of a flag in the totally
    nonnegative chart: every order-k sum of left-justified minors is positive.

    Column phases are first normalized (largest-modulus entry positive real);
    a residual imaginary part means the flag has no real representative.
    Column signs are then fixed sequentially by the minor-sum rule; a sum at
    zero means the flag lies outside the chart, and the map is undefined.
    """
    g = linalg.square(A).copy()
    n = g.shape[0]
    if linalg.unitary_defect(g) > 1e-10:
        g = linalg.k_factor(g)
    for j in range(n):
        col = g[:, j]
        ph = col[int(np.argmax(np.abs(col)))]
        g[:, j] = col / (ph / abs(ph))
    if np.abs(g.imag).max() > 1e-8:
        raise DomainError("canonical_tnn_rep: flag admits no real orthogonal representative")
    gr = np.linalg.qr(g.real)[0]
    for k in range(1, n + 1):
        s = sum(linalg.left_minor(gr, I).real for I in linalg.index_sets(n, k))
        if abs(s) <= chart_atol:
            raise DomainError("canonical_tnn_rep: flag lies outside the totally nonnegative chart")
        if s < 0:
            gr[:, k - 1] = -gr[:, k - 1]
    return gr.astype(complex)


def pluecker(V, k):
    """Left-justified order-k minors of the representative, normalized so the
    largest-modulus coordinate is positive real."""
    if k not in V.K:
        raise DomainError(f"pluecker: order {k} not in the flag dimension set {V.K}")
    items = {I: linalg.left_minor(V.rep, I) for I in linalg.index_sets(V.n, k)}
    vals = np.array(list(items.values()))
    ph = vals[int(np.argmax(np.abs(vals)))]
    ph = ph / abs(ph)
    return {I: complex(v / ph) for I, v in items.items()}


def flag_to_orbit(V, lam):
    """L = rep (i diag lam) rep*; the multiplicity set of lam must equal V.K."""
    lam = np.asarray(lam, dtype=float)
    if np.any(np.diff(lam) > 1e-12):
        raise LinalgError("flag_to_orbit: lam must be weakly decreasing")
    if linalg.multiplicity_set(lam) != tuple(V.K):
        raise DomainError(
            f"flag_to_orbit: multiplicity set {linalg.multiplicity_set(lam)} != flag dims {tuple(V.K)}")
    L = V.rep @ (1j * np.diag(lam)) @ V.rep.conj().T
    L = (L - L.conj().T) / 2
    return OrbitPoint(L, lam, tuple(V.K))


def orbit_to_flag(P):
    """Eigenflag of -iL with decreasing eigenvalues and canonical column signs.

    Totally nonnegative orbit points get the chart-canonical real
    representative; otherwise columns are phase-normalized only.
    """
    w, U = linalg.herm_eig(-1j * P.L)
    blocks = linalg.cluster_blocks(w)
    for (a, b) in blocks:
        if b - a > 1:
            U[:, a:b] = np.linalg.qr(U[:, a:b])[0]
    try:
        rep = canonical_tnn_rep(U)
    except DomainError:
        rep = U.copy()
        for j in range(rep.shape[1]):
            col = rep[:, j]
            ph = col[int(np.argmax(np.abs(col)))]
            rep[:, j] = col / (ph / abs(ph))
    K = tuple(stop for _, stop in blocks[:-1])   # empty for a point orbit
    return PartialFlag(P.L.shape[0], K, rep)


def proj_matrix(V):
    """Orthogonal projection onto the column span of an n x k matrix."""
    A = linalg.as_matrix(V)
    if linalg.rank_of(A) < A.shape[1]:
        raise LinalgError("proj_matrix: rank-deficient input")
    Q = np.linalg.qr(A)[0]
    return Q @ Q.conj().T


def projection_minor_closed_form(V, I, J):
    """Minor of Proj_V straight from the Plucker coordinates of V:

        sum over K in C([n] - (I u J), k - l) of
        (-1)^(inv(I,K) + inv(J,K)) D_{I u K}(V) conj(D_{J u K}(V)),
    normalized by sum |D_K(V)|^2 over all order-k sets K.
    """
    A = linalg.as_matrix(V)
    n, k = A.shape
    I = linalg.index_set(I, n)
    J = linalg.index_set(J, n)
    if len(I) != len(J):
        raise LinalgError("projection_minor_closed_form: |I| must equal |J|")
    l = len(I)
    denom = sum(abs(linalg.left_minor(A, Kset)) ** 2 for Kset in linalg.index_sets(n, k))
    if l > k:
        return 0.0 + 0.0j
    used = set(I) | set(J)
    rest = [r for r in range(1, n + 1) if r not in used]
    num = 0.0 + 0.0j
    for Kset in combinations(rest, k - l):
        sgn = (-1) ** (linalg.inv_count(I, Kset) + linalg.inv_count(J, Kset))
        dI = linalg.left_minor(A, tuple(sorted(set(I) | set(Kset))))
        dJ = linalg.left_minor(A, tuple(sorted(set(J) | set(Kset))))
        num += sgn * dI * np.conj(dJ)
    return complex(num / denom)


def decompose_orbit(P):
    """-iL = sum over k in K of (lam_k - lam_{k+1}) P_k  +  lam_n I."""
    V = orbit_to_flag(P)
    out = []
    lam = P.lam
    for k in P.K:
        out.append((float(lam[k - 1] - lam[k]), V.projection(k)))
    return out


def rev_flag(V):
    """Reverse the ground set: rep -> w0_signed delta rep delta."""
    n = V.n
    d = perms.delta_matrix(n)
    rep = perms.signed_perm(perms.longest_perm(n)) @ d @ V.rep @ d
    return PartialFlag(n, tuple(V.K), rep)


def dual_flag(V):
    """Orthogonal-complement dual: rep -> delta rep delta w0_signed; dims K -> K-perp."""
    n = V.n
    d = perms.delta_matrix(n)
    rep = d @ V.rep @ d @ perms.signed_perm(perms.longest_perm(n))
    rep = linalg.k_factor(rep)
    Kperp = tuple(sorted(n - k for k in V.K))
    return PartialFlag(n, Kperp, rep)


def twist_unitary(g):
    """iota(g) = delta g^{-1} delta."""
    A = linalg.square(g)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= linalg.RANK_RTOL * sv[0]:
        raise LinalgError("twist_unitary: singular input")
    d = perms.delta_matrix(A.shape[0])
    if linalg.unitary_defect(A) <= 1e-10:
        return d @ A.conj().T @ d
    return d @ np.linalg.inv(A) @ d


def twist_flag(V):
    """Iwasawa twist: flag of iota(canonical representative).

    Defined on complete flags inside the totally nonnegative chart (and in
    particular on all totally nonnegative complete flags); errors outside.
    """
    if tuple(V.K) != complete_K(V.n):
        raise DomainError("twist_flag: the twist map is defined on complete flags")
    g = canonical_tnn_rep(V.rep)
    d = perms.delta_matrix(V.n)
    h = d @ g.real.T @ d
    h = canonical_tnn_rep(h)
    return PartialFlag(V.n, tuple(V.K), h)


def twist_orbit(P):
    """Orbit twist: g (i diag lam) g^{-1} -> delta g^{-1} (i diag lam) g delta,
    with g the canonical totally nonnegative representative."""
    if not linalg.is_strictly_decreasing(P.lam):
        raise DomainError("twist_orbit: eigenvalues must be strictly decreasing")
    V = orbit_to_flag(P)
    g = canonical_tnn_rep(V.rep)
    d = perms.delta_matrix(P.L.shape[0])
    h = (d @ g.real.T @ d).astype(complex)
    L = h @ (1j * np.diag(P.lam)) @ h.conj().T
    L = (L - L.conj().T) / 2
    return OrbitPoint(L, P.lam.copy(), tuple(P.K))


def eigenflag(g):
    """Flag of nested spans of leading eigenvectors, ordered by decreasing
    eigenvalue (modulus first); dimension set from the clustering rule."""
    w, Vv = linalg.general_eig(g)
    blocks = linalg.cluster_blocks(w)
    rep = linalg.k_factor(Vv)
    try:
        rep = canonical_tnn_rep(rep)
    except DomainError:
        for j in range(rep.shape[1]):
            col = rep[:, j]
            ph = col[int(np.argmax(np.abs(col)))]
            rep[:, j] = col / (ph / abs(ph))
    K = tuple(stop for _, stop in blocks[:-1])
    return PartialFlag(len(w), K if K else complete_K(len(w)), rep)


def _rank_with_guard(A, tol):
    """Rank of a submatrix of an orthogonal matrix (singular values <= 1), so
    the threshold is absolute; values near it abort rather than guess."""
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    if np.any((sv > tol * 1e-2) & (sv < tol * 1e2)):
        raise DomainError("locate_cell: ambiguous numerical rank near tolerance")
    return int(np.sum(sv > tol))


def locate_cell(V, tol=linalg.RANK_RTOL):
    """Bruhat cell label (v, w) of a totally nonnegative complete flag.

    w(j) is the row where the rank of the trailing-row submatrices jumps at
    column j; v(j) likewise with leading rows. Ambiguous ranks abort.
    """
    if tuple(V.K) != complete_K(V.n):
        raise DomainError("locate_cell: complete flags only")
    g = np.real(canonical_tnn_rep(V.rep))
    n = V.n

    def rank_lo(i, j):   # rows i..n, cols 1..j
        return _rank_with_guard(g[i - 1:, :j], tol)

    def rank_hi(i, j):   # rows 1..i, cols 1..j
        return _rank_with_guard(g[:i, :j], tol)

    w = []
    for j in range(1, n + 1):
        cands = [i for i in range(1, n + 1) if rank_lo(i, j) == rank_lo(i, j - 1) + 1]
        if not cands:
            raise DomainError("locate_cell: no rank jump found")
        w.append(max(cands))
    v = []
    for j in range(1, n + 1):
        cands = [i for i in range(1, n + 1) if rank_hi(i, j) == rank_hi(i, j - 1) + 1]
        if not cands:
            raise DomainError("locate_cell: no rank jump found")
        v.append(min(cands))
    v, w = tuple(v), tuple(w)
    perms.check_perm(v)
    perms.check_perm(w)
    if not perms.bruhat_leq(v, w):
        raise DomainError("locate_cell: labels violate Bruhat comparability")
    return CellLabel(v, w)


def signed_perm(w):
    return perms.signed_perm(w)


def certify_flag_tnn(V, tol=1e-9):
    """Positivity verdict for a flag via its canonical representative."""
    g = canonical_tnn_rep(V.rep)
    return positivity.is_tnn_unitary(g, tol)
