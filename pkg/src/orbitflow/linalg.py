"""Dense complex linear algebra: minors, index-set combinatorics, the Iwasawa
(QR) decomposition, the matrix exponential, and eigendecompositions.

Index sets are strictly increasing tuples of 1-based indices.
"""

from dataclasses import dataclass
from itertools import combinations
from math import ceil

import numpy as np
import scipy.linalg

from .errors import LinalgError

RANK_RTOL = 1e-9      # singularity threshold, relative to the largest singular value
CLUSTER_RTOL = 1e-8   # eigenvalue cluster rule, relative to the spectral diameter


def as_matrix(M):
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or min(A.shape) < 1:
        raise LinalgError(f"expected a 2-d matrix with at least one row and column, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise LinalgError("matrix entries must be finite")
    return A


def square(M):
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {A.shape}")
    return A


def index_set(I, n):
    I = tuple(int(i) for i in I)
    for a, b in zip(I, I[1:]):
        if a >= b:
            raise LinalgError(f"index set must be strictly increasing, got {I}")
    if I and (I[0] < 1 or I[-1] > n):
        raise LinalgError(f"index set {I} out of bounds for [1, {n}]")
    return I


def index_sets(n, k):
    """All k-element subsets of [n] as increasing 1-based tuples."""
    return combinations(range(1, n + 1), k)


def sum_of(I):
    return sum(I)


def inv_count(I, J):
    """Number of pairs (i, j) in I x J with i > j."""
    return sum(1 for i in I for j in J if i > j)


def _det(A):
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(A[0, 0])
    if n == 2:
        return complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    if n == 3:
        return complex(
            A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
            - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
            + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
        )
    return complex(np.linalg.det(A))   # LU with partial pivoting


def minor(M, rows, cols):
    """Determinant of the submatrix on 1-based row/column index sets."""
    A = as_matrix(M)
    I = index_set(rows, A.shape[0])
    J = index_set(cols, A.shape[1])
    if len(I) != len(J):
        raise LinalgError(f"minor needs |I| = |J|, got {len(I)} and {len(J)}")
    sub = A[np.ix_([i - 1 for i in I], [j - 1 for j in J])]
    return _det(sub)


def left_minor(M, rows):
    """Left-justified minor: rows I against the first |I| columns."""
    I = tuple(rows)
    return minor(M, I, tuple(range(1, len(I) + 1)))


@dataclass(frozen=True)
class IwasawaFactors:
    k_factor: np.ndarray   # unitary
    h_factor: np.ndarray   # positive diagonal
    n_factor: np.ndarray   # unit upper-triangular

    def reconstruct(self):
        return self.k_factor @ self.h_factor @ self.n_factor


def iwasawa(g):
    """g = k h n with k unitary, h positive diagonal, n unit upper-triangular."""
    A = square(g)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= RANK_RTOL * sv[0]:
        raise LinalgError("iwasawa: singular input")
    Q, R = np.linalg.qr(A)
    d = np.diag(R).copy()
    phase = d / np.abs(d)
    K = Q * phase[None, :]
    Rpos = R / phase[:, None]
    h = np.abs(d)
    N = Rpos / h[:, None]
    np.fill_diagonal(N, 1.0)
    return IwasawaFactors(K, np.diag(h), N)


def k_factor(g):
    return iwasawa(g).k_factor


def k_project(L):
    """Skew-Hermitian K with L - K upper-triangular with real diagonal."""
    A = square(L)
    K = np.tril(A, -1).astype(complex)
    K = K - K.conj().T
    np.fill_diagonal(K, 1j * np.imag(np.diag(A)))
    return K


def mat_exp(L):
    return scipy.linalg.expm(square(L))


def herm_eig(H, tol=1e-10):
    """Eigenvalues (decreasing) and orthonormal eigenvectors of a Hermitian matrix."""
    A = square(H)
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.conj().T).max() > tol * scale:
        raise LinalgError("herm_eig: input is not Hermitian within tolerance")
    w, U = np.linalg.eigh((A + A.conj().T) / 2)
    return w[::-1].copy(), U[:, ::-1].copy()


def general_eig(g, rtol=RANK_RTOL):
    """Eigendecomposition sorted by decreasing modulus, then real, then imaginary part.

    Columns of V are unit eigenvectors with the largest-modulus entry made
    positive real, so the output is deterministic for simple spectra.
    """
    A = square(g)
    w, V = np.linalg.eig(A)
    order = sorted(range(len(w)), key=lambda i: (-abs(w[i]), -w[i].real, -w[i].imag))
    w = w[order]
    V = V[:, order]
    for j in range(V.shape[1]):
        col = V[:, j]
        col = col / np.linalg.norm(col)
        ph = col[np.argmax(np.abs(col))]
        V[:, j] = col / (ph / abs(ph))
    sv = np.linalg.svd(V, compute_uv=False)
    if sv[-1] <= rtol * sv[0]:
        raise LinalgError("general_eig: matrix is defective beyond tolerance")
    return w, V


def rank_of(A, rtol=RANK_RTOL):
    A = as_matrix(A)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def unitary_defect(g):
    A = square(g)
    return float(np.abs(A.conj().T @ A - np.eye(A.shape[0])).max())


def skew_defect(L):
    A = square(L)
    return float(np.abs(A + A.conj().T).max())


def cluster_blocks(values, rtol=CLUSTER_RTOL):
    """Partition an ordered spectrum into blocks of near-equal values.

    Consecutive values closer than rtol times the spectral diameter share a
    block. Returns a list of (start, stop) half-open 0-based ranges.
    """
    v = np.asarray(values)
    n = len(v)
    if n == 0:
        return []
    diam = float(np.abs(v[None, :] - v[:, None]).max())
    thresh = rtol * diam
    blocks = []
    start = 0
    for i in range(n - 1):
        if abs(v[i] - v[i + 1]) > thresh:
            blocks.append((start, i + 1))
            start = i + 1
    blocks.append((start, n))
    return blocks


def multiplicity_set(lam, rtol=CLUSTER_RTOL):
    """K = { k : lam_k > lam_{k+1} } under the clustering rule, 1-based."""
    blocks = cluster_blocks(lam, rtol)
    return tuple(stop for _, stop in blocks[:-1])


def is_strictly_decreasing(lam, rtol=CLUSTER_RTOL):
    lam = np.asarray(lam, dtype=float)
    return multiplicity_set(lam, rtol) == tuple(range(1, len(lam)))


def split_chunks(t, diameter, max_exp=14.0):
    """Number of equal chunks so one chunk keeps |dt| * diameter <= max_exp.

    Closed-form flows through exp() lose relative accuracy like
    eps * exp(dt * diameter); chunking with re-orthonormalization keeps each
    factor's dynamic range within the working precision.
    """
    if t == 0.0 or diameter <= 0.0:
        return 1
    return max(1, int(ceil(abs(t) * diameter / max_exp)))
