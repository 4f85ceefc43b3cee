"""Gradient flows on adjoint orbits in the Kahler, normal, and induced
metrics; positivity-preservation classifiers; boundary first-order audits;
Lyapunov, limit-point, and stable-manifold diagnostics.

Flows ascend the height function kappa(L, N). The Kahler flow has the closed
form g(t) = k_factor(exp(t iN) g0); the normal flow is the double-bracket
equation dL/dt = [L, [L, N]]; the induced flow lifts to the unitary group as
dg/dt = ad_inv_L(N) g.
"""

from dataclasses import dataclass, field
from math import ceil

import numpy as np

from . import flagorbit, linalg
from .errors import DomainError, DriftError, LinalgError
from .flagorbit import OrbitPoint

METRICS = ("kahler", "normal", "induced")

STRICT = "strict"
WEAK = "weak"
NONE = "none"


@dataclass(frozen=True)
class FlowSpec:
    metric: str
    N: np.ndarray
    lam: np.ndarray
    step: float = 1e-3
    tol: float = 1e-8


@dataclass
class Trajectory:
    times: np.ndarray
    points: list
    diagnostics: list = field(default_factory=list)

    def max_drift(self):
        return max(d["spectrum_drift"] for d in self.diagnostics)


def _check_skew(N, what="matrix"):
    A = linalg.square(N)
    if linalg.skew_defect(A) > 1e-8 * max(1.0, float(np.abs(A).max())):
        raise LinalgError(f"{what} must be skew-Hermitian")
    return A


def killing(L, M):
    """kappa(L, M) = 2n tr(LM) - 2 tr(L) tr(M); real on u_n pairs."""
    A = L.L if isinstance(L, OrbitPoint) else _check_skew(L, "killing: first argument")
    B = M.L if isinstance(M, OrbitPoint) else _check_skew(M, "killing: second argument")
    if A.shape != B.shape:
        raise LinalgError("killing: size mismatch")
    n = A.shape[0]
    val = 2 * n * np.trace(A @ B) - 2 * np.trace(A) * np.trace(B)
    return float(val.real)


def lyapunov(L, N):
    """Strict Lyapunov function -kappa(L, N) for the Kahler flow toward the limit point."""
    return -killing(L, N)


def _eig_rep(P):
    """Unitary eigenbasis of -iL ordered by the cached decreasing spectrum."""
    _, U = linalg.herm_eig(-1j * P.L)
    return U


def _cluster_labels(lam):
    labels = np.zeros(len(lam), dtype=int)
    for b, (s, e) in enumerate(linalg.cluster_blocks(lam)):
        labels[s:e] = b
    return labels


def _adinv_diag(M, lam):
    """ad^{-1} at i diag(lam): divide off-cluster entries by i/(lam_j - lam_i)."""
    lam = np.asarray(lam, dtype=float)
    labels = _cluster_labels(lam)
    n = len(lam)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if labels[i] != labels[j]:
                out[i, j] = 1j / (lam[j] - lam[i]) * M[i, j]
    return out


def _offcluster_part(M, lam):
    labels = _cluster_labels(np.asarray(lam, dtype=float))
    mask = labels[:, None] != labels[None, :]
    return np.where(mask, M, 0.0)


def ad_inverse(P, M):
    """Preimage of the image component: [L, ad_inverse(L, M)] = M^L."""
    M = _check_skew(M, "ad_inverse: second argument")
    U = _eig_rep(P)
    return U @ _adinv_diag(U.conj().T @ M @ U, P.lam) @ U.conj().T


def image_component(P, M):
    """M^L: the component of M in the image of ad_L."""
    M = _check_skew(M)
    U = _eig_rep(P)
    return U @ _offcluster_part(U.conj().T @ M @ U, P.lam) @ U.conj().T


def kahler_rep_flow(g0, N, t, max_exp=14.0):
    """Unitary representative k_factor(exp(t iN) g0), evaluated in chunks.

    Chunking (semigroup property of the flag flow) plus per-chunk rescaling
    keeps the QR numerically meaningful for large |t| * spectral diameter.
    """
    N = _check_skew(N, "flow driver N")
    mu, W = linalg.herm_eig(1j * N)
    diam = float(mu[0] - mu[-1])
    g = linalg.as_matrix(g0).copy()
    nch = linalg.split_chunks(t, diam, max_exp)
    dt = t / nch
    for _ in range(nch):
        ex = dt * mu
        ex = ex - ex.max()
        A = (W * np.exp(ex)[None, :]) @ W.conj().T @ g
        g = linalg.k_factor(A)
    return g


def kahler_flow(L0, N, t):
    """Exact Kahler-metric gradient flow point at time t."""
    g = kahler_rep_flow(_eig_rep(L0), N, t)
    L = g @ (1j * np.diag(L0.lam)) @ g.conj().T
    L = (L - L.conj().T) / 2
    return OrbitPoint(L, L0.lam.copy(), tuple(L0.K))


def kahler_flow_projection(L0, N, t):
    """Same point via the projection formula: each P_k(t) is the orthogonal
    projection onto exp(t iN) V_k(0); no Iwasawa decomposition involved."""
    N = _check_skew(N, "flow driver N")
    mu, W = linalg.herm_eig(1j * N)
    U = _eig_rep(L0)
    lam = L0.lam
    n = len(lam)
    ex = t * mu
    ex = ex - ex.max()
    E = (W * np.exp(ex)[None, :]) @ W.conj().T
    M = lam[-1] * np.eye(n, dtype=complex)
    for k in L0.K:
        B = E @ U[:, :k]
        Q = np.linalg.qr(B)[0]
        M += (lam[k - 1] - lam[k]) * (Q @ Q.conj().T)
    L = 1j * M
    return OrbitPoint((L - L.conj().T) / 2, lam.copy(), tuple(L0.K))


def _diagnose(P, lam0, N):
    w, _ = linalg.herm_eig(-1j * P.L)
    return {
        "spectrum_drift": float(np.abs(w - lam0).max()),
        "unitarity_drift": float(linalg.skew_defect(P.L)),
        "lyapunov": lyapunov(P, N),
    }


def _sample_grid(t0, t1, samples):
    if samples < 1:
        raise LinalgError("samples must be >= 1")
    return np.linspace(t0, t1, samples)


def kahler_trajectory(L0, N, t1, t0=0.0, samples=51):
    times = _sample_grid(t0, t1, samples)
    pts = [kahler_flow(L0, N, float(t)) for t in times]
    diags = [_diagnose(P, L0.lam, N) for P in pts]
    return Trajectory(times, pts, diags)


def run(spec, L0, t1, t0=0.0, samples=51):
    """Trajectory of the gradient flow described by a FlowSpec from an orbit
    point; the Kahler metric evaluates exactly, the others integrate RK4."""
    if spec.metric == "kahler":
        return kahler_trajectory(L0, spec.N, t1, t0=t0, samples=samples)
    if spec.metric == "normal":
        return normal_flow(L0, spec.N, t1, t0=t0, step=spec.step, tol=spec.tol,
                           samples=samples)
    if spec.metric == "induced":
        g0 = flagorbit.orbit_to_flag(L0).rep
        return induced_flow(g0, spec.N, spec.lam, t1, t0=t0, step=spec.step,
                            tol=spec.tol, samples=samples)
    raise LinalgError(f"unknown metric {spec.metric!r}")


def _rk4(f, X, dt):
    k1 = f(X)
    k2 = f(X + (dt / 2) * k1)
    k3 = f(X + (dt / 2) * k2)
    k4 = f(X + dt * k3)
    return X + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _integrate(f, X0, times, step, project):
    out = [X0]
    X = X0
    for ta, tb in zip(times[:-1], times[1:]):
        span = float(tb - ta)
        nsub = max(1, int(ceil(abs(span) / step)))
        dt = span / nsub
        for _ in range(nsub):
            X = project(_rk4(f, X, dt))
        out.append(X)
    return out


def _drift_controlled(build, L0, N, t1, t0, step, tol, samples, min_step_factor=2 ** -12):
    """Integrate with RK4, halving the step until the spectrum drift over the
    whole trajectory is below tol."""
    times = _sample_grid(t0, t1, samples)
    h = step
    hmin = step * min_step_factor
    while True:
        pts = build(times, h)
        diags = [_diagnose(P, L0.lam, N) for P in pts]
        drift = max(d["spectrum_drift"] for d in diags)
        if drift < tol:
            return Trajectory(times, pts, diags)
        if h <= hmin:
            raise DriftError(f"spectrum drift {drift:.3e} above tolerance {tol:.3e} at minimum step")
        h = h / 2


def normal_flow(L0, N, t1, t0=0.0, step=1e-3, tol=1e-8, samples=51):
    """Double-bracket gradient flow dL/dt = [L, [L, N]] in the normal metric."""
    N = _check_skew(N, "flow driver N")

    def f(L):
        B = L @ N - N @ L
        return L @ B - B @ L

    def project(L):
        return (L - L.conj().T) / 2

    def build(times, h):
        mats = _integrate(f, L0.L.astype(complex), times, h, project)
        return [OrbitPoint(M, L0.lam.copy(), tuple(L0.K)) for M in mats]

    return _drift_controlled(build, L0, N, t1, t0, step, tol, samples)


def _polar_unitary(g):
    U, _, Vh = np.linalg.svd(g)
    return U @ Vh


def induced_flow(g0, N, lam, t1, t0=0.0, step=1e-3, tol=1e-8, samples=51):
    """Induced-metric gradient flow, integrated on the unitary lift
    dg/dt = ad_inv_L(N) g with per-step polar re-unitarization."""
    N = _check_skew(N, "flow driver N")
    lam = np.asarray(lam, dtype=float)
    g0 = linalg.as_matrix(g0)
    D = 1j * np.diag(lam)
    K = linalg.multiplicity_set(lam)
    L0 = OrbitPoint((g0 @ D @ g0.conj().T - (g0 @ D @ g0.conj().T).conj().T) / 2, lam, K)

    def f(g):
        return g @ _adinv_diag(g.conj().T @ N @ g, lam)

    def build(times, h):
        reps = _integrate(f, g0.astype(complex), times, h, _polar_unitary)
        pts = []
        for g in reps:
            L = g @ D @ g.conj().T
            pts.append(OrbitPoint((L - L.conj().T) / 2, lam.copy(), K))
        return pts

    return _drift_controlled(build, L0, N, t1, t0, step, tol, samples)


def induced_flow_twisted(h0, N, lam, t1, t0=0.0, step=1e-3, tol=1e-8, samples=51):
    """Twisted form of the induced flow: dh/dt = -ad_inv(h delta N delta h*) h.
    The trajectory h(t) stays equal to iota(g(t)) for the untwisted lift."""
    N = _check_skew(N, "flow driver N")
    lam = np.asarray(lam, dtype=float)
    n = len(lam)
    from . import perms
    d = perms.delta_matrix(n)
    Nd = d @ N @ d
    D = 1j * np.diag(lam)
    K = linalg.multiplicity_set(lam)
    h0 = linalg.as_matrix(h0)

    def point(h):
        # h = iota(g), so the untwisted point is L = delta h* D h delta
        L = d @ (h.conj().T @ D @ h) @ d
        return OrbitPoint((L - L.conj().T) / 2, lam.copy(), K)

    L0 = point(h0)

    def f(h):
        return -_adinv_diag(h @ Nd @ h.conj().T, lam) @ h

    def build(times, hstep):
        reps = _integrate(f, h0.astype(complex), times, hstep, _polar_unitary)
        return [point(h) for h in reps]

    return _drift_controlled(build, L0, N, t1, t0, step, tol, samples)


def _graph_connected(adj):
    n = adj.shape[0]
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if adj[i, j] and j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def classify_kahler(N, lam, tol=1e-9):
    """Positivity-preservation class of the Kahler gradient flow: strict,
    weak, or none.

    Grassmannian orbits follow the cyclic-band pattern rules with the corner
    sign (-1)^(k-1) i N_{n,1} >= 0, plus connectivity of the support graph for
    strictness. Other orbits require iN tridiagonal with nonnegative
    (positive for strict) off-diagonal entries.
    """
    A = linalg.square(N)
    lam = np.asarray(lam, dtype=float)
    n = A.shape[0]
    scale = max(1.0, float(np.abs(A).max()))
    M = 1j * A
    if np.abs(M.imag).max() > tol * scale or np.abs(M - M.T.conj()).max() > tol * scale:
        return NONE
    M = M.real
    K = linalg.multiplicity_set(lam)
    if len(K) == 0:
        return WEAK          # point orbit: constant flow
    offdiag = M - np.diag(np.diag(M))

    def connected():
        adj = np.abs(offdiag) > tol * scale
        return _graph_connected(adj)

    if len(K) >= 2:
        for i in range(n):
            for j in range(n):
                if abs(i - j) >= 2 and abs(M[i, j]) > tol * scale:
                    return NONE
        sup = np.array([M[i, i + 1] for i in range(n - 1)])
        if np.any(sup < -tol * scale):
            return NONE
        if np.all(sup > tol * scale):
            return STRICT
        return WEAK

    k = K[0]
    if k == 1 or k == n - 1:
        sgn = np.ones((n, n)) if k == 1 else np.fromfunction(
            lambda i, j: (-1.0) ** (i + j + 1), (n, n))
        vals = sgn * offdiag
        if np.any(vals < -tol * scale):
            return NONE
        return STRICT if connected() else WEAK
    # 2 <= k <= n-2: cyclic band
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            diff = (i - j) % n
            if diff not in (1, n - 1) and abs(M[i, j]) > tol * scale:
                return NONE
    band = [M[i, i + 1] for i in range(n - 1)]
    corner = (-1.0) ** (k - 1) * M[n - 1, 0]
    if any(b < -tol * scale for b in band) or corner < -tol * scale:
        return NONE
    return STRICT if connected() else WEAK


def _kahler_rep_derivative(g0, N):
    X = g0.conj().T @ (1j * N) @ g0
    return g0 @ linalg.k_project(X)


def boundary_derivative(metric, lam, N, g0, I, tol=1e-9):
    """First-order derivative at t = 0 of the flag minor Delta_I(g(t)) for a
    boundary configuration (Delta_I(g0) = 0), in the given metric."""
    if metric not in METRICS:
        raise LinalgError(f"unknown metric {metric!r}")
    N = _check_skew(N, "flow driver N")
    lam = np.asarray(lam, dtype=float)
    g0 = linalg.as_matrix(g0)
    n = g0.shape[0]
    I = linalg.index_set(I, n)
    k = len(I)
    base = linalg.left_minor(g0, I)
    if abs(base) > 1e-8:
        raise DomainError(f"boundary_derivative: Delta_{I}(g0) = {base:.3e} is not on the boundary")
    if metric == "kahler":
        gdot = _kahler_rep_derivative(g0, N)
    elif metric == "normal":
        L0 = g0 @ (1j * np.diag(lam)) @ g0.conj().T
        gdot = -(L0 @ N - N @ L0) @ g0
    else:
        gdot = g0 @ _adinv_diag(g0.conj().T @ N @ g0, lam)
    rows = [i - 1 for i in I]
    total = 0.0 + 0.0j
    for j in range(k):
        block = g0[:, :k].copy()
        block[:, j] = gdot[:, j]
        total += linalg._det(block[rows, :])
    if abs(total.imag) > 1e-8 * max(1.0, abs(total)):
        raise LinalgError("boundary_derivative: non-real derivative")
    return float(total.real)


def normal_audit_configs_n3():
    """The boundary configurations from the normal-metric no-go argument at
    n = 3, with the closed forms their derivatives must equal.

    Returns (g0, I, coeff) triples: the derivative equals coeff(lam, iN).
    """
    s = 1 / np.sqrt(2)
    confs = []
    g = np.array([[1, 0, 0], [0, s, -s], [0, s, s]], dtype=float)
    confs.append((g, (3,), lambda lam, M: -(lam[1] - lam[2]) / 2 * M[1, 0]))
    g = np.array([[0, -s, s], [0, -s, -s], [1, 0, 0]], dtype=float)
    confs.append((g, (1,), lambda lam, M: -(lam[1] - lam[2]) / 2 * M[1, 2]))
    g = np.array([[s, -0.5, 0.5], [s, 0.5, -0.5], [0, s, s]], dtype=float)
    confs.append((g, (3,), lambda lam, M: (lam[1] - lam[2]) / 4 * (M[0, 0] - M[1, 1])))
    g = np.array([[0, -s, s], [s, -0.5, -0.5], [s, 0.5, 0.5]], dtype=float)
    confs.append((g, (1,), lambda lam, M: (lam[1] - lam[2]) / 4 * (M[2, 2] - M[1, 1])))
    g = np.array([[0.5, -0.5, s], [0.5, -0.5, -s], [s, s, 0]], dtype=float)
    confs.append((g, (1, 2), lambda lam, M: (lam[0] - lam[1]) / 4 * (M[1, 1] - M[0, 0])))
    g = np.array([[s, -s, 0], [0.5, 0.5, -s], [0.5, 0.5, s]], dtype=float)
    confs.append((g, (2, 3), lambda lam, M: (lam[0] - lam[1]) / 4 * (M[1, 1] - M[2, 2])))
    return confs


def induced_audit_n3(lam, N, tol=1e-9, grid=400):
    """First-order boundary audit of the induced-metric flow at n = 3.

    Evaluates the closed-form edge inequalities, the face inequality family
    over a grid in the two cell angles, and the eigenvalue-spacing interval
    criterion max(c/d, d/c) <= 2 + 2 sqrt(2). Admissibility of the inequality
    family is necessary for positivity preservation, not sufficient.
    """
    lam = np.asarray(lam, dtype=float)
    if len(lam) != 3:
        raise LinalgError("induced_audit_n3: n = 3 only")
    if not linalg.is_strictly_decreasing(lam):
        raise DomainError("induced_audit_n3: lam must be strictly decreasing")
    A = linalg.square(N)
    scale = max(1.0, float(np.abs(A).max()))
    M = (1j * A)
    report = {"admissible": False, "edges": [], "faces": [], "interval_ok": None, "note": None}
    c = float(lam[0] - lam[1])
    d = float(lam[1] - lam[2])
    report["interval_ok"] = bool(max(c / d, d / c) <= 2 + 2 * np.sqrt(2) + 1e-12)
    if np.abs(M.imag).max() > tol * scale or np.abs(M - M.T.conj()).max() > tol * scale:
        report["note"] = "iN is not real symmetric"
        return report
    M = M.real
    if abs(M[0, 2]) > tol * scale or M[0, 1] < -tol * scale or M[1, 2] < -tol * scale:
        report["note"] = "iN is not in the nonnegative tridiagonal cone"
        return report
    shift = M[1, 1]
    p, q = M[0, 0] - shift, M[2, 2] - shift
    u, v = max(M[0, 1], 0.0), max(M[1, 2], 0.0)

    s = np.hypot(u, v)
    edges = [c * (u - s) + 2 * d * u, c * (v - s) + 2 * d * v,
             d * (u - s) + 2 * c * u, d * (v - s) + 2 * c * v]
    report["edges"] = [float(e) for e in edges]

    eps = 1e-4
    al = np.linspace(eps, np.pi / 2 - eps, grid)
    be = np.linspace(eps, np.pi / 2 - eps, grid)
    Al, Be = np.meshgrid(al, be, indexing="ij")

    def face_min(cc, dd, pp, qq, uu, vv):
        F = (cc * qq * np.sin(2 * Al) * np.cos(Be)
             + cc * uu * (1 - np.cos(2 * Al))
             + cc * vv * np.sin(2 * Al) * np.cos(2 * Be) / np.sin(Be)
             + 2 * dd * uu)
        return float(F.min())

    images = [(c, d, p, q, u, v), (d, c, -p, -q, u, v),
              (c, d, q, p, v, u), (d, c, -q, -p, v, u)]
    report["faces"] = [face_min(*img) for img in images]

    atol = 1e-7 * max(1.0, c + d) * max(1.0, abs(p), abs(q), u, v)
    edges_ok = all(e >= -atol for e in edges)
    faces_ok = all(f >= -atol for f in report["faces"])
    report["admissible"] = bool(edges_ok and faces_ok)
    return report


def limit_point(N, lam):
    """Global attractor of the Kahler flow: sum of (lam_k - lam_{k+1}) times
    the leading spectral projections of iN, plus lam_n iI."""
    N = _check_skew(N, "flow driver N")
    lam = np.asarray(lam, dtype=float)
    mu, W = linalg.herm_eig(1j * N)
    K = linalg.multiplicity_set(lam)
    diam = float(mu[0] - mu[-1])
    for k in K:
        if mu[k - 1] - mu[k] <= linalg.CLUSTER_RTOL * max(diam, 1e-300):
            raise DomainError(f"limit_point: eigenvalue gap condition fails at k = {k}")
    n = len(lam)
    M = lam[-1] * np.eye(n, dtype=complex)
    for k in K:
        P = W[:, :k] @ W[:, :k].conj().T
        M += (lam[k - 1] - lam[k]) * P
    L = 1j * M
    return OrbitPoint((L - L.conj().T) / 2, lam.copy(), K)


def in_stable_manifold(P, N):
    """rank(Pinf_k P_k) = k for all k in K: the flow from P converges to the
    limit point."""
    N = _check_skew(N, "flow driver N")
    mu, W = linalg.herm_eig(1j * N)
    diam = float(mu[0] - mu[-1])
    for k in P.K:
        if mu[k - 1] - mu[k] <= linalg.CLUSTER_RTOL * max(diam, 1e-300):
            raise DomainError(f"in_stable_manifold: eigenvalue gap condition fails at k = {k}")
    for k, (_, Pk) in zip(P.K, flagorbit.decompose_orbit(P)):
        Pinf = W[:, :k] @ W[:, :k].conj().T
        # both factors have unit spectral norm, so rank against an absolute scale
        sv = np.linalg.svd(Pinf @ Pk, compute_uv=False)
        if int(np.sum(sv > linalg.RANK_RTOL)) < k:
            return False
    return True
