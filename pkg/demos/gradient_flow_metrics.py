"""Gradient flows of the height function kappa(L, N) in the three metrics:
exact Kahler solutions, the double-bracket normal flow, the induced-metric
lift, the positivity classifiers, and the eigenvalue-spacing threshold."""

import numpy as np

from orbitflow import flagorbit, flows

# the 2x2 running example: L0 = i[[a,b],[b,-a]], iN = [[p,q],[q,-p]]
a, b, p, q = 1.0, 1.0, 0.0, 1.0
L0 = flagorbit.orbit_point(1j * np.array([[a, b], [b, -a]]))
N = -1j * np.array([[p, q], [q, -p]])
lam1 = np.hypot(a, b)
h = 1e-6
fd = (flows.kahler_flow(L0, N, h).L - flows.kahler_flow(L0, N, -h).L) / (2 * h)
print("dL/dt(0) in the Kahler metric:")
print(np.round(fd.imag, 6))
print("closed form 2(aq-bp)/lam1 * i[[-b,a],[a,b]]:")
print(np.round((2 * (a * q - b * p) / lam1 * np.array([[-b, a], [a, b]])), 6))

B = L0.L @ N - N @ L0.L
print("\nnormal metric dL/dt(0) = [L,[L,N]] =",
      np.round((L0.L @ B - B @ L0.L).imag, 6).tolist(), "(factor 4(aq-bp))")
print("induced metric dL/dt(0) = -N^L     =",
      np.round((-flows.image_component(L0, N)).imag, 6).tolist(),
      "(factor (aq-bp)/(a^2+b^2))")

# diagonal driver: the closed-form tanh/sech trajectory
L0 = flagorbit.orbit_point(1j * np.array([[0.0, 1], [1, 0]]))
Nd = -1j * np.diag([1.0, -1.0])
print("\nKahler flow with iN = diag(1,-1), L(t) = i[[tanh 2t, sech 2t], ...]:")
for t in (0.5, 2.0, 10.0):
    got = flows.kahler_flow(L0, Nd, t).L
    print(f"  t = {t:5.1f}: L_11/i = {got[0, 0].imag:+.6f} "
          f"(tanh 2t = {np.tanh(2 * t):+.6f})")

# classifiers
print("\npositivity-preservation classification (Kahler metric):")
iN = np.array([[0.0, 1, 0], [1, 0, 1], [0, 1, 0]])
print("  tridiagonal, positive off-diagonals, full flag:",
      flows.classify_kahler(-1j * iN, [1.0, 0.0, -1.0]))
iN4 = np.zeros((4, 4))
for i in range(3):
    iN4[i, i + 1] = iN4[i + 1, i] = 1.0
iN4[3, 0] = iN4[0, 3] = -1.0
print("  cyclic band with corner sign, Gr(2,4):      ",
      flows.classify_kahler(-1j * iN4, [1.0, 1.0, 0.0, 0.0]))
iN[0, 2] = iN[2, 0] = 0.3
print("  entry outside the band, full flag:          ",
      flows.classify_kahler(-1j * iN, [1.0, 0.0, -1.0]))

# the induced-metric spacing threshold at n = 3
print("\ninduced-metric first-order audit, iN = [[0,1,0],[1,0,1],[0,1,0]]:")
thr = 2 + 2 * np.sqrt(2)
for c in (1.0, thr - 0.2, thr + 0.2, 6.0):
    rep = flows.induced_audit_n3([c, 0.0, -1.0], -1j * np.array(
        [[0.0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    print(f"  gap ratio c/d = {c:5.2f}: admissible = {rep['admissible']} "
          f"(threshold 2 + 2 sqrt(2) = {thr:.4f})")
