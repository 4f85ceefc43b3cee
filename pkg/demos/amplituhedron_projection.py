"""Twisted Vandermonde amplituhedra: building Z from a twisted Vandermonde
flag, projecting gradient flows through it, and sampling interior points of a
quadrilateral amplituhedron."""

import numpy as np

from orbitflow import ampli, flagorbit, flows, jacobi, linalg

d = jacobi.moser_data([1.0, 0.0, -1.0], [1.0, 1.0, 1.0])
zd = ampli.twisted_vdm_Z(d, 2, k=1)
print("twisted Vandermonde Z at x = (1:1:1):")
print(np.round(zd.Z, 6))
print("2x2 column minors:",
      [round(linalg.minor(zd.Z, (1, 2), J).real, 6) for J in linalg.index_sets(3, 2)])

d5 = jacobi.moser_data([2.0, 1.0, 0.0, -1.0, -2.0], [1.0, 0.5, 1.5, 0.8, 1.2])
zd5 = ampli.twisted_vdm_Z(d5, 3, k=2)
N = -jacobi.jacobi_from_moser(d5).L
print("\nker(Z) invariant under the Jacobi driver:", ampli.kernel_invariant(zd5, N))
M = ampli.project_N(zd5, N)
print("commutation residual |Z e^(t iN) - e^(t iM) Z| at t = 1:",
      f"{ampli.commutation_residual(zd5, N, 1.0):.2e}")

mu, W = linalg.herm_eig(1j * N)
Plim = flagorbit.proj_matrix(ampli.zmap(zd5, W[:, :2]))
rng = np.random.default_rng(0)
sample = ampli.sample_amplituhedron(zd5, 1, rng)[0]
P0 = flagorbit.orbit_point(1j * flagorbit.proj_matrix(sample))
muM, _ = linalg.herm_eig(1j * M)
gap = float(muM[1] - muM[2])
PT = flows.kahler_flow(P0, M, 30.0 / gap)
print("projected flow converges to the image of the leading eigenspace:",
      f"{np.abs(PT.L - 1j * Plim).max():.2e}")

Z = np.array([[1.0, 0, 0, 0.7], [0, 1, 0, -1.3], [0, 0, 1, 0.4]])
zq = ampli.make_zdata(Z, 1)
pts = ampli.sample_amplituhedron(zq, 5, rng)
print("\nfive interior points of the quadrilateral amplituhedron A(4,1,2):")
for s in pts:
    y = np.real(s[:, 0])
    y = y / np.abs(y).max()
    inside = ampli.in_conic_hull(y, Z)
    print(" ", np.round(y, 4).tolist(), "in hull:", inside)
