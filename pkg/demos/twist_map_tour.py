"""A tour of the twist map: the canonical totally nonnegative representative,
the 3x3 golden example, the Plucker images, and the action on Bruhat cells."""

import numpy as np

from orbitflow import flagorbit, linalg, positivity

s3, s2 = np.sqrt(3), np.sqrt(2)
g = np.array([[s3 / 2, -1 / (2 * s2), 1 / (2 * s2)],
              [s3 / 4, 1 / (4 * s2), -5 / (4 * s2)],
              [1 / 4, 3 * s3 / (4 * s2), s3 / (4 * s2)]])

V = flagorbit.flag_from_matrix(g)
print("certification of the input flag:", flagorbit.certify_flag_tnn(V).status)

W = flagorbit.twist_flag(V)
print("\ntheta(V) representative:")
print(np.round(np.real(W.rep), 6))
print("twist is an involution: |theta(theta(V)) - V| =",
      f"{flagorbit.flag_distance(flagorbit.twist_flag(W), V):.2e}")

# Plucker coordinates transform by closed formulas at n = 3
D = {I: linalg.left_minor(np.real(flagorbit.canonical_tnn_rep(g)), I).real
     for k in (1, 2) for I in linalg.index_sets(3, k)}
Dt = {I: linalg.left_minor(np.real(W.rep), I).real
      for k in (1, 2) for I in linalg.index_sets(3, k)}
print("\nPlucker images (canonical representatives normalize sum of squares to 1):")
print(f"  D^t_2 = D_2 D_12 + D_3 D_13:  {Dt[(2,)]:.6f} vs "
      f"{D[(2,)] * D[(1, 2)] + D[(3,)] * D[(1, 3)]:.6f}")
print(f"  D^t_3 = D_23:                 {Dt[(3,)]:.6f} vs {D[(2, 3)]:.6f}")
print(f"  D^t_23 = D_3:                 {Dt[(2, 3)]:.6f} vs {D[(3,)]:.6f}")

# the twist inverts cell labels
a = 1.3
cellrep = np.array([[a, -1.0, 0], [0, 0, -1], [1, 0, 0]])
Vc = flagorbit.flag_from_matrix(cellrep)
c0 = flagorbit.locate_cell(Vc)
c1 = flagorbit.locate_cell(flagorbit.twist_flag(Vc))
print(f"\ncell of the boundary flag:   v = {c0.v}, w = {c0.w}")
print(f"cell of its twist (inverses): v = {c1.v}, w = {c1.w}")

rng = np.random.default_rng(1)
g5 = positivity.sample_tnn_flag(5, rng)
V5 = flagorbit.flag_from_matrix(g5)
print("\nrandom interior flag at n = 5: theta^2 distance =",
      f"{flagorbit.flag_distance(flagorbit.twist_flag(flagorbit.twist_flag(V5)), V5):.2e}")
