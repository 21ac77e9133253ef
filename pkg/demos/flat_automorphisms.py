"""Solve the automorphism algebra of the flat standard structure.

For each n the solver samples the linearized invariance conditions at
generic points, extracts the nullspace, and verifies the canonical basis
of rotations, translations, shears into the kernel coordinate, the
dilation, and the kernel translation.  The dimension is (n^2 + n + 2)/2.
"""

import numpy as np

from nullframe import automorphisms as am
from nullframe.connections import g_connection
from nullframe.fields import constant_tensor_field
from nullframe.scenarios import flat_standard_structure

rng = np.random.default_rng(0)

for n in (2, 3, 4):
    ns = flat_standard_structure(n)
    zero_z = constant_tensor_field(ns.chart, ("down", "down"), np.zeros((n, n)))
    conn = g_connection(ns, zero_z)
    basis = am.solve_standard_automorphisms(ns, conn, rng)
    print(f"n = {n}: dimension {basis.dimension} (expected {am.expected_dimension(n)})")
    print(f"  closure residual {basis.closure_residual:.2e}, "
          f"Jacobi residual {basis.jacobi_residual():.2e}")

# the bracket in coordinates: the dilation does not commute with the
# kernel translation
m = 2
dilation = am.AffineVectorFieldAnsatz(np.zeros((m, m)), np.zeros(m), np.zeros(m), 1.0, 0.0)
translation = am.AffineVectorFieldAnsatz(np.zeros((m, m)), np.zeros(m), np.zeros(m), 0.0, 1.0)
br = am.lie_bracket(dilation, translation)
print()
print("[x^n d_n, d_n] has kernel-translation coefficient", br.k_0)

# and the counterexample: quadratic in x^1, kills conditions i) and ii)
# but not iii)
ns = flat_standard_structure(3)
zero_z = constant_tensor_field(ns.chart, ("down", "down"), np.zeros((3, 3)))
conn = g_connection(ns, zero_z)
X = am.quadratic_counterexample_field(ns.chart)
lie_beta, kernel_res, conn_res, _ = am.radiation_killing_residual(
    X, ns, conn, np.array([0.7, -0.3, 0.4])
)
print(f"counterexample X^n = (x^1)^2: |L_X beta| = {lie_beta:.1e}, "
      f"kernel residual = {kernel_res:.1e}, connection residual = {conn_res}")
