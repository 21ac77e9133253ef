"""The light cone as the negative control.

The future light cone of the Minkowski origin carries a perfectly good
degenerate metric, but its generator congruence expands: div xi = 2/r.
No torsion-free connection on the cone can parallelize beta, and the
frame-bundle obstruction to inducing one is visibly nonzero.  This script
measures both facts and shows that the defect in the divergence-dilation
identity is exactly the expansion.
"""

import jax
import jax.numpy as jnp
import numpy as np

from nullframe.ambient import levi_civita, reduction_obstruction, ricci_coefficients
from nullframe.connections import covariant_derivative_tensor2_cov, divergence
from nullframe.scenarios import get_scenario


def dilation_oneform(sc, p):
    # chi_a = -xi^l (d_a f_l - Z_{al}); the strict chi_oneform helper also
    # cross-checks grad xi = chi (x) xi, which the expanding cone cannot pass
    x = jnp.asarray(p, dtype=jnp.float64)
    df = np.asarray(jax.jacfwd(sc.structure.f.fn)(x))
    xi = sc.structure.xi(p)
    return -(xi @ df - np.asarray(sc.connection.z_fn(x)) @ xi)

sc = get_scenario("minkowski-light-cone")
amb = sc.ambient
rng = np.random.default_rng(0)

print("scenario:", sc.name)
print(sc.description)
print()

for p in sc.sample_points(4, rng):
    th, ph, r = p
    y = amb.embedding(p)
    gamma = ricci_coefficients(levi_civita(amb.metric), amb.frame, y)
    grad_beta = covariant_derivative_tensor2_cov(sc.connection, sc.structure.metric.beta, p)
    div = divergence(sc.connection, sc.structure.xi, p)
    chi = dilation_oneform(sc, p)
    chi_xi = float(chi @ sc.structure.xi(p))
    print(f"r = {r:.3f}")
    print(f"  obstruction          : {reduction_obstruction(gamma):.6f}  (nonzero)")
    print(f"  max |grad beta|      : {np.max(np.abs(grad_beta)):.6f}  (cannot vanish)")
    print(f"  div xi - chi(xi)     : {div - chi_xi:.6f}")
    print(f"  expansion 2/r        : {2.0 / r:.6f}")
