import numpy as np
import pytest

import jax.numpy as jnp

from nullframe.connections import (
    ConnectionError,
    bianchi_check,
    chi_curvature_relation_residual,
    chi_oneform,
    connection_difference,
    covariant_derivative_oneform,
    covariant_derivative_tensor2_cov,
    covariant_derivative_vector,
    curvature,
    curvature_decomposition_check,
    divergence,
    g_connection,
    gi_admissibility_residual,
    gi_connection,
    gr_connection,
)
from nullframe.fields import TensorFieldOnChart, constant_tensor_field
from nullframe.scenarios import (
    curved_beta,
    flat_standard_structure,
    get_scenario,
)


def flat_with_z(z_matrix_fn):
    ns = flat_standard_structure(3)
    Z = TensorFieldOnChart(ns.chart, ("down", "down"), z_matrix_fn)
    return ns, Z


def test_gr_constant_chi_single_coefficient():
    sc = get_scenario("gr-constant-chi")
    p = np.array([0.4, -1.1, 0.9])
    G = sc.connection(p)
    assert G[2, 2, 2] == pytest.approx(0.8)
    assert np.sum(np.abs(G)) == pytest.approx(0.8)
    assert sc.connection.torsion_residual(p) < 1e-14
    assert np.allclose(chi_oneform(sc.connection, sc.structure, p), [0.0, 0.0, 0.8])


def test_gi_connection_z_slot():
    # on the flat structure a constant Z with vanishing last column is
    # G_I-admissible and lands verbatim in the kernel-direction slot
    z = np.diag([1.0, 1.0, 0.0])
    ns, Z = flat_with_z(lambda x: jnp.asarray(z))
    conn = gi_connection(ns, Z, [np.array([0.2, 0.3, -0.5])])
    G = conn(np.zeros(3))
    assert np.allclose(G[2], z)
    assert np.max(np.abs(G[:2])) < 1e-14
    assert np.allclose(chi_oneform(conn, ns, np.zeros(3)), np.zeros(3))


def test_gi_rejects_inadmissible_z():
    ns, Z = flat_with_z(lambda x: jnp.eye(3))
    assert gi_admissibility_residual(ns, Z, np.zeros(3)) == pytest.approx(1.0)
    with pytest.raises(ConnectionError, match="admissible"):
        gi_connection(ns, Z, [np.zeros(3)])


def test_curvature_linear_z_oracle():
    # Z_11 = x3 gives Gamma^3_{11} = x3 and, in the module sign convention,
    # R^3_{113} = +1 and R^3_{131} = -1 as the only nonzero components
    def z_fn(x):
        return jnp.zeros((3, 3)).at[0, 0].set(x[2])

    ns, Z = flat_with_z(z_fn)
    conn = g_connection(ns, Z)
    R = curvature(conn, np.array([0.3, -0.8, 0.5]))
    assert R[2, 0, 0, 2] == pytest.approx(1.0)
    assert R[2, 0, 2, 0] == pytest.approx(-1.0)
    assert np.sum(np.abs(R)) == pytest.approx(2.0)


def test_curvature_against_finite_differences():
    # independent oracle: central differences of the Christoffel field
    sc = get_scenario("flat-z-random-0")
    conn = sc.connection
    p = np.array([0.4, 0.1, -0.7])
    h = 1e-5
    G = conn(p)
    dG = np.zeros((3, 3, 3, 3))  # dG[l, b, a, m] = d_m Gamma^l_{ba}
    for m in range(3):
        dp = np.zeros(3)
        dp[m] = h
        dG[..., m] = (conn(p + dp) - conn(p - dp)) / (2 * h)
    expected = (
        np.einsum("lbag->labg", dG)
        - np.einsum("lgab->labg", dG)
        + np.einsum("lgs,sba->labg", G, G)
        - np.einsum("lbs,sga->labg", G, G)
    )
    assert np.max(np.abs(curvature(conn, p) - expected)) < 1e-7


def test_bianchi_identities():
    sc = get_scenario("curved-beta")
    first, second = bianchi_check(sc.connection, np.array([0.5, -0.4, 0.8]))
    assert first < 1e-8
    assert second < 1e-8


def test_curvature_decomposition_and_chi_relation():
    sc = get_scenario("curved-beta")
    ns, conn = sc.structure, sc.connection
    Z = TensorFieldOnChart(ns.chart, ("down", "down"), conn.z_fn)
    p = np.array([0.3, 0.6, -0.2])
    assert curvature_decomposition_check(ns, Z, p) < 1e-8
    assert chi_curvature_relation_residual(conn, ns, p) < 1e-8


def test_connection_difference_recovers_delta_z():
    ns = flat_standard_structure(3)

    def z1(x):
        return jnp.asarray([[x[0], 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, x[1]]])

    def z2(x):
        return jnp.asarray([[0.0, x[2], 0.0], [x[2], 0.0, 0.0], [0.0, 0.0, 2.0]])

    Z1 = TensorFieldOnChart(ns.chart, ("down", "down"), z1)
    Z2 = TensorFieldOnChart(ns.chart, ("down", "down"), z2)
    p = np.array([0.9, -0.4, 0.6])
    dz, off = connection_difference(g_connection(ns, Z1), g_connection(ns, Z2), p)
    assert off < 1e-14
    assert np.max(np.abs(dz - (np.asarray(z1(p)) - np.asarray(z2(p))))) < 1e-14


def test_connection_difference_requires_common_structure():
    ns1 = flat_standard_structure(3)
    sc = curved_beta()
    zero = constant_tensor_field(ns1.chart, ("down", "down"), np.zeros((3, 3)))
    c1 = g_connection(ns1, zero)
    with pytest.raises(ConnectionError):
        connection_difference(c1, sc.connection, np.array([0.4, 0.2, 0.1]))


def test_covariant_derivatives_reduce_to_partials():
    ns = flat_standard_structure(3)
    zero = constant_tensor_field(ns.chart, ("down", "down"), np.zeros((3, 3)))
    conn = g_connection(ns, zero)
    X = TensorFieldOnChart(ns.chart, ("up",), lambda x: jnp.array([x[0], 0.0, x[0] * x[1]]))
    p = np.array([1.0, 2.0, 3.0])
    grad = covariant_derivative_vector(conn, X, p)
    assert np.allclose(grad, [[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [2.0, 1.0, 0.0]])
    assert divergence(conn, X, p) == pytest.approx(1.0)
    w = TensorFieldOnChart(ns.chart, ("down",), lambda x: jnp.array([x[1], 0.0, 0.0]))
    assert np.allclose(
        covariant_derivative_oneform(conn, w, p),
        [[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    )
    T = TensorFieldOnChart(
        ns.chart, ("down", "down"), lambda x: x[2] * jnp.eye(3)
    )
    dT = covariant_derivative_tensor2_cov(conn, T, p)
    assert np.allclose(dT[..., 2], np.eye(3))
    assert np.max(np.abs(dT[..., :2])) < 1e-14


def test_metric_parallelism_on_curved_scenario():
    sc = get_scenario("curved-beta")
    ns, conn = sc.structure, sc.connection
    p = np.array([0.8, -0.5, 0.3])
    grad_beta = covariant_derivative_tensor2_cov(conn, ns.metric.beta, p)
    assert np.max(np.abs(grad_beta)) < 1e-10
    grad_xi = covariant_derivative_vector(conn, ns.xi, p)
    chi = chi_oneform(conn, ns, p)
    assert np.max(np.abs(grad_xi - np.outer(ns.xi(p), chi))) < 1e-10
