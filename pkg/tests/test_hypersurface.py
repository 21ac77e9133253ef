import numpy as np
import pytest

import jax.numpy as jnp

from nullframe.fields import TensorFieldOnChart, constant_tensor_field, default_chart
from nullframe.hypersurface import (
    DegenerateMetric,
    DegenerateStructureError,
    NullStructure,
    kernel_direction,
    koszul_term,
    pullback_metric,
    quasi_inverse,
)
from nullframe.scenarios import curved_beta, flat_standard_structure, get_scenario


def test_metric_rank_contract():
    chart = default_chart(3)
    full_rank = DegenerateMetric(
        chart, constant_tensor_field(chart, ("down", "down"), np.eye(3))
    )
    with pytest.raises(DegenerateStructureError, match="rank"):
        full_rank.check_at(np.zeros(3))
    indefinite = DegenerateMetric(
        chart, constant_tensor_field(chart, ("down", "down"), np.diag([1.0, -1.0, 0.0]))
    )
    with pytest.raises(DegenerateStructureError, match="semi-definite"):
        indefinite.check_at(np.zeros(3))
    skew = DegenerateMetric(
        chart,
        constant_tensor_field(
            chart,
            ("down", "down"),
            np.array([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]),
        ),
    )
    with pytest.raises(DegenerateStructureError, match="symmetric"):
        skew.check_at(np.zeros(3))


def test_kernel_direction_flat_and_curved():
    ns = flat_standard_structure(3)
    assert np.allclose(kernel_direction(ns.metric, np.zeros(3)), [0.0, 0.0, 1.0])
    sc = curved_beta()
    assert np.allclose(
        kernel_direction(sc.structure.metric, np.array([0.4, -0.2, 0.9])),
        [0.0, 0.0, 1.0],
    )


def test_null_structure_validation():
    ns = flat_standard_structure(3)
    bad_xi = constant_tensor_field(ns.chart, ("up",), np.array([1.0, 0.0, 1.0]))
    with pytest.raises(DegenerateStructureError, match="kernel"):
        NullStructure(ns.metric, bad_xi, ns.f).check_at(np.zeros(3))
    bad_f = constant_tensor_field(ns.chart, ("down",), np.array([0.0, 0.0, 2.0]))
    with pytest.raises(DegenerateStructureError, match="f"):
        NullStructure(ns.metric, ns.xi, bad_f).check_at(np.zeros(3))


def test_quasi_inverse_identities():
    rng = np.random.default_rng(21)
    for sc in (curved_beta(), get_scenario("minkowski-light-cone")):
        ns = sc.structure
        for p in sc.sample_points(5, rng):
            bf = quasi_inverse(ns, p)
            b, xi, f = ns.metric.beta(p), ns.xi(p), ns.f(p)
            assert np.max(np.abs(bf - bf.T)) < 1e-10
            assert np.max(np.abs(b @ bf - (np.eye(3) - np.outer(f, xi)))) < 1e-9
            assert np.max(np.abs(bf @ f)) < 1e-9


def test_koszul_term_single_coefficient():
    # beta_11 = 1 + (x1)^2 is the only varying entry, so the only nonzero
    # Koszul coefficient is B_{1,11} = (1/2) d_1 beta_11 = x1
    sc = curved_beta()
    p = np.array([0.7, -0.3, 1.1])
    B = koszul_term(sc.structure.metric, p)
    assert B[0, 0, 0] == pytest.approx(0.7)
    assert np.sum(np.abs(B)) == pytest.approx(0.7)
    # symmetry in the trailing index pair
    assert np.max(np.abs(B - np.swapaxes(B, 1, 2))) < 1e-14


def test_pullback_metric_on_wavefront():
    sc = get_scenario("pp-wave")
    beta = sc.structure.metric
    p = np.array([0.8, -0.6, 1.4])
    assert np.allclose(beta.matrix(p), np.diag([1.0, 1.0, 0.0]))
    beta.check_at(p)


def test_pullback_metric_on_cone():
    # induced metric diag(r^2, r^2 sin^2 th, 0) in the (th, ph, r) chart
    sc = get_scenario("minkowski-light-cone")
    p = np.array([1.1, 2.0, 1.7])
    expected = np.diag([1.7**2, (1.7 * np.sin(1.1)) ** 2, 0.0])
    assert np.allclose(sc.structure.metric.matrix(p), expected)
