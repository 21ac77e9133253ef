import numpy as np
import pytest

from nullframe.fields import (
    Chart,
    FieldError,
    ScalarField,
    TensorFieldOnChart,
    constant_tensor_field,
    default_chart,
    lie_bracket_fields,
    lie_derivative_tensor,
    make_scalar_field,
    partial_derivative,
    pp_wave_profile,
    tensor_field_from_scalars,
)

import jax.numpy as jnp


def test_chart_validation():
    with pytest.raises(FieldError):
        Chart(2, ("x", "x"))
    with pytest.raises(FieldError):
        Chart(1, ("x",))
    assert default_chart(3).names == ("x1", "x2", "x3")


def test_scalar_field_derivatives():
    chart = default_chart(2)
    f = ScalarField(chart, lambda x: x[0] ** 2 * x[1] + 3.0 * x[1])
    p = np.array([2.0, -1.0])
    assert f(p) == pytest.approx(-7.0)
    assert np.allclose(f.gradient(p), [2 * 2.0 * -1.0, 4.0 + 3.0])
    assert np.allclose(f.hessian(p), [[-2.0, 4.0], [4.0, 0.0]])
    assert partial_derivative(f, 0, p) == pytest.approx(-4.0)
    with pytest.raises(FieldError):
        partial_derivative(f, 5, p)


def test_make_scalar_field_kinds():
    chart = default_chart(3)
    p = np.array([0.5, 2.0, -1.0])
    assert make_scalar_field(chart, {"kind": "const", "value": 4.0})(p) == 4.0
    assert make_scalar_field(chart, {"kind": "coord", "index": 1})(p) == 2.0
    poly = make_scalar_field(chart, {"kind": "poly", "terms": [[2.0, [1, 1, 0]]]})
    assert poly(p) == pytest.approx(2.0)
    trig = make_scalar_field(chart, {"kind": "sin", "coeffs": [1.0, 0.0, 0.0]})
    assert trig(p) == pytest.approx(np.sin(0.5))
    with pytest.raises(FieldError):
        make_scalar_field(chart, {"kind": "nope"})


def test_pp_wave_profile_values():
    H = pp_wave_profile((1.0,), (0.0, 0.5), (0.75,))
    p = jnp.array([2.0, 1.0, -1.0, 0.3])
    # A=1, B(u)=0.5 u = 1, C=0.75 at u=2, x=1, y=-1
    expected = 1.0 * (1.0 - 1.0) + 2.0 * 1.0 * (1.0 * -1.0) + 0.75 * 2.0
    assert float(H(p)) == pytest.approx(expected)


def test_lie_derivative_rotation_kills_flat_metric():
    chart = default_chart(2)
    X = TensorFieldOnChart(chart, ("up",), lambda x: jnp.array([x[1], -x[0]]))
    g = constant_tensor_field(chart, ("down", "down"), np.eye(2))
    L = lie_derivative_tensor(X, g, np.array([0.7, -0.2]))
    assert np.max(np.abs(L)) < 1e-14


def test_lie_derivative_dilation_scales_metric():
    chart = default_chart(2)
    X = TensorFieldOnChart(chart, ("up",), lambda x: jnp.array([x[0], 0.0]))
    T = constant_tensor_field(chart, ("down", "down"), np.diag([1.0, 0.0]))
    L = lie_derivative_tensor(X, T, np.array([0.3, 0.9]))
    assert np.allclose(L, np.diag([2.0, 0.0]))


def test_lie_derivative_requires_vector():
    chart = default_chart(2)
    w = constant_tensor_field(chart, ("down",), np.ones(2))
    T = constant_tensor_field(chart, ("down", "down"), np.eye(2))
    with pytest.raises(FieldError):
        lie_derivative_tensor(w, T, np.zeros(2))


def test_lie_bracket_fields():
    chart = default_chart(2)
    X = TensorFieldOnChart(chart, ("up",), lambda x: jnp.array([0.0, x[0]]))
    Y = TensorFieldOnChart(chart, ("up",), lambda x: jnp.array([x[1], 0.0]))
    p = np.array([1.5, -0.5])
    assert np.allclose(lie_bracket_fields(X, Y)(p), [1.5, 0.5])


def test_tensor_field_from_scalars():
    chart = default_chart(2)
    fns = [lambda x: x[0], lambda x: 0.0, lambda x: 0.0, lambda x: x[1]]
    T = tensor_field_from_scalars(chart, ("down", "down"), fns)
    assert np.allclose(T(np.array([2.0, 3.0])), np.diag([2.0, 3.0]))
    with pytest.raises(FieldError):
        tensor_field_from_scalars(chart, ("down", "down"), fns[:3])


def test_jacobian_axis_order():
    # derivative index must come last: d T[i] / d x^mu at slot [i, mu]
    chart = default_chart(2)
    T = TensorFieldOnChart(chart, ("up",), lambda x: jnp.array([x[1] ** 2, 0.0]))
    J = T.jacobian(np.array([0.0, 3.0]))
    assert J[0, 1] == pytest.approx(6.0)
    assert J[1, 0] == pytest.approx(0.0)
