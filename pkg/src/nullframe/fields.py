"""Coordinate charts and differentiable scalar/tensor fields.

Fields are plain callables mapping a coordinate array to a value, built
from ``jax.numpy`` operations so that exact forward-mode derivatives of
any order are available through ``jax.jacfwd``.  All geometry downstream
is local: there is one chart per structure and no atlas machinery.

Derivative-axis convention: jacobians append the differentiation index as
the LAST axis, i.e. ``jacobian(T)(x)[..., mu] = d T[...] / d x^mu``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import jax
import jax.numpy as jnp
import numpy as np

jax.config.update("jax_enable_x64", True)


class FieldError(ValueError):
    """Raised on chart/field shape mismatches or bad field specs."""


@dataclass(frozen=True)
class Chart:
    """A local coordinate system: dimension plus distinct coordinate labels."""

    dim: int
    names: tuple[str, ...]
    domain_note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if self.dim < 2:
            raise FieldError("charts must have dimension >= 2")
        if len(self.names) != self.dim or len(set(self.names)) != self.dim:
            raise FieldError("coordinate labels must be distinct and match dim")


def default_chart(dim: int, prefix: str = "x") -> Chart:
    return Chart(dim, tuple(f"{prefix}{i + 1}" for i in range(dim)))


@dataclass(frozen=True)
class ScalarField:
    """An evaluable, smoothly differentiable function on a chart."""

    chart: Chart
    fn: Callable = field(repr=False)

    def __call__(self, point) -> float:
        return float(self.fn(jnp.asarray(point, dtype=jnp.float64)))

    def gradient(self, point) -> np.ndarray:
        return np.asarray(jax.jacfwd(self.fn)(jnp.asarray(point, dtype=jnp.float64)))

    def hessian(self, point) -> np.ndarray:
        return np.asarray(
            jax.jacfwd(jax.jacfwd(self.fn))(jnp.asarray(point, dtype=jnp.float64))
        )


def partial_derivative(f: ScalarField, direction: int, point) -> float:
    if not 0 <= direction < f.chart.dim:
        raise FieldError(f"direction {direction} out of range")
    return float(f.gradient(point)[direction])


@dataclass(frozen=True)
class TensorFieldOnChart:
    """A tensor field: a callable producing the full component array at a point.

    ``variances`` uses the same up/down tags as :mod:`nullframe.tensor_core`;
    the component array has one axis of length ``chart.dim`` per slot.
    """

    chart: Chart
    variances: tuple[str, ...]
    fn: Callable = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variances", tuple(self.variances))

    @property
    def rank(self) -> int:
        return len(self.variances)

    def __call__(self, point) -> np.ndarray:
        return np.asarray(self.fn(jnp.asarray(point, dtype=jnp.float64)))

    def jacobian(self, point) -> np.ndarray:
        """Partial derivatives of every component; derivative axis last."""
        return np.asarray(
            jax.jacfwd(self.fn)(jnp.asarray(point, dtype=jnp.float64))
        )


def constant_tensor_field(chart: Chart, variances, components) -> TensorFieldOnChart:
    comps = jnp.asarray(components, dtype=jnp.float64)
    return TensorFieldOnChart(chart, tuple(variances), lambda x: comps)


def tensor_field_from_scalars(chart: Chart, variances, scalar_fns) -> TensorFieldOnChart:
    """Assemble a tensor field from a nested sequence of component callables."""
    shape = (chart.dim,) * len(tuple(variances))
    flat = np.asarray(scalar_fns, dtype=object).reshape(-1)
    expected = int(np.prod(shape)) if shape else 1
    if flat.size != expected:
        raise FieldError("component count must be dim^rank")

    def fn(x):
        vals = jnp.stack([jnp.asarray(f(x), dtype=jnp.float64) for f in flat])
        return vals.reshape(shape)

    return TensorFieldOnChart(chart, tuple(variances), fn)


def lie_derivative_tensor(X: TensorFieldOnChart, T: TensorFieldOnChart, point):
    """Standard Lie derivative of T along the vector field X, componentwise.

    (L_X T) = X^s d_s T  - (d_s X^a) T^{..s..}  per up slot a
                        + (d_a X^s) T_{..s..}  per down slot a
    """
    if X.rank != 1 or X.variances[0] != "up":
        raise FieldError("X must be a rank-1 contravariant field")
    x = jnp.asarray(point, dtype=jnp.float64)
    Tj = jax.jacfwd(T.fn)(x)                      # (..., deriv)
    Xv = jnp.asarray(X.fn(x))
    Xj = jax.jacfwd(X.fn)(x)                      # Xj[a, s] = d_s X^a
    out = jnp.tensordot(Tj, Xv, axes=(-1, 0))
    Tc = jnp.asarray(T.fn(x))
    for i, var in enumerate(T.variances):
        if var == "up":
            term = jnp.moveaxis(jnp.tensordot(Xj, Tc, axes=([1], [i])), 0, i)
            out = out - term
        else:
            term = jnp.moveaxis(jnp.tensordot(Xj, Tc, axes=([0], [i])), 0, i)
            out = out + term
    return np.asarray(out)


def lie_bracket_fields(X: TensorFieldOnChart, Y: TensorFieldOnChart) -> TensorFieldOnChart:
    """[X, Y] as a vector field."""

    def fn(x):
        return jnp.tensordot(jax.jacfwd(Y.fn)(x), X.fn(x), axes=(-1, 0)) - jnp.tensordot(
            jax.jacfwd(X.fn)(x), Y.fn(x), axes=(-1, 0)
        )

    return TensorFieldOnChart(X.chart, ("up",), fn)


# --- built-in scalar-field library (addressable from scenario files) ---------

def _poly_fn(terms: Sequence):
    terms = [(float(c), tuple(int(e) for e in exps)) for c, exps in terms]

    def fn(x):
        total = 0.0
        for c, exps in terms:
            term = c
            for i, e in enumerate(exps):
                if e:
                    term = term * x[i] ** e
            total = total + term
        return jnp.asarray(total, dtype=jnp.float64)

    return fn


def _poly1d(coeffs):
    coeffs = [float(c) for c in coeffs]

    def fn(u):
        total = 0.0
        for k, c in enumerate(coeffs):
            total = total + c * u**k
        return total

    return fn


def pp_wave_profile(a_coeffs, b_coeffs, c_coeffs=(), u_index=0, x_index=1, y_index=2):
    """H(u, x, y) = A(u) (x^2 - y^2) + 2 B(u) x y + C(u) (x^2 + y^2).

    A, B, C are polynomials in u.  The A/B part is harmonic in (x, y)
    (vacuum); a nonzero C sources the wave (null dust).
    """
    A, B, C = _poly1d(a_coeffs), _poly1d(b_coeffs), _poly1d(c_coeffs)

    def fn(p):
        u, x, y = p[u_index], p[x_index], p[y_index]
        return A(u) * (x**2 - y**2) + 2.0 * B(u) * x * y + C(u) * (x**2 + y**2)

    return fn


def make_scalar_field(chart: Chart, spec: dict) -> ScalarField:
    """Instantiate a named field from the built-in library.

    Supported kinds: const {value}, coord {index}, poly {terms}, sin/cos
    {coeffs, shift}, ppwave_profile {a_coeffs, b_coeffs, indices}.
    """
    kind = spec.get("kind")
    if kind == "const":
        v = jnp.float64(spec["value"])
        return ScalarField(chart, lambda x: v)
    if kind == "coord":
        i = int(spec["index"])
        return ScalarField(chart, lambda x: x[i])
    if kind == "poly":
        return ScalarField(chart, _poly_fn(spec["terms"]))
    if kind in ("sin", "cos"):
        coeffs = jnp.asarray(spec["coeffs"], dtype=jnp.float64)
        shift = jnp.float64(spec.get("shift", 0.0))
        trig = jnp.sin if kind == "sin" else jnp.cos
        return ScalarField(chart, lambda x: trig(coeffs @ x + shift))
    if kind == "ppwave_profile":
        idx = spec.get("indices", [0, 1, 2])
        return ScalarField(
            chart,
            pp_wave_profile(
                spec["a_coeffs"], spec["b_coeffs"], spec.get("c_coeffs", ()), *idx
            ),
        )
    raise FieldError(f"unknown scalar field kind {kind!r}")
