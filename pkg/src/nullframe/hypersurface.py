"""The degenerate structure (V_n, beta, [xi]) and its local machinery.

A null-hypersurface metric beta is symmetric, positive semi-definite and
of rank n-1; its kernel line is spanned by xi.  A normalizing one-form f
with f(xi) = 1 selects a quasi-inverse beta_f, the unique symmetric
2-contravariant tensor with

    beta . beta_f = 1 - f (x) xi      and      beta_f f = 0.

Closed form used throughout: with A = beta + f f^t (invertible, since f
is nonzero on the kernel), beta_f = A^{-1} beta A^{-1}.  Indeed A xi = f
gives A^{-1} f = xi, hence beta A^{-1} = 1 - f xi^t and the identities
follow; differentiating through the solve is what makes the connection
coefficients smooth fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import jax
import jax.numpy as jnp
import numpy as np

from .fields import Chart, FieldError, TensorFieldOnChart

KERNEL_TOL = 1e-8


class DegenerateStructureError(ValueError):
    """Raised when a metric fails the rank-(n-1) null-hypersurface contract."""


@dataclass(frozen=True)
class DegenerateMetric:
    """A symmetric 2-covariant field of rank n-1 on an n-dimensional chart."""

    chart: Chart
    beta: TensorFieldOnChart

    def __post_init__(self):
        if self.beta.variances != ("down", "down"):
            raise FieldError("beta must be 2-covariant")

    def matrix(self, point) -> np.ndarray:
        return self.beta(point)

    def check_at(self, point, tol: float = KERNEL_TOL):
        b = self.beta(point)
        n = self.chart.dim
        if np.max(np.abs(b - b.T)) > tol:
            raise DegenerateStructureError("beta is not symmetric")
        eigs = np.linalg.eigvalsh(b)
        if eigs[0] < -tol:
            raise DegenerateStructureError("beta is not positive semi-definite")
        rank = int(np.sum(np.abs(eigs) > tol * max(1.0, np.max(np.abs(eigs)))))
        if rank != n - 1:
            raise DegenerateStructureError(
                f"not a null-hypersurface metric: rank {rank}, expected {n - 1}"
            )


def kernel_direction(metric: DegenerateMetric, point) -> np.ndarray:
    """Normalized kernel representative: beta v = 0, sup-norm 1, first
    nonzero component positive."""
    metric.check_at(point)
    b = metric.beta(point)
    _, vecs = np.linalg.eigh(b)
    v = vecs[:, 0]
    v = v / np.max(np.abs(v))
    for c in v:
        if abs(c) > 1e-10:
            if c < 0:
                v = -v
            break
    return v


@dataclass(frozen=True)
class NullStructure:
    """A degenerate metric with a chosen kernel field xi and normalizer f."""

    metric: DegenerateMetric
    xi: TensorFieldOnChart
    f: TensorFieldOnChart

    def __post_init__(self):
        if self.xi.variances != ("up",) or self.f.variances != ("down",):
            raise FieldError("xi must be a vector field and f a one-form")

    @property
    def chart(self) -> Chart:
        return self.metric.chart

    def check_at(self, point, tol: float = KERNEL_TOL):
        self.metric.check_at(point, tol)
        b = self.metric.beta(point)
        xi = self.xi(point)
        f = self.f(point)
        if np.max(np.abs(b @ xi)) > tol:
            raise DegenerateStructureError("xi is not in the kernel of beta")
        if abs(f @ xi - 1.0) > tol:
            raise DegenerateStructureError("f(xi) != 1")

    # jnp-traceable building blocks -----------------------------------------

    def _quasi_inverse_fn(self):
        beta_fn, f_fn = self.metric.beta.fn, self.f.fn

        def fn(x):
            b = beta_fn(x)
            f = f_fn(x)
            a = b + jnp.outer(f, f)
            a_inv = jnp.linalg.inv(a)
            return a_inv @ b @ a_inv

        return fn

    def _koszul_fn(self):
        return koszul_fn(self.metric.beta.fn)


def quasi_inverse(ns: NullStructure, point) -> np.ndarray:
    """beta_f at a point: symmetric, beta beta_f = 1 - f (x) xi, beta_f f = 0."""
    ns.check_at(point)
    return np.asarray(ns._quasi_inverse_fn()(jnp.asarray(point, dtype=jnp.float64)))


def koszul_fn(beta_fn):
    """B_{rho,beta gamma} = d_(beta beta_{rho gamma)} - 1/2 d_rho beta_{beta gamma},
    as a jnp-traceable function; axes ordered (rho, beta, gamma)."""

    def fn(x):
        db = jax.jacfwd(beta_fn)(x)  # db[r, g, mu] = d_mu beta_{rg}
        return 0.5 * (
            jnp.einsum("rgb->rbg", db) + jnp.einsum("rbg->rbg", db)
        ) - 0.5 * jnp.einsum("bgr->rbg", db)

    return fn


def koszul_term(metric: DegenerateMetric, point) -> np.ndarray:
    return np.asarray(
        koszul_fn(metric.beta.fn)(jnp.asarray(point, dtype=jnp.float64))
    )


def pullback_metric(
    ambient_g: TensorFieldOnChart, embedding_fn, chart: Chart
) -> DegenerateMetric:
    """beta_{ab} = (d_a i^mu)(d_b i^nu) g_{mu nu} for an embedding i of the
    n-chart into the ambient (n+1)-chart.

    ``embedding_fn`` maps an n-point to an (n+1)-point using jnp operations.
    Rank failure (a non-isotropic embedding) surfaces through check_at.
    """
    if ambient_g.variances != ("down", "down"):
        raise FieldError("ambient metric must be 2-covariant")

    def fn(x):
        J = jax.jacfwd(embedding_fn)(x)       # J[mu, a]
        g = ambient_g.fn(embedding_fn(x))
        return J.T @ g @ J

    return DegenerateMetric(chart, TensorFieldOnChart(chart, ("down", "down"), fn))
