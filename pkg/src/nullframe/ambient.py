"""The Lorentzian ambient space, adapted frames, and the induced connection.

An adapted frame field packs (e_0, e_1 .. e_{n-1}, e_n) as the columns of
a matrix field E(x); the dual coframe is its inverse.  The frame must
satisfy E^t g E = S with S the null pairing used for O(n,1), with e_n
aligned to the hypersurface generator.

Blocks of the connection form in such a frame: the dilation phi^n_n, the
column block phibar = {phi^A_n}, the row block phiunder = {phi^n_A} and
the antisymmetric rotation block phi.  The obstruction to inducing a
connection on the hypersurface is the phiunder block restricted to
tangent directions; where it vanishes, the pullbacks of (beta, theta^n,
phi^n_n) define the unique induced radiation connection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from .connections import ConnectionCoefficients, gr_connection
from .fields import Chart, FieldError, TensorFieldOnChart
from .groups import lorentz_pairing
from .hypersurface import NullStructure, pullback_metric

LEVEL_AMBIENT = "levi_civita"

FRAME_TOL = 1e-10
BLOCK_TOL = 1e-6


class AmbientError(ValueError):
    """Raised on signature, frame-adaptedness, or reduction failures."""


@dataclass(frozen=True)
class LorentzMetric:
    """A nondegenerate metric of signature (n, 1) on an (n+1)-chart."""

    chart: Chart
    g: TensorFieldOnChart

    def __post_init__(self):
        if self.g.variances != ("down", "down"):
            raise FieldError("metric must be 2-covariant")

    @property
    def n(self) -> int:
        return self.chart.dim - 1

    def check_signature(self, point, tol: float = 1e-10):
        eigs = np.linalg.eigvalsh(self.g(point))
        if np.min(np.abs(eigs)) < tol:
            raise AmbientError("metric is degenerate at the point")
        if int(np.sum(eigs < 0)) != 1:
            raise AmbientError("metric does not have Lorentz signature (n, 1)")

    def inverse_fn(self) -> Callable:
        g_fn = self.g.fn
        return lambda x: jnp.linalg.inv(g_fn(x))


@dataclass(frozen=True)
class AdaptedFrameField:
    """Frame matrix field E(x) with columns (e_0, ebar, e_n)."""

    chart: Chart
    fn: Callable = field(repr=False)

    def __call__(self, point) -> np.ndarray:
        return np.asarray(self.fn(jnp.asarray(point, dtype=jnp.float64)))

    def coframe_fn(self) -> Callable:
        frame_fn = self.fn
        return lambda x: jnp.linalg.inv(frame_fn(x))

    def check_relations(self, metric: LorentzMetric, point, tol: float = FRAME_TOL):
        """Adapted-frame relations: E^t g E equals the null pairing S."""
        E = self(point)
        g = metric.g(point)
        S = lorentz_pairing(metric.n)
        residual = float(np.max(np.abs(E.T @ g @ E - S)))
        if residual > tol:
            raise AmbientError(f"frame is not adapted (residual {residual:.3e})")
        return residual


def levi_civita(metric: LorentzMetric) -> ConnectionCoefficients:
    """Gamma^m_{nr} = 1/2 g^{ms} (d_n g_{sr} + d_r g_{ns} - d_s g_{nr})."""
    g_fn = metric.g.fn
    ginv_fn = metric.inverse_fn()

    def fn(x):
        dg = jax.jacfwd(g_fn)(x)          # dg[s, r, m] = d_m g_{sr}
        # 1/2 (d_b g_{sg} + d_g g_{bs} - d_s g_{bg}) with axes (s, b, g)
        sym = 0.5 * (
            jnp.einsum("sgb->sbg", dg) + jnp.einsum("sbg->sbg", dg)
            - jnp.einsum("bgs->sbg", dg)
        )
        return jnp.einsum("as,sbg->abg", ginv_fn(x), sym)

    return ConnectionCoefficients(metric.chart, LEVEL_AMBIENT, fn)


def ricci_coefficients_fn(
    conn: ConnectionCoefficients, frame: AdaptedFrameField
) -> Callable:
    """gamma^a_{bc} = e^be_b e^ga_c {Gamma^al_{be ga} th^a_al - d_be th^a_ga},
    axes (a, b, c); the first lower index is the differentiation direction."""
    E_fn = frame.fn
    Th_fn = frame.coframe_fn()
    G_fn = conn.fn

    def fn(x):
        E = E_fn(x)                       # E[mu, b]
        Th = Th_fn(x)                     # Th[a, mu]
        dTh = jax.jacfwd(Th_fn)(x)        # dTh[a, ga, m]
        inner = jnp.einsum("abg,ta->tbg", G_fn(x), Th) - jnp.einsum(
            "tgb->tbg", dTh
        )
        return jnp.einsum("tbg,bp,gq->tpq", inner, E, E)

    return fn


def ricci_coefficients(
    conn: ConnectionCoefficients, frame: AdaptedFrameField, point
) -> np.ndarray:
    return np.asarray(
        ricci_coefficients_fn(conn, frame)(jnp.asarray(point, dtype=jnp.float64))
    )


@dataclass(frozen=True)
class ConnectionFormBlocks:
    """Frame-direction samples of the four blocks of the connection form.

    Each entry is indexed by the frame direction c in [0, n]; phi_n_n[c] is
    the dilation, phibar[A, c] and phiunder[A, c] the two off blocks, and
    phi[A, B, c] the rotation block.
    """

    phi_n_n: np.ndarray
    phibar: np.ndarray
    phiunder: np.ndarray
    phi: np.ndarray


def decompose_blocks(gamma: np.ndarray, tol: float = BLOCK_TOL) -> ConnectionFormBlocks:
    """Split Ricci coefficients into the o(n,1) block shape, verifying it.

    Checks the metric-connection identifications gamma^0_{c0} = -gamma^n_{cn},
    gamma^0_{cA} = gamma^A_{cn}, gamma^A_{c0} = gamma^n_{cA}, the vanishing of
    the (0,n)/(n,0) corners and the antisymmetry of the rotation block.
    """
    n = gamma.shape[0] - 1
    resid = 0.0
    resid = max(resid, float(np.max(np.abs(gamma[0, :, 0] + gamma[n, :, n]))))
    resid = max(resid, float(np.max(np.abs(gamma[0, :, 1:n] - np.swapaxes(gamma[1:n, :, n], 0, 1)))))
    resid = max(resid, float(np.max(np.abs(np.swapaxes(gamma[1:n, :, 0], 0, 1) - gamma[n, :, 1:n]))))
    resid = max(resid, float(np.max(np.abs(gamma[0, :, n]))))
    resid = max(resid, float(np.max(np.abs(gamma[n, :, 0]))))
    rot = gamma[1:n, :, 1:n]              # rot[A, c, B]
    resid = max(resid, float(np.max(np.abs(rot + np.swapaxes(rot, 0, 2)))))
    if resid > tol:
        raise AmbientError(
            f"frame not adapted or connection not metric (shape residual {resid:.3e})"
        )
    return ConnectionFormBlocks(
        phi_n_n=gamma[n, :, n],
        phibar=np.swapaxes(gamma[1:n, :, n], 0, 1).T.copy(),
        phiunder=np.moveaxis(gamma[n, :, 1:n], 0, 1).copy(),
        phi=np.moveaxis(gamma[1:n, :, 1:n], 1, 2).copy(),
    )


def lorentz_algebra_residual(gamma: np.ndarray, n: int) -> float:
    """Max-abs of t(gamma_c) S + S gamma_c over frame directions c."""
    S = lorentz_pairing(n)
    worst = 0.0
    for c in range(n + 1):
        gc = gamma[:, c, :]
        worst = max(worst, float(np.max(np.abs(gc.T @ S + S @ gc))))
    return worst


def reduction_obstruction(gamma: np.ndarray) -> float:
    """Norm of the phiunder block gamma^n_{cA} over hypersurface directions
    c in [1, n]; zero iff the ambient connection reduces (and the unique
    induced radiation connection exists)."""
    n = gamma.shape[0] - 1
    return float(np.max(np.abs(gamma[n, 1 : n + 1, 1:n])))


@dataclass(frozen=True)
class HypersurfaceEmbedding:
    """A map from the n-chart into the ambient (n+1)-chart, with the
    intrinsic generator field whose pushforward is the frame leg e_n."""

    chart: Chart
    ambient_chart: Chart
    fn: Callable = field(repr=False)
    xi: TensorFieldOnChart = field(repr=False, default=None)

    def __call__(self, point) -> np.ndarray:
        return np.asarray(self.fn(jnp.asarray(point, dtype=jnp.float64)))


def induced_radiation_connection(
    metric: LorentzMetric,
    frame: AdaptedFrameField,
    emb: HypersurfaceEmbedding,
):
    """Pull back (beta, theta^n, phi^n_n) and build the level-G_R connection.

    Returns (connection, null structure, chi one-form field).  Whether the
    reduction obstruction vanishes is the caller's business: where it does
    not (an expanding congruence), this is the G_R projection and the
    obstruction should be reported alongside.
    """
    chart = emb.chart
    beta = pullback_metric(metric.g, emb.fn, chart)
    Th_fn = frame.coframe_fn()
    conn_amb = levi_civita(metric)
    gamma_fn = ricci_coefficients_fn(conn_amb, frame)
    n = metric.n

    def pullback_oneform(ambient_form_fn):
        def fn(x):
            J = jax.jacfwd(emb.fn)(x)     # J[mu, a]
            return J.T @ ambient_form_fn(emb.fn(x))
        return fn

    def theta_n_fn(y):
        return Th_fn(y)[n, :]

    def phi_n_n_fn(y):
        gamma = gamma_fn(y)
        return jnp.einsum("c,cm->m", gamma[n, :, n], Th_fn(y))

    f = TensorFieldOnChart(chart, ("down",), pullback_oneform(theta_n_fn))
    chi = TensorFieldOnChart(chart, ("down",), pullback_oneform(phi_n_n_fn))
    ns = NullStructure(beta, emb.xi, f)
    return gr_connection(ns, chi), ns, chi


def ricci_tensor_fn(conn: ConnectionCoefficients) -> Callable:
    """Standard Ricci R_{ag} (positive on the round sphere); note the module
    curvature convention is the negative of the textbook one, hence the sign."""
    from .connections import curvature_fn

    R_fn = curvature_fn(conn)
    return lambda x: -jnp.einsum("lalg->ag", R_fn(x))


def ricci_in_adapted_frame(
    metric: LorentzMetric, frame: AdaptedFrameField, point
) -> np.ndarray:
    """Ricci components Ric(e_a, e_b) in the adapted frame."""
    x = jnp.asarray(point, dtype=jnp.float64)
    ric = ricci_tensor_fn(levi_civita(metric))(x)
    E = frame.fn(x)
    return np.asarray(E.T @ ric @ E)


def scalar_curvature(metric: LorentzMetric, point) -> float:
    x = jnp.asarray(point, dtype=jnp.float64)
    ric = ricci_tensor_fn(levi_civita(metric))(x)
    return float(jnp.einsum("ag,ag->", metric.inverse_fn()(x), ric))
