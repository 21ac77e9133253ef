"""Radiation connections on a degenerate structure and their curvature.

A connection here is a torsion-free Christoffel field Gamma^a_{bg} on the
hypersurface chart, tagged by the frame-bundle level it comes from:

* level G:   Gamma = beta_f B + xi (x) Z, Z an arbitrary symmetric tensor;
* level G_R: the Z-slot is the specific combination d_(b f_g) + chi_(b f_g)
             built from a chosen dilation one-form chi;
* level G_I: a G connection whose Z additionally makes chi vanish, so xi
             is covariantly constant.

Curvature sign convention (fixed so that the curvature split
R = R0 + 2 xi {(d_[g + chi_[g) Z_{b]a} + Gamma0^s_{a[b} Z_{g]s}} and the
relation grad_[g chi_b] = 1/2 xi^a R^l_{a[bg]} f_l hold verbatim):

    R^l_{abg} = d_g Gamma^l_{ba} - d_b Gamma^l_{ga}
                + Gamma^l_{gs} Gamma^s_{ba} - Gamma^l_{bs} Gamma^s_{ga}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from .fields import Chart, TensorFieldOnChart
from .groups import LEVEL_G, LEVEL_GI, LEVEL_GR
from .hypersurface import NullStructure, koszul_fn

CHI_TOL = 1e-8
DIFF_TOL = 1e-10


class ConnectionError(ValueError):
    """Raised when connection data is inconsistent with its structure."""


@dataclass(frozen=True)
class ConnectionCoefficients:
    """Christoffel field Gamma^a_{bg} (axes ordered a, b, g) with a level tag."""

    chart: Chart
    level: str
    fn: Callable = field(repr=False)
    structure: NullStructure | None = field(default=None, repr=False)
    z_fn: Callable | None = field(default=None, repr=False)

    def __call__(self, point) -> np.ndarray:
        return np.asarray(self.fn(jnp.asarray(point, dtype=jnp.float64)))

    def as_field(self) -> TensorFieldOnChart:
        return TensorFieldOnChart(self.chart, ("up", "down", "down"), self.fn)

    def torsion_residual(self, point) -> float:
        g = self(point)
        return float(np.max(np.abs(g - np.swapaxes(g, 1, 2))))


def _symmetric_z_check(Z: TensorFieldOnChart, point):
    z = Z(point)
    if np.max(np.abs(z - z.T)) > DIFF_TOL:
        raise ConnectionError("Z must be symmetric")


def _base_gamma_fn(ns: NullStructure):
    """The Z = 0 part beta_f B, shared by every level."""
    bf_fn = ns._quasi_inverse_fn()
    kz_fn = koszul_fn(ns.metric.beta.fn)

    def fn(x):
        return jnp.einsum("ar,rbg->abg", bf_fn(x), kz_fn(x))

    return fn


def g_connection(ns: NullStructure, Z: TensorFieldOnChart) -> ConnectionCoefficients:
    """Gamma^a_{bg} = beta_f^{ar} B_{r,bg} + xi^a Z_{bg}."""
    base = _base_gamma_fn(ns)
    xi_fn, z_fn = ns.xi.fn, Z.fn

    def fn(x):
        return base(x) + jnp.einsum("a,bg->abg", xi_fn(x), z_fn(x))

    return ConnectionCoefficients(ns.chart, LEVEL_G, fn, ns, z_fn)


def gr_connection(ns: NullStructure, chi: TensorFieldOnChart) -> ConnectionCoefficients:
    """Gamma^a_{bg} = beta_f^{ar} B_{r,bg} + xi^a {d_(b f_g) + chi_(b f_g)}."""
    base = _base_gamma_fn(ns)
    xi_fn, f_fn, chi_fn = ns.xi.fn, ns.f.fn, chi.fn

    def z_fn(x):
        df = jax.jacfwd(f_fn)(x)          # df[g, b] = d_b f_g
        sym_df = 0.5 * (df + df.T)
        c, f = chi_fn(x), f_fn(x)
        sym_cf = 0.5 * (jnp.outer(c, f) + jnp.outer(f, c))
        return sym_df + sym_cf

    def fn(x):
        return base(x) + jnp.einsum("a,bg->abg", xi_fn(x), z_fn(x))

    return ConnectionCoefficients(ns.chart, LEVEL_GR, fn, ns, z_fn)


def gi_admissibility_residual(ns: NullStructure, Z: TensorFieldOnChart, point) -> float:
    """Max-abs of chi_a = -xi^l (d_a f_l - Z_{al}); zero iff Z is G_I-admissible."""
    x = jnp.asarray(point, dtype=jnp.float64)
    df = jax.jacfwd(ns.f.fn)(x)           # df[l, a]
    xi = ns.xi.fn(x)
    chi = -(df.T @ xi - Z.fn(x) @ xi)
    return float(np.max(np.abs(np.asarray(chi))))


def gi_connection(
    ns: NullStructure, Z: TensorFieldOnChart, sample_points=None
) -> ConnectionCoefficients:
    """A G_I connection: Gamma as in the G case, with Z constrained so the
    dilation one-form vanishes and xi becomes covariantly constant."""
    if sample_points is None:
        sample_points = [np.zeros(ns.chart.dim)]
    worst = 0.0
    for p in sample_points:
        _symmetric_z_check(Z, p)
        worst = max(worst, gi_admissibility_residual(ns, Z, p))
    if worst > CHI_TOL:
        raise ConnectionError(
            f"Z is not G_I-admissible: dilation residual {worst:.3e} exceeds {CHI_TOL:.0e}"
        )
    conn = g_connection(ns, Z)
    return ConnectionCoefficients(ns.chart, LEVEL_GI, conn.fn, ns, Z.fn)


# --- covariant derivatives ---------------------------------------------------

def covariant_derivative_vector(
    conn: ConnectionCoefficients, X: TensorFieldOnChart, point
) -> np.ndarray:
    """grad_b X^a = d_b X^a + Gamma^a_{bs} X^s; returned with axes (a, b)."""
    x = jnp.asarray(point, dtype=jnp.float64)
    dX = jax.jacfwd(X.fn)(x)              # dX[a, b]
    out = dX + jnp.einsum("abs,s->ab", conn.fn(x), X.fn(x))
    return np.asarray(out)


def covariant_derivative_oneform(
    conn: ConnectionCoefficients, w: TensorFieldOnChart, point
) -> np.ndarray:
    """grad_b w_a = d_b w_a - Gamma^s_{ba} w_s; returned with axes (a, b)."""
    x = jnp.asarray(point, dtype=jnp.float64)
    dw = jax.jacfwd(w.fn)(x)              # dw[a, b]
    out = dw - jnp.einsum("sba,s->ab", conn.fn(x), w.fn(x))
    return np.asarray(out)


def covariant_derivative_tensor2_cov(
    conn: ConnectionCoefficients, T: TensorFieldOnChart, point
) -> np.ndarray:
    """grad_s T_{ag} for a 2-covariant field; axes (a, g, s)."""
    x = jnp.asarray(point, dtype=jnp.float64)
    dT = jax.jacfwd(T.fn)(x)              # dT[a, g, s]
    G = conn.fn(x)
    Tv = T.fn(x)
    out = dT - jnp.einsum("rsa,rg->ags", G, Tv) - jnp.einsum("rsg,ar->ags", G, Tv)
    return np.asarray(out)


def divergence(conn: ConnectionCoefficients, X: TensorFieldOnChart, point) -> float:
    return float(np.trace(covariant_derivative_vector(conn, X, point)))


def chi_oneform(conn: ConnectionCoefficients, ns: NullStructure, point) -> np.ndarray:
    """chi_a = -xi^l grad_a f_l, cross-checked against -xi^l (d_a f_l - Z_{al})
    and against grad xi = chi (x) xi when the connection stores its Z."""
    grad_f = covariant_derivative_oneform(conn, ns.f, point)   # (l, a)
    xi = ns.xi(point)
    chi = -(xi @ grad_f)
    if conn.z_fn is not None:
        x = jnp.asarray(point, dtype=jnp.float64)
        df = np.asarray(jax.jacfwd(ns.f.fn)(x))                # df[l, a]
        z = np.asarray(conn.z_fn(x))
        chi2 = -(xi @ df - z @ xi)
        if np.max(np.abs(chi - chi2)) > CHI_TOL:
            raise ConnectionError("connection not adapted to structure")
    grad_xi = covariant_derivative_vector(conn, ns.xi, point)  # (a, b)
    if np.max(np.abs(grad_xi - np.outer(xi, chi))) > CHI_TOL:
        raise ConnectionError("grad xi != chi (x) xi: connection not adapted")
    return chi


# --- curvature ---------------------------------------------------------------

def curvature_fn(conn: ConnectionCoefficients) -> Callable:
    """jnp-traceable R^l_{abg} (axes l, a, b, g) in the module convention."""
    G = conn.fn

    def fn(x):
        g = G(x)
        dg = jax.jacfwd(G)(x)             # dg[l, b, a, m] = d_m Gamma^l_{ba}
        dterm = jnp.einsum("lbag->labg", dg) - jnp.einsum("lgab->labg", dg)
        qterm = jnp.einsum("lgs,sba->labg", g, g) - jnp.einsum("lbs,sga->labg", g, g)
        return dterm + qterm

    return fn


def curvature(conn: ConnectionCoefficients, point) -> np.ndarray:
    return np.asarray(curvature_fn(conn)(jnp.asarray(point, dtype=jnp.float64)))


def _bianchi_point_fn(conn: ConnectionCoefficients) -> Callable:
    Rfn = curvature_fn(conn)
    G_fn = conn.fn

    def at_point(x):
        R = Rfn(x)
        first = R + jnp.einsum("lbga->labg", R) + jnp.einsum("lgab->labg", R)
        G = G_fn(x)
        dR = jax.jacfwd(Rfn)(x)           # dR[l, a, b, g, m]
        # grad_m R^l_{abg}, axes (l, a, b, g, m)
        nR = (
            dR
            + jnp.einsum("lms,sabg->labgm", G, R)
            - jnp.einsum("sma,lsbg->labgm", G, R)
            - jnp.einsum("smb,lasg->labgm", G, R)
            - jnp.einsum("smg,labs->labgm", G, R)
        )
        second = (
            nR
            + jnp.einsum("lagmb->labgm", nR)
            + jnp.einsum("lambg->labgm", nR)
        )
        return jnp.array([jnp.max(jnp.abs(first)), jnp.max(jnp.abs(second))])

    return at_point


def bianchi_check(conn: ConnectionCoefficients, point):
    """(first, second) Bianchi residuals; both vanish for torsion-free input."""
    vals = _bianchi_point_fn(conn)(jnp.asarray(point, dtype=jnp.float64))
    return float(vals[0]), float(vals[1])


def bianchi_residuals_many(conn: ConnectionCoefficients, points):
    """Worst (first, second) Bianchi residuals over many points."""
    vals = jax.jit(jax.vmap(_bianchi_point_fn(conn)))(
        jnp.asarray(points, dtype=jnp.float64)
    )
    worst = np.max(np.asarray(vals), axis=0)
    return float(worst[0]), float(worst[1])


def curvature_decomposition_check(
    ns: NullStructure, Z: TensorFieldOnChart, point
) -> float:
    """Residual of the curvature split against the Z = 0 reference connection."""
    x = jnp.asarray(point, dtype=jnp.float64)
    conn = g_connection(ns, Z)
    conn0 = g_connection(
        ns, TensorFieldOnChart(ns.chart, ("down", "down"),
                               lambda y: jnp.zeros((ns.chart.dim, ns.chart.dim)))
    )
    R = curvature_fn(conn)(x)
    R0 = curvature_fn(conn0)(x)
    z = Z.fn(x)
    dz = jax.jacfwd(Z.fn)(x)              # dz[b, a, m] = d_m Z_{ba}
    xi = ns.xi.fn(x)
    chi = jnp.asarray(chi_oneform(conn, ns, np.asarray(x)))
    G0 = conn0.fn(x)
    # (d_[g + chi_[g) Z_{b]a}
    dzc = jnp.einsum("bag->abg", dz) + jnp.einsum("g,ba->abg", chi, z)
    first = 0.5 * (dzc - jnp.einsum("abg->agb", dzc))
    # Gamma0^s_{a[b} Z_{g]s}
    gz = jnp.einsum("sab,gs->abg", G0, z)
    secnd = 0.5 * (gz - jnp.einsum("abg->agb", gz))
    rhs = R0 + 2.0 * jnp.einsum("l,abg->labg", xi, first + secnd)
    return float(jnp.max(jnp.abs(R - rhs)))


def decomposition_residuals_many(ns: NullStructure, Z: TensorFieldOnChart, points) -> float:
    """Worst curvature-split residual over many points, jitted once."""
    conn = g_connection(ns, Z)
    dim = ns.chart.dim
    conn0 = g_connection(
        ns, TensorFieldOnChart(ns.chart, ("down", "down"), lambda y: jnp.zeros((dim, dim)))
    )
    Rf, R0f = curvature_fn(conn), curvature_fn(conn0)
    xi_fn, f_fn, z_fn, G0_fn = ns.xi.fn, ns.f.fn, Z.fn, conn0.fn

    def at_point(x):
        z = z_fn(x)
        dz = jax.jacfwd(z_fn)(x)
        xi = xi_fn(x)
        df = jax.jacfwd(f_fn)(x)
        chi = -(df.T @ xi - z @ xi)
        dzc = jnp.einsum("bag->abg", dz) + jnp.einsum("g,ba->abg", chi, z)
        first = 0.5 * (dzc - jnp.einsum("abg->agb", dzc))
        gz = jnp.einsum("sab,gs->abg", G0_fn(x), z)
        secnd = 0.5 * (gz - jnp.einsum("abg->agb", gz))
        rhs = R0f(x) + 2.0 * jnp.einsum("l,abg->labg", xi, first + secnd)
        return jnp.max(jnp.abs(Rf(x) - rhs))

    vals = jax.jit(jax.vmap(at_point))(jnp.asarray(points, dtype=jnp.float64))
    return float(np.max(np.asarray(vals)))


def chi_relation_residuals_many(
    conn: ConnectionCoefficients, ns: NullStructure, points
) -> float:
    """Worst residual of the dilation-curvature relation over many points."""
    G_fn, xi_fn, f_fn = conn.fn, ns.xi.fn, ns.f.fn
    Rf = curvature_fn(conn)

    def chi_fn(y):
        grad_f = jax.jacfwd(f_fn)(y) - jnp.einsum("sla,s->la", G_fn(y), f_fn(y))
        return -jnp.einsum("l,la->a", xi_fn(y), grad_f)

    def at_point(x):
        grad_chi = jax.jacfwd(chi_fn)(x) - jnp.einsum("sba,s->ab", G_fn(x), chi_fn(x))
        lhs = 0.5 * (grad_chi.T - grad_chi)
        rhs = 0.5 * jnp.einsum("a,labg,l->gb", xi_fn(x), Rf(x), f_fn(x))
        return jnp.max(jnp.abs(lhs - rhs))

    vals = jax.jit(jax.vmap(at_point))(jnp.asarray(points, dtype=jnp.float64))
    return float(np.max(np.asarray(vals)))


def chi_curvature_relation_residual(
    conn: ConnectionCoefficients, ns: NullStructure, point
) -> float:
    """Residual of grad_[g chi_b] = 1/2 xi^a R^l_{a[bg]} f_l."""
    x = np.asarray(point, dtype=float)
    chi_field = TensorFieldOnChart(
        ns.chart, ("down",),
        lambda y: -jnp.einsum(
            "l,la->a",
            ns.xi.fn(y),
            jax.jacfwd(ns.f.fn)(y) - jnp.einsum("sla,s->la", conn.fn(y), ns.f.fn(y)),
        ),
    )
    grad_chi = covariant_derivative_oneform(conn, chi_field, x)    # (b, g)
    lhs = 0.5 * (grad_chi.T - grad_chi)                            # grad_[g chi_b]
    R = curvature(conn, x)
    rhs = 0.5 * np.einsum("a,labg,l->gb", ns.xi(x), R, ns.f(x))
    # rhs[g, b] corresponds to the (g, b) slot pattern of lhs[g, b]
    return float(np.max(np.abs(lhs - rhs)))


def connection_difference(
    c1: ConnectionCoefficients, c2: ConnectionCoefficients, point, tol: float = DIFF_TOL
):
    """Split Gamma1 - Gamma2 as xi (x) DeltaZ; returns (DeltaZ, off-xi residual)."""
    if c1.structure is None or c1.structure is not c2.structure:
        if c2.structure is None or c1.structure is None:
            raise ConnectionError("both connections need a common structure")
    ns = c1.structure
    d = c1(point) - c2(point)
    f = ns.f(point)
    xi = ns.xi(point)
    delta_z = np.einsum("a,abg->bg", f, d)
    residual = float(np.max(np.abs(d - np.einsum("a,bg->abg", xi, delta_z))))
    if residual > tol:
        raise ConnectionError(
            f"connections not over the same radiation structure (residual {residual:.3e})"
        )
    return delta_z, residual
