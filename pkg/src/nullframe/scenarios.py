"""Built-in example spacetimes and radiation structures.

Each scenario bundles an intrinsic null structure with a connection and,
where it exists, the ambient metric / adapted frame / embedding that the
structure is induced from.  Sampling boxes keep evaluation away from
chart degeneracies (the cone vertex, the spherical poles).

The light cone deserves a remark: its generator congruence expands
(div xi = 2/r), so no torsion-free connection on the cone parallelizes
beta; the connection carried by that scenario is the level-G_R
projection of the pulled-back data and the scenario is the negative
control for the reduction obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import jax.numpy as jnp
import numpy as np

from .ambient import (
    AdaptedFrameField,
    HypersurfaceEmbedding,
    LorentzMetric,
    induced_radiation_connection,
)
from .connections import (
    ConnectionCoefficients,
    g_connection,
    gi_connection,
    gr_connection,
)
from .fields import Chart, TensorFieldOnChart, constant_tensor_field, pp_wave_profile
from .hypersurface import DegenerateMetric, NullStructure


class ScenarioError(ValueError):
    """Raised for unknown scenario names or malformed scenario data."""


@dataclass(frozen=True)
class AmbientBundle:
    metric: LorentzMetric
    frame: AdaptedFrameField
    embedding: HypersurfaceEmbedding


@dataclass(frozen=True)
class ScenarioBundle:
    name: str
    description: str
    structure: NullStructure
    connection: ConnectionCoefficients
    sample_low: np.ndarray = field(repr=False)
    sample_high: np.ndarray = field(repr=False)
    ambient: AmbientBundle | None = None
    expect_obstruction: str = "zero"  # or "nonzero" or "n/a"

    @property
    def n(self) -> int:
        return self.structure.chart.dim

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.sample_low, self.sample_high, (count, self.n))


def _intrinsic_flat_structure(n: int = 3) -> NullStructure:
    chart = Chart(n, tuple(f"x{i + 1}" for i in range(n)))
    beta = DegenerateMetric(
        chart,
        constant_tensor_field(
            chart, ("down", "down"), np.diag(np.r_[np.ones(n - 1), 0.0])
        ),
    )
    xi = constant_tensor_field(chart, ("up",), np.r_[np.zeros(n - 1), 1.0])
    f = constant_tensor_field(chart, ("down",), np.r_[np.zeros(n - 1), 1.0])
    return NullStructure(beta, xi, f)


def flat_standard_structure(n: int = 3) -> NullStructure:
    """The integrable model: beta = diag(1..1,0), xi = d_n, f = dx^n."""
    return _intrinsic_flat_structure(n)


# --- ambient builders ---------------------------------------------------------

def _null_plane_ambient(H_fn=None):
    """Plane-wave family 2 du dv + H du^2 + dx^2 + dy^2; H = 0 is Minkowski."""
    chart = Chart(4, ("u", "x", "y", "v"))

    def g_fn(p):
        h = H_fn(p) if H_fn is not None else 0.0
        g = jnp.zeros((4, 4))
        g = g.at[0, 0].set(h)
        g = g.at[0, 3].set(1.0)
        g = g.at[3, 0].set(1.0)
        g = g.at[1, 1].set(1.0)
        g = g.at[2, 2].set(1.0)
        return g

    metric = LorentzMetric(chart, TensorFieldOnChart(chart, ("down", "down"), g_fn))

    def frame_fn(p):
        h = H_fn(p) if H_fn is not None else 0.0
        E = jnp.zeros((4, 4))
        E = E.at[0, 0].set(-1.0)          # e_0 = -d_u + (H/2) d_v
        E = E.at[3, 0].set(0.5 * h)
        E = E.at[1, 1].set(1.0)
        E = E.at[2, 2].set(1.0)
        E = E.at[3, 3].set(1.0)           # e_n = d_v
        return E

    frame = AdaptedFrameField(chart, frame_fn)
    return metric, frame


def _plane_scenario(name, description, H_fn, connection_kind, u0=0.0):
    metric, frame = _null_plane_ambient(H_fn)
    chart = Chart(3, ("x", "y", "v"))
    xi = constant_tensor_field(chart, ("up",), np.array([0.0, 0.0, 1.0]))
    emb = HypersurfaceEmbedding(
        chart,
        metric.chart,
        lambda x: jnp.array([u0, x[0], x[1], x[2]]),
        xi,
    )
    conn, ns, chi = induced_radiation_connection(metric, frame, emb)
    if connection_kind == "gi":
        zero_z = constant_tensor_field(chart, ("down", "down"), np.zeros((3, 3)))
        conn = gi_connection(ns, zero_z, [np.array([0.3, -0.4, 0.7])])
    return ScenarioBundle(
        name,
        description,
        ns,
        conn,
        sample_low=np.array([-2.0, -2.0, -2.0]),
        sample_high=np.array([2.0, 2.0, 2.0]),
        ambient=AmbientBundle(metric, frame, emb),
        expect_obstruction="zero",
    )


def minkowski_null_plane() -> ScenarioBundle:
    return _plane_scenario(
        "minkowski-null-plane",
        "Null hyperplane u = 0 in Minkowski space written in double-null "
        "coordinates; flat structure, vanishing connection, zero obstruction.",
        None,
        "gr",
    )


def pp_wave(a_coeffs=(1.0,), b_coeffs=(0.0, 0.5), c_coeffs=()) -> ScenarioBundle:
    H_fn = pp_wave_profile(a_coeffs, b_coeffs, c_coeffs)
    kind = "vacuum" if not any(c_coeffs) else "null-dust"
    return _plane_scenario(
        "pp-wave" if kind == "vacuum" else "pp-wave-dust",
        "Plane-fronted wave 2 du dv + H(u,x,y) du^2 + dx^2 + dy^2 on the "
        "wavefront u = 0; the generator xi = d_v is covariantly constant "
        "(level G_I), the obstruction vanishes and the induced connection "
        f"is flat on the hypersurface chart ({kind} profile).",
        H_fn,
        "gi",
    )


def pp_wave_dust() -> ScenarioBundle:
    return pp_wave(a_coeffs=(1.0,), b_coeffs=(0.0, 0.5), c_coeffs=(0.75,))


def minkowski_light_cone() -> ScenarioBundle:
    chart_a = Chart(4, ("t", "th", "ph", "r"))

    def g_fn(p):
        r, th = p[3], p[1]
        g = jnp.zeros((4, 4))
        g = g.at[0, 0].set(-1.0)
        g = g.at[1, 1].set(r**2)
        g = g.at[2, 2].set((r * jnp.sin(th)) ** 2)
        g = g.at[3, 3].set(1.0)
        return g

    metric = LorentzMetric(chart_a, TensorFieldOnChart(chart_a, ("down", "down"), g_fn))

    def frame_fn(p):
        r, th = p[3], p[1]
        E = jnp.zeros((4, 4))
        E = E.at[0, 0].set(0.5)           # e_0 = (d_t - d_r) / 2
        E = E.at[3, 0].set(-0.5)
        E = E.at[1, 1].set(1.0 / r)
        E = E.at[2, 2].set(1.0 / (r * jnp.sin(th)))
        E = E.at[0, 3].set(1.0)           # e_n = d_t + d_r
        E = E.at[3, 3].set(1.0)
        return E

    frame = AdaptedFrameField(chart_a, frame_fn)
    chart = Chart(3, ("th", "ph", "r"), "away from the vertex and the poles")
    xi = constant_tensor_field(chart, ("up",), np.array([0.0, 0.0, 1.0]))
    emb = HypersurfaceEmbedding(
        chart, chart_a, lambda x: jnp.array([x[2], x[0], x[1], x[2]]), xi
    )
    conn, ns, _chi = induced_radiation_connection(metric, frame, emb)
    return ScenarioBundle(
        "minkowski-light-cone",
        "Future light cone t = r of the Minkowski origin; the generator "
        "congruence expands (div xi = 2/r), the reduction obstruction is "
        "nonzero and the carried connection is only the level-G_R "
        "projection of the pulled-back data.",
        ns,
        conn,
        sample_low=np.array([0.4, 0.2, 0.6]),
        sample_high=np.array([2.7, 6.0, 2.5]),
        ambient=AmbientBundle(metric, frame, emb),
        expect_obstruction="nonzero",
    )


# --- intrinsic polynomial scenarios -------------------------------------------

def random_symmetric_polynomial_z(
    chart: Chart, rng: np.random.Generator, degree: int = 2, scale: float = 0.5
) -> TensorFieldOnChart:
    """Symmetric 2-covariant field with seeded polynomial entries."""
    n = chart.dim
    exps = [e for e in np.ndindex(*(degree + 1,) * n) if sum(e) <= degree]
    coeffs = {
        (i, j): [(scale * rng.uniform(-1.0, 1.0), e) for e in exps]
        for i in range(n)
        for j in range(i, n)
    }

    def fn(x):
        out = jnp.zeros((n, n))
        for (i, j), terms in coeffs.items():
            v = 0.0
            for c, e in terms:
                t = c
                for k, p in enumerate(e):
                    if p:
                        t = t * x[k] ** p
                v = v + t
            out = out.at[i, j].set(v)
            if i != j:
                out = out.at[j, i].set(v)
        return out

    return TensorFieldOnChart(chart, ("down", "down"), fn)


def flat_z_random(index: int, seed: int = 20240) -> ScenarioBundle:
    ns = _intrinsic_flat_structure(3)
    rng = np.random.default_rng(seed + index)
    Z = random_symmetric_polynomial_z(ns.chart, rng)
    return ScenarioBundle(
        f"flat-z-random-{index}",
        "Flat standard structure with a seeded random symmetric polynomial "
        "Z field; a generic level-G radiation connection.",
        ns,
        g_connection(ns, Z),
        sample_low=np.full(3, -1.5),
        sample_high=np.full(3, 1.5),
        expect_obstruction="n/a",
    )


def curved_beta() -> ScenarioBundle:
    """Curved degenerate metric, independent of the kernel coordinate."""
    chart = Chart(3, ("x1", "x2", "x3"))

    def beta_fn(x):
        b = jnp.zeros((3, 3))
        b = b.at[0, 0].set(1.0 + x[0] ** 2)
        b = b.at[1, 1].set(1.0)
        return b

    beta = DegenerateMetric(chart, TensorFieldOnChart(chart, ("down", "down"), beta_fn))
    xi = constant_tensor_field(chart, ("up",), np.array([0.0, 0.0, 1.0]))
    f = constant_tensor_field(chart, ("down",), np.array([0.0, 0.0, 1.0]))
    ns = NullStructure(beta, xi, f)
    rng = np.random.default_rng(777)
    Z = random_symmetric_polynomial_z(chart, rng)
    return ScenarioBundle(
        "curved-beta",
        "Rank-2 metric with a curved spatial block independent of the "
        "kernel coordinate, plus a seeded polynomial Z field (level G).",
        ns,
        g_connection(ns, Z),
        sample_low=np.full(3, -1.2),
        sample_high=np.full(3, 1.2),
        expect_obstruction="n/a",
    )


def gr_constant_chi(c: float = 0.8) -> ScenarioBundle:
    """Flat structure with chi = c dx^n: the level-G_R example with
    Gamma^n_{nn} = c as the only nonzero coefficient."""
    ns = _intrinsic_flat_structure(3)
    chi = constant_tensor_field(ns.chart, ("down",), np.array([0.0, 0.0, c]))
    return ScenarioBundle(
        "gr-constant-chi",
        "Flat standard structure with a constant dilation one-form along "
        "f; the simplest nontrivial level-G_R connection.",
        ns,
        gr_connection(ns, chi),
        sample_low=np.full(3, -2.0),
        sample_high=np.full(3, 2.0),
        expect_obstruction="n/a",
    )


BUILTIN_SCENARIOS = {
    "minkowski-null-plane": minkowski_null_plane,
    "pp-wave": pp_wave,
    "pp-wave-dust": pp_wave_dust,
    "minkowski-light-cone": minkowski_light_cone,
    "flat-z-random-0": lambda: flat_z_random(0),
    "flat-z-random-1": lambda: flat_z_random(1),
    "flat-z-random-2": lambda: flat_z_random(2),
    "curved-beta": curved_beta,
    "gr-constant-chi": gr_constant_chi,
}


def get_scenario(name: str) -> ScenarioBundle:
    try:
        builder = BUILTIN_SCENARIOS[name]
    except KeyError:
        raise ScenarioError(f"unknown scenario {name!r}") from None
    return builder()


def list_scenarios() -> list[str]:
    return sorted(BUILTIN_SCENARIOS)


def describe_scenario(name: str) -> str:
    return get_scenario(name).description
