"""The end-to-end verification suite shared by the test suite and the CLI.

Each criterion function returns a list of CheckResult records: a name, a
numeric residual (or count), the tolerance it is held to, and the verdict.
Everything is deterministic given the seed.

Known geometric caveat, reported rather than hidden: the light-cone
scenario cannot satisfy the metric-parallelism and divergence-dilation
identities.  Those identities characterize radiation connections, which
exist only over non-expanding structures (a torsion-free connection with
grad beta = 0 and grad xi = chi (x) xi forces L_xi beta = 0), while the
cone congruence expands with div xi = 2/r.  The suite evaluates the
checks as specified, reports the failures, and additionally verifies
that the defect equals the expansion exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import jax
import jax.numpy as jnp
import numpy as np

from . import automorphisms as am
from . import stress_energy as se
from .ambient import (
    induced_radiation_connection,
    levi_civita,
    reduction_obstruction,
    ricci_coefficients_fn,
    ricci_in_adapted_frame,
    scalar_curvature,
)
from .connections import (
    bianchi_residuals_many,
    chi_relation_residuals_many,
    connection_difference,
    decomposition_residuals_many,
    g_connection,
    gr_connection,
)
from .fields import TensorFieldOnChart, constant_tensor_field, lie_derivative_tensor
from .groups import (
    LEVEL_G,
    LEVEL_GI,
    LEVEL_GR,
    LEVELS,
    canonical_contravariant_form,
    canonical_covariant_form,
    compose,
    embed_in_gl_n,
    embed_in_lorentz,
    lorentz_pairing,
    random_element,
)
from .scenarios import (
    ScenarioBundle,
    flat_standard_structure,
    flat_z_random,
    get_scenario,
    random_symmetric_polynomial_z,
)

DEFAULT_SEED = 20260823


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""
    known_defect: bool = False

    def line(self) -> str:
        if self.passed:
            verdict = "PASS"
        elif self.known_defect:
            verdict = "FAIL (known geometric defect)"
        else:
            verdict = "FAIL"
        note = f"  [{self.note}]" if self.note else ""
        return (
            f"[{verdict}] c{self.criterion} {self.name}: "
            f"residual {self.residual:.3e} vs tol {self.tolerance:.1e}{note}"
        )


def _result(criterion, name, residual, tol, note="", invert=False, known_defect=False):
    residual = float(residual)
    passed = residual > tol if invert else residual <= tol
    return CheckResult(criterion, name, residual, tol, passed, note, known_defect)


def resolve_seed(seed=None) -> int:
    env = os.environ.get("NULLFRAME_SEED")
    if seed is not None:
        return int(seed)
    if env is not None:
        return int(env)
    return DEFAULT_SEED


# --- criterion 1: group identities ---------------------------------------------

def criterion_1(seed=None, tol_scale: float = 1.0, count: int = 1000):
    rng = np.random.default_rng(resolve_seed(seed))
    out = []
    for n in (3, 4):
        S = lorentz_pairing(n)
        cov = canonical_covariant_form(n).matrix
        con = canonical_contravariant_form(n).matrix
        for level in LEVELS:
            elements = [random_element(n, level, rng) for _ in range(count)]
            inv_res = 0.0
            for g in elements:
                M = embed_in_lorentz(g).entries
                inv_res = max(inv_res, np.max(np.abs(M.T @ S @ M - S)))
                m = embed_in_gl_n(g).entries
                inv_res = max(inv_res, np.max(np.abs(m.T @ cov @ m - cov)))
                if level == LEVEL_GI:
                    inv_res = max(inv_res, np.max(np.abs(m @ con @ m.T - con)))
            out.append(
                _result(
                    1,
                    f"embedding invariances n={n} {level} ({count} elements)",
                    inv_res,
                    1e-10 * tol_scale,
                )
            )
            hom_res = 0.0
            for g1, g2 in zip(elements[::2], elements[1::2]):
                g12 = compose(g1, g2)
                hom_res = max(
                    hom_res,
                    np.max(
                        np.abs(
                            embed_in_lorentz(g12).entries
                            - embed_in_lorentz(g1).entries @ embed_in_lorentz(g2).entries
                        )
                    ),
                    np.max(
                        np.abs(
                            embed_in_gl_n(g12).entries
                            - embed_in_gl_n(g1).entries @ embed_in_gl_n(g2).entries
                        )
                    ),
                )
            out.append(
                _result(
                    1,
                    f"composition homomorphism n={n} {level}",
                    hom_res,
                    1e-12 * tol_scale,
                )
            )
    return out


# --- criterion 2: connection invariants ----------------------------------------

def _invariant_stats(sc: ScenarioBundle, points: np.ndarray):
    """(max |grad beta|, max |grad xi - chi (x) xi|, max |grad xi|,
    max |div xi|, max |div xi - chi(xi)|) over the sampled points."""
    ns, conn = sc.structure, sc.connection
    beta_fn, xi_fn, f_fn = ns.metric.beta.fn, ns.xi.fn, ns.f.fn
    G_fn, z_fn = conn.fn, conn.z_fn

    def at_point(x):
        G = G_fn(x)
        b = beta_fn(x)
        db = jax.jacfwd(beta_fn)(x)
        grad_b = (
            db
            - jnp.einsum("rsa,rg->ags", G, b)
            - jnp.einsum("rsg,ar->ags", G, b)
        )
        xi = xi_fn(x)
        grad_xi = jax.jacfwd(xi_fn)(x) + jnp.einsum("abs,s->ab", G, xi)
        df = jax.jacfwd(f_fn)(x)          # df[l, a]
        chi = -(df.T @ xi - z_fn(x) @ xi)
        div = jnp.trace(grad_xi)
        return jnp.array(
            [
                jnp.max(jnp.abs(grad_b)),
                jnp.max(jnp.abs(grad_xi - jnp.outer(xi, chi))),
                jnp.max(jnp.abs(grad_xi)),
                jnp.abs(div),
                jnp.abs(div - chi @ xi),
            ]
        )

    vals = jax.jit(jax.vmap(at_point))(jnp.asarray(points))
    return np.max(np.asarray(vals), axis=0)


def criterion_2(seed=None, tol_scale: float = 1.0, samples: int = 100):
    rng = np.random.default_rng(resolve_seed(seed) + 2)
    names = [
        "minkowski-null-plane",
        "pp-wave",
        "minkowski-light-cone",
        "flat-z-random-0",
        "flat-z-random-1",
        "flat-z-random-2",
    ]
    out = []
    for name in names:
        sc = get_scenario(name)
        pts = sc.sample_points(samples, rng)
        grad_b, adapt, grad_xi, div, div_chi = _invariant_stats(sc, pts)
        cone = name == "minkowski-light-cone"
        note = "expanding congruence: no metric radiation connection exists" if cone else ""
        out.append(
            _result(
                2, f"{name}: grad beta = 0", grad_b, 1e-8 * tol_scale, note,
                known_defect=cone,
            )
        )
        out.append(
            _result(
                2, f"{name}: grad xi = chi (x) xi", adapt, 1e-8 * tol_scale, note,
                known_defect=cone,
            )
        )
        if name == "pp-wave":
            out.append(
                _result(2, "pp-wave: grad xi = 0", grad_xi, 1e-8 * tol_scale)
            )
            out.append(_result(2, "pp-wave: div xi = 0", div, 1e-8 * tol_scale))
        if name == "minkowski-light-cone":
            out.append(
                _result(
                    2,
                    "light cone: div xi = chi(xi)",
                    div_chi,
                    1e-6 * tol_scale,
                    "defect equals the expansion 2/r",
                    known_defect=True,
                )
            )
            # quantify the defect: div xi - chi(xi) must be exactly 2/r
            expansion_err = _cone_expansion_defect(sc, pts)
            out.append(
                _result(
                    2,
                    "light cone: (div xi - chi(xi)) - 2/r = 0",
                    expansion_err,
                    1e-8 * tol_scale,
                )
            )
    return out


def _cone_expansion_defect(sc: ScenarioBundle, points: np.ndarray) -> float:
    ns, conn = sc.structure, sc.connection
    G_fn, xi_fn, f_fn, z_fn = conn.fn, ns.xi.fn, ns.f.fn, conn.z_fn

    def at_point(x):
        xi = xi_fn(x)
        grad_xi = jax.jacfwd(xi_fn)(x) + jnp.einsum("abs,s->ab", G_fn(x), xi)
        df = jax.jacfwd(f_fn)(x)
        chi = -(df.T @ xi - z_fn(x) @ xi)
        return jnp.abs(jnp.trace(grad_xi) - chi @ xi - 2.0 / x[2])

    return float(np.max(np.asarray(jax.jit(jax.vmap(at_point))(jnp.asarray(points)))))


# --- criterion 3: connection difference lemma -----------------------------------

def criterion_3(seed=None, tol_scale: float = 1.0, pairs: int = 10):
    rng = np.random.default_rng(resolve_seed(seed) + 3)
    ns = flat_standard_structure(3)
    worst_dz, worst_off = 0.0, 0.0
    for _ in range(pairs):
        Z1 = random_symmetric_polynomial_z(ns.chart, rng)
        Z2 = random_symmetric_polynomial_z(ns.chart, rng)
        c1, c2 = g_connection(ns, Z1), g_connection(ns, Z2)
        for pt in rng.uniform(-1.5, 1.5, (3, 3)):
            dz, off = connection_difference(c1, c2, pt)
            worst_dz = max(worst_dz, float(np.max(np.abs(dz - (Z1(pt) - Z2(pt))))))
            worst_off = max(worst_off, off)
    return [
        _result(3, f"difference lemma DeltaZ recovery ({pairs} pairs)", worst_dz, 1e-10 * tol_scale),
        _result(3, "difference lemma off-xi residual", worst_off, 1e-10 * tol_scale),
    ]


# --- criterion 4: curvature identities ------------------------------------------

def criterion_4(seed=None, tol_scale: float = 1.0, points_per: int = 4):
    rng = np.random.default_rng(resolve_seed(seed) + 4)
    out = []
    for name in ("flat-z-random-0", "flat-z-random-1", "flat-z-random-2", "curved-beta"):
        sc = get_scenario(name)
        ns, conn = sc.structure, sc.connection
        Z = TensorFieldOnChart(ns.chart, ("down", "down"), conn.z_fn)
        pts = sc.sample_points(points_per, rng)
        dec = decomposition_residuals_many(ns, Z, pts)
        rel = chi_relation_residuals_many(conn, ns, pts)
        b1, b2 = bianchi_residuals_many(conn, pts)
        out.append(_result(4, f"{name}: curvature decomposition", dec, 1e-6 * tol_scale))
        out.append(_result(4, f"{name}: chi-curvature relation", rel, 1e-6 * tol_scale))
        out.append(_result(4, f"{name}: first Bianchi", b1, 1e-6 * tol_scale))
        out.append(_result(4, f"{name}: second Bianchi", b2, 1e-6 * tol_scale))
    return out


# --- criterion 5: obstruction dichotomy -----------------------------------------

def _obstruction_stats(sc: ScenarioBundle, points: np.ndarray):
    amb = sc.ambient
    gamma_fn = ricci_coefficients_fn(levi_civita(amb.metric), amb.frame)
    emb_fn = amb.embedding.fn

    def at_point(x):
        return gamma_fn(emb_fn(x))

    gammas = np.asarray(jax.jit(jax.vmap(at_point))(jnp.asarray(points)))
    vals = [reduction_obstruction(g) for g in gammas]
    return min(vals), max(vals)


def criterion_5(seed=None, tol_scale: float = 1.0, samples: int = 25):
    rng = np.random.default_rng(resolve_seed(seed) + 5)
    out = []
    for name in ("minkowski-null-plane", "pp-wave"):
        sc = get_scenario(name)
        _, worst = _obstruction_stats(sc, sc.sample_points(samples, rng))
        out.append(
            _result(5, f"{name}: reduction obstruction = 0", worst, 1e-8 * tol_scale)
        )
    cone = get_scenario("minkowski-light-cone")
    least, _ = _obstruction_stats(cone, cone.sample_points(samples, rng))
    out.append(
        _result(
            5,
            "light cone: reduction obstruction > 1e-3",
            least,
            1e-3,
            "smallest sampled obstruction; passes by exceeding",
            invert=True,
        )
    )
    # induced connection vs gr_connection from independently pulled-back data
    pp = get_scenario("pp-wave")
    ns = pp.structure
    chi0 = constant_tensor_field(ns.chart, ("down",), np.zeros(3))
    manual = gr_connection(ns, chi0)
    induced, _, _ = induced_radiation_connection(
        pp.ambient.metric, pp.ambient.frame, pp.ambient.embedding
    )
    pts = jnp.asarray(pp.sample_points(20, rng))
    diff = jax.jit(jax.vmap(lambda x: jnp.max(jnp.abs(induced.fn(x) - manual.fn(x)))))
    worst = float(np.max(np.asarray(diff(pts))))
    out.append(
        _result(5, "pp-wave: induced vs pulled-back G_R connection", worst, 1e-8 * tol_scale)
    )
    return out


# --- criterion 6: automorphism algebra ------------------------------------------

def criterion_6(seed=None, tol_scale: float = 1.0, killing_points: int = 20):
    rng = np.random.default_rng(resolve_seed(seed) + 6)
    out = []
    for n in (2, 3, 4, 5):
        ns = flat_standard_structure(n)
        zero_z = constant_tensor_field(ns.chart, ("down", "down"), np.zeros((n, n)))
        conn = g_connection(ns, zero_z)
        basis = am.solve_standard_automorphisms(ns, conn, rng)
        expected = am.expected_dimension(n)
        out.append(
            _result(
                6,
                f"n={n}: automorphism dimension = {expected}",
                abs(basis.dimension - expected),
                0.0,
                f"found {basis.dimension}",
            )
        )
        pts = rng.uniform(-1.5, 1.5, (killing_points, n))
        worst = float(np.max(am.affine_killing_stats(ns, conn, basis.elements, pts)))
        out.append(
            _result(
                6,
                f"n={n}: basis passes the residual triple at {killing_points} points",
                worst,
                1e-7 * tol_scale,
            )
        )
        out.append(
            _result(6, f"n={n}: Jacobi identity", basis.jacobi_residual(), 1e-10 * tol_scale)
        )
    # the non-affine counterexample: passes i)+ii), fails iii)
    ns = flat_standard_structure(3)
    zero_z = constant_tensor_field(ns.chart, ("down", "down"), np.zeros((3, 3)))
    conn = g_connection(ns, zero_z)
    X = am.quadratic_counterexample_field(ns.chart)
    pt = np.array([0.7, -0.3, 0.4])
    lb = float(np.max(np.abs(lie_derivative_tensor(X, ns.metric.beta, pt))))
    lb2, kr, cr, _ = am.radiation_killing_residual(X, ns, conn, pt)
    out.append(
        _result(6, "counterexample: conditions i) and ii) hold", max(lb, lb2, kr), 1e-12)
    )
    out.append(
        _result(
            6,
            "counterexample: condition iii) fails (residual 2)",
            cr,
            1.0,
            "passes by exceeding",
            invert=True,
        )
    )
    return out


# --- criterion 7: stress-energy shapes ------------------------------------------

def criterion_7(seed=None, tol_scale: float = 1.0):
    rng = np.random.default_rng(resolve_seed(seed) + 7)
    out = []
    worst = 0.0
    for _ in range(50):
        lam, pi, sig, r1, r2, r3 = rng.uniform(-2.0, 2.0, 6)
        trials = [
            se.StressEnergyPattern(LEVEL_G, lam, pi, sig, r1, r2, r3, S=0.0),
            se.StressEnergyPattern(LEVEL_GI, 0.0, pi, 0.0, r1, r2, r3, S=2 * r3),
            se.StressEnergyPattern(LEVEL_GR, lam, 0.0, 0.0, 0.0, 0.0, r3, S=2 * (r3 - lam)),
        ]
        for p in trials:
            fitted, res = se.classify(se.pattern_matrix(p), p.level, p.S)
            worst = max(
                worst,
                res,
                float(np.max(np.abs(np.subtract(fitted.parameters(), p.parameters())))),
            )
    out.append(_result(7, "pattern round-trip on 150 seeded patterns", worst, 1e-12))

    pp = get_scenario("pp-wave-dust")
    amb = pp.ambient
    worst = 0.0
    for pt in pp.sample_points(10, rng):
        y = amb.embedding(pt)
        ric = ricci_in_adapted_frame(amb.metric, amb.frame, y)
        S = scalar_curvature(amb.metric, y)
        _, res = se.classify(ric, LEVEL_GI, S)
        worst = max(worst, res)
    out.append(
        _result(7, "pp-wave Ricci fits the G_I shape", worst, 1e-8 * tol_scale)
    )

    forbidden = np.zeros((4, 4))
    forbidden[3, 3] = 1.0
    least = min(se.classify(forbidden, level)[1] for level in LEVELS)
    out.append(
        _result(
            7,
            "forbidden slot (3,3) rejected at every level",
            least,
            1.0 - 1e-12,
            "passes by exceeding",
            invert=True,
        )
    )
    return out


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
}


def run_criterion(k: int, seed=None, tol_scale: float = 1.0):
    return CRITERIA[k](seed=seed, tol_scale=tol_scale)


def run_all(seed=None, tol_scale: float = 1.0):
    results = []
    for k in sorted(CRITERIA):
        results.extend(run_criterion(k, seed=seed, tol_scale=tol_scale))
    return results
