import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nullframe.groups import (
    LEVEL_G,
    LEVEL_GI,
    LEVEL_GR,
    LEVELS,
    GroupElement,
    GroupError,
    act_on_frame,
    act_on_hypersurface_coframe,
    canonical_contravariant_form,
    canonical_covariant_form,
    compose,
    embed_in_gl_n,
    embed_in_lorentz,
    extract_parameters,
    factor_dense_subset,
    identity_element,
    inverse,
    is_member,
    lorentz_pairing,
    random_element,
)
from nullframe.tensor_core import FrameMatrix

seeds = st.integers(min_value=0, max_value=2**32 - 1)
levels = st.sampled_from(LEVELS)
dims = st.sampled_from([3, 4, 5])


def test_lorentz_pairing_shape():
    S = lorentz_pairing(3)
    expected = np.array(
        [
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
        ]
    )
    assert np.array_equal(S, expected)


@settings(max_examples=40, deadline=None)
@given(seeds, levels, dims)
def test_lorentz_embedding_preserves_pairing(seed, level, n):
    g = random_element(n, level, np.random.default_rng(seed))
    M = embed_in_lorentz(g).entries
    S = lorentz_pairing(n)
    assert np.max(np.abs(M.T @ S @ M - S)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seeds, levels, dims)
def test_gl_embedding_preserves_covariant_form(seed, level, n):
    g = random_element(n, level, np.random.default_rng(seed))
    ok, res = is_member(embed_in_gl_n(g), canonical_covariant_form(n))
    assert ok, res


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_gi_preserves_contravariant_form(seed, n):
    g = random_element(n, LEVEL_GI, np.random.default_rng(seed))
    ok, res = is_member(embed_in_gl_n(g), canonical_contravariant_form(n))
    assert ok, res


def test_generic_g_breaks_contravariant_form():
    g = GroupElement(2.0, np.eye(2), np.zeros(2), LEVEL_G)
    ok, res = is_member(embed_in_gl_n(g), canonical_contravariant_form(3))
    assert not ok and res > 1.0


@settings(max_examples=40, deadline=None)
@given(seeds, levels, dims)
def test_compose_matches_matrix_product(seed, level, n):
    rng = np.random.default_rng(seed)
    g1, g2 = random_element(n, level, rng), random_element(n, level, rng)
    g12 = compose(g1, g2)
    for embed in (embed_in_lorentz, embed_in_gl_n):
        prod = embed(g1).entries @ embed(g2).entries
        assert np.max(np.abs(embed(g12).entries - prod)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, levels, dims)
def test_inverse_and_identity(seed, level, n):
    g = random_element(n, level, np.random.default_rng(seed))
    e = compose(g, inverse(g))
    ident = identity_element(n, level)
    assert abs(e.a - ident.a) < 1e-12
    assert np.max(np.abs(e.R - ident.R)) < 1e-12
    assert np.max(np.abs(e.U)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, levels, dims)
def test_extract_parameters_round_trip(seed, level, n):
    g = random_element(n, level, np.random.default_rng(seed))
    h = extract_parameters(embed_in_gl_n(g), level)
    assert abs(g.a - h.a) < 1e-12
    assert np.max(np.abs(g.R - h.R)) < 1e-12
    assert np.max(np.abs(g.U - h.U)) < 1e-12


def test_act_on_frame_matches_embedding_columns():
    rng = np.random.default_rng(11)
    n = 3
    g = random_element(n, LEVEL_G, rng)
    eye = np.eye(n + 1)
    e0, ebar, en = eye[:, 0], eye[:, 1:n], eye[:, n]
    new_e0, new_ebar, new_en = act_on_frame(g, (e0, ebar, en))
    M = embed_in_lorentz(g).entries
    assert np.allclose(new_e0, M[:, 0])
    assert np.allclose(new_ebar, M[:, 1:n])
    assert np.allclose(new_en, M[:, n])


def test_hypersurface_coframe_action_preserves_beta():
    # beta = sum_A thbar_A (x) thbar_A is invariant: the middle legs only rotate
    rng = np.random.default_rng(12)
    n = 4
    g = random_element(n, LEVEL_G, rng)
    thbar = rng.standard_normal((n - 1, n))
    thn = rng.standard_normal(n)
    new_thbar, _ = act_on_hypersurface_coframe(g, (thbar, thn))
    beta = thbar.T @ thbar
    assert np.allclose(new_thbar.T @ new_thbar, beta)


def test_factor_dense_subset_round_trip():
    rng = np.random.default_rng(13)
    g = random_element(4, LEVEL_G, rng)
    M = embed_in_lorentz(g)
    T, D, N = factor_dense_subset(M)
    assert np.max(np.abs(T @ D @ N - M.entries)) < 1e-10


def test_factor_dense_subset_rejects_null_leg_swap():
    # the isometry exchanging the two null legs has vanishing corner entry
    n = 3
    M = np.eye(n + 1)
    M[0, 0] = M[n, n] = 0.0
    M[0, n] = M[n, 0] = 1.0
    with pytest.raises(GroupError, match="dense subset"):
        factor_dense_subset(FrameMatrix(n + 1, M))


def test_factor_dense_subset_rejects_non_lorentz():
    with pytest.raises(GroupError, match="O"):
        factor_dense_subset(FrameMatrix(4, 2.0 * np.eye(4)))


def test_group_element_validation():
    with pytest.raises(GroupError):
        GroupElement(1.0, np.array([[1.0, 0.5], [0.0, 1.0]]), np.zeros(2))
    with pytest.raises(GroupError):
        GroupElement(0.0, np.eye(2), np.zeros(2))
    with pytest.raises(GroupError):
        GroupElement(1.0, np.eye(2), np.ones(2), LEVEL_GR)
    with pytest.raises(GroupError):
        GroupElement(2.0, np.eye(2), np.zeros(2), LEVEL_GI)


def test_compose_level_mismatch():
    g1 = identity_element(3, LEVEL_GR)
    g2 = identity_element(3, LEVEL_GI)
    with pytest.raises(GroupError):
        compose(g1, g2)
