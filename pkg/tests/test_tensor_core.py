import numpy as np
import pytest

from nullframe.tensor_core import (
    FrameMatrix,
    TensorError,
    TensorValue,
    change_frame,
    contract,
    antisymmetrize,
    symmetrize,
)


def test_contract_matches_trace():
    t = TensorValue(3, ("up", "down"), np.diag([1.0, 2.0, 3.0]))
    s = contract(t, 0, 1)
    assert s.components == pytest.approx(6.0)


def test_contract_requires_opposite_variances():
    t = TensorValue(3, ("down", "down"), np.eye(3))
    with pytest.raises(TensorError):
        contract(t, 0, 1)


def test_symmetrize_antisymmetrize():
    m = np.array([[0.0, 1.0], [3.0, 0.0]])
    t = TensorValue(2, ("down", "down"), m)
    sym = symmetrize(t, (0, 1)).components
    asym = antisymmetrize(t, (0, 1)).components
    assert np.allclose(sym, [[0.0, 2.0], [2.0, 0.0]])
    assert np.allclose(asym, [[0.0, -1.0], [1.0, 0.0]])
    assert np.allclose(sym + asym, m)


def test_change_frame_covariant_example():
    # diag(1,1,0) under the frame diag(2,1,1) becomes diag(4,1,0)
    t = TensorValue(3, ("down", "down"), np.diag([1.0, 1.0, 0.0]))
    A = FrameMatrix(3, np.diag([2.0, 1.0, 1.0]))
    out = change_frame(t, A)
    assert np.allclose(out.components, np.diag([4.0, 1.0, 0.0]))


def test_change_frame_mixed_invariance():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((3, 3))
    t = TensorValue(3, ("up", "down"), m)
    A = FrameMatrix(3, rng.standard_normal((3, 3)) + 3 * np.eye(3))
    out = change_frame(t, A)
    # a (1,1) tensor transforms by conjugation, so the trace is invariant
    assert np.trace(out.components) == pytest.approx(np.trace(m))


def test_singular_frame_rejected():
    t = TensorValue(2, ("down",), np.ones(2))
    singular = FrameMatrix(2, np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(TensorError, match="singular"):
        change_frame(t, singular)
