import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nullframe.groups import LEVEL_G, LEVEL_GI, LEVEL_GR, LEVELS
from nullframe.stress_energy import (
    ShapeError,
    StressEnergyPattern,
    classify,
    pattern_matrix,
)

vals = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


def test_gi_pattern_example():
    # pi = 1, S = 2: the only nonzero slots are T_00 = 1 and T_03 = T_30 = 1
    p = StressEnergyPattern(LEVEL_GI, pi=1.0, rho3=1.0, S=2.0)
    T = pattern_matrix(p)
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    expected[0, 3] = expected[3, 0] = 1.0
    assert np.array_equal(T, expected)


def test_gr_pattern_example():
    # lam = 1, S = 0 forces rho3 = 1
    p = StressEnergyPattern(LEVEL_GR, lam=1.0, rho3=1.0, S=0.0)
    T = pattern_matrix(p)
    expected = np.zeros((4, 4))
    expected[1, 1] = expected[2, 2] = 1.0
    expected[0, 3] = expected[3, 0] = 1.0
    assert np.array_equal(T, expected)


def test_level_invariants_enforced():
    with pytest.raises(ShapeError, match="G_I"):
        StressEnergyPattern(LEVEL_GI, lam=1.0)
    with pytest.raises(ShapeError, match="rho3 = S/2"):
        StressEnergyPattern(LEVEL_GI, rho3=1.0, S=0.0)
    with pytest.raises(ShapeError, match="G_R"):
        StressEnergyPattern(LEVEL_GR, pi=1.0, S=0.0)
    with pytest.raises(ShapeError, match="rho3 - lam"):
        StressEnergyPattern(LEVEL_GR, lam=1.0, rho3=0.0, S=0.0)


@settings(max_examples=60, deadline=None)
@given(vals, vals, vals, vals, vals, vals)
def test_classify_round_trip_level_g(lam, pi, sig, r1, r2, r3):
    p = StressEnergyPattern(LEVEL_G, lam, pi, sig, r1, r2, r3, S=0.0)
    fitted, res = classify(pattern_matrix(p), LEVEL_G)
    assert res < 1e-10
    assert np.max(np.abs(np.subtract(fitted.parameters(), p.parameters()))) < 1e-10


@settings(max_examples=60, deadline=None)
@given(vals, vals, vals)
def test_classify_round_trip_level_gi(pi, r1, r3):
    p = StressEnergyPattern(LEVEL_GI, 0.0, pi, 0.0, r1, 0.0, r3, S=2.0 * r3)
    fitted, res = classify(pattern_matrix(p), LEVEL_GI, scalar_curvature=p.S)
    assert res < 1e-10
    assert np.max(np.abs(np.subtract(fitted.parameters(), p.parameters()))) < 1e-10


@settings(max_examples=60, deadline=None)
@given(vals, vals)
def test_gi_patterns_nest_in_g(pi, r3):
    # every G_I-admissible shape also fits the level-G shape exactly
    p = StressEnergyPattern(LEVEL_GI, pi=pi, rho3=r3, S=2.0 * r3)
    _, res = classify(pattern_matrix(p), LEVEL_G)
    assert res < 1e-10


def test_forbidden_slots_leave_residual():
    for i, j in ((1, 3), (2, 3), (3, 3)):
        T = np.zeros((4, 4))
        T[i, j] = T[j, i] = 1.0
        for level in LEVELS:
            _, res = classify(T, level)
            assert res >= 1.0 - 1e-12, (i, j, level)


def test_constraint_violation_shows_in_residual():
    # a G_R shape whose rho3 disagrees with lam + S/2 cannot fit exactly
    T = pattern_matrix(StressEnergyPattern(LEVEL_G, lam=1.0, rho3=5.0, S=0.0))
    _, res = classify(T, LEVEL_GR, scalar_curvature=0.0)
    assert res > 1.0


def test_classify_input_validation():
    with pytest.raises(ShapeError, match="symmetric"):
        classify(np.triu(np.ones((4, 4))), LEVEL_G)
    with pytest.raises(ShapeError, match="4x4"):
        classify(np.zeros((3, 3)), LEVEL_G)
    with pytest.raises(ShapeError, match="level"):
        classify(np.zeros((4, 4)), "nope")
