import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varthresh.core import DimensionError, RandomSource
from varthresh.quaternary import (
    QuaternaryLevels,
    convergence_ratio,
    delta_rule_train,
    quat_activation,
    quat_capacity_experiment,
    quat_next_state,
    random_quat_patterns,
)

L41 = QuaternaryLevels(outer=4, inner=1, t=10)
L21 = QuaternaryLevels(outer=2, inner=1, t=48)


def _act(x, a, b, t):
    if x < -t:
        return -a
    if x < 0:
        return -b
    if x < t:
        return b
    return a


def test_levels_validation():
    with pytest.raises(ValueError):
        QuaternaryLevels(1, 2, 5)
    with pytest.raises(ValueError):
        QuaternaryLevels(2, 1, 0)
    assert L21.values.tolist() == [-2, -1, 1, 2]
    assert L21.v_max == 2 and L21.v_diff == 2
    assert L41.v_diff == 3


@pytest.mark.parametrize(
    "x,expected",
    [(-11, -4), (-10, -1), (-0.5, -1), (0, 1), (9.99, 1), (10, 4), (1e9, 4)],
)
def test_activation_branches(x, expected):
    assert quat_activation(x, L41) == expected


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e6, 1e6, allow_nan=False), st.floats(-1e6, 1e6, allow_nan=False))
def test_activation_monotone_and_matches_reference(x, y):
    lo, hi = min(x, y), max(x, y)
    assert quat_activation(lo, L41) <= quat_activation(hi, L41)
    assert quat_activation(x, L41) == _act(x, 4, 1, 10)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e4, 1e4, allow_nan=False))
def test_activation_odd_away_from_boundaries(x):
    if x in (0.0, 10.0, -10.0):
        return
    assert quat_activation(-x, L41) == -quat_activation(x, L41)


def test_activation_surjective():
    xs = np.array([-100, -5, 5, 100])
    assert sorted(set(quat_activation(xs, L41).tolist())) == [-4, -1, 1, 4]


def test_next_state_zero_weights():
    V = np.array([2, -1, 1, -2, 2.0])
    assert quat_next_state(np.zeros((5, 5)), V, L21).tolist() == [1] * 5


def test_next_state_diagonal():
    lv = QuaternaryLevels(2, 1, 7.0)
    W = np.eye(4) * lv.t
    # net input t * 1 = t -> outer level
    assert quat_next_state(W, np.ones(4), lv).tolist() == [2] * 4
    assert quat_next_state(W * 0.5, np.ones(4), lv).tolist() == [1] * 4


def test_next_state_errors():
    with pytest.raises(DimensionError):
        quat_next_state(np.zeros((3, 3)), [1, 1], L21)
    with pytest.raises(ValueError):
        quat_next_state(np.zeros((2, 2)), [1, 3], L21)


def test_train_fixed_point_means_no_update():
    lv = QuaternaryLevels(2, 1, 5)
    V = np.array([1.0, 1.0, 1.0])
    # zero weights already map everything to +inner
    res = delta_rule_train([V], 1.0, lv, 10)
    assert res.success and res.sweeps == 1
    assert not res.weights.any()
    fp = np.array([2.0, -1.0, 2.0])
    W = np.array([[0, 0, 6], [0, 0, -1], [6, 0, 0.0]])
    assert quat_next_state(W, fp, lv).tolist() == fp.tolist()
    res = delta_rule_train([fp], 1.0, lv, 10, init=W)
    assert res.success and np.array_equal(res.weights, W)


def test_train_one_update_by_hand():
    lv = QuaternaryLevels(2, 1, 100)
    V = np.array([-1.0, 2.0])
    res = delta_rule_train([V], 1.0, lv, max_sweeps=1)
    # out = [1, 1]; err = [-2, 1]; dW = err V^T off-diagonal
    assert res.weights.tolist() == [[0, -4], [-1, 0]]
    assert not res.success


def test_trained_patterns_are_fixed_points():
    lv = L21
    pats = random_quat_patterns(7, 3, lv, RandomSource(3))
    res = delta_rule_train(pats, 1.0, lv, 1000)
    assert res.success
    for V in pats:
        assert np.array_equal(quat_next_state(res.weights, V, lv), V)
    assert not np.diag(res.weights).any()


def test_train_rejects_bad_constant():
    with pytest.raises(ValueError):
        delta_rule_train([[1, 1]], 0, L21)


@pytest.mark.parametrize("args,expected", [((2, 2, 7), 48), ((3.5, 1.5, 1), 0), ((1, 2, 7), 12)])
def test_convergence_ratio(args, expected):
    assert convergence_ratio(*args) == expected


def test_convergence_ratio_from_levels():
    assert convergence_ratio(L21.v_max, L21.v_diff, 7) == 48
    with pytest.raises(ValueError):
        convergence_ratio(0, 2, 7)


def test_random_patterns_use_alphabet():
    p = random_quat_patterns(9, 50, L21, RandomSource(0))
    assert set(np.unique(p).tolist()) == {-2, -1, 1, 2}
    assert np.array_equal(p, random_quat_patterns(9, 50, L21, RandomSource(0)))


def test_single_pattern_at_guarantee():
    pct = quat_capacity_experiment(7, 1, 48, 100, RandomSource(0), L21)
    assert pct >= 88


def test_below_guarantee_fails_often():
    pct = quat_capacity_experiment(7, 3, 4, 100, RandomSource(0), L21)
    assert pct < 50


def test_capacity_percentage_bounds():
    pct = quat_capacity_experiment(5, 2, 20, 20, RandomSource(1), L21)
    assert 0 <= pct <= 100
    with pytest.raises(ValueError):
        quat_capacity_experiment(5, 2, 20, 0, RandomSource(1), L21)


@pytest.mark.slow
def test_success_nonincreasing_in_patterns():
    # a regime with failures: t/c at the single-pattern guarantee, capped sweeps
    pct = [quat_capacity_experiment(7, p, 48, 500, RandomSource(5, p << 32), L21, max_sweeps=200) for p in (1, 3, 5, 6)]
    for a, b in zip(pct, pct[1:]):
        assert b <= a + 5
    assert pct[-1] < pct[0]
