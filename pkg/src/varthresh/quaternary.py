"""Four-level (quaternary) feedback network trained with the delta rule."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, RandomSource, check_square


@dataclass(frozen=True)
class QuaternaryLevels:
    """Output alphabet ``(-outer, -inner, inner, outer)`` and activation threshold ``t``."""

    outer: float = 2.0
    inner: float = 1.0
    t: float = 48.0

    def __post_init__(self):
        if not self.outer > self.inner > 0:
            raise ValueError(f"need outer > inner > 0, got outer={self.outer}, inner={self.inner}")
        if not self.t > 0:
            raise ValueError(f"threshold t must be positive, got {self.t}")

    @property
    def values(self) -> np.ndarray:
        return np.array([-self.outer, -self.inner, self.inner, self.outer])

    @property
    def v_max(self) -> float:
        return self.outer

    @property
    def v_diff(self) -> float:
        return float(np.max(np.diff(self.values)))

    def with_t(self, t: float) -> "QuaternaryLevels":
        return QuaternaryLevels(self.outer, self.inner, t)


def quat_activation(x, levels: QuaternaryLevels):
    """Map net input to a level.

    Intervals are closed on the left: ``x < -t`` -> -outer, ``-t <= x < 0`` ->
    -inner, ``0 <= x < t`` -> +inner, ``x >= t`` -> +outer.
    """
    x = np.asarray(x, dtype=np.float64)
    t = levels.t
    out = np.where(
        x < -t, -levels.outer, np.where(x < 0, -levels.inner, np.where(x < t, levels.inner, levels.outer))
    )
    return float(out) if out.ndim == 0 else out


def as_quat_pattern(values, levels: QuaternaryLevels) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"pattern must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isin(arr, levels.values)):
        raise ValueError(f"pattern elements must be among {levels.values.tolist()}")
    return arr


def quat_next_state(W, V, levels: QuaternaryLevels) -> np.ndarray:
    V = as_quat_pattern(V, levels)
    W = check_square(W, V.size, "weight matrix")
    return quat_activation(W @ V, levels)


@dataclass
class DeltaTrainResult:
    weights: np.ndarray
    success: bool
    sweeps: int


def delta_rule_train(patterns, c: float, levels: QuaternaryLevels, max_sweeps: int = 1000, init=None) -> DeltaTrainResult:
    """Cyclic delta-rule training ``dW[i, j] = c * (V^s_i - V_i) * V^s_j``.

    Only rows whose output disagrees with the target are touched. Self
    connections stay at zero. Succeeds when a whole sweep makes no update.
    """
    if not c > 0:
        raise ValueError(f"learning constant must be positive, got {c}")
    P = np.atleast_2d(np.asarray(patterns, dtype=np.float64))
    if P.size == 0:
        raise DimensionError("need at least one pattern")
    for row in P:
        as_quat_pattern(row, levels)
    n = P.shape[1]
    W = np.zeros((n, n)) if init is None else check_square(init, n, "initial weights").astype(np.float64, copy=True)
    off_diag = 1.0 - np.eye(n)

    for sweep in range(1, max_sweeps + 1):
        updated = False
        for V in P:
            err = V - quat_activation(W @ V, levels)
            if err.any():
                W += c * np.outer(err, V) * off_diag
                updated = True
        if not updated:
            return DeltaTrainResult(W, True, sweep)
    return DeltaTrainResult(W, False, max_sweeps)


def convergence_ratio(v_max: float, v_diff: float, n: int) -> float:
    """Minimum ``t/c`` that guarantees a pattern can be learned: ``v_max^2 * v_diff * (n - 1)``."""
    if not (v_max > 0 and v_diff > 0 and n >= 1):
        raise ValueError("need v_max > 0, v_diff > 0 and n >= 1")
    return v_max**2 * v_diff * (n - 1)


def random_quat_patterns(n: int, p: int, levels: QuaternaryLevels, rng: RandomSource) -> np.ndarray:
    if n < 1 or p < 1:
        raise DimensionError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    return rng.generator().choice(levels.values, size=(p, n))


def quat_trial(n: int, p: int, t_over_c: float, rng: RandomSource, levels: QuaternaryLevels, max_sweeps: int = 1000) -> bool:
    """One attempt at storing ``p`` random patterns with ``c = 1`` and ``t = t_over_c``."""
    lv = levels.with_t(t_over_c)
    pats = random_quat_patterns(n, p, lv, rng)
    return delta_rule_train(pats, 1.0, lv, max_sweeps).success


def quat_capacity_experiment(
    n: int,
    p: int,
    t_over_c: float,
    trials: int,
    rng: RandomSource,
    levels: QuaternaryLevels | None = None,
    max_sweeps: int = 1000,
) -> float:
    """Percentage of trials in which all ``p`` random patterns were learned.

    Trial ``k`` draws its patterns from stream ``rng.stream + k``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    levels = levels or QuaternaryLevels()
    wins = sum(quat_trial(n, p, t_over_c, rng.fork(rng.stream + k), levels, max_sweeps) for k in range(trials))
    return 100.0 * wins / trials
