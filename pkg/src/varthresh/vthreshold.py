"""Per-neuron variable thresholds: storage test and three threshold learners.

Neuron ``i`` fires (+1) when its activation ``(T x)_i`` is at least ``theta[i]``.
Since the storage condition factorizes over neurons, every learner solves a
one-dimensional problem per neuron: pick the cut on the ``m`` activations of
that row that agrees with the most target bits.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .core import DimensionError, PatternFormatError, _content_lines, as_memories, as_pattern, check_square
from .hebbian import LearningConfig

_GRID_DECIMALS = 10


def threshold_sign(y, theta):
    """+1 where ``y >= theta``, else -1 (elementwise)."""
    out = np.where(np.asarray(y) >= np.asarray(theta), 1, -1)
    return int(out) if out.ndim == 0 else out.astype(np.int8)


def as_thresholds(theta, n: int | None = None) -> np.ndarray:
    arr = np.asarray(theta, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"thresholds must be 1-D, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise DimensionError(f"got {arr.size} thresholds for a network of {n} neurons")
    if not np.all(np.isfinite(arr)):
        raise ValueError("thresholds must be finite")
    return arr


def row_activations(T, memories) -> np.ndarray:
    """The m x N table whose row ``s`` is ``T @ x^(s)``."""
    mem = as_memories(memories)
    T = check_square(T, mem.n, "weight matrix")
    X = mem.patterns.astype(np.float64 if T.dtype.kind == "f" else np.int64)
    return X @ T.T


def is_stored_variable(T, x, theta) -> bool:
    x = as_pattern(x)
    T = check_square(T, x.size, "weight matrix")
    theta = as_thresholds(theta, x.size)
    return bool(np.array_equal(threshold_sign(T @ x, theta), x))


def stored_flags_variable(T, memories, theta) -> np.ndarray:
    mem = as_memories(memories)
    act = row_activations(T, mem)
    theta = as_thresholds(theta, mem.n)
    return np.all(np.where(act >= theta, 1, -1) == mem.patterns, axis=1)


def neuron_correct_counts(T, memories, theta) -> np.ndarray:
    """For each neuron, how many memories get that neuron's bit right."""
    mem = as_memories(memories)
    act = row_activations(T, mem)
    theta = as_thresholds(theta, mem.n)
    return np.sum(np.where(act >= theta, 1, -1) == mem.patterns, axis=0)


@dataclass(frozen=True)
class ThresholdGrid:
    """Candidate thresholds ``k * step`` for integer ``k`` with ``start <= k*step <= stop``.

    Points are anchored at zero, so 0.0 is always a candidate.
    """

    start: float
    stop: float
    step: float = 0.1

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        if not self.start <= 0 <= self.stop:
            raise ValueError(f"grid must straddle zero, got [{self.start}, {self.stop}]")

    @classmethod
    def for_network(cls, n: int, step: float = 0.1, span: float = 2.0) -> "ThresholdGrid":
        """Symmetric grid over ``[-span*(n-1), span*(n-1)]``."""
        r = span * max(n - 1, 0)
        return cls(-r, r, step)

    def indices(self) -> np.ndarray:
        eps = 1e-9
        lo = math.ceil(self.start / self.step - eps)
        hi = math.floor(self.stop / self.step + eps)
        return np.arange(lo, hi + 1, dtype=np.int64)

    def points(self) -> np.ndarray:
        # rounding keeps e.g. 30 * 0.1 at exactly 3.0 so integer activations compare cleanly
        return np.round(self.indices() * self.step, _GRID_DECIMALS)


@dataclass
class ThresholdLearnResult:
    thresholds: np.ndarray
    stored_count: int
    stored_flags: np.ndarray
    neuron_correct: np.ndarray

    @property
    def stored_indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.stored_flags)]


def _result(act, X, theta) -> ThresholdLearnResult:
    hits = np.where(act >= theta, 1, -1) == X
    flags = np.all(hits, axis=1)
    return ThresholdLearnResult(theta, int(flags.sum()), flags, hits.sum(axis=0))


def _split(a, t):
    return np.sort(a[t == 1]), np.sort(a[t == -1])


def _protected(act, X, protect_fixed: bool) -> np.ndarray:
    """Memories every cut must keep: those already stored at theta = 0."""
    if not protect_fixed:
        return np.zeros(X.shape[0], dtype=bool)
    return np.all(np.where(act >= 0, 1, -1) == X, axis=1)


def _feasible_cut(a, t, keep):
    """Thresholds in ``(lo, hi]`` keep every protected bit correct; zero always qualifies."""
    a = np.asarray(a, dtype=np.float64)
    lo = a[keep & (t == -1)].max(initial=-np.inf)
    hi = a[keep & (t == 1)].min(initial=np.inf)
    return lo, hi


def learn_thresholds_grid(T, memories, grid: ThresholdGrid | None = None, protect_fixed: bool = True) -> ThresholdLearnResult:
    """Scan the grid independently for each neuron and keep the best cut.

    The score is the number of memories whose bit at that neuron comes out
    right. With ``protect_fixed`` the cut may not break a memory that is
    already stored at zero threshold, so the learned vector never stores fewer
    memories than the fixed one. Ties go to the point closest to zero, then
    to the smaller value.
    """
    mem = as_memories(memories)
    act = row_activations(T, mem)
    X = mem.patterns
    grid = grid or ThresholdGrid.for_network(mem.n)
    ks = grid.indices()
    pts = grid.points()
    order = np.lexsort((ks, np.abs(ks)))  # preference order for tie-breaking
    keep = _protected(act, X, protect_fixed)

    theta = np.zeros(mem.n)
    for i in range(mem.n):
        a, t = act[:, i], X[:, i]
        pos, neg = _split(a, t)
        correct = (pos.size - np.searchsorted(pos, pts, "left")) + np.searchsorted(neg, pts, "left")
        lo, hi = _feasible_cut(a, t, keep)
        correct = np.where((pts > lo) & (pts <= hi), correct, -1)
        theta[i] = pts[order[np.argmax(correct[order])]]
    return _result(act, X, theta)


def learn_thresholds_exact(T, memories, protect_fixed: bool = True) -> ThresholdLearnResult:
    """Optimal per-neuron thresholds over all reals (same constraint as the grid learner).

    The correct count only changes at activation values, so it suffices to
    score each gap between consecutive distinct activations. Zero is returned
    when it is optimal; otherwise the midpoint of the optimal gap nearest zero
    (one unit beyond the extreme activation for the two unbounded gaps).
    """
    mem = as_memories(memories)
    act = row_activations(T, mem)
    X = mem.patterns
    keep = _protected(act, X, protect_fixed)

    theta = np.zeros(mem.n)
    for i in range(mem.n):
        a = act[:, i].astype(np.float64)
        t = X[:, i]
        pos, neg = _split(a, t)
        u = np.unique(a)
        lower = np.concatenate(([-np.inf], u))  # gap k is (lower[k], upper[k]]
        upper = np.concatenate((u, [np.inf]))
        correct = (pos.size - np.searchsorted(pos, lower, "right")) + np.searchsorted(neg, lower, "right")
        lo, hi = _feasible_cut(a, t, keep)
        correct = np.where((lower >= lo) & (upper <= hi), correct, -1)
        best = correct.max()
        at_zero = np.sum(pos >= 0) + np.sum(neg < 0)
        if at_zero == best:
            continue
        mids = np.where(
            np.isinf(lower), upper - 1.0, np.where(np.isinf(upper), lower + 1.0, (lower + upper) / 2.0)
        )
        cand = mids[correct == best]
        theta[i] = cand[np.lexsort((cand, np.abs(cand)))[0]]
    return _result(act, X, theta)


def learn_thresholds_widrow(T, memories, cfg: LearningConfig | None = None, init=None) -> ThresholdLearnResult:
    """Learn thresholds as bias weights on a constant -1 input.

    For each memory in turn, ``theta -= eta * (x - prediction)``. Stops when
    every memory is stored (checked before each epoch) or after
    ``cfg.max_epochs`` epochs.
    """
    cfg = cfg or LearningConfig(eta=0.05, max_epochs=500)
    mem = as_memories(memories)
    act = row_activations(T, mem)
    X = mem.patterns.astype(np.float64)
    theta = np.zeros(mem.n) if init is None else as_thresholds(init, mem.n).copy()

    for _ in range(cfg.max_epochs):
        if np.all(np.where(act >= theta, 1, -1) == X):
            break
        for s in range(mem.m):
            pred = np.where(act[s] >= theta, 1.0, -1.0)
            # rounding stops 0.05-step drift from landing just beside an integer activation
            theta = np.round(theta - cfg.eta * (X[s] - pred), _GRID_DECIMALS)
    return _result(act, mem.patterns, theta)


LEARNERS = {
    "grid": learn_thresholds_grid,
    "exact": learn_thresholds_exact,
    "widrow": learn_thresholds_widrow,
}


# -- serialization ------------------------------------------------------------


def format_thresholds(theta) -> str:
    theta = as_thresholds(theta)
    return "".join(repr(float(v)) + "\n" for v in theta)


def parse_thresholds(text: str, path=None) -> np.ndarray:
    vals = []
    for lineno, line in _content_lines(text):
        try:
            vals.append(float(line))
        except ValueError:
            raise PatternFormatError(f"expected one decimal per line, got {line!r}", path, lineno) from None
    if not vals:
        raise PatternFormatError("no thresholds found", path)
    return as_thresholds(vals)


def read_thresholds(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_thresholds(fh.read(), path)


def write_thresholds(path: str | os.PathLike, theta) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_thresholds(theta))
