"""Hebbian T-matrix, the fixed-threshold storage test, and Widrow-Hoff refinement."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .core import DimensionError, PatternFormatError, _content_lines, as_memories, as_pattern, check_square


def sgn(k):
    """Signum with ``sgn(0) = +1``. Works elementwise on arrays."""
    out = np.where(np.asarray(k) >= 0, 1, -1)
    return int(out) if out.ndim == 0 else out.astype(np.int8)


def build_t_matrix(memories) -> np.ndarray:
    """Sum of outer products of the memories with the diagonal zeroed."""
    x = as_memories(memories).patterns.astype(np.int64)
    T = x.T @ x
    np.fill_diagonal(T, 0)
    return T


def is_stored_fixed(T, x) -> bool:
    x = as_pattern(x)
    T = check_square(T, x.size, "weight matrix")
    return bool(np.array_equal(sgn(T @ x), x))


def stored_flags_fixed(T, memories) -> np.ndarray:
    mem = as_memories(memories)
    T = check_square(T, mem.n, "weight matrix")
    act = mem.patterns.astype(T.dtype if T.dtype.kind == "f" else np.int64) @ T.T
    return np.all(np.where(act >= 0, 1, -1) == mem.patterns, axis=1)


def count_stored_fixed(T, memories) -> int:
    return int(stored_flags_fixed(T, memories).sum())


@dataclass(frozen=True)
class LearningConfig:
    eta: float = 0.1
    max_epochs: int = 100

    def __post_init__(self):
        if not (self.eta > 0 and np.isfinite(self.eta)):
            raise ValueError(f"eta must be a positive finite number, got {self.eta}")
        # 0 epochs is allowed and means "return the starting point".
        if int(self.max_epochs) != self.max_epochs or self.max_epochs < 0:
            raise ValueError(f"max_epochs must be a non-negative integer, got {self.max_epochs}")


@dataclass
class WidrowHoffResult:
    weights: np.ndarray
    converged: bool
    epochs: int
    mse_trace: list[float] = field(default_factory=list)


def _mse(W, X):
    err = X - X @ W.T
    return float(np.mean(np.sum(err * err, axis=1)) / X.shape[1])


def widrow_hoff_refine(memories, cfg: LearningConfig | None = None, init=None) -> WidrowHoffResult:
    """LMS refinement ``W <- W + eta * (x - W x) x^T``, cycling memories in order.

    Stops as soon as every memory satisfies ``x = sgn(W x)`` (checked before each
    epoch) or after ``cfg.max_epochs`` passes. The diagonal is not re-zeroed.
    """
    cfg = cfg or LearningConfig()
    mem = as_memories(memories)
    X = mem.patterns.astype(np.float64)
    if init is None:
        init = build_t_matrix(mem)
    W = check_square(init, mem.n, "initial weights").astype(np.float64, copy=True)

    trace: list[float] = []
    epochs = 0
    converged = count_stored_fixed(W, mem) == mem.m
    while not converged and epochs < cfg.max_epochs:
        for x in X:
            e = x - W @ x
            W += cfg.eta * np.outer(e, x)
        epochs += 1
        trace.append(_mse(W, X))
        if not np.all(np.isfinite(W)):
            break
        converged = count_stored_fixed(W, mem) == mem.m
    return WidrowHoffResult(W, bool(converged), epochs, trace)


# -- serialization ------------------------------------------------------------


def format_matrix(W) -> str:
    W = check_square(W)
    lines = [str(W.shape[0])]
    if W.dtype.kind in "iu":
        lines += [" ".join(str(int(v)) for v in row) for row in W]
    else:
        lines += [" ".join(repr(float(v)) for v in row) for row in W]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, path=None) -> np.ndarray:
    lines = list(_content_lines(text))
    if not lines:
        raise PatternFormatError("empty matrix file", path)
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise PatternFormatError(f"first line must be the size N, got {head!r}", path, lineno) from None
    if len(lines) - 1 != n:
        raise DimensionError(f"{path or 'matrix'}: header says N={n} but found {len(lines) - 1} rows")
    rows = []
    integral = True
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) != n:
            raise PatternFormatError(f"row has {len(toks)} entries, expected {n}", path, lineno)
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            integral = False
            try:
                vals = [float(t) for t in toks]
            except ValueError as exc:
                raise PatternFormatError(str(exc), path, lineno) from None
        rows.append(vals)
    return np.array(rows, dtype=np.int64 if integral else np.float64)


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read(), path)


def write_matrix(path: str | os.PathLike, W) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(W))
