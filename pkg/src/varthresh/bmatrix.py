"""B-matrix generator model: recall a memory bit by bit from a leading fragment."""

from __future__ import annotations

import numpy as np

from .core import DimensionError, as_memories, as_pattern, check_square
from .vthreshold import as_thresholds


def build_b_matrix(T) -> np.ndarray:
    """Strictly lower-triangular half of ``T`` so that ``T = B + B^T``."""
    T = check_square(T, name="weight matrix")
    if not np.array_equal(T, T.T):
        raise ValueError("weight matrix must be symmetric")
    if np.any(np.diag(T) != 0):
        raise ValueError("weight matrix must have a zero diagonal")
    return np.tril(T, -1)


def as_order(order, n: int) -> np.ndarray:
    """Validate a 1-based permutation of ``1..n`` and return it 0-based."""
    arr = np.asarray(order)
    if arr.ndim != 1 or arr.size != n:
        raise DimensionError(f"order must list {n} neurons, got {arr.size}")
    if not np.issubdtype(arr.dtype, np.integer) or sorted(arr.tolist()) != list(range(1, n + 1)):
        raise ValueError(f"order must be a permutation of 1..{n}, got {arr.tolist()}")
    return arr.astype(np.int64) - 1


def permute_network(T, order) -> np.ndarray:
    """Reorder neurons so that ``T'[a][b] = T[order[a]][order[b]]`` (1-based order)."""
    T = check_square(T, name="weight matrix")
    idx = as_order(order, T.shape[0])
    return T[np.ix_(idx, idx)]


def permute_patterns(patterns, order):
    """Reorder pattern elements consistently with :func:`permute_network`."""
    arr = np.asarray(patterns)
    idx = as_order(order, arr.shape[-1])
    out = arr[..., idx]
    return out if arr.ndim == 1 else as_memories(out)


def permute_thresholds(theta, order) -> np.ndarray:
    theta = as_thresholds(theta)
    return theta[as_order(order, theta.size)]


def inverse_order(order) -> np.ndarray:
    idx = as_order(order, len(order))
    inv = np.empty_like(idx)
    inv[idx] = np.arange(idx.size)
    return inv + 1


def retrieve_from_fragment(B, fragment, theta=None) -> np.ndarray:
    """Generate the rest of a memory from its first ``k`` bits.

    Bit ``i`` (for ``i >= k``) is ``+1`` iff ``sum_{j<i} B[i][j] * bit_j >= theta[i]``;
    earlier bits are never revisited. ``theta=None`` means all-zero thresholds.
    """
    frag = as_pattern(fragment)
    B = check_square(B, name="B-matrix")
    n = B.shape[0]
    k = frag.size
    if k > n:
        raise DimensionError(f"fragment length {k} exceeds network size {n}")
    theta = np.zeros(n) if theta is None else as_thresholds(theta, n)

    bits = np.zeros(n, dtype=np.int64)
    bits[:k] = frag
    for i in range(k, n):
        bits[i] = 1 if B[i, :i] @ bits[:i] >= theta[i] else -1
    return bits.astype(np.int8)


def min_fragment_length(B, x, theta=None, max_length: int | None = None) -> int | None:
    """Shortest prefix of ``x`` that regenerates all of ``x``, or None.

    Only prefixes of length ``1..max_length`` are tried (default: all of them).
    Uses one forward pass: prefix ``k`` works iff every bit after position ``k``
    is predicted correctly from the true earlier bits.
    """
    x = as_pattern(x)
    B = check_square(B, x.size, "B-matrix")
    n = x.size
    theta = np.zeros(n) if theta is None else as_thresholds(theta, n)
    max_length = n if max_length is None else min(max_length, n)
    if max_length < 1:
        return None
    # B is strictly lower triangular, so B @ x gives each bit's input from its true predecessors.
    ok = np.where(B @ x.astype(np.int64) >= theta, 1, -1) == x
    # prefix k works iff ok[k:] is all true
    bad = np.flatnonzero(~ok)
    k = 1 if bad.size == 0 else max(1, int(bad[-1]) + 1)
    return k if k <= max_length else None


def count_retrieved(B, memories, theta=None, k: int = 1) -> int:
    """Number of memories whose length-``k`` prefix regenerates them exactly."""
    mem = as_memories(memories)
    B = check_square(B, mem.n, "B-matrix")
    if not 1 <= k <= mem.n:
        raise DimensionError(f"fragment length must be in 1..{mem.n}, got {k}")
    return sum(
        bool(np.array_equal(retrieve_from_fragment(B, x[:k], theta), x)) for x in mem.patterns
    )
