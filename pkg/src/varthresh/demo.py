"""The seven-neuron, five-memory worked example and its golden checks."""

from __future__ import annotations

import numpy as np

from . import bmatrix, hebbian, vthreshold
from .core import MemorySet

MEMORIES = MemorySet.from_rows([
    [1, 1, 1, 1, -1, 1, -1],
    [1, -1, -1, 1, -1, 1, -1],
    [1, -1, 1, -1, 1, -1, 1],
    [-1, 1, 1, -1, -1, -1, 1],
    [1, -1, 1, 1, 1, -1, 1],
])

T_MATRIX = np.array([
    [0, -3, 1, 3, 1, 1, -1],
    [-3, 0, 1, -1, -3, 1, -1],
    [1, 1, 0, -1, 1, -3, 3],
    [3, -1, -1, 0, -1, 3, -3],
    [1, -3, 1, -1, 0, -3, 3],
    [1, 1, -3, 3, -3, 0, -5],
    [-1, -1, 3, -3, 3, -5, 0],
])

B_MATRIX = np.array([
    [0, 0, 0, 0, 0, 0, 0],
    [-3, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0],
    [3, -1, -1, 0, 0, 0, 0],
    [1, -3, 1, -1, 0, 0, 0],
    [1, 1, -3, 3, -3, 0, 0],
    [-1, -1, 3, -3, 3, -5, 0],
])

THRESHOLDS = np.array([-7.9, 0.1, -7.9, -3.9, 4.1, -7.9, -9.9])

# (fragment, index of the memory it regenerates)
RETRIEVALS = [
    ([1, 1], 0),
    ([1, -1, -1], 1),
    ([1, -1, 1, -1], 2),
]

FIXED_STORED = [2]
VARIABLE_STORED = [0, 1, 2, 3]


def _names(idx):
    return "{" + ", ".join(f"X{i + 1}" for i in idx) + "}"


def _fmt_matrix(M):
    return "\n".join("  " + " ".join(f"{int(v):3d}" for v in row) for row in M)


def run(step: float = 0.1, out=print) -> bool:
    """Print the worked example; return True iff every golden check passes."""
    failures = []

    def check(label, got, want):
        if not np.array_equal(np.asarray(got), np.asarray(want)):
            failures.append(f"{label}: got {np.asarray(got).tolist()}, expected {np.asarray(want).tolist()}")

    T = hebbian.build_t_matrix(MEMORIES)
    out("T-matrix:")
    out(_fmt_matrix(T))
    check("T-matrix", T, T_MATRIX)

    fixed = np.flatnonzero(hebbian.stored_flags_fixed(T, MEMORIES)).tolist()
    out(f"stored with fixed threshold: {_names(fixed)}")
    check("fixed-threshold stored set", fixed, FIXED_STORED)

    grid = vthreshold.ThresholdGrid.for_network(MEMORIES.n, step)
    learned = vthreshold.learn_thresholds_grid(T, MEMORIES, grid)
    out(f"learned thresholds (step {step}): " + " ".join(f"{v:g}" for v in learned.thresholds))
    out(f"stored with learned thresholds: {_names(learned.stored_indices)}")
    check("learned-threshold stored set", learned.stored_indices, VARIABLE_STORED)

    ref = np.flatnonzero(vthreshold.stored_flags_variable(T, MEMORIES, THRESHOLDS)).tolist()
    out("reference thresholds: " + " ".join(f"{v:g}" for v in THRESHOLDS))
    out(f"stored with reference thresholds: {_names(ref)}")
    check("reference-threshold stored set", ref, VARIABLE_STORED)

    B = bmatrix.build_b_matrix(T)
    out("B-matrix:")
    out(_fmt_matrix(B))
    check("B-matrix", B, B_MATRIX)

    for frag, idx in RETRIEVALS:
        got = bmatrix.retrieve_from_fragment(B, frag, THRESHOLDS)
        out(f"fragment {frag} -> {got.tolist()}  (X{idx + 1})")
        check(f"retrieval from {frag}", got, MEMORIES[idx])

    k4 = bmatrix.min_fragment_length(B, MEMORIES[3], THRESHOLDS)
    out(f"X4 needs a fragment of length {k4}")
    check("X4 minimal fragment", k4, 6)

    if failures:
        out("FAILED:")
        for f in failures:
            out("  " + f)
        return False
    out("all checks passed")
    return True
