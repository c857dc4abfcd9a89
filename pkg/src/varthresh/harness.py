"""Seeded experiment sweeps: fixed vs variable storage, B-matrix retrieval,
quaternary capacity. Output is a pure function of the :class:`SweepSpec`.

Every trial draws from its own stream ``RandomSource(seed, cell_key << 32 | trial)``
and results are aggregated by trial index, so any worker count gives the same rows.
"""

from __future__ import annotations

import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, field, fields
from typing import Sequence

import numpy as np

from . import bmatrix, hebbian, vthreshold
from .core import RandomSource, random_memories
from .hebbian import LearningConfig
from .quaternary import QuaternaryLevels, quat_trial

MODES = ("storage", "retrieval", "quaternary")


@dataclass(frozen=True)
class SweepSpec:
    mode: str
    neuron_counts: Sequence[int]
    memory_count: int = 10
    trials: int = 5
    seed: int = 0
    learner: str = "grid"
    grid_step: float = 0.1
    eta: float = 0.05
    max_epochs: int = 500
    max_fragment_fraction: float = 0.5
    # quaternary only
    pattern_counts: Sequence[int] = (1, 2, 3, 4, 5, 6)
    t_over_c: Sequence[float] = (96, 144, 192, 240, 288, 336)
    levels: QuaternaryLevels = field(default_factory=QuaternaryLevels)
    max_sweeps: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.neuron_counts or any(n < 1 for n in self.neuron_counts):
            raise ValueError("neuron_counts must be non-empty and positive")
        if self.memory_count < 1:
            raise ValueError("memory_count must be >= 1")
        if self.learner not in vthreshold.LEARNERS:
            raise ValueError(f"learner must be one of {sorted(vthreshold.LEARNERS)}, got {self.learner!r}")
        if not self.grid_step > 0:
            raise ValueError("grid_step must be positive")
        if not 0 < self.max_fragment_fraction <= 1:
            raise ValueError("max_fragment_fraction must lie in (0, 1]")
        if self.mode == "quaternary" and (not self.pattern_counts or not self.t_over_c):
            raise ValueError("quaternary sweep needs pattern counts and t/c values")


@dataclass
class StorageRow:
    n: int
    m: int
    trials: int
    stored_fixed: float
    stored_variable: float


@dataclass
class RetrievalRow:
    n: int
    m: int
    trials: int
    stored: float
    retrieved_fixed: float
    retrieved_variable: float


@dataclass
class QuaternaryRow:
    t_over_c: float
    patterns: int
    trials: int
    success_percent: float


def trial_source(seed: int, key: int, trial: int) -> RandomSource:
    return RandomSource(seed, (int(key) << 32) | int(trial))


def learn(spec: SweepSpec, T, memories) -> vthreshold.ThresholdLearnResult:
    if spec.learner == "grid":
        grid = vthreshold.ThresholdGrid.for_network(memories.n, spec.grid_step)
        return vthreshold.learn_thresholds_grid(T, memories, grid)
    if spec.learner == "exact":
        return vthreshold.learn_thresholds_exact(T, memories)
    return vthreshold.learn_thresholds_widrow(T, memories, LearningConfig(spec.eta, spec.max_epochs))


def storage_trial(spec: SweepSpec, n: int, trial: int) -> tuple[int, int]:
    mem = random_memories(n, spec.memory_count, trial_source(spec.seed, n, trial))
    T = hebbian.build_t_matrix(mem)
    return hebbian.count_stored_fixed(T, mem), learn(spec, T, mem).stored_count


@dataclass
class RetrievalOutcome:
    stored: np.ndarray
    min_fragment_fixed: list
    min_fragment_variable: list

    @property
    def counts(self) -> tuple[int, int, int]:
        rf = sum(1 for s, k in zip(self.stored, self.min_fragment_fixed) if s and k is not None)
        rv = sum(1 for s, k in zip(self.stored, self.min_fragment_variable) if s and k is not None)
        return int(self.stored.sum()), rf, rv


def max_fragment(n: int, fraction: float) -> int:
    return max(1, math.ceil(n * fraction))


def retrieval_outcome(T, memories, theta, max_length: int) -> RetrievalOutcome:
    """Which memories are stored under ``theta``, and the minimal prefix that
    regenerates each one through B under zero and under ``theta`` thresholds.

    A memory counts as retrieved only if it is stored and some prefix of
    length at most ``max_length`` regenerates it.
    """
    B = bmatrix.build_b_matrix(T)
    stored = vthreshold.stored_flags_variable(T, memories, theta)
    kf = [bmatrix.min_fragment_length(B, x, None, max_length) for x in memories.patterns]
    kv = [bmatrix.min_fragment_length(B, x, theta, max_length) for x in memories.patterns]
    return RetrievalOutcome(stored, kf, kv)


def retrieval_trial(spec: SweepSpec, n: int, trial: int) -> tuple[int, int, int]:
    mem = random_memories(n, spec.memory_count, trial_source(spec.seed, n, trial))
    T = hebbian.build_t_matrix(mem)
    theta = learn(spec, T, mem).thresholds
    return retrieval_outcome(T, mem, theta, max_fragment(n, spec.max_fragment_fraction)).counts


def _quat_trial(spec: SweepSpec, p: int, t_over_c: float, trial: int) -> bool:
    # same patterns for every t/c at a given p
    return quat_trial(spec.neuron_counts[0], p, t_over_c, trial_source(spec.seed, p, trial), spec.levels, spec.max_sweeps)


def _call(job):
    fn, args = job
    return fn(*args)


def _run_jobs(jobs, workers: int):
    if workers <= 1:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def run_storage_sweep(spec: SweepSpec) -> list[StorageRow]:
    jobs = [(storage_trial, (spec, n, k)) for n in spec.neuron_counts for k in range(spec.trials)]
    results = _run_jobs(jobs, spec.workers)
    rows = []
    for idx, n in enumerate(spec.neuron_counts):
        chunk = np.array(results[idx * spec.trials:(idx + 1) * spec.trials], dtype=np.float64)
        fixed, variable = chunk.mean(axis=0)
        rows.append(StorageRow(n, spec.memory_count, spec.trials, float(fixed), float(variable)))
    return rows


def run_retrieval_sweep(spec: SweepSpec) -> list[RetrievalRow]:
    jobs = [(retrieval_trial, (spec, n, k)) for n in spec.neuron_counts for k in range(spec.trials)]
    results = _run_jobs(jobs, spec.workers)
    rows = []
    for idx, n in enumerate(spec.neuron_counts):
        chunk = np.array(results[idx * spec.trials:(idx + 1) * spec.trials], dtype=np.float64)
        stored, rf, rv = chunk.mean(axis=0)
        rows.append(RetrievalRow(n, spec.memory_count, spec.trials, float(stored), float(rf), float(rv)))
    return rows


def run_quaternary_sweep(spec: SweepSpec) -> list[QuaternaryRow]:
    cells = [(t, p) for t in spec.t_over_c for p in spec.pattern_counts]
    jobs = [(_quat_trial, (spec, p, t, k)) for t, p in cells for k in range(spec.trials)]
    results = _run_jobs(jobs, spec.workers)
    rows = []
    for idx, (t, p) in enumerate(cells):
        wins = sum(results[idx * spec.trials:(idx + 1) * spec.trials])
        rows.append(QuaternaryRow(float(t), p, spec.trials, 100.0 * wins / spec.trials))
    return rows


def run_sweep(spec: SweepSpec):
    return {
        "storage": run_storage_sweep,
        "retrieval": run_retrieval_sweep,
        "quaternary": run_quaternary_sweep,
    }[spec.mode](spec)


# -- output -------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    return f"{f:.2f}"


def _render(rows, fmt: str) -> str:
    header = [f.name for f in fields(rows[0])]
    body = [[_cell(v) for v in astuple(r)] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    if fmt == "table":
        widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in body]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; use 'csv' or 'table'")


def emit(rows, fmt: str = "csv", destination=None) -> str:
    """Write rows as CSV or an aligned table to a path, a file object or stdout.

    Floats are printed with two decimals. Returns the rendered text.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to emit")
    text = _render(rows, fmt)
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {os.fspath(destination)}: {exc.strerror or exc}") from exc
    return text
