"""Shared domain types, validation helpers and the seeded random source."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

PATTERN_DTYPE = np.int8


class DimensionError(ValueError):
    """Raised when array shapes do not agree or a size is not positive."""


class PatternFormatError(ValueError):
    """Raised for malformed pattern/matrix/threshold text files."""

    def __init__(self, message: str, path=None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


def as_pattern(values) -> np.ndarray:
    """Coerce ``values`` into a 1-D bipolar int8 array, validating the domain."""
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"pattern must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("pattern elements must be -1 or +1")
    return arr.astype(PATTERN_DTYPE)


@dataclass(frozen=True, eq=False)
class MemorySet:
    """An ordered, immutable collection of ``m`` bipolar patterns of length ``n``.

    Duplicates are allowed; each row is counted separately.
    """

    patterns: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.patterns)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"memory set must be a non-empty m x n array, got shape {arr.shape}")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValueError("memory elements must be -1 or +1")
        arr = arr.astype(PATTERN_DTYPE, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "patterns", arr)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "MemorySet":
        rows = [list(r) for r in rows]
        if not rows:
            raise DimensionError("memory set needs at least one pattern")
        lengths = {len(r) for r in rows}
        if len(lengths) != 1:
            raise DimensionError(f"patterns have differing lengths {sorted(lengths)}")
        return cls(np.array(rows))

    @property
    def m(self) -> int:
        return self.patterns.shape[0]

    @property
    def n(self) -> int:
        return self.patterns.shape[1]

    def __len__(self):
        return self.m

    def __iter__(self):
        return iter(self.patterns)

    def __getitem__(self, idx):
        return self.patterns[idx]

    def __eq__(self, other):
        if not isinstance(other, MemorySet):
            return NotImplemented
        return np.array_equal(self.patterns, other.patterns)

    def __hash__(self):
        return hash(self.patterns.tobytes())


def as_memories(memories) -> MemorySet:
    if isinstance(memories, MemorySet):
        return memories
    return MemorySet(np.asarray(memories))


def check_square(matrix, n: int | None = None, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionError(f"{name} is {arr.shape[0]}x{arr.shape[0]} but patterns have length {n}")
    return arr


@dataclass(frozen=True)
class RandomSource:
    """A (seed, stream) pair naming one reproducible random stream.

    Streams are Philox-4x64 generators keyed through ``numpy.random.SeedSequence``
    with ``spawn_key=(stream,)``, so the sequence depends only on the pair and
    not on the platform or on how many other streams exist.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if not 0 <= int(value) < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.Philox(ss))

    def fork(self, stream: int) -> "RandomSource":
        return RandomSource(self.seed, stream)


def random_memories(n: int, m: int, rng: RandomSource) -> MemorySet:
    """Draw ``m`` independent uniform bipolar patterns of length ``n``."""
    if n < 1 or m < 1:
        raise DimensionError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    bits = rng.generator().integers(0, 2, size=(m, n), dtype=np.int8)
    return MemorySet(bits * 2 - 1)


# -- text formats -------------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_patterns(text: str, path=None) -> MemorySet:
    rows = []
    width = None
    for lineno, line in _content_lines(text):
        row = []
        for tok in line.split():
            if tok not in ("1", "-1", "+1"):
                raise PatternFormatError(f"expected 1 or -1, got {tok!r}", path, lineno)
            row.append(int(tok))
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PatternFormatError(f"pattern has {len(row)} elements, expected {width}", path, lineno)
        rows.append(row)
    if not rows:
        raise PatternFormatError("no patterns found", path)
    return MemorySet(np.array(rows))


def format_patterns(memories) -> str:
    memories = as_memories(memories)
    return "".join(" ".join(str(int(v)) for v in row) + "\n" for row in memories.patterns)


def read_patterns(path: str | os.PathLike) -> MemorySet:
    with open(path, encoding="utf-8") as fh:
        return parse_patterns(fh.read(), path)


def write_patterns(path: str | os.PathLike, memories) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_patterns(memories))
