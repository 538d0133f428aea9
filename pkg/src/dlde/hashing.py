"""Randomized scalar bucketing and per-leaf hash count tables.

Two sample values are considered similar when they fall into the same
bucket of ``floor((value + offset) / width)``.  The bucket width is drawn
from a range that shrinks as the dataset grows, ``[1/log2(N), 1 - 1/log2(N)]``,
which presumes roughly unit-scale data (see ``znormalize``).

For every leaf segment of a tree, each of ``h`` independently sampled
bucketing functions maps each time column to a table of
``bucket key -> number of subsequences whose value at that column lands in
the bucket``.  All N rows are inserted, including any row later scored, so
a stored value always finds at least its own count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dataset import LabeledDataset
from .errors import ConfigurationError
from .tstree import Segment

__all__ = [
    "HashFn",
    "LeafTables",
    "sample_hash_fn",
    "hash_value",
    "hash_keys",
    "build_leaf_tables",
]


@dataclass(frozen=True)
class HashFn:
    """One bucketing function: key = floor((value + offset) / width)."""

    width: float
    offset: float

    def __post_init__(self) -> None:
        if not (0.0 < self.width < 1.0):
            raise ValueError(f"width must lie in (0, 1), got {self.width}")
        if not (0.0 <= self.offset <= self.width):
            raise ValueError(
                f"offset must lie in [0, width={self.width}], got {self.offset}"
            )


def sample_hash_fn(n: int, rng: np.random.Generator) -> HashFn:
    """Draw one bucketing function for a dataset of ``n`` subsequences.

    The width is uniform on [1/log2(n), 1 - 1/log2(n)] and the offset
    uniform on [0, width].  The range is empty or degenerate for n <= 4.

    Raises:
        ConfigurationError: ``n`` <= 4.
    """
    if n <= 4:
        raise ConfigurationError(
            f"dataset too small for hash-width sampling range (need >= 5 rows, got {n})"
        )
    lo = 1.0 / math.log2(n)
    width = rng.uniform(lo, 1.0 - lo)
    offset = rng.uniform(0.0, width)
    return HashFn(width=width, offset=offset)


def hash_value(fn: HashFn, value: float) -> int:
    """Bucket key of a single sample value.

    Deterministic and monotone non-decreasing in ``value``.

    Raises:
        ValueError: ``value`` is NaN or infinite.
    """
    if not math.isfinite(value):
        raise ValueError(f"cannot hash non-finite value {value!r}")
    return math.floor((value + fn.offset) / fn.width)


def hash_keys(fn: HashFn, values: np.ndarray) -> np.ndarray:
    """Vectorized :func:`hash_value`; bit-identical on float64 inputs."""
    return np.floor((np.asarray(values, dtype=np.float64) + fn.offset) / fn.width).astype(
        np.int64
    )


@dataclass(frozen=True)
class LeafTables:
    """Bucket count tables for one leaf segment.

    ``counts[j][c]`` maps bucket key -> occurrence count for hash function
    ``j`` at column ``c`` (0-based within the segment).  For every (j, c)
    the counts sum to ``n_rows``.
    """

    segment: Segment
    fns: tuple[HashFn, ...]
    counts: tuple[tuple[dict[int, int], ...], ...]
    n_rows: int

    @property
    def h(self) -> int:
        return len(self.fns)

    @cached_property
    def dense_counts(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        """Array view of the tables used by the vectorized scoring path.

        For each hash function: a sorted vector of every key present in
        any column of the segment, and a (keys, columns) count matrix
        with zeros where a key does not occur.  Derived from ``counts``,
        which stays the single source of truth.
        """
        length = self.segment.length
        out = []
        for per_fn in self.counts:
            union = sorted(set().union(*per_fn))
            index = {key: i for i, key in enumerate(union)}
            matrix = np.zeros((len(union), length), dtype=np.int64)
            for c, column in enumerate(per_fn):
                for key, value in column.items():
                    matrix[index[key], c] = value
            out.append((np.asarray(union, dtype=np.int64), matrix))
        return tuple(out)


def build_leaf_tables(
    dataset: LabeledDataset, segment: Segment, fns: tuple[HashFn, ...] | list[HashFn]
) -> LeafTables:
    """Insert every subsequence's values over ``segment`` into count tables.

    Raises:
        ValueError: segment out of the dataset's 1..d range, or no hash
            functions given.
    """
    if segment.end > dataset.d:
        raise ValueError(
            f"segment [{segment.start}, {segment.end}] exceeds axis length {dataset.d}"
        )
    if len(fns) < 1:
        raise ValueError("at least one hash function is required")
    block = dataset.subsequences[:, segment.columns]
    length = segment.length
    per_fn: list[tuple[dict[int, int], ...]] = []
    for fn in fns:
        keys = hash_keys(fn, block)
        # one pass: per-key-per-column occurrence counts over the segment
        uniq, inverse = np.unique(keys, return_inverse=True)
        flat = inverse.reshape(keys.shape) * length + np.arange(length)
        matrix = np.bincount(flat.ravel(), minlength=uniq.size * length).reshape(
            uniq.size, length
        )
        key_list = uniq.tolist()
        columns = []
        for c in range(length):
            present = np.nonzero(matrix[:, c])[0]
            columns.append({key_list[u]: int(matrix[u, c]) for u in present})
        per_fn.append(tuple(columns))
    return LeafTables(
        segment=segment, fns=tuple(fns), counts=tuple(per_fn), n_rows=dataset.n
    )
