"""Count-min sketch with weighted increments.

An r x c counter matrix with one 2-universal hash function per row
(Carter-Wegman ((a*x + b) mod p) mod c over the Mersenne prime p = 2^31 - 1;
multiply-shift would tie c to powers of two, which the default sizing rule
below does not satisfy). Estimates are the row-wise minimum and therefore
never undercount. Updates are plain integer additions, so any interleaving of
adds produces the same matrix as a sequential replay.

Default column sizing follows the convention of keeping a hard floor well
above the 1e-4-of-edges fraction: cols = max(ceil(1e-4 * edge_count), 6500).
Both knobs are exposed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

MERSENNE_P = np.int64((1 << 31) - 1)
DEFAULT_ROWS = 4
DEFAULT_COL_FRACTION = 1e-4
DEFAULT_MIN_COLS = 6500
_INT64_MAX = np.iinfo(np.int64).max


@dataclass
class CountMinSketch:
    rows: int
    cols: int
    table: np.ndarray          # (rows, cols) int64
    hash_a: np.ndarray         # (rows,) int64 in [1, p-1]
    hash_b: np.ndarray         # (rows,) int64 in [0, p-1]
    saturated: bool = field(default=False)

    def _indices(self, keys: np.ndarray) -> np.ndarray:
        """Per-row column indices for the given keys, shape (rows, len(keys))."""
        x = np.asarray(keys, dtype=np.int64) % MERSENNE_P
        # a < 2^31 and x < 2^31, so a*x stays within int64
        return ((self.hash_a[:, None] * x[None, :] + self.hash_b[:, None])
                % MERSENNE_P) % self.cols


def sketch_new(rows: int, cols: int, seed: int) -> CountMinSketch:
    if rows < 1 or cols < 1:
        raise ValueError("sketch needs at least one row and one column")
    rng = np.random.default_rng(seed)
    a = rng.integers(1, int(MERSENNE_P), size=rows, dtype=np.int64)
    b = rng.integers(0, int(MERSENNE_P), size=rows, dtype=np.int64)
    return CountMinSketch(rows=rows, cols=cols,
                          table=np.zeros((rows, cols), dtype=np.int64),
                          hash_a=a, hash_b=b)


def default_cols(edge_count: int,
                 fraction: float = DEFAULT_COL_FRACTION,
                 min_cols: int = DEFAULT_MIN_COLS) -> int:
    return max(math.ceil(fraction * edge_count), min_cols)


def sketch_add(s: CountMinSketch, key: int, amount: int) -> None:
    if amount < 0:
        raise ValueError("amount must be non-negative")
    sketch_add_many(s, np.asarray([key], dtype=np.int64),
                    np.asarray([amount], dtype=np.int64))


def sketch_add_many(s: CountMinSketch, keys, amounts) -> None:
    """Bulk weighted increments; equivalent to adding one key at a time."""
    keys = np.asarray(keys, dtype=np.int64)
    amounts = np.asarray(amounts, dtype=np.int64)
    if np.any(amounts < 0):
        raise ValueError("amounts must be non-negative")
    idx = s._indices(keys)
    for r in range(s.rows):
        np.add.at(s.table[r], idx[r], amounts)
    wrapped = s.table < 0  # int64 wraparound
    if np.any(wrapped):
        s.table[wrapped] = _INT64_MAX
        if not s.saturated:
            s.saturated = True
            warnings.warn("sketch counter overflow, counts saturated",
                          RuntimeWarning, stacklevel=2)


def sketch_estimate(s: CountMinSketch, key: int) -> int:
    return int(sketch_estimate_many(s, np.asarray([key], dtype=np.int64))[0])


def sketch_estimate_many(s: CountMinSketch, keys) -> np.ndarray:
    """Row-wise minimum counts; one-sided (never below the true count)."""
    keys = np.asarray(keys, dtype=np.int64)
    idx = s._indices(keys)
    per_row = s.table[np.arange(s.rows)[:, None], idx]
    return per_row.min(axis=0)


def dump_tsv(s: CountMinSketch, path) -> None:
    np.savetxt(path, s.table, fmt="%d", delimiter="\t")
