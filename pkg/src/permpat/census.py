"""Exact distinct-pattern counts f(p), total and per length.

The in-memory engine walks the pattern poset top-down: the length-k
patterns of ``p`` are exactly the single-entry deletions of its length-(k+1)
patterns, so each level is produced from the previous one and deduplicated
by key.  Work is proportional to the number of distinct patterns times
``k``, never to the 2^n subsets.  ``census_of_length`` instead enumerates the
index subsets of one size directly, and the two routes cross-check each
other.

Keys are 64-bit Lehmer fingerprints for lengths up to 20 and raw byte
strings (one byte per entry) above that.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import chain, combinations, islice
from math import comb, factorial
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (
    MAX_FINGERPRINT_LENGTH,
    InvalidInputError,
    ResourceLimitError,
    as_permutation,
)

__all__ = [
    "CensusResult",
    "DEFAULT_MAX_N",
    "STREAM_MAX_N",
    "census",
    "census_of_length",
    "pattern_keys",
    "fingerprints",
    "decode_fingerprints",
    "census_streamed",
    "estimate_cost",
]

DEFAULT_MAX_N = 24
STREAM_MAX_N = 28

# rows of children materialised at once per worker chunk
_CHUNK_ROWS = 1 << 21

EMPTY_PATTERN_NOTE = (
    "counts exclude the empty pattern; the all-subsets cap 2^n is reported as 2^n - 1"
)


@dataclass(frozen=True)
class CensusResult:
    n: int
    per_length: tuple[int, ...]  # per_length[k - 1] = c_k
    total: int
    empty_pattern_included: bool = False
    convention_note: str = field(default=EMPTY_PATTERN_NOTE, compare=False)

    def count(self, k: int) -> int:
        return self.per_length[k - 1]

    def caps(self) -> list[tuple[int, int]]:
        """(binomial(n, k), k!) for k = 1..n."""
        return [(comb(self.n, k), factorial(k)) for k in range(1, self.n + 1)]

    @property
    def cap_total(self) -> int:
        return 2**self.n - 1


# ---------------------------------------------------------------------------
# vectorised kernels


def fingerprints(rows: np.ndarray) -> np.ndarray:
    """Factorial-base Lehmer codes of each row (rows of distinct values, k <= 20).

    Rows need not be reduced: the inversion table only depends on relative order.
    """
    m, k = rows.shape
    code = np.zeros(m, dtype=np.uint64)
    for i in range(k):
        smaller = (rows[:, i + 1 :] < rows[:, i : i + 1]).sum(axis=1, dtype=np.uint64)
        code = code * np.uint64(k - i) + smaller
    return code


def decode_fingerprints(codes: np.ndarray, k: int) -> np.ndarray:
    """Inverse of :func:`fingerprints` on reduced rows; returns uint8 rows with values 1..k."""
    m = codes.shape[0]
    digits = np.empty((m, k), dtype=np.uint8)
    rest = codes.astype(np.uint64, copy=True)
    for i in range(k - 1, -1, -1):
        radix = np.uint64(k - i)
        digits[:, i] = rest % radix
        rest //= radix
    # digits[:, i] is the rank of entry i within the suffix i..k-1; fold right to left
    ranks = np.empty((m, k), dtype=np.uint8)
    for i in range(k - 1, -1, -1):
        d = digits[:, i : i + 1]
        tail = ranks[:, i + 1 :]
        tail += tail >= d
        ranks[:, i] = digits[:, i]
    ranks += 1
    return ranks


def _reduce_rows(vals: np.ndarray) -> np.ndarray:
    return (np.argsort(np.argsort(vals, axis=1, kind="stable"), axis=1) + 1).astype(np.uint8)


def _keys(rows: np.ndarray) -> np.ndarray:
    """Sortable dedup keys for reduced uint8 rows."""
    k = rows.shape[1]
    if k <= MAX_FINGERPRINT_LENGTH:
        return fingerprints(rows)
    return np.ascontiguousarray(rows, dtype=np.uint8).view(f"S{k}").ravel()


def _rows_from_keys(keys: np.ndarray, k: int) -> np.ndarray:
    if k <= MAX_FINGERPRINT_LENGTH:
        return decode_fingerprints(keys, k)
    return np.frombuffer(keys.tobytes(), dtype=np.uint8).reshape(-1, k)


def _key_dtype(k: int) -> np.dtype:
    return np.dtype(np.uint64) if k <= MAX_FINGERPRINT_LENGTH else np.dtype(f"S{k}")


def _children(rows: np.ndarray) -> np.ndarray:
    """All single-entry deletions of each reduced row, re-reduced (not deduplicated)."""
    m, k = rows.shape
    out = np.empty((k, m, k - 1), dtype=np.uint8)
    for j in range(k):
        child = np.delete(rows, j, axis=1)
        child -= child > rows[:, j : j + 1]
        out[j] = child
    return out.reshape(k * m, k - 1)


def _unique_child_keys(rows: np.ndarray) -> np.ndarray:
    return np.unique(_keys(_children(rows)))


def _chunks(m: int, size: int) -> list[slice]:
    return [slice(a, min(a + size, m)) for a in range(0, m, size)]


def _next_level(rows: np.ndarray, workers: int) -> np.ndarray:
    m, k = rows.shape
    size = max(1, _CHUNK_ROWS // k)
    parts = [rows[s] for s in _chunks(m, size)]
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            keys = list(pool.map(_unique_child_keys, parts))
    else:
        keys = [_unique_child_keys(part) for part in parts]
    merged = np.unique(np.concatenate(keys)) if len(keys) > 1 else keys[0]
    return _rows_from_keys(merged, k - 1)


# ---------------------------------------------------------------------------
# public operations


def estimate_cost(n: int) -> int:
    """Upper estimate of pattern reductions: sum over k of min(C(n,k), k!) * k."""
    return sum(min(comb(n, k), factorial(k)) * k for k in range(1, n + 1))


def _check_size(n: int, max_n: int) -> None:
    if n > max_n:
        raise ResourceLimitError(
            f"n={n} exceeds max_n={max_n}: estimated {estimate_cost(n):.3g} pattern reductions "
            f"over {2**n - 1} subsets; raise max_n explicitly"
            + (" or use census_streamed" if n <= STREAM_MAX_N else "")
        )


def census(p: Sequence[int], *, max_n: int = DEFAULT_MAX_N, workers: int = 1) -> CensusResult:
    """Distinct nonempty patterns of ``p``, per length and in total.

    >>> census((2, 3, 1)).total
    4
    """
    p = as_permutation(p)
    n = len(p)
    _check_size(n, max_n)
    if n > 255:
        raise ResourceLimitError("census supports n <= 255")
    rows = np.asarray([p], dtype=np.uint8)
    counts = [1]
    for _ in range(n - 1):
        rows = _next_level(rows, workers)
        counts.append(rows.shape[0])
    per_length = tuple(reversed(counts))
    return CensusResult(n=n, per_length=per_length, total=sum(per_length))


def _combination_chunks(n: int, k: int, size: int) -> Iterable[np.ndarray]:
    if k == 0:
        yield np.empty((1, 0), dtype=np.intp)
        return
    it = combinations(range(n), k)
    while True:
        block = np.fromiter(chain.from_iterable(islice(it, size)), dtype=np.intp)
        if block.size == 0:
            return
        yield block.reshape(-1, k)


def pattern_keys(p: Sequence[int], k: int, *, workers: int = 1) -> np.ndarray:
    """Sorted distinct keys of the length-``k`` patterns of ``p``, by direct subset enumeration."""
    p = as_permutation(p)
    n = len(p)
    if not isinstance(k, int) or not 1 <= k <= n:
        raise InvalidInputError(f"k={k!r} outside 1..{n}")
    values = np.asarray(p, dtype=np.int16)
    size = max(1, _CHUNK_ROWS // k)

    def keys_of(idx: np.ndarray) -> np.ndarray:
        vals = values[idx]
        if k <= MAX_FINGERPRINT_LENGTH:
            return np.unique(fingerprints(vals))
        return np.unique(_keys(_reduce_rows(vals)))

    chunks = _combination_chunks(n, k, size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(keys_of, chunks))
    else:
        parts = [keys_of(c) for c in chunks]
    return np.unique(np.concatenate(parts))


def census_of_length(p: Sequence[int], k: int, *, workers: int = 1) -> int:
    """Distinct length-``k`` patterns of ``p``, enumerating the C(n, k) index subsets directly."""
    return int(pattern_keys(p, k, workers=workers).size)


# ---------------------------------------------------------------------------
# external-memory variant


class _Run:
    """A sorted, duplicate-free key array stored as a raw binary file."""

    def __init__(self, path: Path, dtype: np.dtype, size: int):
        self.path, self.dtype, self.size = path, dtype, size

    @classmethod
    def write(cls, path: Path, keys: np.ndarray) -> "_Run":
        keys.tofile(path)
        return cls(path, keys.dtype, keys.size)

    def read(self, start: int, count: int) -> np.ndarray:
        count = max(0, min(count, self.size - start))
        if count == 0:
            return np.empty(0, dtype=self.dtype)
        return np.fromfile(self.path, dtype=self.dtype, count=count, offset=start * self.dtype.itemsize)

    def blocks(self, size: int) -> Iterable[np.ndarray]:
        for start in range(0, self.size, size):
            yield self.read(start, size)

    def unlink(self) -> None:
        self.path.unlink(missing_ok=True)


def _merge_runs(a: _Run, b: _Run, path: Path, block: int) -> _Run:
    """Chunked union of two sorted unique runs; holds at most 2 * block keys in memory."""
    i = j = written = 0
    with open(path, "wb") as out:
        while i < a.size or j < b.size:
            xa, xb = a.read(i, block), b.read(j, block)
            if xa.size == 0:
                part, j = xb, j + xb.size
            elif xb.size == 0:
                part, i = xa, i + xa.size
            else:
                cut = min(xa[-1], xb[-1])
                na = int(np.searchsorted(xa, cut, side="right"))
                nb = int(np.searchsorted(xb, cut, side="right"))
                part = np.union1d(xa[:na], xb[:nb])
                i, j = i + na, j + nb
            part.tofile(out)
            written += part.size
    a.unlink()
    b.unlink()
    return _Run(path, a.dtype, written)


def census_streamed(
    p: Sequence[int],
    k_range: Iterable[int] | None = None,
    *,
    spill_dir: str | os.PathLike | None = None,
    chunk_rows: int = 1 << 18,
) -> dict[int, int]:
    """Per-length counts with bounded working memory.

    Each level is built from sorted runs of child keys spilled to
    ``spill_dir`` and merged pairwise; at most a few ``chunk_rows``-sized
    blocks are held in memory at once.  Counts agree with :func:`census`.
    """
    p = as_permutation(p)
    n = len(p)
    if n > STREAM_MAX_N:
        raise ResourceLimitError(f"census_streamed supports n <= {STREAM_MAX_N}, got {n}")
    wanted = sorted(set(range(1, n + 1) if k_range is None else k_range))
    if not wanted or wanted[0] < 1 or wanted[-1] > n:
        raise InvalidInputError(f"k_range must lie within 1..{n}")
    if spill_dir is not None:
        spill_dir = Path(spill_dir)
        if not spill_dir.is_dir() or not os.access(spill_dir, os.W_OK):
            raise OSError(f"spill directory {str(spill_dir)!r} is not writable")

    counts = {n: 1}
    with tempfile.TemporaryDirectory(prefix="permpat-", dir=spill_dir) as tmp:
        tmp_path = Path(tmp)
        serial = iter(range(1 << 62))

        def new_path() -> Path:
            return tmp_path / f"run{next(serial)}.bin"

        rows0 = np.asarray([p], dtype=np.uint8)
        level = _Run.write(new_path(), _keys(rows0))
        for k in range(n, wanted[0], -1):
            per_parent = max(1, chunk_rows // k)
            runs = [
                _Run.write(new_path(), _unique_child_keys(_rows_from_keys(block, k)))
                for block in level.blocks(per_parent)
            ]
            level.unlink()
            while len(runs) > 1:
                merged = [
                    _merge_runs(runs[i], runs[i + 1], new_path(), chunk_rows)
                    for i in range(0, len(runs) - 1, 2)
                ]
                if len(runs) % 2:
                    merged.append(runs[-1])
                runs = merged
            level = runs[0]
            assert level.dtype == _key_dtype(k - 1)
            counts[k - 1] = level.size
        level.unlink()
    return {k: counts[k] for k in wanted}
