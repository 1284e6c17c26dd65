"""Exhaustive h(n) = max f(p) over S_n for small n, and a spread-based heuristic scorer."""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Sequence

import numpy as np

from .census import DEFAULT_MAX_N, census, fingerprints
from .constructions import coleman_permutation, wilf_permutation
from .core import InvalidInputError, Permutation, ResourceLimitError, as_permutation

__all__ = [
    "SearchRecord",
    "DifferenceReport",
    "HeuristicEntry",
    "HeuristicReport",
    "SEARCH_MAX_N",
    "KNOWN_H",
    "batch_totals",
    "canonical_mask",
    "canonical_representative",
    "search_h",
    "h_difference_report",
    "distance_score",
    "spread_profile",
    "heuristic_top",
    "doubling_extension_report",
]

log = logging.getLogger(__name__)

# runs without --big up to here
SEARCH_MAX_N = 9

# regression values from search_h (pruned and unpruned agree for n <= 6); h(10) needed --big
KNOWN_H = {1: 1, 2: 2, 3: 4, 4: 8, 5: 15, 6: 28, 7: 55, 8: 109, 9: 226, 10: 452}

# max (permutation, subset) rows per vectorised census batch
_BATCH_ROWS = 1 << 21


@lru_cache(maxsize=None)
def _combos(n: int, k: int) -> np.ndarray:
    return np.array(list(combinations(range(n), k)), dtype=np.intp).reshape(-1, k)


def batch_totals(perms: np.ndarray) -> np.ndarray:
    """f(p) for every row of an (m, n) array of permutations, n <= 20."""
    perms = np.asarray(perms)
    m, n = perms.shape
    totals = np.zeros(m, dtype=np.int64)
    for k in range(1, n + 1):
        idx = _combos(n, k)
        step = max(1, _BATCH_ROWS // idx.shape[0])
        for a in range(0, m, step):
            vals = perms[a : a + step][:, idx]  # (b, C, k)
            b, c = vals.shape[:2]
            codes = np.sort(fingerprints(vals.reshape(b * c, k)).reshape(b, c), axis=1)
            totals[a : a + step] += 1 + np.count_nonzero(np.diff(codes, axis=1), axis=1)
    return totals


def _images(perms: np.ndarray) -> list[np.ndarray]:
    m, n = perms.shape
    rev = perms[:, ::-1]
    comp = n + 1 - perms
    base = [perms, rev, comp, comp[:, ::-1]]
    rows = np.arange(m)[:, None]
    out = list(base)
    for b in base:
        inv = np.empty_like(b)
        inv[rows, b - 1] = np.arange(1, n + 1, dtype=b.dtype)
        out.append(inv)
    return out


def canonical_mask(perms: np.ndarray) -> np.ndarray:
    """Rows that are the lexicographic minimum of their orbit under reverse/complement/inverse."""
    ranks = [fingerprints(img) for img in _images(perms)]
    return ranks[0] == np.minimum.reduce(ranks)


def canonical_representative(p: Sequence[int]) -> Permutation:
    arr = np.asarray([p], dtype=np.int16)
    return min(tuple(int(v) for v in img[0]) for img in _images(arr))


@dataclass(frozen=True)
class SearchRecord:
    n: int
    h_value: int
    argmax_permutations: tuple[Permutation, ...]
    elapsed: float
    classes_examined: int

    def all_maximizers(self) -> list[Permutation]:
        """Every maximizing permutation: the argmax representatives expanded over their orbits."""
        arr = np.asarray(self.argmax_permutations, dtype=np.int16)
        return sorted({tuple(int(v) for v in row) for img in _images(arr) for row in img})


def _block(n: int, prefix: tuple[int, ...], prune: bool) -> tuple[int, list[Permutation], int]:
    rest = [v for v in range(1, n + 1) if v not in prefix]
    tails = np.fromiter(
        (v for t in permutations(rest) for v in t), dtype=np.int16, count=math.factorial(len(rest)) * len(rest)
    ).reshape(-1, len(rest))
    perms = np.concatenate([np.broadcast_to(np.asarray(prefix, dtype=np.int16), (len(tails), len(prefix))), tails], axis=1)
    if prune:
        perms = perms[canonical_mask(perms)]
    if len(perms) == 0:
        return 0, [], 0
    totals = batch_totals(perms)
    best = int(totals.max())
    winners = perms[totals == best]
    if not prune:
        winners_t = {canonical_representative(w) for w in winners.tolist()}
    else:
        winners_t = {tuple(w) for w in winners.tolist()}
    return best, sorted(winners_t), len(perms)


def _block_args(n: int, prune: bool) -> list[tuple[int, tuple[int, ...], bool]]:
    if n <= 2:
        return [(n, (), prune)]
    return [(n, (a, b), prune) for a in range(1, n + 1) for b in range(1, n + 1) if a != b]


def _run_block(args: tuple[int, tuple[int, ...], bool]) -> tuple[int, list[Permutation], int]:
    return _block(*args)


def search_cost(n: int) -> str:
    perms = math.factorial(n)
    return f"~{perms:,} permutations (~{perms // 8:,} orbit representatives) x {2**n - 1} subsets each"


def search_h(n: int, *, big: bool = False, workers: int = 1, prune: bool = True) -> SearchRecord:
    """Exact h(n), enumerating one representative per symmetry orbit unless ``prune`` is False."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if n > SEARCH_MAX_N and not big:
        raise ResourceLimitError(f"h({n}) needs big=True: {search_cost(n)}")
    if n > 20:
        raise ResourceLimitError(f"search supports n <= 20, got {n}")
    if n > SEARCH_MAX_N:
        log.warning("searching h(%d): %s", n, search_cost(n))
    start = time.perf_counter()
    jobs = _block_args(n, prune)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block, jobs))
    else:
        results = [_run_block(j) for j in jobs]
    best = max(r[0] for r in results)
    argmax = sorted({w for r in results if r[0] == best for w in r[1]})
    return SearchRecord(
        n=n,
        h_value=best,
        argmax_permutations=tuple(argmax),
        elapsed=time.perf_counter() - start,
        classes_examined=sum(r[2] for r in results),
    )


@dataclass(frozen=True)
class DifferenceReport:
    h_values: tuple[int, ...]  # h(1)..h(n_max)
    differences: tuple[int, ...]  # h(n) - h(n-1) for n = 2..n_max

    @property
    def all_positive(self) -> bool:
        return all(d > 0 for d in self.differences)

    @property
    def increasing(self) -> bool:
        """No decrease among consecutive first differences."""
        return all(a <= b for a, b in zip(self.differences, self.differences[1:]))


def h_difference_report(n_max: int, *, big: bool = False, workers: int = 1) -> DifferenceReport:
    h = tuple(search_h(n, big=big, workers=workers).h_value for n in range(1, n_max + 1))
    return DifferenceReport(h, tuple(b - a for a, b in zip(h, h[1:])))


# ---------------------------------------------------------------------------
# distance heuristic


def distance_score(p: Sequence[int]) -> int:
    """Sum over pairs i < j of (j - i) + |p_i - p_j|.

    Both halves are sums over all pairs from {1..n}, so the score is the same
    for every permutation of a given length: n(n^2 - 1)/3.
    """
    p = as_permutation(p)
    n = len(p)
    return sum((j - i) + abs(p[i] - p[j]) for i in range(n) for j in range(i + 1, n))


def _pair_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def spread_profile(perms: np.ndarray) -> np.ndarray:
    """Sorted pairwise L1 distances |i - j| + |p_i - p_j| of the point sets {(i, p_i)}, one row per permutation."""
    perms = np.atleast_2d(np.asarray(perms, dtype=np.int64))
    i, j = _pair_index(perms.shape[1])
    d = (j - i)[None, :] + np.abs(perms[:, i] - perms[:, j])
    return np.sort(d, axis=1)


def _best_row(profiles: np.ndarray) -> int:
    # lexicographically largest sorted profile = maximin with tie-breaks
    return int(np.lexsort(profiles.T[::-1])[-1])


def _ascend(p: np.ndarray) -> np.ndarray:
    n = len(p)
    swaps = [(a, b) for a in range(n) for b in range(a + 1, n)]
    current = p.copy()
    current_profile = spread_profile(current)[0]
    while swaps:
        cands = np.repeat(current[None, :], len(swaps), axis=0)
        for r, (a, b) in enumerate(swaps):
            cands[r, a], cands[r, b] = current[b], current[a]
        profiles = spread_profile(cands)
        r = _best_row(profiles)
        if tuple(profiles[r]) <= tuple(current_profile):
            break
        current, current_profile = cands[r], profiles[r]
    return current


@dataclass(frozen=True)
class HeuristicEntry:
    label: str
    permutation: Permutation
    distance_score: int
    min_spread: int
    census_total: int


@dataclass(frozen=True)
class HeuristicReport:
    n: int
    beam: int
    seed: int
    restarts: int
    ranked: tuple[HeuristicEntry, ...]
    references: tuple[HeuristicEntry, ...]


def _entry(label: str, p: Sequence[int], max_n: int) -> HeuristicEntry:
    p = tuple(int(v) for v in p)
    return HeuristicEntry(
        label=label,
        permutation=p,
        distance_score=distance_score(p),
        min_spread=int(spread_profile(np.asarray(p))[0, 0]) if len(p) > 1 else 0,
        census_total=census(p, max_n=max_n).total,
    )


def heuristic_top(
    n: int, beam: int, *, seed: int = 2003, restarts: int | None = None, max_n: int = DEFAULT_MAX_N
) -> HeuristicReport:
    """Steepest-ascent swap search for well-spread permutations, ranked with exact census totals.

    Heuristic only: no optimality claim is made.  ``distance_score`` is
    constant on S_n, so the ascent maximises the sorted profile of pairwise
    L1 distances instead (largest minimum distance first).
    """
    if n < 1 or beam < 1:
        raise InvalidInputError("heuristic needs n >= 1 and beam >= 1")
    if n > max_n:
        raise ResourceLimitError(f"n={n} exceeds census cap {max_n}")
    restarts = restarts if restarts is not None else max(8, 4 * beam)
    rng = random.Random(seed)
    found: dict[Permutation, tuple[int, ...]] = {}
    for _ in range(restarts):
        start = list(range(1, n + 1))
        rng.shuffle(start)
        best = _ascend(np.asarray(start, dtype=np.int64)) if n > 1 else np.asarray(start)
        t = tuple(int(v) for v in best)
        found[t] = tuple(spread_profile(best)[0].tolist()) if n > 1 else ()
    order = sorted(found, key=lambda t: (tuple(-d for d in found[t]), t))
    ranked = tuple(_entry(f"local-optimum-{i + 1}", t, max_n) for i, t in enumerate(order[:beam]))
    refs = [_entry(f"W_{n}", wilf_permutation(n), max_n)]
    k = math.isqrt(n)
    if k * k == n and k >= 2:
        refs.append(_entry(f"pi_{k}", coleman_permutation(k).body, max_n))
    return HeuristicReport(n, beam, seed, restarts, ranked, tuple(refs))


def doubling_extension_report(n_max: int = 6) -> list[tuple[int, int, int]]:
    """For each n: (n, permutations p in S_n, how many have an (n+1)-extension with f >= 2 f(p)).

    Exploratory only; asserts nothing.
    """
    rows = []
    for n in range(1, n_max + 1):
        perms = np.array(list(permutations(range(1, n + 1))), dtype=np.int16)
        f = batch_totals(perms)
        ok = 0
        for p, fp in zip(perms.tolist(), f.tolist()):
            exts = []
            for pos in range(n + 1):
                for val in range(1, n + 2):
                    shifted = [v + (v >= val) for v in p]
                    exts.append(shifted[:pos] + [val] + shifted[pos:])
            if batch_totals(np.asarray(exts, dtype=np.int16)).max() >= 2 * fp:
                ok += 1
        rows.append((n, len(perms), ok))
    return rows
