"""Finite checks of the 2^(n - 2 sqrt n) / sqrt n lower bound, built on the pi_k family.

For pi_k, the restricted family keeps every entry of the first segment and
every segment's first entry (its perigee), then picks floor((k-1)^2 / 2) of
the (k-1)^2 remaining positions.  Every such subsequence should reduce to a
different pattern; :func:`verify_distinctness` checks that exhaustively for
small k, and :func:`bound_chain` lays the family size beside the bounds it is
meant to beat.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .census import _combination_chunks, _keys, _reduce_rows, census
from .constructions import coleman_permutation, wilf_permutation
from .core import InvalidInputError, ResourceLimitError, descents, reduce

__all__ = [
    "RestrictedFamilySpec",
    "DistinctnessReport",
    "BoundReport",
    "GOLDEN_RATIO",
    "FAMILY_MAX_K",
    "restricted_family_spec",
    "restricted_family",
    "verify_distinctness",
    "descent_lemma_holds",
    "theorem_bound",
    "theorem_bound_log2",
    "improved_constant_bound",
    "improved_constant_bound_log2",
    "bound_chain",
    "central_binomial_ratio",
    "golden_comparison",
]

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
FAMILY_MAX_K = 6
# above this n, floats are derived from log2 values only
LOG_SCALE_N = 400

_CHUNK = 1 << 16


@dataclass(frozen=True)
class RestrictedFamilySpec:
    k: int
    required_positions: tuple[int, ...]
    free_positions: tuple[int, ...]
    choose: int

    @property
    def member_length(self) -> int:
        return len(self.required_positions) + self.choose

    @property
    def family_size(self) -> int:
        return math.comb(len(self.free_positions), self.choose)


def restricted_family_spec(k: int) -> RestrictedFamilySpec:
    if k < 2:
        raise InvalidInputError(f"k must be >= 2, got {k}")
    n = k * k
    required = sorted(set(range(1, k + 1)) | {(j - 1) * k + 1 for j in range(2, k + 1)})
    free = [i for i in range(1, n + 1) if i not in set(required)]
    return RestrictedFamilySpec(k, tuple(required), tuple(free), len(free) // 2)


def _check_family_k(k: int) -> RestrictedFamilySpec:
    spec = restricted_family_spec(k)
    if k > FAMILY_MAX_K:
        raise ResourceLimitError(
            f"restricted family of pi_{k} has {spec.family_size:.3g} members; "
            f"enumeration is limited to k <= {FAMILY_MAX_K}"
        )
    return spec


def _position_blocks(spec: RestrictedFamilySpec) -> Iterator[np.ndarray]:
    """0-based sorted position arrays for consecutive blocks of family members."""
    free = np.asarray(spec.free_positions, dtype=np.intp) - 1
    required = np.asarray(spec.required_positions, dtype=np.intp) - 1
    for idx in _combination_chunks(len(free), spec.choose, _CHUNK):
        chosen = free[idx]
        pos = np.concatenate([np.broadcast_to(required, (len(chosen), len(required))), chosen], axis=1)
        pos.sort(axis=1)
        yield pos


def restricted_family(k: int) -> Iterator[tuple[int, ...]]:
    """Yield every member (as values of pi_k) in lexicographic order of the chosen free positions."""
    spec = _check_family_k(k)
    body = coleman_permutation(k).body
    req = set(spec.required_positions)
    for chosen in combinations(spec.free_positions, spec.choose):
        positions = sorted(req.union(chosen))
        yield tuple(body[i - 1] for i in positions)


@dataclass(frozen=True)
class DistinctnessReport:
    k: int
    family_size: int
    distinct_patterns: int
    all_distinct: bool
    counterexample: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def _block_keys(body: np.ndarray, pos: np.ndarray) -> np.ndarray:
    return _keys(_reduce_rows(body[pos]))


def verify_distinctness(k: int, *, workers: int = 1) -> DistinctnessReport:
    """Reduce every family member and count distinct patterns."""
    spec = _check_family_k(k)
    body = np.asarray(coleman_permutation(k).body, dtype=np.int16)
    blocks = _position_blocks(spec)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda pos: _block_keys(body, pos), blocks))
    else:
        parts = [_block_keys(body, pos) for pos in blocks]
    keys = np.concatenate(parts)
    uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
    witness = None
    if uniq.size != keys.size:
        dup_key = uniq[np.argmax(counts > 1)]
        a, b = np.flatnonzero(keys == dup_key)[:2]
        members = list(restricted_family(k))
        witness = (members[a], members[b])
    return DistinctnessReport(
        k=k,
        family_size=int(keys.size),
        distinct_patterns=int(uniq.size),
        all_distinct=witness is None,
        counterexample=witness,
    )


def descent_lemma_holds(k: int) -> bool:
    """Every member's reduced pattern descends exactly into the perigees it contains (other than the first)."""
    spec = _check_family_k(k)
    c = coleman_permutation(k)
    later_perigees = set(c.perigee_positions[1:])
    req = set(spec.required_positions)
    for chosen in combinations(spec.free_positions, spec.choose):
        positions = sorted(req.union(chosen))
        pattern = reduce([c.body[i - 1] for i in positions])
        # a perigee at 0-based index t makes 1-based position t a descent
        expected = {t for t, pos in enumerate(positions) if pos in later_perigees}
        if descents(pattern) != expected:
            return False
    return True


# ---------------------------------------------------------------------------
# bounds


def theorem_bound_log2(n: int) -> float:
    r = math.sqrt(n)
    return (n - 2 * r) - math.log2(r)


def theorem_bound(n: int) -> float:
    """2^(n - 2 sqrt n) / sqrt n in double precision (inf once it overflows)."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    r = math.sqrt(n)
    if r == int(r):
        # exact for perfect squares
        return 2.0 ** (n - 2 * int(r)) / int(r) if n <= LOG_SCALE_N else _exp2(theorem_bound_log2(n))
    return _exp2(theorem_bound_log2(n))


def improved_constant_bound_log2(n: int) -> float:
    """log2 of (2 sqrt 2 / sqrt pi) * 2^(n - 2 sqrt n) / (sqrt n - 1), for n > 1."""
    r = math.sqrt(n)
    return math.log2(2 * math.sqrt(2) / math.sqrt(math.pi)) + (n - 2 * r) - math.log2(r - 1)


def improved_constant_bound(n: int) -> float:
    """(2 sqrt 2 / sqrt pi) * 2^(n - 2 sqrt n) / (sqrt n - 1), for n > 1."""
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    if n > LOG_SCALE_N:
        return _exp2(improved_constant_bound_log2(n))
    r = math.sqrt(n)
    return (2 * math.sqrt(2) / math.sqrt(math.pi)) * 2.0 ** (n - 2 * r) / (r - 1)


def _exp2(x: float) -> float:
    return 2.0**x if x < 1024 else math.inf


def _log2_int(x: int) -> float:
    return math.log2(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class BoundReport:
    n: int
    k: int
    family_count: int
    stirling_estimate: float
    theorem_bound: float
    improved_constant_bound: float
    golden_bound: float
    cap: int
    log2_family_count: float
    log2_stirling_estimate: float
    log2_theorem_bound: float
    log2_improved_constant_bound: float
    log2_golden_bound: float
    comparisons: tuple[tuple[str, bool], ...]

    def ok(self) -> bool:
        return all(flag for _, flag in self.comparisons)


def bound_chain(k: int) -> BoundReport:
    if k < 2:
        raise InvalidInputError(f"k must be >= 2, got {k}")
    n = k * k
    free = (k - 1) ** 2
    family = math.comb(free, free // 2)
    cap = 2**n - 1

    lg_family = _log2_int(family)
    lg_stirling = 0.5 * math.log2(2 / math.pi) + free - math.log2(k - 1)
    lg_theorem = theorem_bound_log2(n)
    lg_improved = improved_constant_bound_log2(n)
    lg_golden = n * math.log2(GOLDEN_RATIO)

    if n <= LOG_SCALE_N:
        stirling = math.sqrt(2 / math.pi) * 2.0**free / (k - 1)
        theorem = theorem_bound(n)
        improved = improved_constant_bound(n)
        golden = GOLDEN_RATIO**n
        family_beats_theorem = family > theorem
        improved_beats_theorem = improved > theorem
    else:
        stirling, theorem = _exp2(lg_stirling), _exp2(lg_theorem)
        improved, golden = _exp2(lg_improved), _exp2(lg_golden)
        family_beats_theorem = lg_family > lg_theorem
        improved_beats_theorem = lg_improved > lg_theorem

    comparisons = (
        ("family_count > theorem_bound", family_beats_theorem),
        ("improved_constant_bound > theorem_bound", improved_beats_theorem),
        ("family_count <= cap", family <= cap),
        ("theorem_bound < cap", lg_theorem < math.log2(cap)),
    )
    return BoundReport(
        n=n,
        k=k,
        family_count=family,
        stirling_estimate=stirling,
        theorem_bound=theorem,
        improved_constant_bound=improved,
        golden_bound=golden,
        cap=cap,
        log2_family_count=lg_family,
        log2_stirling_estimate=lg_stirling,
        log2_theorem_bound=lg_theorem,
        log2_improved_constant_bound=lg_improved,
        log2_golden_bound=lg_golden,
        comparisons=comparisons,
    )


def central_binomial_ratio(m: int) -> float:
    """binomial(2m, m) * sqrt(pi m) / 4^m, with the binomial and power of 4 kept exact."""
    return float(Fraction(math.comb(2 * m, m), 4**m)) * math.sqrt(math.pi * m)


def golden_comparison(n_max: int = 14) -> tuple[list[tuple[int, int, float, bool]], int | None]:
    """Rows (n, f(W_n), phi^n, f(W_n) > phi^n) and the first n from which the inequality holds through n_max."""
    rows = []
    for n in range(1, n_max + 1):
        f = census(wilf_permutation(n)).total
        g = GOLDEN_RATIO**n
        rows.append((n, f, g, f > g))
    first = None
    for n, _, _, ok in reversed(rows):
        if not ok:
            break
        first = n
    return rows, first
