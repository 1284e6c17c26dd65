"""Permutations, patterns, and the order-isomorphism machinery shared by every module.

Permutations and patterns are plain tuples of 1-based values.  The helpers
here validate, reduce (flatten), compare, transform, and fingerprint them.
"""

from __future__ import annotations

from math import factorial
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Permutation",
    "Pattern",
    "PatternFingerprint",
    "InvalidInputError",
    "CapacityError",
    "ResourceLimitError",
    "MAX_FINGERPRINT_LENGTH",
    "as_permutation",
    "parse_permutation",
    "format_permutation",
    "reduce",
    "identically_ordered",
    "contains",
    "complement",
    "reverse",
    "inverse",
    "descents",
    "symmetry_images",
    "encode_fingerprint",
    "decode_fingerprint",
    "pattern_key",
]

Permutation = tuple[int, ...]
Pattern = tuple[int, ...]

# 20! - 1 < 2**64 <= 21! - 1
MAX_FINGERPRINT_LENGTH = 20


class InvalidInputError(ValueError):
    """Input is not a well-formed permutation / sequence for the operation."""


class CapacityError(ValueError):
    """Pattern too long for a 64-bit fingerprint."""


class ResourceLimitError(RuntimeError):
    """A computation was refused because its estimated cost exceeds the configured cap."""


class PatternFingerprint(NamedTuple):
    code: int
    length: int


def as_permutation(values: Iterable[int]) -> Permutation:
    """Validate ``values`` as a permutation of 1..n and return it as a tuple."""
    p = tuple(int(v) for v in values)
    n = len(p)
    if n == 0:
        raise InvalidInputError("empty permutation")
    seen = [False] * (n + 1)
    for v in p:
        if v < 1 or v > n:
            raise InvalidInputError(f"value {v} outside 1..{n}")
        if seen[v]:
            raise InvalidInputError(f"duplicate value {v}")
        seen[v] = True
    return p


def parse_permutation(text: str) -> Permutation:
    """Parse the one-line text format, e.g. ``"3 6 9 2 5 8 1 4 7"``."""
    tokens = text.split()
    try:
        values = [int(t, 10) for t in tokens]
    except ValueError as exc:
        raise InvalidInputError(f"non-integer token in permutation text: {text!r}") from exc
    return as_permutation(values)


def format_permutation(p: Sequence[int]) -> str:
    return " ".join(str(v) for v in p)


def reduce(seq: Sequence[int]) -> Pattern:
    """Replace each value by its rank among ``seq`` (1-based).

    >>> reduce((5, 12, 2))
    (2, 3, 1)
    """
    k = len(seq)
    if k == 0:
        raise InvalidInputError("cannot reduce an empty sequence")
    order = sorted(range(k), key=seq.__getitem__)
    out = [0] * k
    prev = None
    for rank, i in enumerate(order, start=1):
        v = seq[i]
        if v == prev:
            raise InvalidInputError(f"duplicate value {v}")
        prev = v
        out[i] = rank
    return tuple(out)


def identically_ordered(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if len(a) == 0:
        return True
    return reduce(a) == reduce(b)


def _neighbour_constraints(q: Sequence[int]) -> list[tuple[int, int]]:
    # For each step t: indices (into q[:t]) of the closest smaller and closest
    # larger earlier value, or -1.
    cons = []
    for t, v in enumerate(q):
        lo = hi = -1
        for s in range(t):
            w = q[s]
            if w < v and (lo < 0 or w > q[lo]):
                lo = s
            elif w > v and (hi < 0 or w < q[hi]):
                hi = s
        cons.append((lo, hi))
    return cons


def contains(p: Sequence[int], q: Sequence[int]) -> bool:
    """True iff some subsequence of ``p`` is order-isomorphic to ``q``.

    Left-to-right backtracking; each new entry only has to sit between the
    images of its nearest smaller and larger predecessors in ``q``.
    """
    n, k = len(p), len(q)
    if k > n:
        return False
    if k == 0:
        return True
    cons = _neighbour_constraints(q)
    chosen = [0] * k

    def extend(t: int, start: int) -> bool:
        if t == k:
            return True
        lo, hi = cons[t]
        low = p[chosen[lo]] if lo >= 0 else 0
        high = p[chosen[hi]] if hi >= 0 else n + 1
        # leave room for the k - t - 1 entries still to place
        for i in range(start, n - (k - t) + 1):
            v = p[i]
            if low < v < high:
                chosen[t] = i
                if extend(t + 1, i + 1):
                    return True
        return False

    return extend(0, 0)


def complement(p: Sequence[int]) -> Permutation:
    n = len(p)
    return tuple(n - v + 1 for v in p)


def reverse(p: Sequence[int]) -> Permutation:
    return tuple(reversed(p))


def inverse(p: Sequence[int]) -> Permutation:
    q = [0] * len(p)
    for i, v in enumerate(p, start=1):
        q[v - 1] = i
    return tuple(q)


def descents(p: Sequence[int]) -> set[int]:
    """1-based positions i < n with p_i > p_{i+1}."""
    return {i + 1 for i in range(len(p) - 1) if p[i] > p[i + 1]}


def symmetry_images(p: Sequence[int]) -> list[Permutation]:
    """All images of ``p`` under the order-8 group generated by reverse, complement, inverse."""
    base = [tuple(p), reverse(p), complement(p), reverse(complement(p))]
    return base + [inverse(b) for b in base]


def _lehmer(q: Sequence[int]) -> list[int]:
    k = len(q)
    return [sum(1 for j in range(i + 1, k) if q[j] < q[i]) for i in range(k)]


def encode_fingerprint(q: Sequence[int]) -> PatternFingerprint:
    """Lehmer code of ``q`` packed in factorial base.

    The code is also the lexicographic rank of ``q`` among patterns of its
    length, so ``(1,)`` maps to 0 and the decreasing pattern to ``k! - 1``.
    """
    k = len(q)
    if k > MAX_FINGERPRINT_LENGTH:
        raise CapacityError(
            f"pattern length {k} exceeds 64-bit fingerprint capacity "
            f"({MAX_FINGERPRINT_LENGTH}); use pattern_key() for wide patterns"
        )
    if k == 0:
        raise InvalidInputError("empty pattern")
    code = 0
    for i, d in enumerate(_lehmer(q)):
        code = code * (k - i) + d
    return PatternFingerprint(code, k)


def decode_fingerprint(f: PatternFingerprint) -> Pattern:
    code, k = f
    if k > MAX_FINGERPRINT_LENGTH:
        raise CapacityError(f"fingerprint length {k} exceeds {MAX_FINGERPRINT_LENGTH}")
    if k < 1 or not 0 <= code < factorial(k):
        raise InvalidInputError(f"invalid fingerprint {f!r}")
    digits = []
    for radix in range(1, k + 1):
        code, d = divmod(code, radix)
        digits.append(d)
    digits.reverse()
    remaining = list(range(1, k + 1))
    return tuple(remaining.pop(d) for d in digits)


def pattern_key(q: Sequence[int]) -> int | bytes:
    """Dedup key: the 64-bit code when it fits, else one byte per entry."""
    if len(q) <= MAX_FINGERPRINT_LENGTH:
        return encode_fingerprint(q).code
    if len(q) > 255:
        raise CapacityError("patterns longer than 255 have no byte key")
    return bytes(q)
