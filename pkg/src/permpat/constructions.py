"""Permutation families: Wilf's alternating W_n, the k^2-length segment family, and the n = 15 record."""

from __future__ import annotations

from dataclasses import dataclass

from .core import InvalidInputError, Permutation

__all__ = [
    "ColemanPermutation",
    "wilf_permutation",
    "coleman_permutation",
    "record15",
    "perigees",
    "RECORD15",
]

RECORD15: Permutation = (5, 12, 2, 7, 15, 10, 4, 13, 8, 1, 11, 6, 14, 3, 9)


def wilf_permutation(n: int) -> Permutation:
    """1, n, 2, n-1, ...: alternately the lowest and highest value not yet used."""
    if n < 1:
        raise InvalidInputError(f"W_n needs n >= 1, got {n}")
    lo, hi = 1, n
    out = []
    take_low = True
    while lo <= hi:
        if take_low:
            out.append(lo)
            lo += 1
        else:
            out.append(hi)
            hi -= 1
        take_low = not take_low
    return tuple(out)


@dataclass(frozen=True)
class ColemanPermutation:
    """The permutation k, 2k, ..., k^2, k-1, 2k-1, ..., 1, k+1, ..., k^2-k+1 of length k^2.

    It is made of k increasing segments of length k; segment j (1-based)
    is k-j+1, 2k-j+1, ..., k^2-j+1.
    """

    k: int
    body: Permutation

    @property
    def n(self) -> int:
        return self.k * self.k

    @property
    def perigee_positions(self) -> tuple[int, ...]:
        return tuple((j - 1) * self.k + 1 for j in range(1, self.k + 1))

    def segment(self, j: int) -> Permutation:
        k = self.k
        return self.body[(j - 1) * k : j * k]

    def segments(self) -> list[Permutation]:
        return [self.segment(j) for j in range(1, self.k + 1)]


def coleman_permutation(k: int) -> ColemanPermutation:
    if k < 2:
        raise InvalidInputError(f"pi_k needs k >= 2, got {k}")
    body = tuple(i * k - j + 1 for j in range(1, k + 1) for i in range(1, k + 1))
    return ColemanPermutation(k, body)


def record15() -> Permutation:
    return RECORD15


def perigees(c: ColemanPermutation) -> list[tuple[int, int]]:
    """(position, value) of the first entry of every segment."""
    return [(pos, c.body[pos - 1]) for pos in c.perigee_positions]
