import pytest

from permpat.census import census
from permpat.constructions import (
    RECORD15,
    coleman_permutation,
    perigees,
    record15,
    wilf_permutation,
)
from permpat.core import InvalidInputError, as_permutation, descents, reduce

# f(W_n) for n = 1..14 by brute-force subset enumeration (tests/oracles.py), frozen
WILF_TOTALS = (1, 2, 4, 7, 12, 20, 33, 54, 88, 143, 232, 376, 609, 986)


@pytest.mark.parametrize("n, expected", [(1, (1,)), (4, (1, 4, 2, 3)), (5, (1, 5, 2, 4, 3))])
def test_wilf_examples(n, expected):
    assert wilf_permutation(n) == expected


def test_wilf_alternation():
    for n in range(1, 31):
        w = wilf_permutation(n)
        assert as_permutation(w) == w
        assert list(w[0::2]) == list(range(1, len(w[0::2]) + 1))
        assert list(w[1::2]) == list(range(n, n - len(w[1::2]), -1))
        # closing entry is floor(n/2 + 1)
        assert w[-1] == (n + 2) // 2


def test_wilf_rejects():
    with pytest.raises(InvalidInputError):
        wilf_permutation(0)


def test_wilf_totals():
    assert tuple(census(wilf_permutation(n)).total for n in range(1, 15)) == WILF_TOTALS


def test_wilf_fibonacci_recurrence():
    f = WILF_TOTALS
    for n in range(3, 15):
        assert f[n - 1] >= f[n - 2] + f[n - 3]


@pytest.mark.parametrize(
    "k, expected",
    [
        (2, (2, 4, 1, 3)),
        (3, (3, 6, 9, 2, 5, 8, 1, 4, 7)),
        (4, (4, 8, 12, 16, 3, 7, 11, 15, 2, 6, 10, 14, 1, 5, 9, 13)),
    ],
)
def test_coleman_examples(k, expected):
    c = coleman_permutation(k)
    assert c.body == expected
    assert c.n == k * k


def test_coleman_rejects():
    for k in (1, 0, -3):
        with pytest.raises(InvalidInputError):
            coleman_permutation(k)


@pytest.mark.parametrize("k", range(2, 9))
def test_coleman_structure(k):
    c = coleman_permutation(k)
    assert as_permutation(c.body) == c.body
    assert descents(c.body) == {j * k for j in range(1, k)}
    segs = c.segments()
    for j, seg in enumerate(segs, start=1):
        assert seg == tuple(i * k - j + 1 for i in range(1, k + 1))
        assert reduce(seg) == tuple(range(1, k + 1))
    for i in range(k):
        for a in range(k):
            for b in range(a + 1, k):
                assert segs[b][i] < segs[a][i]


@pytest.mark.parametrize(
    "k, positions, values",
    [(2, (1, 3), (2, 1)), (3, (1, 4, 7), (3, 2, 1)), (4, (1, 5, 9, 13), (4, 3, 2, 1))],
)
def test_perigees(k, positions, values):
    c = coleman_permutation(k)
    got = perigees(c)
    assert tuple(p for p, _ in got) == positions == c.perigee_positions
    assert tuple(v for _, v in got) == values


def test_record15():
    p = record15()
    assert p == RECORD15 == (5, 12, 2, 7, 15, 10, 4, 13, 8, 1, 11, 6, 14, 3, 9)
    assert len(p) == 15
    assert census(p).total > 2**14
