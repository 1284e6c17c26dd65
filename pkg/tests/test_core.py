from itertools import permutations
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import perms
from oracles import all_perms, naive_contains, naive_reduce
from permpat.core import (
    MAX_FINGERPRINT_LENGTH,
    CapacityError,
    InvalidInputError,
    PatternFingerprint,
    as_permutation,
    complement,
    contains,
    decode_fingerprint,
    descents,
    encode_fingerprint,
    format_permutation,
    identically_ordered,
    inverse,
    parse_permutation,
    pattern_key,
    reduce,
    reverse,
    symmetry_images,
)

RECORD = (5, 12, 2, 7, 15, 10, 4, 13, 8, 1, 11, 6, 14, 3, 9)
PI3 = (3, 6, 9, 2, 5, 8, 1, 4, 7)


@pytest.mark.parametrize(
    "seq, expected",
    [
        ((5, 12, 2), (2, 3, 1)),
        ((3, 6, 9), (1, 2, 3)),
        ((4, 8, 12, 16, 3), (2, 3, 4, 5, 1)),
    ],
)
def test_reduce_examples(seq, expected):
    assert reduce(seq) == expected


@pytest.mark.parametrize("bad", [(), (1, 1), (3, 5, 3)])
def test_reduce_rejects(bad):
    with pytest.raises(InvalidInputError):
        reduce(bad)


distinct_seqs = st.lists(st.integers(-1000, 1000), min_size=1, max_size=12, unique=True)


@given(distinct_seqs)
def test_reduce_properties(seq):
    r = reduce(seq)
    assert r == naive_reduce(seq)
    assert reduce(r) == r
    assert sorted(r) == list(range(1, len(seq) + 1))
    for i in range(len(seq)):
        for j in range(len(seq)):
            assert (r[i] < r[j]) == (seq[i] < seq[j])


def test_identically_ordered_examples():
    assert identically_ordered((5, 12, 2), (4, 13, 1))
    assert not identically_ordered((1, 2), (2, 1))
    assert identically_ordered((3, 6, 9), (2, 5, 8))
    assert not identically_ordered((1, 2), (1, 2, 3))


@given(distinct_seqs, distinct_seqs)
def test_identically_ordered_matches_pairwise_definition(a, b):
    pairwise = len(a) == len(b) and all(
        (a[i] < a[j]) == (b[i] < b[j]) for i in range(len(a)) for j in range(len(a))
    )
    assert identically_ordered(a, b) == pairwise


def test_identically_ordered_iff_same_reduction_exhaustive():
    for n in range(1, 5):
        ps = all_perms(n)
        for a in ps:
            for b in ps:
                assert identically_ordered(a, b) == (reduce(a) == reduce(b))


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ((1, 2, 3), (2, 1), False),
        (PI3, (2, 1), True),
        ((2, 3, 1), (1, 2), True),
        ((1, 2), (1, 2, 3), False),
    ],
)
def test_contains_examples(p, q, expected):
    assert contains(p, q) is expected


def test_contains_matches_subset_oracle_exhaustive():
    for n in range(1, 6):
        for p in all_perms(n):
            for k in range(1, n + 1):
                for q in permutations(range(1, k + 1)):
                    assert contains(p, q) == naive_contains(p, q), (p, q)


@given(perms(1, 9), perms(1, 5))
def test_contains_matches_oracle_random(p, q):
    assert contains(p, q) == naive_contains(p, q)


def test_contains_symmetric_under_group_n6():
    for p in all_perms(6)[::7]:
        for k in range(1, 5):
            for q in permutations(range(1, k + 1)):
                c = contains(p, q)
                assert c == contains(complement(p), complement(q))
                assert c == contains(reverse(p), reverse(q))
                assert c == contains(inverse(p), inverse(q))


@pytest.mark.parametrize(
    "p, expected",
    [((1, 2, 3), (3, 2, 1)), ((2, 3, 1), (2, 1, 3)), (RECORD, (11, 4, 14, 9, 1, 6, 12, 3, 8, 15, 5, 10, 2, 13, 7))],
)
def test_complement(p, expected):
    assert complement(p) == expected


def test_reverse_inverse_examples():
    assert reverse((1, 2, 3)) == (3, 2, 1)
    assert reverse((2, 3, 1)) == (1, 3, 2)
    assert inverse((1, 2, 3)) == (1, 2, 3)
    assert inverse((2, 3, 1)) == (3, 1, 2)


def test_symmetries_are_involutions_exhaustive():
    for n in range(1, 9):
        for p in permutations(range(1, n + 1)):
            assert complement(complement(p)) == p
            assert reverse(reverse(p)) == p
            assert inverse(inverse(p)) == p


def test_symmetry_images_form_closed_set():
    p = (2, 4, 1, 3, 5)
    images = set(symmetry_images(p))
    for q in images:
        assert set(symmetry_images(q)) == images


def test_descents():
    assert descents((1, 2, 3)) == set()
    assert descents(PI3) == {3, 6}
    assert descents((2, 1)) == {1}
    assert descents((1,)) == set()


def test_fingerprint_examples():
    assert encode_fingerprint((1,)) == PatternFingerprint(0, 1)
    assert decode_fingerprint(encode_fingerprint((2, 3, 1))) == (2, 3, 1)
    codes = {encode_fingerprint(q).code for q in permutations(range(1, 6))}
    assert len(codes) == 120


def test_fingerprint_is_lexicographic_rank():
    ranked = sorted(permutations(range(1, 5)))
    assert [encode_fingerprint(q).code for q in ranked] == list(range(24))


def test_fingerprint_round_trip_exhaustive():
    for k in range(1, 8):
        seen = set()
        for q in permutations(range(1, k + 1)):
            f = encode_fingerprint(q)
            assert decode_fingerprint(f) == q
            seen.add(f.code)
        assert len(seen) == factorial(k)


@given(st.integers(1, 20).flatmap(lambda k: st.permutations(list(range(1, k + 1)))).map(tuple))
def test_fingerprint_round_trip_up_to_20(q):
    f = encode_fingerprint(q)
    assert 0 <= f.code < 2**64
    assert decode_fingerprint(f) == q


def test_fingerprint_capacity():
    top = tuple(range(MAX_FINGERPRINT_LENGTH, 0, -1))
    assert encode_fingerprint(top).code == factorial(20) - 1
    with pytest.raises(CapacityError):
        encode_fingerprint(tuple(range(1, 22)))
    assert pattern_key(tuple(range(1, 22))) == bytes(range(1, 22))


def test_parse_and_format():
    assert parse_permutation("3 6 9 2 5 8 1 4 7") == PI3
    assert format_permutation(PI3) == "3 6 9 2 5 8 1 4 7"
    for bad in ["1 1", "1 3", "0 1", "", "1 x", "2"]:
        with pytest.raises(InvalidInputError):
            parse_permutation(bad)
    with pytest.raises(InvalidInputError):
        as_permutation([])
