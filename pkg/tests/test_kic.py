from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.functions.combinatorial.numbers import stirling

from crowdinfo.infomath import ValidationError
from crowdinfo.kic import (
    KicCode,
    KicQuery,
    count_valid_responses,
    encode_query,
    enumerate_valid_responses,
    make_query,
    spammer_error_fraction,
    spammer_error_prob,
    spammer_error_prob_bruteforce,
    stirling2,
)

from oracles import partitions_by_labelings, spammer_error_by_labelings


def test_three_items_two_clusters():
    assert len(enumerate_valid_responses(3, 2)) == 4
    assert len(enumerate_valid_responses(5, 2)) == 16


def test_two_items():
    assert set(enumerate_valid_responses(2, 2)) == {(0, 0), (0, 1)}


def test_single_item_degenerates():
    for N in range(2, 6):
        assert enumerate_valid_responses(1, N) == ((0,),)


@pytest.mark.parametrize("k", range(2, 17))
def test_binary_count_is_power_of_two(k):
    assert len(enumerate_valid_responses(k, 2)) == 2 ** (k - 1)


@pytest.mark.parametrize("k", range(1, 8))
@pytest.mark.parametrize("N", range(2, 6))
def test_enumeration_matches_labelings(k, N):
    got = enumerate_valid_responses(k, N)
    assert len(got) == len(set(got))
    assert set(got) == partitions_by_labelings(k, N)
    assert len(got) == sum(int(stirling(k, j)) for j in range(1, N + 1))


def test_stirling_recurrence_against_sympy():
    for n in range(0, 12):
        for j in range(0, n + 1):
            assert stirling2(n, j) == int(stirling(n, j))


def test_patterns_have_at_most_n_blocks():
    for p in enumerate_valid_responses(6, 3):
        assert max(p) < 3
        assert p[0] == 0
        # restricted growth: each new block index is one past the running max
        top = 0
        for b in p[1:]:
            assert b <= top + 1
            top = max(top, b)


@pytest.mark.parametrize(
    "labels, N, expected",
    [
        ((0, 0, 1), 2, (0, 0, 1)),
        ((0, 0, 0), 2, (0, 0, 0)),
        ((0, 1, 0, 1), 2, (0, 1, 0, 1)),
        ((1, 1, 0), 2, (0, 0, 1)),
        ((2, 0, 2, 1), 3, (0, 1, 0, 2)),
    ],
)
def test_encode_query(labels, N, expected):
    assert encode_query(labels, KicCode(len(labels), N)) == expected


def test_encode_query_validation():
    with pytest.raises(ValidationError):
        encode_query((0, 2, 1), KicCode(3, 2))
    with pytest.raises(ValidationError):
        encode_query((0, 1), KicCode(3, 2))


def test_query_items_distinct():
    with pytest.raises(ValidationError):
        KicQuery((1, 1, 2), (0, 0, 1))
    q = make_query((4, 9, 2), (1, 1, 0), KicCode(3, 2))
    assert q.true_pattern == (0, 0, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(
    lambda N: st.tuples(
        st.just(N),
        st.lists(st.integers(0, N - 1), min_size=1, max_size=8),
        st.permutations(list(range(N))),
    )
))
def test_encode_invariant_under_relabeling(args):
    N, labels, perm = args
    code = KicCode(len(labels), N)
    pattern = encode_query(labels, code)
    assert encode_query([perm[x] for x in labels], code) == pattern
    assert pattern in code.valid_responses


@pytest.mark.parametrize("k, expected", [(2, 0.25), (3, 0.25), (4, 0.3125), (5, 0.3125)])
def test_spammer_error_values(k, expected):
    assert spammer_error_prob(k) == expected
    assert spammer_error_prob_bruteforce(k) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("k", range(2, 8))
def test_spammer_error_against_raw_labelings(k):
    assert spammer_error_fraction(k) == spammer_error_by_labelings(k)


@pytest.mark.parametrize("k", range(2, 13))
def test_closed_form_equals_bruteforce(k):
    assert abs(spammer_error_prob(k) - spammer_error_prob_bruteforce(k)) <= 1e-12


@pytest.mark.parametrize("k", range(2, 17))
def test_spammer_error_in_open_unit_half(k):
    assert 0.0 < spammer_error_prob(k) < 0.5


def test_valid_response_count_formula_matches_power():
    # count via the sum of binomials over the smaller side of the cut
    for k in range(2, 17):
        count = sum(comb(k, i) for i in range((k - 1) // 2 + 1))
        if k % 2 == 0:
            count += comb(k, k // 2) // 2
        assert count == 2 ** (k - 1) == count_valid_responses(k, 2)


def test_spammer_error_validation():
    with pytest.raises(ValidationError):
        spammer_error_prob(1)
    with pytest.raises(ValidationError):
        spammer_error_prob(3, N=3)
    with pytest.raises(ValidationError):
        spammer_error_prob_bruteforce(17)


def test_uniform_labels_give_uniform_patterns(rng):
    k, n = 4, 200000
    code = KicCode(k, 2)
    index = {p: i for i, p in enumerate(code.valid_responses)}
    labels = rng.integers(2, size=(n, k))
    hits = np.bincount([index[encode_query(row, code)] for row in labels], minlength=code.n_responses)
    p = 1 / code.n_responses
    assert np.abs(hits / n - p).max() < 4 * np.sqrt(p * (1 - p) / n)
