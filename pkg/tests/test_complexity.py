"""
Tests for factor complexity, special factors and the closed forms.
"""
import numpy as np
import pytest

from parry_words.complexity import (
    agreement_horizon,
    closed_form_c,
    closed_form_delta2_c,
    closed_form_delta_c,
    factor_counts,
    factor_profile,
    reversal_closure,
    special_factors,
)
from parry_words.parry import ConfluentParams, canonical_substitution, check_parry, uv_lengths
from parry_words.words import fixed_point_prefix, parse_word


def u_beta(digits, n):
    return fixed_point_prefix(canonical_substitution(check_parry(digits)), 0, n)


def naive_counts(word: bytes, n_max: int):
    return [len({word[i:i + n] for i in range(len(word) - n + 1)}) for n in range(n_max + 1)]


def test_factor_counts_match_naive_on_random_words():
    rng = np.random.default_rng(11)
    for _ in range(40):
        k = int(rng.integers(2, 5))
        word = bytes(rng.integers(0, k, size=int(rng.integers(1, 300))).tolist())
        n_max = len(word) - 1
        full, half = factor_counts(word, n_max)
        assert full.tolist() == naive_counts(word, n_max)
        assert half.tolist() == naive_counts(word[:len(word) // 2], n_max)


def test_fibonacci_complexity():
    profile = factor_profile(u_beta([1, 1], 10_000), 5)
    assert profile.c.tolist() == [1, 2, 3, 4, 5, 6]
    assert profile.horizon == 5
    assert not profile.truncated


def test_constant_word():
    profile = factor_profile(b"\x00" * 6, 2)
    assert profile.c.tolist() == [1, 1, 1]


def test_factor_profile_rejects_large_n_max():
    with pytest.raises(ValueError):
        factor_profile(parse_word("0101"), 4)


def test_delta_c_matches_closed_form():
    p = ConfluentParams(m=2, t=2, s=2)
    profile = factor_profile(u_beta([2, 2], 100_000), 200)
    assert profile.horizon == 200
    assert profile.c[4] == 6
    for n in range(profile.horizon):
        assert profile.delta[n] == closed_form_delta_c(p, n)
        assert profile.c[n] == closed_form_c(p, n)


def test_closed_form_delta_c_examples():
    p = ConfluentParams(m=2, t=2, s=2)
    assert closed_form_delta_c(p, 3) == 2
    assert closed_form_delta_c(p, 5) == 1
    for m in (2, 3, 4):
        assert closed_form_delta_c(ConfluentParams(m=m, t=3, s=1), 7) == m - 1


def test_closed_form_delta2_c_marks_ladder_lengths():
    p = ConfluentParams(m=3, t=3, s=2)
    marks = {}
    for k in range(1, 5):
        v, u = uv_lengths(p, k)
        marks[v], marks[u] = 1, -1
    for n in range(1, uv_lengths(p, 4)[1] + 1):
        assert closed_form_delta2_c(p, n) == marks.get(n, 0)


def test_arnoux_rauzy_closed_form_c():
    p = ConfluentParams(m=3, t=1, s=1)
    assert [closed_form_c(p, n) for n in range(5)] == [1, 3, 5, 7, 9]


def test_special_factors():
    fib = u_beta([1, 1], 10_000)
    report = special_factors(fib, 1)
    assert [w for w, _ in report.left_specials] == [b"\x00"]
    report = special_factors(u_beta([2, 2], 10_000), 0)
    assert report.left_specials == [(b"", frozenset({0, 1}))]


def test_maximal_left_special_of_length_u1():
    """0^(t+s-1) is left special, 0^(t+s) has a single left extension."""
    word = u_beta([2, 2], 50_000)
    left = dict(special_factors(word, 3).left_specials)
    assert left[parse_word("000")] == frozenset({0, 1})
    left = dict(special_factors(word, 4).left_specials)
    assert parse_word("0000") not in left


def test_special_factor_sum_equals_delta_c():
    for digits in ([1, 1, 1], [2, 2], [3, 2, 2], [2, 1, 1]):
        word = u_beta(digits, 30_000)
        profile = factor_profile(word, 12)
        for n in range(12):
            report = special_factors(word, n)
            assert report.left_excess() == profile.delta[n]
            assert all(len(ext) >= 2 for _, ext in report.right_specials)


def test_agreement_horizon():
    assert agreement_horizon([1, 2, 3, 4], [1, 2, 3, 4]) == 3
    assert agreement_horizon([1, 2, 3, 4], [1, 2, 5, 4]) == 1
    assert agreement_horizon([1, 2], [0, 2]) == -1


def test_reversal_closure():
    assert reversal_closure(u_beta([2, 2, 1], 20_000), 12) is None
    witness = reversal_closure(u_beta([3, 1, 1], 20_000), 12)
    assert witness is not None
    assert witness[::-1] not in u_beta([3, 1, 1], 20_000)
