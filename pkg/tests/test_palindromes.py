"""
Tests for palindromic complexity, extension classes, centers, zero blocks and defect.
"""
import pytest

from parry_words.complexity import factor_profile
from parry_words.config_loader import DEFAULT_N_MAX
from parry_words.parry import ConfluentParams, canonical_substitution, check_parry, confluent_sweep
from parry_words.palindromes import (
    AbsentFactorError,
    InsufficientHorizonError,
    LengthCapError,
    NotAPalindromeError,
    PalKind,
    PrefixLanguage,
    center_of,
    center_transport,
    classify_all_palindromes,
    closed_form_p,
    defect_series,
    expected_zero_blocks,
    format_center,
    lift_palindrome,
    longest_palindromic_suffix,
    palindrome_profile,
    palindromic_extensions,
    uv_ladder,
    uv_words,
    v_centers,
    zero_block_factors,
)
from parry_words.words import fixed_point_prefix, format_word, palindrome_test, parse_word

PROFILE_CASES = [[2, 2], [3, 2], [3, 3], [4, 3], [3, 1], [4, 4, 2], [3, 3, 2], [1, 1, 1]]


def u_beta(digits, n):
    return fixed_point_prefix(canonical_substitution(check_parry(digits)), 0, n)


def language(digits, n=100_000):
    d = check_parry(digits)
    return PrefixLanguage(u_beta(digits, n), d.m)


@pytest.mark.parametrize("digits", PROFILE_CASES)
def test_palindrome_profile_matches_closed_form(digits):
    p = ConfluentParams.from_digits(check_parry(digits))
    profile = palindrome_profile(u_beta(digits, 200_000), 200)
    assert profile.horizon >= 30
    for n in range(profile.horizon + 1):
        assert profile.p[n] == closed_form_p(p, n), f"n={n}"


def test_language_horizon_is_joint_minimum():
    prefix = u_beta([2, 2], 2000)
    n_max = min(DEFAULT_N_MAX, len(prefix) - 1)
    c_horizon = factor_profile(prefix, n_max, 2).horizon
    p_horizon = palindrome_profile(prefix, n_max).horizon
    assert PrefixLanguage(prefix, 2).horizon == min(c_horizon, p_horizon)


def test_closed_form_p_examples():
    assert closed_form_p(ConfluentParams(m=3, t=1, s=1), 7) == 3
    assert closed_form_p(ConfluentParams(m=3, t=1, s=1), 8) == 1
    p = ConfluentParams(m=2, t=2, s=2)
    assert [closed_form_p(p, n) for n in range(6)] == [1, 2, 1, 2, 2, 1]
    assert closed_form_p(p, 4) == 2
    assert closed_form_p(p, 13) == 0


def test_profile_rejects_large_n_max():
    with pytest.raises(ValueError):
        palindrome_profile(parse_word("010"), 3)


def test_uv_words_examples():
    v, u = uv_words(ConfluentParams(m=2, t=2, s=2), 2)
    assert format_word(v) == "00100100"
    assert format_word(u) == "00100100100"
    v, u = uv_words(ConfluentParams(m=2, t=1, s=1), 1)
    assert v == u == parse_word("0")


def test_uv_words_length_cap():
    with pytest.raises(LengthCapError) as excinfo:
        uv_words(ConfluentParams(m=2, t=2, s=2), 6, cap=100)
    assert excinfo.value.length > 100


def test_uv_words_are_palindromic_factors():
    for p in confluent_sweep(3, 3):
        prefix = u_beta(p.digits().digits, 50_000)
        for k in range(1, 4):
            v, u = uv_words(p, k)
            assert palindrome_test(v) and palindrome_test(u)
            assert v in prefix and u in prefix


def test_uv_ladder_kinds():
    ladder = uv_ladder(ConfluentParams(m=2, t=2, s=2), 11)
    assert ladder[parse_word("00")] == (PalKind.TWO_EXTENSIONS, 1)
    assert ladder[parse_word("000")] == (PalKind.MAXIMAL, 1)
    assert ladder[parse_word("00100100100")] == (PalKind.MAXIMAL, 2)


def test_palindromic_extensions():
    lang = language([2, 2])
    assert palindromic_extensions(parse_word("00"), lang).kind == PalKind.TWO_EXTENSIONS
    assert palindromic_extensions(parse_word("000"), lang).kind == PalKind.MAXIMAL
    cls = palindromic_extensions(parse_word("0000"), lang)
    assert cls.extensions == frozenset({1})
    assert cls.kind == PalKind.UNIQUE_EXTENSION
    assert palindromic_extensions(b"", lang).extensions == frozenset({0})


def test_palindromic_extensions_errors():
    lang = language([2, 2])
    with pytest.raises(NotAPalindromeError):
        palindromic_extensions(parse_word("01"), lang)
    with pytest.raises(AbsentFactorError):
        palindromic_extensions(parse_word("11"), lang)
    short = PrefixLanguage(lang.prefix, 2, horizon=5)
    with pytest.raises(InsufficientHorizonError):
        palindromic_extensions(parse_word("0000"), short)


@pytest.mark.parametrize("digits", [[2, 2], [3, 2], [3, 3], [4, 4, 2], [1, 1, 1], [2, 1]])
def test_classification_matches_ladders(digits):
    p = ConfluentParams.from_digits(check_parry(digits))
    verdicts = classify_all_palindromes(u_beta(digits, 100_000), p, max_len=60)
    assert verdicts
    assert all(v.match for v in verdicts), [v.to_dict() for v in verdicts if not v.match]
    if p.is_arnoux_rauzy:
        assert all(v.expected == PalKind.UNIQUE_EXTENSION for v in verdicts)


def test_classification_order_and_horizon():
    p = ConfluentParams(m=2, t=2, s=2)
    verdicts = classify_all_palindromes(u_beta([2, 2], 100_000), p, max_len=10)
    lengths = [len(v.cls.word) for v in verdicts]
    assert lengths == sorted(lengths)
    assert verdicts[0].cls.word == b""
    with pytest.raises(InsufficientHorizonError):
        classify_all_palindromes(PrefixLanguage(u_beta([2, 2], 1000), 2, horizon=1), p)


def test_centers():
    assert center_of(parse_word("010")) == 1
    assert center_of(parse_word("0110")) is None
    assert center_of(b"") is None
    with pytest.raises(NotAPalindromeError):
        center_of(parse_word("01"))
    assert format_center(None) == "eps"
    assert format_center(2) == "2"


def test_v_centers_match_ladder_words():
    for p in confluent_sweep():
        for k in range(1, 6):
            try:
                v, _ = uv_words(p, k, cap=200_000)
            except LengthCapError:
                break
            assert center_of(v) == v_centers(p, k), f"{p.label()} k={k}"


def test_center_transport_matches_lifting():
    for digits in ([2, 2], [3, 2], [3, 3], [3, 3, 2], [1, 1, 1]):
        p = ConfluentParams.from_digits(check_parry(digits))
        phi = canonical_substitution(p.digits())
        for w in language(digits, 20_000).palindromes(15):
            lifted = lift_palindrome(phi, w, p.t)
            assert center_of(lifted) == center_transport(p, center_of(w))


def test_lifting_preserves_palindromes_and_language():
    for digits in ([2, 2], [3, 2], [1, 1, 1], [4, 4, 2]):
        p = ConfluentParams.from_digits(check_parry(digits))
        phi = canonical_substitution(p.digits())
        lang = language(digits, 200_000)
        for w in language(digits, 20_000).palindromes(20):
            lifted = lift_palindrome(phi, w, p.t)
            assert palindrome_test(lifted)
            assert lifted in lang


def test_zero_blocks():
    for p in confluent_sweep():
        assert zero_block_factors(u_beta(p.digits().digits, 50_000)) == expected_zero_blocks(p), p.label()
    assert expected_zero_blocks(ConfluentParams(m=2, t=2, s=2)) == {(1, 2, 1), (1, 4, 1)}
    assert zero_block_factors(parse_word("000")) == set()


def test_defect_series_of_non_rich_word():
    series = defect_series(parse_word("0120"))
    assert series.defects.tolist() == [0, 0, 0, 1]
    assert series.ju.tolist() == [True, True, True, False]
    assert not series.full
    assert series.summary() == {
        "length": 4,
        "full": False,
        "max_defect": 1,
        "first_defect": 4,
        "ju_failures": 1,
    }


def test_confluent_prefixes_are_full():
    for digits in ([1, 1], [2, 2], [2, 2, 1], [4, 4, 2]):
        series = defect_series(u_beta(digits, 20_000))
        assert series.full
        assert series.ju.all()
        assert series.first_defect() is None


def test_longest_palindromic_suffix():
    assert longest_palindromic_suffix(parse_word("010010")) == (parse_word("010010"), True)
    assert longest_palindromic_suffix(parse_word("01101")) == (parse_word("101"), True)
    assert longest_palindromic_suffix(parse_word("0120")) == (parse_word("0"), False)
    with pytest.raises(ValueError):
        longest_palindromic_suffix(b"")
