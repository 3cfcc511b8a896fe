"""
Tests for digit validation, classification and the numeration system.
"""
import math
from concurrent.futures import ThreadPoolExecutor

import mpmath
import pytest

from parry_words.parry import (
    ClassTag,
    ConfluentParams,
    OutOfScopeError,
    ParryConditionError,
    PrecisionError,
    RenyiDigits,
    TrailingZeroError,
    canonical_substitution,
    check_parry,
    classify,
    confluent_sweep,
    dominant_root,
    dominant_root_mp,
    numeration_basis,
    renyi_digits,
    uv_length_table,
    uv_lengths,
    uv_window,
)
from parry_words.words import is_primitive, parse_word

GOLDEN = (1 + math.sqrt(5)) / 2


def test_check_parry_valid():
    assert check_parry([1, 1]).digits == (1, 1)
    assert check_parry([3, 1, 1]).m == 3
    assert check_parry([1, 0, 1]).digits == (1, 0, 1)


def test_check_parry_violation_names_suffix():
    with pytest.raises(ParryConditionError) as excinfo:
        check_parry([1, 2])
    assert excinfo.value.index == 2
    with pytest.raises(ParryConditionError) as excinfo:
        check_parry([2, 1, 2, 3])
    assert excinfo.value.index == 3


def test_check_parry_trailing_zero_and_bad_input():
    with pytest.raises(TrailingZeroError):
        check_parry([2, 0])
    with pytest.raises(ParryConditionError):
        check_parry([])
    with pytest.raises(ParryConditionError):
        check_parry([1])
    with pytest.raises(ParryConditionError):
        check_parry([2, -1, 1])


def test_classify():
    cls = classify(check_parry([1, 1, 1]))
    assert cls.tag == ClassTag.ARNOUX_RAUZY
    assert cls.params == ConfluentParams(m=3, t=1, s=1)
    cls = classify(check_parry([2, 2]))
    assert cls.tag == ClassTag.CONFLUENT_NON_UNIT
    assert (cls.params.t, cls.params.s, cls.params.m) == (2, 2, 2)
    cls = classify(check_parry([3, 1, 1]))
    assert cls.tag == ClassTag.NON_CONFLUENT
    assert cls.params is None


def test_classify_rejects_integer_base():
    with pytest.raises(OutOfScopeError):
        classify(check_parry([2]))


def test_confluent_params_round_trip():
    p = ConfluentParams(m=4, t=3, s=2)
    assert p.digits().digits == (3, 3, 3, 2)
    assert ConfluentParams.from_digits(p.digits()) == p
    with pytest.raises(OutOfScopeError):
        ConfluentParams(m=2, t=1, s=2)
    with pytest.raises(OutOfScopeError):
        ConfluentParams.from_digits(check_parry([3, 1, 1]))


def test_canonical_substitution():
    assert canonical_substitution(check_parry([1, 1])).images == (parse_word("01"), parse_word("0"))
    assert canonical_substitution(check_parry([1, 1, 1])).images == (
        parse_word("01"), parse_word("02"), parse_word("0"),
    )
    assert canonical_substitution(check_parry([2, 2])).images == (parse_word("001"), parse_word("00"))


def test_canonical_substitution_is_primitive():
    for p in confluent_sweep():
        assert is_primitive(canonical_substitution(p.digits()))
    assert is_primitive(canonical_substitution(check_parry([4, 2, 3])))


def test_dominant_root():
    assert abs(dominant_root(check_parry([1, 1])) - GOLDEN) < 1e-12
    assert abs(dominant_root(check_parry([2, 2])) - (1 + math.sqrt(3))) < 1e-12
    assert abs(dominant_root(check_parry([1, 1, 1])) - 1.8392867552141612) < 1e-12


def test_dominant_root_mp():
    with mpmath.workdps(60):
        root = dominant_root_mp(check_parry([1, 1]), dps=60)
        assert abs(root - (1 + mpmath.sqrt(5)) / 2) < mpmath.mpf(10) ** -55


def test_renyi_digits_examples():
    expansion = renyi_digits(GOLDEN, 10)
    assert expansion.digits == (1, 1)
    assert expansion.status == "finite"
    assert renyi_digits(2.0, 5).digits == (2,)
    assert renyi_digits("2", 5).status == "finite"


def test_renyi_round_trip_over_sweep():
    for p in confluent_sweep():
        d = p.digits()
        expansion = renyi_digits(dominant_root(d), d.m + 1)
        assert expansion.digits == d.digits
        assert expansion.status == "finite"


def test_renyi_near_integer_keeps_exact_floor():
    expansion = renyi_digits("1.9999999999", 10)
    assert expansion.digits == (1,) * 10
    assert expansion.status == "undecided"
    assert renyi_digits("3", 5).digits == (3,)


def test_precision_does_not_leak_between_threads():
    beta = dominant_root(check_parry([2, 2]))

    def expand(rounds):
        return {renyi_digits(beta, 3).digits for _ in range(rounds)}

    seen = set()
    with ThreadPoolExecutor(max_workers=2) as pool:
        futures = [pool.submit(expand, 300) for _ in range(2)]
        for _ in range(5000):
            with mpmath.workprec(200):
                seen.add(mpmath.mp.prec)
        results = [f.result() for f in futures]
    assert seen == {200}
    assert results == [{(2, 2)}, {(2, 2)}]
    assert mpmath.mp.prec == 53


def test_renyi_undecided_and_precision():
    # 3/2 is not a simple Parry number; exact decimal input runs out of digits
    assert renyi_digits("1.5", 8).status == "undecided"
    with pytest.raises(PrecisionError):
        renyi_digits(1.5, 200)
    with pytest.raises(ValueError):
        renyi_digits(0.5, 3)


def test_numeration_basis():
    assert numeration_basis(ConfluentParams(m=2, t=1, s=1), 4).values == (1, 2, 3, 5, 8)
    assert numeration_basis(ConfluentParams(m=2, t=2, s=2), 2).values == (1, 3, 8)
    assert numeration_basis(ConfluentParams(m=3, t=4, s=4), 0).values == (1,)


def test_numeration_basis_is_unbounded():
    g = numeration_basis(ConfluentParams(m=2, t=4, s=4), 60)
    assert g[60] > 2 ** 64
    assert all(a < b for a, b in zip(g.values, g.values[1:]))


def test_uv_lengths():
    p = ConfluentParams(m=2, t=2, s=2)
    assert uv_lengths(p, 1) == (2, 3)
    assert uv_lengths(p, 2) == (8, 11)
    assert uv_lengths(ConfluentParams(m=2, t=1, s=1), 3) == (6, 6)
    with pytest.raises(ValueError):
        uv_lengths(p, 0)


def test_uv_lengths_interleave():
    for p in confluent_sweep():
        for k in range(1, 12):
            v, u = uv_lengths(p, k)
            v_next, _ = uv_lengths(p, k + 1)
            if p.s == 1:
                assert v == u < v_next
            else:
                assert v < u < v_next


def test_uv_length_table_matches_uv_lengths():
    p = ConfluentParams(m=3, t=2, s=2)
    table = uv_length_table(p, 10_000)
    assert table
    for k, v, u in table:
        assert (v, u) == uv_lengths(p, k)
        assert v <= 10_000
    assert uv_lengths(p, len(table) + 1)[0] > 10_000


def test_confluent_sweep_size_and_order():
    cases = confluent_sweep(4, 4)
    assert len(cases) == 30
    assert cases == sorted(cases)
    assert cases[0] == ConfluentParams(m=2, t=1, s=1)


def test_renyi_digits_value():
    d = RenyiDigits((2, 2, 1))
    assert str(d) == "2,2,1"
    assert d.m == 3
    with pytest.raises(TrailingZeroError):
        RenyiDigits((1, 0))


def test_uv_window():
    p = ConfluentParams(m=2, t=2, s=2)
    table = uv_length_table(p, 100)
    for n in range(1, 100):
        expected = next((k for k, v, u in table if v < n <= u), None)
        assert uv_window(p, n) == expected
    assert uv_window(ConfluentParams(m=2, t=1, s=1), 10) is None
