from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from catalan_incidence.errors import UsageError, ValidationError
from catalan_incidence.rings import (
    INTEGERS,
    RATIONALS,
    RingSpec,
    integers_mod,
    ring_add,
    ring_mul,
    ring_neg,
)

Z4 = integers_mod(4)


@pytest.mark.parametrize(
    "ring, a, b, expected",
    [
        (INTEGERS, 2, 3, 5),
        (Z4, 3, 3, 2),
        (RATIONALS, Fraction(1, 2), Fraction(1, 3), Fraction(5, 6)),
    ],
)
def test_add_examples(ring, a, b, expected):
    assert ring_add(ring, a, b) == expected


@pytest.mark.parametrize(
    "ring, a, b, expected",
    [
        (INTEGERS, 2, -3, -6),
        (Z4, 2, 2, 0),
        (RATIONALS, Fraction(2, 3), Fraction(3, 2), Fraction(1)),
    ],
)
def test_mul_examples(ring, a, b, expected):
    assert ring_mul(ring, a, b) == expected


@pytest.mark.parametrize(
    "ring, a, expected",
    [(INTEGERS, 5, -5), (Z4, 1, 3), (RATIONALS, Fraction(0), Fraction(0))],
)
def test_neg_examples(ring, a, expected):
    assert ring_neg(ring, a) == expected
    assert ring_add(ring, a, ring_neg(ring, a)) == ring.zero


def test_no_overflow():
    big = 2**200
    assert ring_mul(INTEGERS, big, big) == 2**400


@pytest.mark.parametrize("text", ["Z", "Q", "Z/4", "Z/2", "Z/1000003"])
def test_parse_roundtrip(text):
    assert str(RingSpec.parse(text)) == text


@pytest.mark.parametrize("text", ["Z/1", "Z/0", "R", "Z/-3", "Zmod4", ""])
def test_parse_rejects(text):
    with pytest.raises(ValidationError):
        RingSpec.parse(text)


def test_modulus_validated():
    with pytest.raises(ValidationError):
        integers_mod(1)


@pytest.mark.parametrize(
    "ring, a, b",
    [
        (Z4, 5, 1),  # not a canonical residue
        (INTEGERS, Fraction(1, 2), 1),
        (RATIONALS, 1, Fraction(1)),
        (Z4, -1, 0),
    ],
)
def test_mismatched_values_are_usage_errors(ring, a, b):
    with pytest.raises(UsageError):
        ring_add(ring, a, b)
    with pytest.raises(UsageError):
        ring_mul(ring, a, b)


def test_coerce():
    assert Z4.coerce(-1) == 3
    assert Z4.coerce("6") == 2
    assert RATIONALS.coerce("3/6") == Fraction(1, 2)
    assert INTEGERS.coerce(Fraction(4, 2)) == 2
    with pytest.raises(ValidationError):
        INTEGERS.coerce("1/2")
    with pytest.raises(ValidationError):
        INTEGERS.coerce("abc")
    with pytest.raises(ValidationError):
        INTEGERS.coerce(True)


def test_format():
    assert RATIONALS.format(Fraction(-3, 4)) == "-3/4"
    assert RATIONALS.format(Fraction(2)) == "2"
    assert INTEGERS.format(-7) == "-7"


def test_canonical_form_is_unique():
    # structural equality is ring equality
    assert Z4.coerce(7) == Z4.coerce(-1) == Z4.coerce(3)
    assert RATIONALS.coerce("2/4") == RATIONALS.coerce("1/2")


def _values(ring):
    if ring.kind == "Q":
        return st.fractions(max_denominator=1000)
    if ring.kind == "Z/m":
        return st.integers(0, ring.modulus - 1)
    return st.integers()


@pytest.mark.parametrize("ring", [INTEGERS, Z4, integers_mod(6), integers_mod(7), RATIONALS], ids=str)
def test_ring_axioms(ring):
    vals = _values(ring)

    @given(vals, vals, vals)
    def check(a, b, c):
        add, mul = ring.add, ring.mul
        assert add(add(a, b), c) == add(a, add(b, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert add(a, ring.zero) == a
        assert mul(a, ring.one) == a
        assert add(a, ring.neg(a)) == ring.zero
        assert ring.contains(add(a, b)) and ring.contains(mul(a, b))

    check()
