from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgmonad.corpus import field_by_name, field_name
from dgmonad.fields import (
    GF,
    QQ,
    ExtensionField,
    FieldError,
    PrimeField,
    Scalar,
    field_from_spec,
    find_irreducible,
    is_irreducible,
    is_prime,
)

FINITE = [GF(2), GF(3), GF(5), GF(2, 2), GF(2, 3), GF(3, 2)]


def elements(k):
    return st.sampled_from(list(k.elements()))


def rationals():
    return st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))


@pytest.mark.parametrize("k", FINITE, ids=repr)
def test_finite_field_axioms(k):
    els = list(k.elements())
    assert len(els) == k.order == k.characteristic ** (len(k.zero) if isinstance(k.zero, tuple) else 1)
    for a in els:
        assert k.add(a, k.zero) == a and k.mul(a, k.one) == a
        assert k.add(a, k.neg(a)) == k.zero
        if a != k.zero:
            assert k.mul(a, k.inv(a)) == k.one
    for a, b, c in itertools.product(els[:5], repeat=3):
        assert k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c))
        assert k.mul(k.mul(a, b), c) == k.mul(a, k.mul(b, c))


@given(rationals(), rationals(), rationals())
def test_rational_axioms(a, b, c):
    assert QQ.mul(a, QQ.add(b, c)) == QQ.add(QQ.mul(a, b), QQ.mul(a, c))
    if a:
        assert QQ.mul(a, QQ.inv(a)) == 1


@pytest.mark.parametrize("k", FINITE + [QQ], ids=repr)
def test_parse_format_round_trip(k):
    els = list(k.elements()) if k.order else [Fraction(-3, 4), Fraction(0), Fraction(7)]
    for a in els:
        assert k.parse(k.format(a)) == a


def test_scalar_formats():
    assert QQ.format(Fraction(1, 2)) == "1/2"
    assert QQ.format(Fraction(3)) == "3/1"
    assert QQ.parse("4") == 4
    assert GF(3).format(2) == "2"
    assert GF(2, 2).format((0, 1)) == "[0,1]"


@pytest.mark.parametrize("text", ["1/0", "a/b", "", "1//2"])
def test_malformed_rationals(text):
    with pytest.raises(FieldError):
        QQ.parse(text)


def test_inverse_of_zero():
    for k in (GF(2), GF(2, 2), QQ):
        with pytest.raises(ZeroDivisionError):
            k.inv(k.zero)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def _roots(coeffs, p):
    return [x for x in range(p) if sum(c * x ** i for i, c in enumerate(coeffs)) % p == 0]


@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 4), min_size=2, max_size=4))
@settings(max_examples=80)
def test_irreducible_low_degree_matches_roots(p, tail):
    # degree 2 and 3: irreducible iff no root
    coeffs = [c % p for c in tail] + [1]
    n = len(coeffs) - 1
    if n in (2, 3):
        assert is_irreducible(coeffs, p) == (not _roots(coeffs, p))


def test_irreducible_counts():
    # number of monic irreducibles of degree n over F_p (necklace polynomial)
    expected = {(2, 2): 1, (2, 3): 2, (2, 4): 3, (3, 2): 3, (3, 3): 8}
    for (p, n), count in expected.items():
        got = sum(is_irreducible(list(t) + [1], p) for t in itertools.product(range(p), repeat=n))
        assert got == count


def test_rabin_branch_agrees_with_trial_division():
    # degree 14 over F_2 forces the Rabin test
    f = [1, 1] + [0] * 12 + [1]
    assert is_irreducible(find_irreducible(2, 14), 2)
    assert not is_irreducible([0] + f[:-1] + [1], 2)  # divisible by x


def test_extension_rejects_reducible_modulus():
    with pytest.raises(FieldError):
        ExtensionField(2, [1, 0, 1])


def test_field_spec_round_trip():
    for k in FINITE + [QQ]:
        assert field_from_spec(k.spec()) == k


def test_field_names():
    assert field_by_name("F4") == GF(2, 2)
    assert field_by_name("gf9") == GF(3, 2)
    assert field_by_name("Q") is QQ
    assert field_name(GF(2, 3)) == "F8"
    for bad in ("F6", "F1", "R", "F0"):
        with pytest.raises(FieldError):
            field_by_name(bad)


def test_scalar_wrapper():
    k = PrimeField(5)
    a = Scalar(k, 3)
    assert (a * 2).value == 1
    assert (a / 3).value == 1
    assert str(-a) == "2"
    assert (a + Scalar(k, 4)).value == 2
    with pytest.raises(FieldError):
        a + Scalar(GF(3), 1)
