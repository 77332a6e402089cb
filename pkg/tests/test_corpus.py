from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dgmonad.cdg import extension_algebra
from dgmonad.corpus import (
    augmentation,
    base_modules,
    check_algebra,
    check_complexes_commute,
    dual_numbers,
    example_field_extension,
    example_group_action,
    field_by_name,
    field_name,
    group_algebra,
    group_by_name,
    linear_maps,
    module_complexes,
    truncated_polynomial,
)
from dgmonad.dgcat import PresentationError
from dgmonad.fields import GF, QQ, FieldError
from dgmonad.linalg import Matrix

from helpers import F2, F3


def _polymul_mod(k, a, b, f):
    """Schoolbook product then long division by monic ``f`` (low degree first)."""
    n = len(f) - 1
    prod = [k.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = k.add(prod[i + j], k.mul(x, y))
    while len(prod) > n:
        lead = prod.pop()
        for i in range(n):
            prod[len(prod) - n + i] = k.sub(prod[len(prod) - n + i], k.mul(lead, f[i]))
    return tuple(prod + [k.zero] * (n - len(prod)))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([F2, F3]), st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_truncated_polynomial_matches_long_division(k, low):
    f = [k.from_int(c) for c in low] + [k.one]
    A = truncated_polynomial(k, f)
    assert check_algebra(A).ok and A.is_commutative()
    for a, b in itertools.product(A.basis(), repeat=2):
        assert A.mul(a, b) == _polymul_mod(k, list(a), list(b), f)


def test_truncated_polynomial_rejects_non_monic():
    with pytest.raises(PresentationError):
        truncated_polynomial(F3, [1, 2])
    with pytest.raises(PresentationError):
        truncated_polynomial(F3, [1])


def test_augmentations():
    assert augmentation(dual_numbers(F3)) == (1, 0)
    # F4 over F2 is a field of degree 2, so it has no character
    assert augmentation(extension_algebra(F2, GF(2, 2))) is None
    # characters of F2[Z2] by enumeration: only the trivial one
    A = group_algebra(F2, group_by_name("Z2"))
    chars = [v for v in itertools.product((0, 1), repeat=2)
             if v[0] == 1 and all(sum(x * y for x, y in zip(v, A.mul(a, b))) % 2 ==
                                  (sum(x * y for x, y in zip(v, a)) * sum(x * y for x, y in zip(v, b))) % 2
                                  for a in A.basis() for b in A.basis())]
    assert chars == [(1, 1)] and augmentation(A) == (1, 1)


def test_linear_maps_by_enumeration():
    A = dual_numbers(F2)
    P, Q = base_modules(A)
    for S, R in ((P, P), (P, Q), (Q, P), (Q, Q)):
        p, q = S[0].ncols, R[0].ncols
        count = 0
        for c in itertools.product((0, 1), repeat=p * q):
            f = Matrix(F2, q, p, tuple(tuple(c[i * p:(i + 1) * p]) for i in range(q)))
            count += all(f @ S[a] == R[a] @ f for a in range(A.dim))
        assert count == 2 ** len(linear_maps(A, S, R))


def test_module_complexes_and_commutation():
    A = dual_numbers(F3)
    assert len(module_complexes(A, 1)) == len(base_modules(A)) == 2
    v = check_complexes_commute(A, 1)
    assert v.ok and v.data["fixtures"] == 2
    with pytest.raises(PresentationError):
        check_complexes_commute(A, 5)


def test_field_and_group_names():
    assert field_by_name("F4").order == 4
    assert field_by_name("gf9").order == 9
    assert field_by_name("Q") is QQ
    assert field_name(GF(3)) == "F3" and field_name(QQ) == "Q"
    for bad in ("F6", "F1", "R"):
        with pytest.raises(FieldError):
            field_by_name(bad)
    assert group_by_name("Z/3").order == 3
    assert group_by_name("s3").order == 6
    with pytest.raises(PresentationError):
        group_by_name("D4")


def test_fixture_guards():
    with pytest.raises(PresentationError):
        example_field_extension(4, 2)
    with pytest.raises(PresentationError):
        example_group_action("Z7", F2)
    b = example_group_action("Z2", F2)
    assert b.expected["separable"] == "infeasible"
