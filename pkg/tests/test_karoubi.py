from __future__ import annotations

import itertools

import pytest

from dgmonad.cdg import ComplexCategory, point
from dgmonad.corpus import dual_numbers
from dgmonad.graded import Z
from dgmonad.karoubi import (
    NotIdempotent,
    Split,
    brute_force_splits,
    check_splitting,
    extend_monad_karoubi,
    karoubi_envelope,
)
from dgmonad.monads import algebra_monad, check_dg_monad

from helpers import F2, F3


def _plane(k):
    x = point(k, Z, dim=2, name="k2")
    return ComplexCategory(k, Z, [x]), x


def test_projection_splits_and_hom_dims():
    C, x = _plane(F2)
    e = C.element(x, x, 0, (1, 0, 0, 0))
    K = karoubi_envelope(C, [e])
    assert check_splitting(K).ok
    assert brute_force_splits(K, e)
    P = Split(x, e.coords)
    # End(P) = e End(x) e, counted by enumeration
    count = sum(1 for c in itertools.product((0, 1), repeat=4)
                if C.compose_many(e, C.element(x, x, 0, c), e).coords == c)
    assert count == 2 ** K.hom_dim(P, P, 0)
    assert K.hom_dim(P, Split(x, C.identity(x).coords), 0) == 2


def test_not_idempotent_rejected():
    C, x = _plane(F3)
    f = C.element(x, x, 0, (2, 0, 0, 0))
    with pytest.raises(NotIdempotent) as info:
        karoubi_envelope(C, [f])
    assert info.value.witness["object"] == str(x)


@pytest.mark.parametrize("k", [F2, F3])
def test_extended_monad(k):
    C, x = _plane(k)
    e = C.element(x, x, 0, (0, 0, 0, 1))
    K = karoubi_envelope(C, [e])
    T = algebra_monad(C, dual_numbers(k))
    Th = extend_monad_karoubi(T, K)
    assert check_dg_monad(Th).ok
    P = Split(x, e.coords)
    assert Th(P).base == T(x)
    with pytest.raises(ValueError):
        extend_monad_karoubi(algebra_monad(ComplexCategory(k, Z, [x]), dual_numbers(k)), K)
