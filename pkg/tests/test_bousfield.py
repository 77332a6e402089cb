from __future__ import annotations

import pytest

from dgmonad.bousfield import classify_bousfield, collapse_fixture, h0_monad_from_bousfield, kernel_objects
from dgmonad.cdg import ComplexCategory, point
from dgmonad.corpus import dual_numbers, example_dual_numbers
from dgmonad.dgcat import PresentationError
from dgmonad.graded import Z
from dgmonad.monads import algebra_monad, identity_monad

from helpers import F2, F3


@pytest.mark.parametrize("k", [F2, F3])
def test_collapse_fixture(k):
    C, L, eta, objs = collapse_fixture(k)
    v, ker = classify_bousfield(L, eta, objs)
    assert v.ok and ker == ["b"]
    assert h0_monad_from_bousfield(L, eta, objs).ok


@pytest.mark.parametrize("k", [F2, F3])
def test_dual_numbers_not_bousfield(k):
    b = example_dual_numbers(k)
    T, C = b["monad"], b["category"]
    v, ker = classify_bousfield(T.functor, T.eta, C.objects)
    assert not v.ok
    # the contractible B is killed, the point is not
    assert [str(c) for c in ker] == ["B"]
    assert not h0_monad_from_bousfield(T.functor, T.eta, C.objects).ok


def test_identity_is_bousfield_with_empty_kernel():
    C = ComplexCategory(F2, Z, [point(F2, Z)])
    T = identity_monad(C)
    v, ker = classify_bousfield(T.functor, T.eta)
    assert v.ok and ker == []
    assert kernel_objects(T.functor, C.objects) == []


def test_not_an_endofunctor():
    from dgmonad.h0 import H0Functor
    C = ComplexCategory(F2, Z, [point(F2, Z)])
    T = algebra_monad(C, dual_numbers(F2))
    with pytest.raises(PresentationError):
        classify_bousfield(H0Functor(T.functor), T.eta)
