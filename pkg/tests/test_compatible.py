from __future__ import annotations

import pytest

from dgmonad.cdg import ComplexCategory, point
from dgmonad.compatible import (
    CompatiblePair,
    algebra_pair,
    algebra_pair_samples,
    check_compatible,
    check_psi_equivalence,
    compose_compatible,
    psi,
    psi_inverse,
)
from dgmonad.corpus import dual_numbers, truncated_polynomial
from dgmonad.dgcat import NatTrans, PresentationError
from dgmonad.graded import Z
from dgmonad.monads import check_dg_monad

from helpers import F2, F3


def _category(k):
    return ComplexCategory(k, Z, [point(k, Z, name="k")])


@pytest.mark.parametrize("k", [F2, F3])
def test_dual_numbers_with_quadratic(k):
    C = _category(k)
    pair = algebra_pair(C, dual_numbers(k), truncated_polynomial(k, [1, 0, 1]))
    assert check_compatible(pair).ok
    T = compose_compatible(pair)
    assert check_dg_monad(T).ok
    x = C.objects[0]
    assert T(x).dim(0) == 4
    sample = algebra_pair_samples(pair)
    for m, alpha in sample:
        n = psi(pair, m, alpha)
        assert psi_inverse(pair, n) == (m, tuple(alpha))
    assert check_psi_equivalence(pair, sample, T).ok


def test_zero_exchange_is_rejected():
    k = F2
    C = _category(k)
    good = algebra_pair(C, dual_numbers(k), dual_numbers(k))
    ell = good.exchange
    zero = NatTrans(ell.source, ell.target, lambda x: C.zero(ell.source(x), ell.target(x), 0), name="0")
    bad = CompatiblePair(good.first, good.second, zero)
    assert not check_compatible(bad).ok
    with pytest.raises(PresentationError):
        compose_compatible(bad)


def test_pair_needs_one_category():
    k = F3
    p1 = algebra_pair(_category(k), dual_numbers(k), dual_numbers(k))
    p2 = algebra_pair(_category(k), dual_numbers(k), dual_numbers(k))
    with pytest.raises(PresentationError):
        CompatiblePair(p1.first, p2.second, p1.exchange)
