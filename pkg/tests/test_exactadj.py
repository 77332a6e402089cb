from __future__ import annotations

import random

import pytest

from dgmonad.cdg import ComplexCategory
from dgmonad.corpus import dual_numbers, truncated_polynomial
from dgmonad.dgcat import NatTrans, PresentationError
from dgmonad.exactadj import exactadj_pipeline
from dgmonad.graded import Z
from dgmonad.monads import Monad, algebra_monad

from helpers import F2, F3, rand_complex


@pytest.mark.parametrize("k", [F2, F3])
def test_pipeline_on_algebra_monads(k):
    rng = random.Random(12)
    C = ComplexCategory(k, Z, [rand_complex(k, rng, maxdim=1) for _ in range(2)])
    for A in (dual_numbers(k), truncated_polynomial(k, [1, 1, 1])):
        E = exactadj_pipeline(algebra_monad(C, A))
        assert E.verdict.ok
        assert E.verdict.data["strict triangle identities"] is True
        assert all(w["cone(id) contractible"] for w in E.verdict.data["witnesses"])
        for x in C.objects:
            assert E.G(E.F(x)) == E.modules.monad(x)


def test_pipeline_rejects_non_monad():
    k = F3
    C = ComplexCategory(k, Z, [rand_complex(k, random.Random(1), maxdim=1)])
    T = algebra_monad(C, dual_numbers(k))
    zero_eta = NatTrans(T.eta.source, T.eta.target, lambda x: C.zero(x, T(x), 0), name="0")
    with pytest.raises(PresentationError) as info:
        exactadj_pipeline(Monad(C, T.functor, T.mu, zero_eta))
    assert not info.value.verdict.ok
