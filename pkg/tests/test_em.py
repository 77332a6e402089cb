from __future__ import annotations

import itertools
import random

import pytest

from dgmonad.cdg import ComplexCategory, point
from dgmonad.corpus import dual_numbers, example_dual_numbers, truncated_polynomial
from dgmonad.dgcat import PresentationError
from dgmonad.em import (
    Module,
    ModuleCategory,
    check_adjunction_h0,
    check_module,
    em_cone,
    em_shift,
    free_forgetful,
    free_module,
    make_module,
    pretr_monad,
)
from dgmonad.graded import Z
from dgmonad.monads import algebra_monad
from dgmonad.pretr import PretrCategory, embedding, validate_twisted

from helpers import F2, F3, rand_chain_map, rand_complex


def test_dual_numbers_homotopies_by_enumeration():
    # over F2 every degree 1 map B -> B is listed; the module maps among them are filtered by hand
    b = example_dual_numbers(F2)
    C, T, m, B = b["category"], b["monad"], b["module"], b["object"]
    Mod = ModuleCategory(T, [m])
    idB = C.identity(B)
    n = C.hom_dim(B, B, 1)
    all_h = [C.element(B, B, 1, c) for c in itertools.product((0, 1), repeat=n)]
    over_k = [h for h in all_h if C.d(h) == idB]
    module_maps = [h for h in all_h if Mod.is_module_morphism(m, m, h)]
    assert over_k
    assert module_maps
    assert not any(C.d(h) == idB for h in module_maps)
    assert len(module_maps) == 2 ** Mod.hom_dim(m, m, 1)


@pytest.mark.parametrize("k", [F2, F3])
def test_dual_numbers_module_is_strict(k):
    b = example_dual_numbers(k)
    assert check_module(b["monad"], b["module"]).ok


def test_zero_action_is_not_a_module():
    C = ComplexCategory(F3, Z, [point(F3, Z)])
    T = algebra_monad(C, dual_numbers(F3))
    x = C.objects[0]
    bad = make_module(T, x, (0, 0))
    v = check_module(T, bad)
    assert not v.ok
    assert not check_module(T, bad, "weak").ok
    with pytest.raises(PresentationError):
        make_module(T, x, C.identity(x))


@pytest.mark.parametrize("seed", range(5))
def test_free_forgetful_adjunction(seed):
    rng = random.Random(seed)
    k = F3
    objs = [rand_complex(k, rng, maxdim=1) for _ in range(2)]
    C = ComplexCategory(k, Z, objs)
    T = algebra_monad(C, truncated_polynomial(k, [1, 0, 1]))
    Mod = ModuleCategory(T, [free_module(T, x) for x in objs])
    F, G, unit, counit = free_forgetful(Mod)
    v = check_adjunction_h0(F, G, unit, counit, objs, Mod.objects)
    assert v.ok and v.data["strict"]
    for x in objs:
        assert check_module(T, F(x)).ok
        assert G(F(x)) == T(x)


def test_free_hom_matches_base_hom():
    rng = random.Random(2)
    k = F2
    x, y = rand_complex(k, rng), rand_complex(k, rng)
    C = ComplexCategory(k, Z, [x, y])
    T = algebra_monad(C, dual_numbers(k))
    Mod = ModuleCategory(T)
    Fx = free_module(T, x)
    m = free_module(T, y)
    assert Mod.h0(Fx, m).dim == C.h0(x, T(y)).dim


def test_em_shift_and_cone():
    rng = random.Random(7)
    k = F3
    X, Y = rand_complex(k, rng, maxdim=1), rand_complex(k, rng, maxdim=1)
    C = ComplexCategory(k, Z, [X, Y])
    T = algebra_monad(C, dual_numbers(k))
    P = PretrCategory(C)
    PT = pretr_monad(T, P)
    Mod = ModuleCategory(PT)
    mx, my = free_module(PT, P.embed(X)), free_module(PT, P.embed(Y))
    s = em_shift(Mod, mx, 1)
    assert check_module(PT, s).ok
    f = rand_chain_map(C, X, Y, rng)
    phi = Mod.restrict(mx, my, embedding(P)(T.functor(f)))
    cone, inc, proj = em_cone(Mod, phi)
    assert isinstance(cone, Module)
    assert validate_twisted(P, cone.obj).ok
    assert check_module(PT, cone).ok
    assert Mod.is_closed(inc) and Mod.is_closed(proj)
    assert Mod.compose(proj, inc).is_zero()
