from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from dgmonad.cdg import ComplexCategory, point
from dgmonad.dgcat import PresentationError, validate_dg_category, validate_dg_functor
from dgmonad.graded import Z, Z2, sign, validate_dg
from dgmonad.pretr import PretrCategory, check_twisted_hom, embedding, totalize, validate_twisted

from helpers import F2, F3, rand_chain_map, rand_complex, rand_depth1_twisted, rand_morphism

seeds = st.integers(0, 10 ** 6)


def _setting(k, grading, seed):
    rng = random.Random(seed)
    objs = [rand_complex(k, rng, grading, maxdim=1) for _ in range(2)] + [point(k, grading, name="k")]
    C = ComplexCategory(k, grading, objs)
    return rng, C, PretrCategory(C), objs


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([F2, F3]), st.sampled_from([Z, Z2]), seeds)
def test_random_twisted_complexes(k, grading, seed):
    rng, C, P, objs = _setting(k, grading, seed)
    T = rand_depth1_twisted(P, objs, rng)
    assert validate_twisted(P, T).ok
    assert check_twisted_hom(P, T, T).ok
    U = rand_depth1_twisted(P, objs, rng)
    f = rand_morphism(P, T, U, rng.randint(-1, 1), rng)
    g = rand_morphism(P, U, T, rng.randint(-1, 1), rng)
    # Leibniz in the twisted hom complexes
    assert P.d(P.compose(g, f)) == P.compose(P.d(g), f) + P.compose(g, P.d(f)).scale(sign(k, g.degree))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([F2, F3]), seeds)
def test_hom_from_point_is_totalization(k, seed):
    # Hom(k, T) and Tot(T) are the same complex up to isomorphism
    rng, C, P, objs = _setting(k, Z, seed)
    T = rand_depth1_twisted(P, objs, rng)
    tot = totalize(P, T)
    assert validate_dg(tot).ok
    H = P.hom(P.embed(objs[-1]), T)
    for n in set(tot.degrees()) | set(H.degrees()):
        assert tot.dim(n) == H.dim(n)
        assert tot.cohomology(n).dim == H.cohomology(n).dim


def test_shift_round_trip_and_cone_triangle():
    rng, C, P, objs = _setting(F3, Z, 5)
    T = rand_depth1_twisted(P, objs, rng)
    assert P.shift(P.shift(T, 1), -1) == T
    assert validate_twisted(P, P.shift(T, 1)).ok
    U = rand_depth1_twisted(P, objs, rng)
    f = P.zero(T, U, 0)
    Cn, inc, proj = P.cone_triangle(f)
    assert validate_twisted(P, Cn).ok
    assert P.is_closed(inc) and P.is_closed(proj)
    assert P.compose(proj, inc).is_zero()
    Cid = P.cone(P.identity(T))
    assert P.is_coboundary(P.identity(Cid))
    tot = totalize(P, Cid)
    assert all(tot.cohomology(n).dim == 0 for n in tot.degrees())


def test_embedding_is_fully_faithful_dg_functor():
    rng, C, P, objs = _setting(F2, Z, 9)
    E = embedding(P)
    assert validate_dg_functor(E).ok
    for a in objs:
        for b in objs:
            for n in C.hom_degrees(a, b):
                assert P.hom_dim(P.embed(a), P.embed(b), n) == C.hom_dim(a, b, n)
    f = rand_chain_map(C, objs[0], objs[1], rng)
    assert E(f).coords == f.coords


def test_validate_pretr_category_small():
    rng, C, P, objs = _setting(F2, Z2, 1)
    Ts = [P.embed(objs[0]), rand_depth1_twisted(P, objs, rng)]
    assert validate_dg_category(P, Ts).ok


def test_validate_twisted_rejections():
    rng, C, P, objs = _setting(F3, Z, 2)
    x = objs[-1]
    # the point has no degree 1 endomorphisms, so this block has the wrong length
    bad = P.make([(x, 0), (x, 0)], {(1, 0): (1,)})
    v = validate_twisted(P, bad)
    assert not v.ok and any(c.name == "twist degrees" and not c.ok for c in v.checks)
    # an upper triangular block is rejected
    bad = P.make([(x, 1), (x, 0)], {(0, 1): (1,)})
    assert not validate_twisted(P, bad).ok
    with pytest.raises(PresentationError):
        P.cone(P.zero(P.embed(x), P.embed(x), 1))
