from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import F2, F3, rand_complex

from dgmonad.fields import GF, QQ
from dgmonad.graded import (
    Z,
    Z2,
    DGSpace,
    Grading,
    NotACoboundary,
    NotClosed,
    cohomological_euler_characteristic,
    cohomology_at,
    direct_sum,
    euler_characteristic,
    is_coboundary,
    primitive,
    sign,
    validate_dg,
)
from dgmonad.linalg import Matrix, rank

seeds = st.integers(0, 10 ** 6)
fields = st.sampled_from([F2, F3, GF(2, 2), QQ])
gradings = st.sampled_from([Z, Z2])


@given(fields, gradings, seeds)
def test_random_complexes_square_to_zero(k, g, seed):
    V = rand_complex(k, random.Random(seed), g)
    assert validate_dg(V).ok


@given(fields, seeds)
def test_euler_characteristics_agree(k, seed):
    V = rand_complex(k, random.Random(seed), Z)
    assert euler_characteristic(V) == cohomological_euler_characteristic(V)


@given(fields, gradings, seeds)
def test_cohomology_dimension_formula(k, g, seed):
    V = rand_complex(k, random.Random(seed), g)
    for n in V.degrees():
        expected = V.dim(n) - rank(V.d(n)) - rank(V.d(n - 1))
        assert V.cohomology(n).dim == expected


@given(fields, gradings, seeds)
def test_boundaries_have_primitives(k, g, seed):
    rng = random.Random(seed)
    V = rand_complex(k, rng, g)
    for n in V.degrees():
        m = V.dim(n - 1)
        if not m:
            continue
        x = tuple(rng.choice([k.zero, k.one]) for _ in range(m))
        z = V.apply_d(n - 1, x)
        p = primitive(V, n, z)
        assert V.apply_d(n - 1, p) == tuple(z)


@given(fields, gradings, seeds)
def test_class_and_lift(k, g, seed):
    V = rand_complex(k, random.Random(seed), g)
    for n in V.degrees():
        H = V.cohomology(n)
        for i, r in enumerate(H.reps):
            c = H.classify(r)
            assert c == tuple(k.one if j == i else k.zero for j in range(H.dim))
            assert H.lift(c) == tuple(r)
            assert not is_coboundary(V, n, r)


def test_two_periodic_acyclic():
    k = GF(3)
    one = Matrix.identity(k, 1)
    V = DGSpace(k, Z2, {0: 1, 1: 1}, {0: one})
    assert validate_dg(V).ok
    assert cohomology_at(V, 0)[0] == 0 and cohomology_at(V, 1)[0] == 0


def test_not_closed_and_not_coboundary():
    k = GF(2)
    V = DGSpace(k, Z, {0: 1, 1: 1}, {0: Matrix.identity(k, 1)})
    with pytest.raises(NotClosed):
        primitive(V, 0, (1,))
    W = DGSpace(k, Z, {0: 1})
    with pytest.raises(NotACoboundary):
        primitive(W, 0, (1,))
    with pytest.raises(ValueError):
        primitive(W, 0, (1, 0))


def test_bad_differentials():
    k = GF(2)
    with pytest.raises(ValueError):
        DGSpace(k, Z, {0: 1, 1: 2}, {0: Matrix.identity(k, 1)})
    one = Matrix.identity(k, 1)
    V = DGSpace(k, Z2, {0: 1, 1: 1}, {0: one, 1: one})
    v = validate_dg(V)
    assert not v.ok and v.failures()[0].witness == {"degree": 0}


def test_direct_sum_cohomology_adds():
    rng = random.Random(7)
    for _ in range(20):
        Vs = [rand_complex(F3, rng, Z) for _ in range(3)]
        S = direct_sum(Vs)
        assert validate_dg(S).ok
        for n in range(3):
            assert S.cohomology(n).dim == sum(V.cohomology(n).dim for V in Vs)


def test_signs_and_gradings():
    assert sign(GF(3), 1) == 2 and sign(GF(3), 2) == 1 and sign(GF(2), 1) == 1
    assert Z2.norm(-3) == 1 and Z.norm(-3) == -3
    with pytest.raises(ValueError):
        Grading("Z3")
