from __future__ import annotations

import pytest

from dgmonad.cdg import ComplexCategory, point
from dgmonad.corpus import (
    dual_numbers,
    example_dual_numbers,
    example_field_extension,
    example_group_action,
    example_swap_action,
    swap_category,
)
from dgmonad.dgcat import IdentityFunctor, PresentationError
from dgmonad.fields import QQ
from dgmonad.graded import Z
from dgmonad.group_action import (
    Group,
    GroupAction,
    averaging_section,
    cyclic_group,
    swap_functor,
    symmetric_group_3,
)
from dgmonad.monads import algebra_monad, check_dg_monad, identity_monad
from dgmonad.separability import find_separability_section, verify_section

from helpers import F2, F3, brute_force_sections, monad_setting


def test_group_validation():
    with pytest.raises(PresentationError):
        Group([[0, 1], [1]])
    with pytest.raises(PresentationError):
        Group([[1, 0], [0, 0]])  # no neutral element
    with pytest.raises(PresentationError):
        Group([[0, 1, 2], [1, 0, 0], [2, 0, 0]])  # not associative
    G = symmetric_group_3()
    assert G.order == 6
    assert all(G.mul(g, G.inv(g)) == G.e for g in G)
    assert any(G.mul(g, h) != G.mul(h, g) for g in G for h in G)
    assert cyclic_group(4).mul(3, 3) == 2


def test_strict_action_checks():
    b = example_swap_action(F2)
    assert b["action"].check_strict().ok
    assert check_dg_monad(b["monad"]).ok
    C = swap_category(F2)
    sw = swap_functor(C, {"u": "w", "w": "u"})
    # Z3 with both generators acting by the swap is not an action: swap∘swap ≠ swap
    bad = GroupAction(C, cyclic_group(3), {0: IdentityFunctor(C), 1: sw, 2: sw})
    v = bad.check_strict()
    assert not v.ok
    with pytest.raises(PresentationError):
        GroupAction(C, cyclic_group(2), {0: IdentityFunctor(C)})


@pytest.mark.parametrize("group,k", [("Z2", F3), ("Z3", F2), ("Z2", QQ)])
def test_averaging_section(group, k):
    b = example_group_action(group, k)
    T, act = b["monad"], b["action"]
    sec = {}
    for x in T.objects:
        sec[x] = averaging_section(T, act, x)
        sec[T(x)] = averaging_section(T, act, T(x))
    L, M, mu, all_deg = monad_setting(T, "strict")
    assert verify_section(L, M, mu, list(T.objects), sec, all_deg)


@pytest.mark.parametrize("group,k,ok", [("Z2", F2, False), ("Z3", F3, False), ("Z2", F3, True),
                                        ("Z3", F2, True), ("S3", F2, False), ("S3", F3, False)])
@pytest.mark.parametrize("mode", ["strict", "h0"])
def test_group_action_sections(group, k, ok, mode):
    T = example_group_action(group, k)["monad"]
    v, sec = find_separability_section(T, mode)
    assert (sec is not None) == ok
    assert v.status == ("pass" if ok else "infeasible")


# Z3 already has 27 unknowns per component, too many to enumerate
@pytest.mark.parametrize("k,ok", [(F2, False), (F3, True)])
@pytest.mark.parametrize("mode", ["strict", "h0"])
def test_z2_sections_against_enumeration(k, ok, mode):
    T = example_group_action("Z2", k)["monad"]
    v, sec = find_separability_section(T, mode)
    assert (sec is not None) == ok
    brute = brute_force_sections(T, mode)
    assert bool(brute) == ok
    if ok:
        assert len(brute) == k.order ** v.data["solution_space_dim"]


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 1)])
def test_field_extension_is_separable(p, n):
    T = example_field_extension(p, n)["monad"]
    for mode in ("strict", "h0"):
        v, sec = find_separability_section(T, mode)
        assert v.ok and sec is not None


@pytest.mark.parametrize("k", [F2, F3])
def test_dual_numbers_not_separable(k):
    C = ComplexCategory(k, Z, [point(k, Z)])
    T = algebra_monad(C, dual_numbers(k))
    v, sec = find_separability_section(T, "strict")
    assert sec is None and v.status == "infeasible"
    assert v.checks[0].witness["certificate"]


def test_dual_numbers_fixture_h0_separable():
    # B is contractible, so in H^0 every equation on B is trivially solvable
    T = example_dual_numbers(F2)["monad"]
    v, sec = find_separability_section(T, "h0")
    assert v.ok


def test_identity_monad_is_separable():
    C = swap_category(F3)
    v, sec = find_separability_section(identity_monad(C), "strict")
    assert v.ok
    assert all(s == C.identity(z) for z, s in sec.items())


def test_unknown_mode():
    with pytest.raises(ValueError):
        find_separability_section(identity_monad(swap_category(F2)), "lax")
