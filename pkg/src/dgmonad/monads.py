"""Strict and weak DG monads on finite presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dgcat import (
    ComposedFunctor,
    DGFunctor,
    IdentityFunctor,
    LinearCategory,
    Morphism,
    NatTrans,
    check_natural,
)
from .report import Verdict


@dataclass
class Monad:
    """``(M, μ, η)`` on ``category``; checks run over ``objects``."""

    category: LinearCategory
    functor: DGFunctor
    mu: NatTrans
    eta: NatTrans
    objects: list = field(default_factory=list)
    name: str = "M"

    def __post_init__(self):
        if not self.objects:
            self.objects = list(self.category.objects)

    def __call__(self, x):
        return self.functor(x)

    def with_objects(self, objects: Sequence) -> Monad:
        return Monad(self.category, self.functor, self.mu, self.eta, list(objects), self.name)


def identity_monad(C: LinearCategory, objects: Sequence | None = None) -> Monad:
    I = IdentityFunctor(C)
    mu = NatTrans(ComposedFunctor(I, I), I, C.identity, name="μ")
    eta = NatTrans(IdentityFunctor(C), I, C.identity, name="η")
    return Monad(C, I, mu, eta, list(C.objects if objects is None else objects), name="id")


def _residual_ok(C: LinearCategory, r: Morphism, weak: bool) -> bool:
    if r.is_zero():
        return True
    return weak and C.is_dg and C.is_coboundary(r)


def monad_residuals(T: Monad) -> dict[str, list[tuple]]:
    """``(object, residual)`` lists for associativity and both unit laws."""
    C, M, mu, eta = T.category, T.functor, T.mu, T.eta
    out: dict[str, list[tuple]] = {"associativity": [], "left unit": [], "right unit": []}
    for x in T.objects:
        Mx = M(x)
        out["associativity"].append(
            (x, C.compose(mu[x], M(mu[x])) - C.compose(mu[x], mu[Mx])))
        out["left unit"].append((x, C.compose(mu[x], eta[Mx]) - C.identity(Mx)))
        out["right unit"].append((x, C.compose(mu[x], M(eta[x])) - C.identity(Mx)))
    return out


def _check(T: Monad, weak: bool) -> Verdict:
    C = T.category
    mode = "weak" if weak else "strict"
    v = Verdict(f"{mode} monad {T.name}", field=repr(C.field))
    v.extend(check_natural(T.mu, T.objects, mode=mode), prefix="μ")
    v.extend(check_natural(T.eta, T.objects, mode=mode), prefix="η")
    for law, items in monad_residuals(T).items():
        bad = None
        for x, r in items:
            if not _residual_ok(C, r, weak):
                bad = {"object": str(x), "residual": [C.field.format(c) for c in r.coords]}
                break
        v.add(law if not weak else f"{law} in H^0", bad is None, bad)
    return v


def check_dg_monad(T: Monad) -> Verdict:
    return _check(T, weak=False)


def check_weak_monad(T: Monad) -> Verdict:
    return _check(T, weak=True)


def algebra_monad(C, A, objects: Sequence | None = None) -> Monad:
    """``A ⊗ -`` on a complex category with multiplication and unit of ``A``."""
    from .cdg import AlgebraTensorFunctor, algebra_multiplication, algebra_unit

    M = AlgebraTensorFunctor(C, A)
    return Monad(C, M, algebra_multiplication(C, M), algebra_unit(C, M),
                 list(C.objects if objects is None else objects), name=f"{A.name}⊗-")
