"""From a weak monad to an adjunction through a pretriangulated category.

Weak modules form a DG category; twisted complexes over it add shifts and
cones.  ``F = ι∘F_M`` goes into the twisted layer and ``G`` reads back the
underlying object of a one-entry complex.  The pipeline checks ``G∘F = M``,
the triangle identities in ``H^0`` and records shift/cone witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dgcat import (
    ComposedFunctor,
    DGFunctor,
    FunctionFunctor,
    IdentityFunctor,
    NatTrans,
    PresentationError,
    functors_agree,
)
from .em import ModuleCategory, check_adjunction_h0, free_module
from .monads import Monad, check_weak_monad
from .pretr import PretrCategory, embedding, validate_twisted
from .report import Verdict


class UnderlyingFunctor(DGFunctor):
    """``G`` on one-entry, unshifted twisted complexes of modules."""

    def __init__(self, P: PretrCategory, C):
        self.source, self.target = P, C
        self.name = "G"

    def _entry(self, T):
        if len(T) != 1 or T.shift_of(0) != 0:
            raise PresentationError("G is defined on one-entry unshifted complexes only")
        return T.obj(0)

    def on_object(self, T):
        return self._entry(T).obj

    def on_morphism(self, f):
        P = self.source
        m = P.blocks(f).get((0, 0))
        a, b = self(f.source), self(f.target)
        if m is None:
            return self.target.zero(a, b, f.degree)
        return P.base.embed(m)


@dataclass
class ExactAdjunction:
    modules: ModuleCategory
    pretr: PretrCategory
    F: DGFunctor
    G: DGFunctor
    unit: NatTrans
    counit: NatTrans
    verdict: Verdict


def exactadj_pipeline(T: Monad) -> ExactAdjunction:
    """Raises ``PresentationError`` when ``T`` is not a weak monad."""
    pre = check_weak_monad(T)
    if not pre.ok:
        err = PresentationError(f"{T.name} is not a weak monad")
        err.verdict = pre
        raise err
    C = T.category
    frees = [free_module(T, x) for x in T.objects]
    Mod = ModuleCategory(T, frees, weak=True)
    P = PretrCategory(Mod)
    iota = embedding(P)
    F = FunctionFunctor(C, P, lambda x: P.embed(free_module(T, x)),
                        lambda f: iota(Mod.restrict(free_module(T, f.source),
                                                                free_module(T, f.target), T.functor(f))),
                        name="ι∘F_M")
    G = UnderlyingFunctor(P, C)
    unit = NatTrans(IdentityFunctor(C), ComposedFunctor(G, F), T.eta.component, name="η")

    def counit_at(E):
        m = E.obj(0)
        lam = Mod.restrict(free_module(T, m.obj), m, Mod.action(m))
        return iota(lam)

    counit = NatTrans(ComposedFunctor(F, G), IdentityFunctor(P), counit_at, name="ε")
    v = Verdict(f"exact adjunction for {T.name}", field=repr(C.field))
    v.extend(pre, prefix="weak monad")
    v.add("G∘F = M on the presentation", functors_agree(ComposedFunctor(G, F), T.functor, T.objects))
    embedded = [P.embed(m) for m in frees]
    adj = check_adjunction_h0(F, G, unit, counit, T.objects, embedded)
    v.extend(adj, prefix="adjunction")
    v.data["strict triangle identities"] = adj.data.get("strict")
    witnesses = []
    bad = None
    for E in embedded:
        s = P.shift(P.shift(E, 1), -1)
        cone = P.cone(P.identity(E))
        contractible = P.is_coboundary(P.identity(cone))
        ok = s == E and validate_twisted(P, cone).ok and contractible
        witnesses.append({"object": str(E.obj(0).obj), "shift round trip": s == E,
                          "cone(id) contractible": contractible})
        if not ok and bad is None:
            bad = witnesses[-1]
    v.add("shift and cone witnesses", bad is None, bad)
    v.data["witnesses"] = witnesses
    return ExactAdjunction(Mod, P, F, G, unit, counit, v)
