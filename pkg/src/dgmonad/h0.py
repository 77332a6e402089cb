"""The H^0 category of a DG category and the induced functors and transformations.

Hom spaces of ``H0Category(C)`` are ``H^0 Hom_C(a, b)`` in the basis of
chosen cocycle representatives; composition composes representatives and
reduces the result back to classes.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .dgcat import (
    DGCategory,
    DGFunctor,
    LinearCategory,
    Morphism,
    NatTrans,
    PresentationError,
    TableCategory,
)
from .graded import DGSpace, Z
from .linalg import InconsistentSystem, Matrix, solve_affine
from .report import Verdict


class H0Category(LinearCategory):
    def __init__(self, C: DGCategory, objects: Sequence | None = None):
        self.dg = C
        self.field = C.field
        self.grading = Z
        self.objects = list(C.objects if objects is None else objects)
        self.name = f"H0({C.name})"

    def cohomology(self, a, b):
        return self.dg.h0(a, b)

    def hom_degrees(self, a, b):
        return [0] if self.dg.h0(a, b).dim else []

    def hom_dim(self, a, b, n):
        return self.dg.h0(a, b).dim if n == 0 else 0

    def lift(self, f: Morphism) -> Morphism:
        """The representative cocycle of a class."""
        coh = self.dg.h0(f.source, f.target)
        return Morphism(f.source, f.target, 0, coh.lift(f.coords), self.field)

    def cls(self, f: Morphism) -> Morphism:
        """The class of a closed degree 0 morphism of the DG category."""
        if f.degree != 0:
            raise PresentationError("H^0 classes exist only for degree 0 morphisms")
        coh = self.dg.h0(f.source, f.target)
        return Morphism(f.source, f.target, 0, coh.classify(f.coords), self.field)

    def compose(self, g, f):
        return self.cls(self.dg.compose(self.lift(g), self.lift(f)))

    def identity(self, a):
        return self.cls(self.dg.identity(a))


def tabulate_h0(C: DGCategory, objects: Sequence | None = None, name: str | None = None) -> TableCategory:
    """The H^0 category as an explicit additive presentation (degree 0 homs, zero d)."""
    H = H0Category(C, objects)
    objs = H.objects
    fld = C.field
    homs = {(a, b): DGSpace(fld, Z, {0: H.hom_dim(a, b, 0)}) for a in objs for b in objs}
    compose = {}
    for a, b, c in itertools.product(objs, repeat=3):
        gs, fs = H.basis(b, c, 0), H.basis(a, b, 0)
        if gs and fs and H.hom_dim(a, c, 0):
            cols = [H.compose(g, f).coords for g in gs for f in fs]
            compose[(a, b, c, 0, 0)] = Matrix.from_columns(fld, cols, H.hom_dim(a, c, 0))
    ids = {a: H.identity(a).coords for a in objs}
    return TableCategory(fld, Z, objs, homs, compose, ids, name or H.name)


class H0Functor(DGFunctor):
    """``H^0(F)``: the class of ``F`` applied to a representative."""

    def __init__(self, F: DGFunctor, source: H0Category | None = None, target: H0Category | None = None):
        self.dg = F
        self.source = source or H0Category(F.source)
        self.target = target or H0Category(F.target)
        self.name = f"H0({F.name})"

    def on_object(self, a):
        return self.dg(a)

    def on_morphism(self, f):
        return self.target.cls(self.dg(self.source.lift(f)))


def h0_nat(alpha: NatTrans, F: H0Functor | None = None, G: H0Functor | None = None) -> NatTrans:
    F = F or H0Functor(alpha.source)
    G = G or H0Functor(alpha.target, F.source, F.target)
    H = F.target
    return NatTrans(F, G, lambda a: H.cls(alpha[a]), name=f"H0({alpha.name})")


def invert(L: LinearCategory, f: Morphism) -> Morphism | None:
    """Two-sided inverse of a degree 0 morphism, found by one linear solve."""
    a, b = f.source, f.target
    fld = L.field
    basis = L.basis(b, a, 0)
    ida, idb = L.identity(a).coords, L.identity(b).coords
    if not basis:
        return L.zero(b, a, 0) if (not ida and not idb) else None
    cols = [L.compose(g, f).coords + L.compose(f, g).coords for g in basis]
    A = Matrix.from_columns(fld, cols, len(ida) + len(idb))
    try:
        x, _ = solve_affine(A, ida + idb)
    except InconsistentSystem:
        return None
    return Morphism(b, a, 0, tuple(x), fld)


def is_weak_nat_iso(alpha: NatTrans, objects: Sequence | None = None,
                    subject: str | None = None) -> Verdict:
    """Decide componentwise invertibility in H^0; inverse classes go to ``data``."""
    D = alpha.codomain
    objects = list(alpha.domain.objects if objects is None else objects)
    H = H0Category(D) if D.is_dg else D
    v = Verdict(subject or f"weak natural isomorphism {alpha.name}", field=repr(D.field))
    inverses, bad = {}, None
    for a in objects:
        c = alpha[a]
        cls = H.cls(c) if D.is_dg else c
        inv = invert(H, cls)
        if inv is None:
            bad = {"object": str(a), "class": [D.field.format(x) for x in cls.coords]}
            break
        inverses[str(a)] = [D.field.format(x) for x in inv.coords]
    v.add("H^0 components invertible", bad is None, bad)
    v.data["inverses"] = inverses
    return v


def check_h0_2functor(F: DGFunctor, G: DGFunctor, alpha: NatTrans, beta: NatTrans,
                      gamma: NatTrans, delta: NatTrans, objects: Sequence) -> Verdict:
    """Strict 2-functor laws of ``H^0`` on the listed objects of the source of ``F``.

    ``F: C -> D``, ``G: D -> E``; ``alpha: P => Q`` and ``beta: Q => R`` are
    vertically composable between functors ``C -> D``; ``gamma`` runs
    between functors ``D -> E`` and ``delta`` between functors ``C -> D``.
    """
    from .dgcat import ComposedFunctor, IdentityFunctor, functors_agree, horizontal, identity_nat, nats_agree, vertical

    C, D, E = F.source, F.target, G.target
    HC, HD, HE = H0Category(C, objects), H0Category(D), H0Category(E)
    v = Verdict("H^0 strict 2-functor laws", field=repr(C.field))

    def h(functor, src, tgt):
        return H0Functor(functor, src, tgt)

    v.add("identity functor", functors_agree(h(IdentityFunctor(C), HC, HC), IdentityFunctor(HC), objects))
    HF = h(F, HC, HD)
    HG = h(G, HD, HE)
    v.add("composite functor", functors_agree(ComposedFunctor(HG, HF), h(ComposedFunctor(G, F), HC, HE), objects))

    def hn(nat, src_cat, tgt_cat):
        return h0_nat(nat, h(nat.source, src_cat, tgt_cat), h(nat.target, src_cat, tgt_cat))

    lhs = vertical(hn(beta, HC, HD), hn(alpha, HC, HD))
    rhs = hn(vertical(beta, alpha), HC, HD)
    v.add("vertical composition", nats_agree(lhs, rhs, objects))
    lhs = horizontal(hn(gamma, HD, HE), hn(delta, HC, HD))
    rhs = hn(horizontal(gamma, delta), HC, HE)
    v.add("horizontal composition", nats_agree(lhs, rhs, objects))
    v.add("identity transformation", nats_agree(hn(identity_nat(F), HC, HD), identity_nat(HF), objects))
    return v
