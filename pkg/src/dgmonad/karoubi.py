"""Idempotent completion of an additive presentation along a finite list of idempotents.

Objects of the envelope are pairs ``(x, π)`` with ``π`` an idempotent of
``x``; ``Hom((x, π), (y, ρ))`` is the image of ``f ↦ ρ∘f∘π`` inside
``Hom(x, y)`` (degree 0 only).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Sequence

from .dgcat import DGFunctor, LinearCategory, Morphism, PresentationError
from .graded import Z
from .linalg import Subspace
from .report import Verdict


class NotIdempotent(PresentationError):
    def __init__(self, obj, coords, square):
        super().__init__(f"endomorphism of {obj} is not idempotent")
        self.witness = {"object": str(obj), "e": list(coords), "e∘e": list(square)}


@dataclass(frozen=True)
class Split:
    """The object ``(x, π)`` of an envelope; ``pi`` are coordinates in ``End(x)``."""

    base: Hashable
    pi: tuple

    def __str__(self):
        return f"({self.base}, [{','.join(str(c) for c in self.pi)}])"


class KaroubiEnvelope(LinearCategory):
    def __init__(self, A: LinearCategory, idempotents: Sequence[Morphism] = (), objects: Sequence | None = None):
        self.base = A
        self.field = A.field
        self.grading = Z
        self.name = f"Kar({A.name})"
        base_objs = list(A.objects if objects is None else objects)
        objs = [Split(x, A.identity(x).coords) for x in base_objs]
        for e in idempotents:
            if e.source != e.target or e.degree != 0:
                raise PresentationError("idempotents must be degree 0 endomorphisms")
            sq = A.compose(e, e)
            if sq != e:
                raise NotIdempotent(e.source, e.coords, sq.coords)
            s = Split(e.source, e.coords)
            if s not in objs:
                objs.append(s)
        self.objects = objs
        self.idempotents = list(idempotents)
        self._spaces: dict = {}

    def morphism_of(self, obj: Split) -> Morphism:
        return Morphism(obj.base, obj.base, 0, obj.pi, self.field)

    def space(self, P: Split, R: Split) -> Subspace:
        key = (P, R)
        s = self._spaces.get(key)
        if s is None:
            A = self.base
            pi, rho = self.morphism_of(P), self.morphism_of(R)
            vecs = [A.compose_many(rho, f, pi).coords for f in A.basis(P.base, R.base, 0)]
            s = self._spaces[key] = Subspace(self.field, A.hom_dim(P.base, R.base, 0), vecs)
        return s

    def hom_degrees(self, P, R):
        return [0] if self.space(P, R).dim else []

    def hom_dim(self, P, R, n):
        return self.space(P, R).dim if n == 0 else 0

    def embed(self, f: Morphism) -> Morphism:
        """The underlying morphism ``x -> y`` of the base."""
        return Morphism(f.source.base, f.target.base, 0, self.space(f.source, f.target).embed(f.coords), self.field)

    def restrict(self, P: Split, R: Split, g: Morphism) -> Morphism:
        """A base morphism with ``ρ g π = g`` read as a morphism ``P -> R``."""
        return Morphism(P, R, 0, self.space(P, R).coords(g.coords), self.field)

    def compose(self, g, f):
        return self.restrict(f.source, g.target, self.base.compose(self.embed(g), self.embed(f)))

    def identity(self, P):
        return self.restrict(P, P, self.morphism_of(P))

    def inclusion(self, P: Split) -> Morphism:
        """``(x, π) -> (x, 1)`` given by ``π``."""
        full = Split(P.base, self.base.identity(P.base).coords)
        return self.restrict(P, full, self.morphism_of(P))

    def retraction(self, P: Split) -> Morphism:
        full = Split(P.base, self.base.identity(P.base).coords)
        return self.restrict(full, P, self.morphism_of(P))


def karoubi_envelope(A: LinearCategory, idempotents: Sequence[Morphism] = (),
                     objects: Sequence | None = None) -> KaroubiEnvelope:
    return KaroubiEnvelope(A, idempotents, objects)


def check_splitting(K: KaroubiEnvelope) -> Verdict:
    """Each supplied idempotent ``π`` factors as ``i∘r`` with ``r∘i = id``."""
    v = Verdict(f"idempotents split in {K.name}", field=repr(K.field))
    bad = None
    for e in K.idempotents:
        P = Split(e.source, e.coords)
        i, r = K.inclusion(P), K.retraction(P)
        if K.embed(K.compose(i, r)) != e or K.compose(r, i) != K.identity(P):
            bad = {"object": str(P)}
            break
    v.add("supplied idempotents split", bad is None, bad)
    return v


def brute_force_splits(K: KaroubiEnvelope, e: Morphism) -> bool:
    """Search all pairs ``(r, i)`` over a finite field for a splitting of ``e``."""
    P = Split(e.source, e.coords)
    full = Split(e.source, K.base.identity(e.source).coords)
    fld = K.field
    rs = list(itertools.product(list(fld.elements()), repeat=K.hom_dim(full, P, 0)))
    is_ = list(itertools.product(list(fld.elements()), repeat=K.hom_dim(P, full, 0)))
    idP = K.identity(P)
    for rc in rs:
        r = Morphism(full, P, 0, tuple(rc), fld)
        for ic in is_:
            i = Morphism(P, full, 0, tuple(ic), fld)
            if K.compose(r, i) == idP and K.embed(K.compose(i, r)) == e:
                return True
    return False


class KaroubiFunctor(DGFunctor):
    """``F̂(x, π) = (F x, F π)`` between envelopes."""

    def __init__(self, F: DGFunctor, source: KaroubiEnvelope, target: KaroubiEnvelope | None = None):
        self.base = F
        self.source = source
        if target is None:
            images = []
            for P in source.objects:
                img = F(source.morphism_of(P))
                if P.pi != F.source.identity(P.base).coords:
                    images.append(img)
            target = KaroubiEnvelope(F.target, images, objects=_unique(F(P.base) for P in source.objects))
        self.target = target
        self.name = f"Kar({F.name})"

    def on_object(self, P):
        img = self.base(self.source.morphism_of(P))
        if self.target.base.compose(img, img) != img:
            raise NotIdempotent(P, img.coords, self.target.base.compose(img, img).coords)
        return Split(self.base(P.base), img.coords)

    def on_morphism(self, f):
        P, R = self.on_object(f.source), self.on_object(f.target)
        return self.target.restrict(P, R, self.base(self.source.embed(f)))


def _unique(xs):
    out = []
    for x in xs:
        if x not in out:
            out.append(x)
    return out


def extend_functor_karoubi(F: DGFunctor, source: KaroubiEnvelope,
                           target: KaroubiEnvelope | None = None) -> KaroubiFunctor:
    return KaroubiFunctor(F, source, target)


def extend_monad_karoubi(T, K: KaroubiEnvelope):
    """``M̂(x, π) = (M x, M π)`` with ``μ`` and ``η`` conjugated by the idempotents."""
    from .dgcat import ComposedFunctor, IdentityFunctor, NatTrans
    from .monads import Monad

    A = K.base
    if T.category is not A:
        raise ValueError("monad and envelope live on different categories")
    Mh = KaroubiFunctor(T.functor, K, K)

    def mu(P):
        MMP, MP = Mh(Mh(P)), Mh(P)
        g = A.compose_many(K.morphism_of(MP), T.mu[P.base], K.morphism_of(MMP))
        return K.restrict(MMP, MP, g)

    def eta(P):
        MP = Mh(P)
        return K.restrict(P, MP, A.compose_many(K.morphism_of(MP), T.eta[P.base], K.morphism_of(P)))

    return Monad(K, Mh, NatTrans(ComposedFunctor(Mh, Mh), Mh, mu, name="μ̂"),
                 NatTrans(IdentityFunctor(K), Mh, eta, name="η̂"), list(K.objects), name=f"Kar({T.name})")
