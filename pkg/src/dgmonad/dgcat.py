"""Finitely presented DG categories, DG functors and natural transformations.

A category exposes, for every ordered pair of objects, a hom complex
(``DGSpace``) with a chosen basis, plus composition and identities.
Morphisms are homogeneous: a source, a target, a degree and a coordinate
vector in the basis of the hom complex at that degree.

Conventions: differentials raise degree; the Leibniz rule is
``d(g∘f) = dg∘f + (-1)^|g| g∘df``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .fields import Field
from .graded import DGSpace, Grading, NotACoboundary, primitive, sign
from .linalg import Matrix, vec_add, vec_is_zero, vec_scale, vec_sub
from .report import Verdict


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    source: Hashable
    target: Hashable
    degree: int
    coords: tuple
    field: Field = dc_field(compare=False, repr=False, hash=False)

    def _like(self, coords) -> Morphism:
        return Morphism(self.source, self.target, self.degree, coords, self.field)

    def _same_hom(self, other: Morphism):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise PresentationError("adding morphisms from different hom spaces")

    def __add__(self, other: Morphism) -> Morphism:
        self._same_hom(other)
        return self._like(vec_add(self.field, self.coords, other.coords))

    def __sub__(self, other: Morphism) -> Morphism:
        self._same_hom(other)
        return self._like(vec_sub(self.field, self.coords, other.coords))

    def __neg__(self) -> Morphism:
        return self.scale(self.field.neg(self.field.one))

    def scale(self, c) -> Morphism:
        return self._like(vec_scale(self.field, c, self.coords))

    def is_zero(self) -> bool:
        return vec_is_zero(self.field, self.coords)

    def to_json(self) -> dict:
        return {"degree": self.degree, "coords": [self.field.format(x) for x in self.coords]}

    def __repr__(self):
        body = ",".join(self.field.format(x) for x in self.coords)
        return f"<{self.source}->{self.target} deg {self.degree}: [{body}]>"


class LinearCategory:
    """Anything with graded hom spaces, composition and identities."""

    field: Field
    grading: Grading
    objects: list
    name: str = "C"

    def hom_degrees(self, a, b) -> list[int]:
        raise NotImplementedError

    def hom_dim(self, a, b, n: int) -> int:
        raise NotImplementedError

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        raise NotImplementedError

    def identity(self, a) -> Morphism:
        raise NotImplementedError

    def element(self, a, b, n: int, coords: Sequence) -> Morphism:
        n = self.grading.norm(n)
        coords = tuple(self.field.coerce(x) for x in coords)
        if len(coords) != self.hom_dim(a, b, n):
            raise PresentationError(f"Hom({a}, {b})^{n} has dimension {self.hom_dim(a, b, n)}, "
                                    f"got {len(coords)} coordinates")
        return Morphism(a, b, n, coords, self.field)

    def zero(self, a, b, n: int = 0) -> Morphism:
        n = self.grading.norm(n)
        return Morphism(a, b, n, (self.field.zero,) * self.hom_dim(a, b, n), self.field)

    def basis(self, a, b, n: int) -> list[Morphism]:
        n = self.grading.norm(n)
        k = self.hom_dim(a, b, n)
        f = self.field
        return [Morphism(a, b, n, tuple(f.one if i == j else f.zero for i in range(k)), f)
                for j in range(k)]

    def all_basis(self, a, b) -> list[Morphism]:
        return [e for n in self.hom_degrees(a, b) for e in self.basis(a, b, n)]

    def compose_many(self, *fs: Morphism) -> Morphism:
        """``compose_many(h, g, f) == h∘g∘f``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    is_dg = False


class DGCategory(LinearCategory):
    is_dg = True

    def __init__(self, field: Field, grading: Grading, objects: Iterable = (), name: str = "C"):
        self.field = field
        self.grading = grading
        self.objects = list(objects)
        self.name = name
        self._homs: dict[tuple, DGSpace] = {}

    def _make_hom(self, a, b) -> DGSpace:
        raise NotImplementedError

    def hom(self, a, b) -> DGSpace:
        key = (a, b)
        h = self._homs.get(key)
        if h is None:
            h = self._homs[key] = self._make_hom(a, b)
        return h

    def hom_degrees(self, a, b):
        return self.hom(a, b).degrees()

    def hom_dim(self, a, b, n):
        return self.hom(a, b).dim(n)

    def d(self, f: Morphism) -> Morphism:
        h = self.hom(f.source, f.target)
        n1 = self.grading.norm(f.degree + 1)
        return Morphism(f.source, f.target, n1, h.apply_d(f.degree, f.coords), self.field)

    def is_closed(self, f: Morphism) -> bool:
        return self.d(f).is_zero()

    def primitive(self, f: Morphism) -> Morphism:
        """``g`` with ``d g = f``; raises ``NotACoboundary`` with a certificate."""
        g = primitive(self.hom(f.source, f.target), f.degree, f.coords)
        return Morphism(f.source, f.target, self.grading.norm(f.degree - 1), g, self.field)

    def is_coboundary(self, f: Morphism) -> bool:
        try:
            self.primitive(f)
        except NotACoboundary:
            return False
        return True

    def h0(self, a, b):
        return self.hom(a, b).cohomology(0)

    def h0_class(self, f: Morphism) -> tuple:
        return self.hom(f.source, f.target).cohomology(f.degree).classify(f.coords)


# --- structure-constant presentations ----------------------------------------

class TableCategory(DGCategory):
    """A DG category given by explicit hom complexes and structure constants.

    ``compose[(a, b, c, p, q)]`` is the matrix of
    ``Hom(b, c)^p ⊗ Hom(a, b)^q -> Hom(a, c)^(p+q)``; the column of the
    pair ``(g_i, f_j)`` is ``i * dim Hom(a, b)^q + j``.  Missing entries are
    zero.
    """

    def __init__(self, field: Field, grading: Grading, objects: Sequence,
                 homs: dict[tuple, DGSpace], compose: dict[tuple, Matrix],
                 identities: dict[Any, Sequence], name: str = "C"):
        super().__init__(field, grading, objects, name)
        for a in self.objects:
            for b in self.objects:
                h = homs.get((a, b))
                self._homs[(a, b)] = h if h is not None else DGSpace(field, grading, {})
        self.table = {}
        for key, m in compose.items():
            a, b, c, p, q = key
            p, q = grading.norm(p), grading.norm(q)
            expect = (self.hom_dim(a, c, p + q), self.hom_dim(b, c, p) * self.hom_dim(a, b, q))
            if m.shape != expect:
                raise PresentationError(f"structure constants for {key} have shape {m.shape}, "
                                        f"expected {expect}")
            if not m.is_zero():
                self.table[(a, b, c, p, q)] = m
        self._sparse: dict[tuple, dict] = {}
        self.identities = {}
        for a in self.objects:
            coords = identities.get(a, ())
            self.identities[a] = self.element(a, a, 0, coords)

    def _make_hom(self, a, b):
        raise PresentationError(f"unknown objects {a!r}, {b!r} in {self.name}")

    def _sparse_table(self, key) -> dict:
        s = self._sparse.get(key)
        if s is None:
            s = {}
            m = self.table.get(key)
            if m is not None:
                nf = self.hom_dim(key[0], key[1], key[4])
                z = self.field.zero
                for k, row in enumerate(m.rows):
                    for col, x in enumerate(row):
                        if x != z:
                            s.setdefault(divmod(col, nf), []).append((k, x))
            self._sparse[key] = s
        return s

    def compose(self, g, f):
        if g.source != f.target:
            raise PresentationError(f"cannot compose {g} after {f}")
        a, b, c = f.source, f.target, g.target
        p, q = g.degree, f.degree
        n = self.grading.norm(p + q)
        fld = self.field
        out = [fld.zero] * self.hom_dim(a, c, n)
        s = self._sparse_table((a, b, c, p, q))
        if s:
            z = fld.zero
            for i, gi in enumerate(g.coords):
                if gi == z:
                    continue
                for j, fj in enumerate(f.coords):
                    if fj == z:
                        continue
                    entries = s.get((i, j))
                    if entries:
                        c0 = fld.mul(gi, fj)
                        for k, x in entries:
                            out[k] = fld.add(out[k], fld.mul(c0, x))
        return Morphism(a, c, n, tuple(out), fld)

    def identity(self, a):
        return self.identities[a]


def tabulate_category(C: DGCategory, objects: Sequence, name: str | None = None) -> TableCategory:
    """Structure constants of the full subcategory of ``C`` on ``objects``."""
    fld = C.field
    homs = {(a, b): C.hom(a, b) for a in objects for b in objects}
    compose = {}
    for a, b, c in itertools.product(objects, repeat=3):
        for p in C.hom_degrees(b, c):
            for q in C.hom_degrees(a, b):
                n = C.grading.norm(p + q)
                cols = [C.compose(g, f).coords for g in C.basis(b, c, p) for f in C.basis(a, b, q)]
                if not cols:
                    continue
                m = Matrix.from_columns(fld, cols, C.hom_dim(a, c, n))
                compose[(a, b, c, p, q)] = m
    ids = {a: C.identity(a).coords for a in objects}
    return TableCategory(fld, C.grading, list(objects), homs, compose, ids, name or C.name)


def validate_dg_category(C: DGCategory, objects: Sequence | None = None,
                         subject: str | None = None) -> Verdict:
    """Check d² = 0, Leibniz, associativity and unit laws on all basis tuples."""
    objects = list(C.objects if objects is None else objects)
    v = Verdict(subject or f"category {C.name}", field=repr(C.field))
    fld = C.field

    bad = None
    for a, b in itertools.product(objects, repeat=2):
        h = C.hom(a, b)
        for n in h.degrees():
            if not (h.d(n + 1) @ h.d(n)).is_zero():
                bad = {"source": str(a), "target": str(b), "degree": n}
                break
        if bad:
            break
    v.add("d∘d = 0", bad is None, bad)

    bad = None
    for a in objects:
        i = C.identity(a)
        if i.degree != 0 or not C.is_closed(i):
            bad = {"object": str(a), "reason": "identity not a degree 0 cycle"}
            break
        for b in objects:
            for f in C.all_basis(a, b):
                if C.compose(C.identity(b), f) != f or C.compose(f, i) != f:
                    bad = {"object": str(a), "morphism": [str(a), str(b), f.degree, list(map(str, f.coords))]}
                    break
            if bad:
                break
        if bad:
            break
    v.add("unit laws", bad is None, bad)

    bad = None
    for a, b, c in itertools.product(objects, repeat=3):
        for g in C.all_basis(b, c):
            for f in C.all_basis(a, b):
                lhs = C.d(C.compose(g, f))
                rhs = C.compose(C.d(g), f) + C.compose(g, C.d(f)).scale(sign(fld, g.degree))
                if lhs != rhs:
                    bad = {"objects": [str(a), str(b), str(c)], "g": [g.degree, g.coords.index(fld.one)],
                           "f": [f.degree, f.coords.index(fld.one)]}
                    break
            if bad:
                break
        if bad:
            break
    v.add("Leibniz rule", bad is None, bad)

    bad = None
    for a, b, c, e in itertools.product(objects, repeat=4):
        for h in C.all_basis(c, e):
            for g in C.all_basis(b, c):
                hg = C.compose(h, g)
                for f in C.all_basis(a, b):
                    if C.compose(hg, f) != C.compose(h, C.compose(g, f)):
                        bad = {"objects": [str(a), str(b), str(c), str(e)],
                               "h": [h.degree, h.coords.index(fld.one)],
                               "g": [g.degree, g.coords.index(fld.one)],
                               "f": [f.degree, f.coords.index(fld.one)]}
                        break
                if bad:
                    break
            if bad:
                break
        if bad:
            break
    v.add("associativity", bad is None, bad)
    return v


# --- functors ----------------------------------------------------------------

class DGFunctor:
    source: LinearCategory
    target: LinearCategory
    name: str

    def on_object(self, a):
        raise NotImplementedError

    def on_morphism(self, f: Morphism) -> Morphism:
        raise NotImplementedError

    def __call__(self, x):
        if isinstance(x, Morphism):
            return self.on_morphism(x)
        return self.on_object(x)

    def __repr__(self):
        return f"<functor {self.name}>"


class IdentityFunctor(DGFunctor):
    def __init__(self, C: LinearCategory):
        self.source = self.target = C
        self.name = f"id_{C.name}"

    def on_object(self, a):
        return a

    def on_morphism(self, f):
        return f


class ComposedFunctor(DGFunctor):
    """``outer ∘ inner``."""

    def __init__(self, outer: DGFunctor, inner: DGFunctor):
        self.outer, self.inner = outer, inner
        self.source, self.target = inner.source, outer.target
        self.name = f"{outer.name}∘{inner.name}"

    def on_object(self, a):
        return self.outer.on_object(self.inner.on_object(a))

    def on_morphism(self, f):
        return self.outer.on_morphism(self.inner.on_morphism(f))


def compose_functors(*fs: DGFunctor) -> DGFunctor:
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = ComposedFunctor(g, out)
    return out


class FunctionFunctor(DGFunctor):
    def __init__(self, source, target, on_object: Callable, on_morphism: Callable, name: str = "F"):
        self.source, self.target, self.name = source, target, name
        self._obj, self._mor = on_object, on_morphism
        self._cache: dict = {}

    def on_object(self, a):
        return self._obj(a)

    def on_morphism(self, f):
        key = (f.source, f.target, f.degree, f.coords)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = self._mor(f)
        return out


class TableFunctor(DGFunctor):
    """Object map plus one matrix per (source, target, degree) hom block."""

    def __init__(self, source: LinearCategory, target: LinearCategory, object_map: dict,
                 maps: dict[tuple, Matrix], name: str = "F"):
        self.source, self.target, self.name = source, target, name
        self.object_map = dict(object_map)
        self.maps = {}
        for (a, b, n), m in maps.items():
            n = source.grading.norm(n)
            expect = (target.hom_dim(self.object_map[a], self.object_map[b], n), source.hom_dim(a, b, n))
            if m.shape != expect:
                raise PresentationError(f"functor {name} block {(a, b, n)} has shape {m.shape}, "
                                        f"expected {expect}")
            self.maps[(a, b, n)] = m

    def on_object(self, a):
        try:
            return self.object_map[a]
        except KeyError:
            raise PresentationError(f"functor {self.name} is not defined on {a!r}") from None

    def on_morphism(self, f):
        fa, fb = self.on_object(f.source), self.on_object(f.target)
        m = self.maps.get((f.source, f.target, f.degree))
        if m is None:
            return self.target.zero(fa, fb, f.degree)
        return Morphism(fa, fb, f.degree, m @ f.coords, self.target.field)


def tabulate_functor(F: DGFunctor, objects: Sequence) -> dict[tuple, Matrix]:
    """Matrices of ``F`` on every hom block between listed objects."""
    out = {}
    C, D = F.source, F.target
    for a, b in itertools.product(objects, repeat=2):
        for n in C.hom_degrees(a, b):
            cols = [F.on_morphism(e).coords for e in C.basis(a, b, n)]
            out[(a, b, n)] = Matrix.from_columns(D.field, cols, D.hom_dim(F(a), F(b), n))
    return out


def functors_agree(F: DGFunctor, G: DGFunctor, objects: Sequence) -> bool:
    """Equality of two functors on the finite presentation spanned by ``objects``."""
    if any(F(a) != G(a) for a in objects):
        return False
    return tabulate_functor(F, objects) == tabulate_functor(G, objects)


def validate_dg_functor(F: DGFunctor, objects: Sequence | None = None,
                        subject: str | None = None) -> Verdict:
    C, D = F.source, F.target
    objects = list(C.objects if objects is None else objects)
    v = Verdict(subject or f"functor {F.name}", field=repr(D.field))
    bad = None
    for a, b in itertools.product(objects, repeat=2):
        for f in C.all_basis(a, b):
            Ff = F(f)
            if (Ff.source, Ff.target, Ff.degree) != (F(a), F(b), f.degree):
                bad = {"morphism": repr(f), "reason": "wrong hom space"}
            elif C.is_dg and D.is_dg and F(C.d(f)) != D.d(Ff):
                bad = {"morphism": repr(f), "reason": "does not commute with d"}
            if bad:
                break
        if bad:
            break
    v.add("chain map", bad is None, bad)
    bad = None
    for a in objects:
        if F(C.identity(a)) != D.identity(F(a)):
            bad = {"object": str(a)}
            break
    v.add("preserves identities", bad is None, bad)
    bad = None
    for a, b, c in itertools.product(objects, repeat=3):
        for g in C.all_basis(b, c):
            for f in C.all_basis(a, b):
                if F(C.compose(g, f)) != D.compose(F(g), F(f)):
                    bad = {"g": repr(g), "f": repr(f)}
                    break
            if bad:
                break
        if bad:
            break
    v.add("preserves composition", bad is None, bad)
    return v


# --- natural transformations -------------------------------------------------

class NatTrans:
    """Degree 0 components ``F a -> G a``; strict or weak is decided by checks."""

    def __init__(self, source: DGFunctor, target: DGFunctor, components: Callable | dict,
                 name: str = "ν"):
        self.source, self.target, self.name = source, target, name
        self._fn = components.__getitem__ if isinstance(components, dict) else components
        self._cache: dict = {}

    @property
    def domain(self) -> LinearCategory:
        return self.source.source

    @property
    def codomain(self) -> LinearCategory:
        return self.source.target

    def component(self, a) -> Morphism:
        out = self._cache.get(a)
        if out is None:
            out = self._fn(a)
            if not isinstance(out, Morphism):
                D = self.codomain
                out = D.element(self.source(a), self.target(a), 0, out)
            self._cache[a] = out
        return out

    __getitem__ = component

    def __repr__(self):
        return f"<nat {self.name}: {self.source.name} => {self.target.name}>"


def identity_nat(F: DGFunctor) -> NatTrans:
    return NatTrans(F, F, lambda a: F.target.identity(F(a)), name=f"1_{F.name}")


def vertical(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """``beta ∘ alpha`` for ``alpha: F => G`` and ``beta: G => H``."""
    D = alpha.codomain
    return NatTrans(alpha.source, beta.target, lambda a: D.compose(beta[a], alpha[a]),
                    name=f"{beta.name}∘{alpha.name}")


def horizontal(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    """``beta * alpha`` for ``alpha: F => F'`` (C -> D) and ``beta: G => G'`` (D -> E).

    Component at ``a`` is ``beta_{F' a} ∘ G(alpha_a)``.
    """
    G, E = beta.source, beta.codomain
    Fp = alpha.target
    return NatTrans(ComposedFunctor(beta.source, alpha.source), ComposedFunctor(beta.target, alpha.target),
                    lambda a: E.compose(beta[Fp(a)], G(alpha[a])), name=f"{beta.name}*{alpha.name}")


def whisker_left(H: DGFunctor, alpha: NatTrans) -> NatTrans:
    """``H alpha: H F => H G``."""
    return NatTrans(ComposedFunctor(H, alpha.source), ComposedFunctor(H, alpha.target),
                    lambda a: H(alpha[a]), name=f"{H.name}{alpha.name}")


def whisker_right(alpha: NatTrans, H: DGFunctor) -> NatTrans:
    """``alpha H: F H => G H``."""
    return NatTrans(ComposedFunctor(alpha.source, H), ComposedFunctor(alpha.target, H),
                    lambda a: alpha[H(a)], name=f"{alpha.name}{H.name}")


def nats_agree(alpha: NatTrans, beta: NatTrans, objects: Sequence) -> bool:
    return all(alpha[a] == beta[a] for a in objects)


def check_natural(alpha: NatTrans, objects: Sequence | None = None, mode: str = "strict",
                  subject: str | None = None) -> Verdict:
    """Closedness, degree and naturality of ``alpha`` on the listed objects.

    ``mode="strict"``: squares commute on every basis morphism of every degree.
    ``mode="weak"``: squares commute up to a coboundary on H^0 representatives.
    """
    C, D = alpha.domain, alpha.codomain
    F, G = alpha.source, alpha.target
    objects = list(C.objects if objects is None else objects)
    v = Verdict(subject or f"natural transformation {alpha.name} ({mode})", field=repr(D.field))
    bad = None
    for a in objects:
        c = alpha[a]
        if c.degree != 0 or (c.source, c.target) != (F(a), G(a)):
            bad = {"object": str(a), "reason": "component has the wrong type"}
        elif D.is_dg and not D.is_closed(c):
            bad = {"object": str(a), "reason": "component not closed"}
        if bad:
            break
    v.add("components closed of degree 0", bad is None, bad)
    bad = None
    for a, b in itertools.product(objects, repeat=2):
        if mode == "strict" or not C.is_dg:
            fs = C.all_basis(a, b)
        else:
            coh = C.h0(a, b)
            fs = [Morphism(a, b, 0, r, C.field) for r in coh.reps]
        for f in fs:
            res = D.compose(G(f), alpha[a]) - D.compose(alpha[b], F(f))
            if mode == "strict" or not D.is_dg:
                ok = res.is_zero()
            else:
                ok = D.is_coboundary(res)
            if not ok:
                bad = {"source": str(a), "target": str(b), "morphism": repr(f)}
                break
        if bad:
            break
    v.add("naturality" if mode == "strict" else "naturality in H^0", bad is None, bad)
    return v
