"""Weak Bousfield localizations: an endofunctor ``L`` with unit ``η: id ⇒ L``.

The conditions, all in ``H^0``: ``η`` natural, ``Lη`` invertible, and
``Lη = ηL``.  The kernel is the set of listed objects ``c`` whose ``L c`` has
vanishing identity class.
"""

from __future__ import annotations

from typing import Sequence

from .dgcat import (
    DGFunctor,
    FunctionFunctor,
    IdentityFunctor,
    NatTrans,
    PresentationError,
    TableCategory,
    check_natural,
    whisker_left,
)
from .graded import DGSpace, Z
from .h0 import H0Category, invert, is_weak_nat_iso
from .linalg import Matrix
from .report import Verdict


def _vanishes(C, f) -> bool:
    return f.is_zero() or (C.is_dg and C.is_coboundary(f))


def kernel_objects(L: DGFunctor, objects: Sequence) -> list:
    C = L.target
    return [c for c in objects if _vanishes(C, C.identity(L(c)))]


def classify_bousfield(L: DGFunctor, eta: NatTrans, objects: Sequence | None = None,
                       subject: str | None = None) -> tuple[Verdict, list]:
    """Verdict plus the kernel among ``objects``."""
    C = L.source
    if L.target is not C:
        raise PresentationError("L must be an endofunctor")
    objs = list(C.objects if objects is None else objects)
    v = Verdict(subject or f"weak Bousfield test for {L.name}", field=repr(C.field))
    v.extend(check_natural(eta, objs, mode="weak" if C.is_dg else "strict"), prefix="η")
    Leta = whisker_left(L, eta)
    iso = is_weak_nat_iso(Leta, objs)
    v.extend(iso, prefix="Lη")
    if not iso.ok:
        w = iso.first_failure().witness or {}
        a = w.get("object")
        c = next((x for x in objs if str(x) == a), None)
        if c is not None and C.is_dg:
            H = H0Category(C)
            v.data["h0_dims"] = {"object": str(c), "H0 Hom(c, L c)": H.hom_dim(c, L(c), 0),
                                 "H0 Hom(c, LL c)": H.hom_dim(c, L(L(c)), 0)}
    bad = None
    for c in objs:
        r = L(eta[c]) - eta[L(c)]
        if not _vanishes(C, r):
            bad = {"object": str(c), "residual": [C.field.format(x) for x in r.coords]}
            break
    v.add("Lη = ηL in H^0", bad is None, bad)
    ker = kernel_objects(L, objs)
    v.data["kernel"] = [str(c) for c in ker]
    v.data["bousfield"] = v.ok
    return v, ker


def h0_monad_from_bousfield(L: DGFunctor, eta: NatTrans, objects: Sequence) -> Verdict:
    """Take ``μ = (H^0 Lη)^{-1}`` and test the classical monad laws in ``H^0``."""
    C = L.source
    H = H0Category(C) if C.is_dg else C
    cls = H.cls if C.is_dg else (lambda f: f)
    v = Verdict(f"H^0 monad from {L.name}", field=repr(C.field))
    mus = {}
    for c in list(objects) + [L(c) for c in objects]:
        if c not in mus:
            mus[c] = invert(H, cls(L(eta[c])))
    if any(m is None for m in mus.values()):
        v.add("Lη invertible", False, {"objects": [str(c) for c, m in mus.items() if m is None]})
        return v
    laws = {"left unit": [], "associativity": []}
    for c in objects:
        mu, muL = mus[c], mus[L(c)]
        laws["left unit"].append((c, H.compose(mu, cls(eta[L(c)])) - H.identity(L(c))))
        laws["associativity"].append((c, H.compose(mu, cls(L(_lift(C, mu)))) - H.compose(mu, muL)))
    for name, items in laws.items():
        bad = next(({"object": str(c)} for c, r in items if not r.is_zero()), None)
        v.add(name, bad is None, bad)
    return v


def _lift(C, f):
    """A cochain representative of an ``H^0`` class (identity when ``C`` is not DG)."""
    return H0Category(C).lift(f) if C.is_dg else f


def collapse_fixture(field) -> tuple[TableCategory, DGFunctor, NatTrans, list]:
    """Objects ``a, b`` and a zero object ``z``; ``Hom(a, b) = k v``, ``Hom(b, a) = 0``.

    ``L`` fixes ``a`` and sends ``b, z`` to ``z``; ``η_a = id``, ``η_b = 0``.
    """
    one = Matrix.from_rows(field, [[1]])
    homs = {("a", "a"): DGSpace(field, Z, {0: 1}), ("b", "b"): DGSpace(field, Z, {0: 1}),
            ("a", "b"): DGSpace(field, Z, {0: 1})}
    comp = {("a", "a", "a", 0, 0): one, ("b", "b", "b", 0, 0): one,
            ("a", "b", "b", 0, 0): one, ("a", "a", "b", 0, 0): one}
    C = TableCategory(field, Z, ["a", "b", "z"], homs, comp, {"a": [1], "b": [1], "z": []}, name="collapse")
    omap = {"a": "a", "b": "z", "z": "z"}

    def mor(f):
        s, t = omap[f.source], omap[f.target]
        if (s, t) == ("a", "a"):
            return f if (f.source, f.target) == ("a", "a") else C.zero(s, t, f.degree)
        return C.zero(s, t, f.degree)

    L = FunctionFunctor(C, C, omap.__getitem__, mor, name="L")
    eta = NatTrans(IdentityFunctor(C), L,
                   lambda x: C.identity("a") if x == "a" else C.zero(x, "z", 0), name="η")
    return C, L, eta, ["a", "b"]
