"""Strict actions of finite groups and the monad ``T ↦ ⊕_g g* T``.

The monad lives on twisted complexes, where finite direct sums exist
formally.  ``μ`` sends the summand ``(g, h)`` of ``M² T`` identically onto
the summand ``gh`` of ``M T``; ``η`` is the inclusion of the summand of the
neutral element.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .dgcat import (
    ComposedFunctor,
    DGCategory,
    DGFunctor,
    FunctionFunctor,
    IdentityFunctor,
    Morphism,
    NatTrans,
    PresentationError,
    functors_agree,
)
from .monads import Monad
from .pretr import PretrCategory, PretrFunctor, TwistedComplex
from .report import Verdict


class Group:
    """A finite group by its multiplication table on ``0..n-1``."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = "G", labels: Sequence[str] | None = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name
        self.labels = list(labels) if labels else [str(g) for g in range(self.order)]
        n = self.order
        if any(len(r) != n or any(not 0 <= x < n for x in r) for r in self.table):
            raise PresentationError("multiplication table is not square over 0..n-1")
        es = [e for e in range(n) if all(self.table[e][g] == g == self.table[g][e] for g in range(n))]
        if not es:
            raise PresentationError("multiplication table has no neutral element")
        self.e = es[0]
        for g, h, k in itertools.product(range(n), repeat=3):
            if self.mul(self.mul(g, h), k) != self.mul(g, self.mul(h, k)):
                raise PresentationError(f"multiplication is not associative at {(g, h, k)}")
        for g in range(n):
            if not any(self.table[g][h] == self.e for h in range(n)):
                raise PresentationError(f"element {g} has no inverse")

    def mul(self, g, h) -> int:
        return self.table[g][h]

    def inv(self, g) -> int:
        return next(h for h in range(self.order) if self.table[g][h] == self.e)

    def __iter__(self):
        return iter(range(self.order))

    def spec(self) -> dict:
        return {"name": self.name, "table": [list(r) for r in self.table]}


def cyclic_group(n: int) -> Group:
    return Group([[(g + h) % n for h in range(n)] for g in range(n)], name=f"Z{n}")


def symmetric_group_3() -> Group:
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    return Group(table, name="S3")


class GroupAction:
    """``g ↦ g*`` with ``g* ∘ h* = (gh)*`` and ``e* = id`` on the nose."""

    def __init__(self, category: DGCategory, group: Group, functors: dict[int, DGFunctor], name: str = "action"):
        self.category = category
        self.group = group
        self.functors = dict(functors)
        self.name = name
        missing = [g for g in group if g not in self.functors]
        if missing:
            raise PresentationError(f"no functor for group elements {missing}")

    def __getitem__(self, g) -> DGFunctor:
        return self.functors[g]

    def check_strict(self, objects: Sequence | None = None) -> Verdict:
        C = self.category
        objs = list(C.objects if objects is None else objects)
        v = Verdict(f"strict action of {self.group.name}", field=repr(C.field))
        G = self.group
        v.add("neutral element acts as identity", functors_agree(self[G.e], IdentityFunctor(C), objs))
        bad = None
        for g, h in itertools.product(G, repeat=2):
            if not functors_agree(ComposedFunctor(self[g], self[h]), self[G.mul(g, h)], objs):
                bad = {"g": G.labels[g], "h": G.labels[h]}
                break
        v.add("g*∘h* = (gh)*", bad is None, bad)
        return v


def trivial_action(C: DGCategory, group: Group) -> GroupAction:
    return GroupAction(C, group, {g: IdentityFunctor(C) for g in group}, name="trivial")


def swap_functor(C: DGCategory, perm: dict) -> DGFunctor:
    """Permute objects; morphisms keep their coordinates (homs must match)."""

    def mor(f):
        return Morphism(perm[f.source], perm[f.target], f.degree, f.coords, C.field)

    return FunctionFunctor(C, C, lambda a: perm[a], mor, name="swap")


class GroupSumFunctor(DGFunctor):
    """``T ↦ ⊕_g g* T`` on twisted complexes, summands in group order."""

    def __init__(self, P: PretrCategory, action: GroupAction):
        self.source = self.target = P
        self.action = action
        self.lifted = {g: PretrFunctor(action[g], P, P) for g in action.group}
        self.name = f"M_{action.group.name}"

    def on_object(self, T):
        return self.source.direct_sum([self.lifted[g](T) for g in self.action.group])

    def on_morphism(self, f):
        P = self.source
        T, U = f.source, f.target
        m, n = len(T), len(U)
        blocks = {}
        for g in self.action.group:
            gf = self.lifted[g](f)
            for (i, j), b in P.blocks(gf).items():
                blocks[(g * n + i, g * m + j)] = b
        return P.from_blocks(self(T), self(U), f.degree, blocks)

    def summands(self, T) -> list:
        """``[(g*T, ι_g, π_g)]`` exhibiting ``M T`` as a direct sum."""
        P = self.source
        MT, m = self(T), len(T)
        out = []
        for g in self.action.group:
            gT = self.lifted[g](T)
            ids = {i: P.base.identity(gT.obj(i)) for i in range(m)}
            iota = P.from_blocks(gT, MT, 0, {(g * m + i, i): e for i, e in ids.items()})
            pi = P.from_blocks(MT, gT, 0, {(i, g * m + i): e for i, e in ids.items()})
            out.append((gT, iota, pi))
        return out


def group_action_monad(action: GroupAction, P: PretrCategory | None = None,
                       objects: Sequence[TwistedComplex] | None = None) -> Monad:
    C = action.category
    P = P or PretrCategory(C)
    G = action.group
    M = GroupSumFunctor(P, action)
    B = P.base

    def mu(T):
        m, n = len(T), G.order
        blocks = {}
        for g, h in itertools.product(G, repeat=2):
            gh = G.mul(g, h)
            for i in range(m):
                blocks[(gh * m + i, g * n * m + h * m + i)] = B.identity(M(M(T)).obj(g * n * m + h * m + i))
        return P.from_blocks(M(M(T)), M(T), 0, blocks)

    def eta(T):
        m = len(T)
        return P.from_blocks(T, M(T), 0, {(G.e * m + i, i): B.identity(T.obj(i)) for i in range(m)})

    objs = list(objects) if objects is not None else [P.embed(a) for a in C.objects]
    return Monad(P, M, NatTrans(ComposedFunctor(M, M), M, mu, name="μ"),
                 NatTrans(IdentityFunctor(P), M, eta, name="η"), objs, name=f"M_{G.name}")


def averaging_section(T: Monad, action: GroupAction, x: TwistedComplex) -> Morphism:
    """``σ`` sending summand ``k`` to ``(1/|G|) Σ_g (kg, g⁻¹)``; needs ``|G|`` invertible."""
    P, G, fld = T.category, action.group, T.category.field
    M = T.functor
    m, n = len(x), G.order
    c = fld.inv(fld.from_int(n))
    blocks = {}
    for k, g in itertools.product(G, repeat=2):
        a, b = G.mul(k, g), G.inv(g)
        for i in range(m):
            blocks[(a * n * m + b * m + i, k * m + i)] = P.base.identity(M(x).obj(k * m + i)).scale(c)
    return P.from_blocks(M(x), M(M(x)), 0, blocks)
