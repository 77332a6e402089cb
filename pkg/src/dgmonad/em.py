"""Modules over a monad: hom complexes, free/forgetful adjunction, comparison functor.

A module is ``(x, λ)`` with ``λ: M x -> x`` closed of degree 0.  Module
morphisms ``φ: (x, λ) -> (y, τ)`` satisfy ``τ ∘ M φ = φ ∘ λ`` (no sign, in
every degree).  In the weak variant the degree 0 part (and, for integer
gradings, every nonnegative degree) is replaced by those ``φ`` for which
``τ ∘ M φ - φ ∘ λ`` is a coboundary; its ``H^0`` is the space of module
maps up to homotopy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

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
from .graded import DGSpace
from .linalg import Matrix, Subspace, kernel_basis
from .monads import Monad
from .pretr import PretrCategory, PretrFunctor, pretr_nat
from .report import Verdict


@dataclass(frozen=True)
class Module:
    obj: Hashable
    action: tuple  # coordinates of λ in Hom^0(M x, x)

    def __str__(self):
        return f"({self.obj}, λ)"

    __repr__ = __str__


def action_morphism(T: Monad, m: Module) -> Morphism:
    return Morphism(T(m.obj), m.obj, 0, m.action, T.category.field)


def make_module(T: Monad, x, lam: Morphism | Sequence) -> Module:
    if isinstance(lam, Morphism):
        if (lam.source, lam.target, lam.degree) != (T(x), x, 0):
            raise PresentationError("structure map must be a degree 0 morphism M x -> x")
        return Module(x, lam.coords)
    return Module(x, T.category.element(T(x), x, 0, lam).coords)


def check_module(T: Monad, m: Module, mode: str = "strict") -> Verdict:
    C = T.category
    weak = mode == "weak"
    x, lam = m.obj, action_morphism(T, m)
    v = Verdict(f"{mode} module {m} over {T.name}", field=repr(C.field))
    if C.is_dg:
        v.add("λ closed", C.is_closed(lam))
    res = {
        "associativity": C.compose(lam, T.functor(lam)) - C.compose(lam, T.mu[x]),
        "unit": C.compose(lam, T.eta[x]) - C.identity(x),
    }
    for name, r in res.items():
        ok = r.is_zero() or (weak and C.is_dg and C.is_coboundary(r))
        v.add(name if not weak else f"{name} in H^0", ok,
              None if ok else {"residual": [C.field.format(c) for c in r.coords]})
    return v


class ModuleCategory(DGCategory):
    """The DG category of modules over ``monad`` (strict or weak)."""

    def __init__(self, monad: Monad, objects: Sequence[Module] = (), weak: bool = False, name: str | None = None):
        C = monad.category
        super().__init__(C.field, C.grading, objects, name or f"Mod{'^w' if weak else ''}({monad.name})")
        self.monad = monad
        self.base = C
        self.weak = weak
        self._subs: dict = {}

    def action(self, m: Module) -> Morphism:
        return action_morphism(self.monad, m)

    def condition(self, m1: Module, m2: Module, n: int) -> Matrix:
        """Matrix of ``φ ↦ τ∘Mφ - φ∘λ`` on ``Hom^n(x, y)``."""
        C, M = self.base, self.monad.functor
        lam, tau = self.action(m1), self.action(m2)
        x, y = m1.obj, m2.obj
        cols = [(C.compose(tau, M(f)) - C.compose(f, lam)).coords for f in C.basis(x, y, n)]
        return Matrix.from_columns(C.field, cols, C.hom_dim(M(x), y, n))

    def _restricted(self, n: int) -> bool:
        if self.grading.kind == "Z2":
            return n == 0
        return n >= 0

    def subspaces(self, m1: Module, m2: Module) -> dict[int, Subspace]:
        key = (m1, m2)
        out = self._subs.get(key)
        if out is not None:
            return out
        C, fld = self.base, self.field
        x, y, Mx = m1.obj, m2.obj, self.monad(m1.obj)
        out = {}
        for n in C.hom_degrees(x, y):
            R = self.condition(m1, m2, n)
            dim = C.hom_dim(x, y, n)
            if not self.weak:
                out[n] = Subspace(fld, dim, kernel_basis(R))
            elif not self._restricted(n):
                out[n] = Subspace(fld, dim, [tuple(fld.one if i == j else fld.zero for i in range(dim))
                                             for j in range(dim)])
            else:
                dprev = C.hom(Mx, y).d(n - 1)
                # φ with R φ = d ψ for some ψ: kernel of [R | -d], then the φ part
                big = R.hstack(dprev.scale(fld.neg(fld.one)))
                vecs = [v[:dim] for v in kernel_basis(big)]
                out[n] = Subspace(fld, dim, vecs)
        self._subs[key] = out
        return out

    def _make_hom(self, m1, m2):
        C = self.base
        subs = self.subspaces(m1, m2)
        dims = {n: s.dim for n, s in subs.items() if s.dim}
        d = {}
        for n in dims:
            n1 = self.grading.norm(n + 1)
            if not dims.get(n1):
                continue
            cols = []
            for v in subs[n].basis:
                dv = C.d(Morphism(m1.obj, m2.obj, n, tuple(v), self.field))
                try:
                    cols.append(subs[n1].coords(dv.coords))
                except ValueError:
                    raise PresentationError(f"module hom complex not closed under d at degree {n}") from None
            m = Matrix.from_columns(self.field, cols, dims[n1])
            if not m.is_zero():
                d[n] = m
        return DGSpace(self.field, self.grading, dims, d)

    def embed(self, f: Morphism) -> Morphism:
        """The underlying morphism in the base category."""
        s = self.subspaces(f.source, f.target).get(f.degree)
        if s is None:
            return self.base.zero(f.source.obj, f.target.obj, f.degree)
        return Morphism(f.source.obj, f.target.obj, f.degree, s.embed(f.coords), self.field)

    def restrict(self, m1: Module, m2: Module, g: Morphism) -> Morphism:
        """Read a base morphism satisfying the module condition as a module morphism."""
        n = self.grading.norm(g.degree)
        s = self.subspaces(m1, m2).get(n)
        if s is None:
            if g.is_zero():
                return Morphism(m1, m2, n, (), self.field)
            raise PresentationError("not a module morphism")
        try:
            return Morphism(m1, m2, n, s.coords(g.coords), self.field)
        except ValueError:
            raise PresentationError(f"{g} is not a module morphism {m1} -> {m2}") from None

    def is_module_morphism(self, m1: Module, m2: Module, g: Morphism) -> bool:
        s = self.subspaces(m1, m2).get(self.grading.norm(g.degree))
        return g.is_zero() if s is None else s.contains(g.coords)

    def compose(self, g, f):
        return self.restrict(f.source, g.target, self.base.compose(self.embed(g), self.embed(f)))

    def identity(self, m):
        return self.restrict(m, m, self.base.identity(m.obj))


def em_hom_complex(Mod: ModuleCategory, m1: Module, m2: Module) -> DGSpace:
    return Mod.hom(m1, m2)


def free_module(T: Monad, x) -> Module:
    """``(M x, μ_x)``."""
    return Module(T(x), T.mu[x].coords)


def forgetful(m: Module):
    return m.obj


class FreeFunctor(DGFunctor):
    def __init__(self, Mod: ModuleCategory):
        self.source, self.target = Mod.base, Mod
        self.name = "F_M"

    def on_object(self, x):
        return free_module(self.target.monad, x)

    def on_morphism(self, f):
        Mod = self.target
        return Mod.restrict(self(f.source), self(f.target), Mod.monad.functor(f))


class ForgetfulFunctor(DGFunctor):
    def __init__(self, Mod: ModuleCategory):
        self.source, self.target = Mod, Mod.base
        self.name = "G_M"

    def on_object(self, m):
        return m.obj

    def on_morphism(self, f):
        return self.source.embed(f)


def free_forgetful(Mod: ModuleCategory) -> tuple[FreeFunctor, ForgetfulFunctor, NatTrans, NatTrans]:
    """``F ⊣ G`` with unit ``η`` and counit ``ε_(x,λ) = λ``."""
    T = Mod.monad
    F, G = FreeFunctor(Mod), ForgetfulFunctor(Mod)
    unit = NatTrans(IdentityFunctor(Mod.base), ComposedFunctor(G, F), T.eta.component, name="η")
    counit = NatTrans(ComposedFunctor(F, G), IdentityFunctor(Mod),
                      lambda m: Mod.restrict(F(G(m)), m, Mod.action(m)), name="ε")
    return F, G, unit, counit


def check_adjunction_h0(F: DGFunctor, G: DGFunctor, unit: NatTrans, counit: NatTrans,
                        objects_c: Sequence, objects_d: Sequence, subject: str | None = None) -> Verdict:
    """Triangle identities up to coboundaries; also records whether they hold strictly."""
    C, D = F.source, F.target
    v = Verdict(subject or f"adjunction {F.name} ⊣ {G.name}", field=repr(C.field))
    strict = True
    bad = None
    for d in objects_d:
        r = C.compose(G(counit[d]), unit[G(d)]) - C.identity(G(d))
        if not r.is_zero():
            strict = False
            if not (C.is_dg and C.is_coboundary(r)):
                bad = {"object": str(d)}
                break
    v.add("Gε ∘ ηG = id in H^0", bad is None, bad)
    bad = None
    for c in objects_c:
        r = D.compose(counit[F(c)], F(unit[c])) - D.identity(F(c))
        if not r.is_zero():
            strict = False
            if not (D.is_dg and D.is_coboundary(r)):
                bad = {"object": str(c)}
                break
    v.add("εF ∘ Fη = id in H^0", bad is None, bad)
    v.data["strict"] = strict
    return v


def free_subcategory(T: Monad, generators: Sequence, weak: bool = False) -> ModuleCategory:
    """Full subcategory on the free modules of the generators."""
    return ModuleCategory(T, [free_module(T, x) for x in generators], weak=weak,
                          name=f"Free({T.name})")


def comparison_functor(D: DGCategory, F: DGFunctor, G: DGFunctor, counit: NatTrans, T: Monad,
                       objects_d: Sequence) -> tuple[Verdict, DGFunctor, ModuleCategory]:
    """``K(d) = (G d, G ε_d)`` into weak modules, with its defining checks."""
    Mod = ModuleCategory(T, weak=True, name=f"Mod^w({T.name})")
    v = Verdict(f"comparison functor into {Mod.name}", field=repr(D.field))
    objs_c = list(T.objects)
    agree = functors_agree(ComposedFunctor(G, F), T.functor, objs_c)
    v.add("G∘F = M on the presentation", agree)

    def obj(d):
        return Module(G(d), G(counit[d]).coords)

    def mor(f):
        return Mod.restrict(obj(f.source), obj(f.target), G(f))

    K = FunctionFunctor(D, Mod, obj, mor, name="K")
    bad = None
    for d in objects_d:
        ver = check_module(T, obj(d), "weak")
        if not ver.ok:
            bad = {"object": str(d), "failures": [c.name for c in ver.failures()]}
            break
    v.add("K lands in weak modules", bad is None, bad)
    bad = None
    for c in objs_c:
        a, b = obj(F(c)), free_module(T, c)
        idm = T.category.identity(T(c))
        if not (Mod.is_module_morphism(a, b, idm) and Mod.is_module_morphism(b, a, idm)):
            bad = {"object": str(c)}
            break
    v.add("K∘F ≅ free modules (identity components)", bad is None, bad)
    return v, K, Mod


# --- monads on twisted complexes, shifts and cones of modules ----------------------

def pretr_monad(T: Monad, P: PretrCategory, objects: Sequence | None = None) -> Monad:
    """Entrywise extension of a strict monad to twisted complexes."""
    PM = PretrFunctor(T.functor, P, P)
    PMM = ComposedFunctor(PM, PM)
    mu = pretr_nat(T.mu, PMM, PM)
    eta = pretr_nat(T.eta, PretrFunctor(IdentityFunctor(P.base), P, P), PM)
    mu = NatTrans(PMM, PM, mu.component, name="μ")
    eta = NatTrans(IdentityFunctor(P), PM, eta.component, name="η")
    objs = list(objects) if objects is not None else [P.embed(a) for a in T.objects]
    return Monad(P, PM, mu, eta, objs, name=f"Pretr({T.name})")


def em_shift(Mod: ModuleCategory, m: Module, n: int) -> Module:
    P: PretrCategory = Mod.base
    lam = P.shift_morphism(Mod.action(m), n)
    Tn = P.shift(m.obj, n)
    if Mod.monad(Tn) != lam.source:
        raise PresentationError("monad does not commute with shifts on the nose")
    return Module(Tn, lam.coords)


def em_cone(Mod: ModuleCategory, phi: Morphism) -> tuple[Module, Morphism, Morphism]:
    """Cone of a closed degree 0 module morphism with structure ``diag(λ[1], λ')``.

    Returns the module and the triangle maps ``m' -> cone`` and ``cone -> m[1]``.
    """
    P: PretrCategory = Mod.base
    M = Mod.monad.functor
    if phi.degree != 0 or not Mod.is_closed(phi):
        raise PresentationError("cone needs a closed degree 0 module morphism")
    m1, m2 = phi.source, phi.target
    base_phi = Mod.embed(phi)
    Cn, inc, proj = P.cone_triangle(base_phi)
    MCn = M(Cn)
    if MCn != P.cone(M(base_phi)):
        raise PresentationError("monad does not commute with cones on the nose")
    k = len(m1.obj)
    blocks = {}
    for (i, j), b in P.blocks(Mod.action(m1)).items():
        blocks[(i, j)] = b
    for (i, j), b in P.blocks(Mod.action(m2)).items():
        blocks[(i + k, j + k)] = b
    lam = P.from_blocks(MCn, Cn, 0, blocks)
    mc = Module(Cn, lam.coords)
    m1s = em_shift(Mod, m1, 1)
    return mc, Mod.restrict(m2, mc, inc), Mod.restrict(mc, m1s, proj)
