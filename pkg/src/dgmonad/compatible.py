"""Pairs of monads glued by a distributive law, their composite and the Ψ dictionary.

The exchange datum is ``ℓ: M₁M₂ ⇒ M₂M₁``.  The composite monad is
``T = M₂M₁`` with

    μ_T = M₂(μ₁) ∘ μ₂_{M₁M₁} ∘ M₂(ℓ_{M₁}),    η_T = η₂_{M₁} ∘ η₁,

and ``M₂`` lifts to ``Mod(M₁)`` as ``M̄₂(x, λ) = (M₂x, M₂(λ)∘ℓ_x)``.  The
comparison ``Ψ((x, λ), α) = (x, α∘M₂(λ))`` is inverted by
``(x, β) ↦ ((x, β∘η₂_{M₁x}), β∘M₂(η₁_x))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cdg import ComplexCategory, _kron
from .dgcat import (
    ComposedFunctor,
    FunctionFunctor,
    IdentityFunctor,
    Morphism,
    NatTrans,
    PresentationError,
    check_natural,
)
from .em import Module, ModuleCategory, check_module, free_module
from .h0 import invert
from .linalg import Matrix
from .monads import Monad, algebra_monad, check_dg_monad
from .report import Verdict


@dataclass
class CompatiblePair:
    first: Monad
    second: Monad
    exchange: NatTrans  # M₁M₂ ⇒ M₂M₁
    objects: list = field(default_factory=list)

    def __post_init__(self):
        if self.first.category is not self.second.category:
            raise PresentationError("compatible monads must live on the same category")
        if not self.objects:
            self.objects = list(self.first.objects)

    @property
    def category(self):
        return self.first.category


def check_compatible(pair: CompatiblePair) -> Verdict:
    """Naturality, invertibility and the four exchange identities of ``ℓ``."""
    C = pair.category
    M1, M2, ell = pair.first, pair.second, pair.exchange
    v = Verdict(f"compatible pair ({M1.name}, {M2.name})", field=repr(C.field))
    v.extend(check_natural(ell, pair.objects), prefix="ℓ")
    bad = None
    for x in pair.objects:
        if invert(C, ell[x]) is None:
            bad = {"object": str(x)}
            break
    v.add("ℓ invertible", bad is None, bad)
    F1, F2 = M1.functor, M2.functor
    laws = {
        "ℓ∘M₁η₂ = η₂M₁": lambda x: C.compose(ell[x], F1(M2.eta[x])) - M2.eta[F1(x)],
        "ℓ∘η₁M₂ = M₂η₁": lambda x: C.compose(ell[x], M1.eta[F2(x)]) - F2(M1.eta[x]),
        "ℓ∘M₁μ₂ = μ₂M₁∘M₂ℓ∘ℓM₂": lambda x: (C.compose(ell[x], F1(M2.mu[x]))
                                          - C.compose_many(M2.mu[F1(x)], F2(ell[x]), ell[F2(x)])),
        "ℓ∘μ₁M₂ = M₂μ₁∘ℓM₁∘M₁ℓ": lambda x: (C.compose(ell[x], M1.mu[F2(x)])
                                          - C.compose_many(F2(M1.mu[x]), ell[F1(x)], F1(ell[x]))),
    }
    for name, res in laws.items():
        bad = None
        for x in pair.objects:
            r = res(x)
            if not r.is_zero():
                bad = {"object": str(x), "residual": [C.field.format(c) for c in r.coords]}
                break
        v.add(name, bad is None, bad)
    return v


def compose_compatible(pair: CompatiblePair, check: bool = True) -> Monad:
    """The composite monad ``M₂M₁``; raises ``PresentationError`` if the pair is invalid."""
    if check:
        ver = check_compatible(pair)
        if not ver.ok:
            err = PresentationError(f"exchange identities fail: {[c.name for c in ver.failures()]}")
            err.verdict = ver
            raise err
    C = pair.category
    M1, M2, ell = pair.first, pair.second, pair.exchange
    F1, F2 = M1.functor, M2.functor
    T = ComposedFunctor(F2, F1)
    T.name = f"{M2.name}{M1.name}"

    def mu(x):
        return C.compose_many(F2(M1.mu[x]), M2.mu[F1(F1(x))], F2(ell[F1(x)]))

    def eta(x):
        return C.compose(M2.eta[F1(x)], M1.eta[x])

    return Monad(C, T, NatTrans(ComposedFunctor(T, T), T, mu, name="μ"),
                 NatTrans(IdentityFunctor(C), T, eta, name="η"), list(pair.objects),
                 name=f"{M2.name}∘{M1.name}")


def induced_monad(pair: CompatiblePair, modules: Sequence[Module]) -> Monad:
    """``M̄₂`` on ``Mod(M₁)``, checked on the supplied ``M₁``-modules."""
    M1, M2, ell = pair.first, pair.second, pair.exchange
    C = pair.category
    bad = [m for m in modules if not check_module(M1, m).ok]
    if bad:
        raise PresentationError(f"not {M1.name}-modules: {bad}")
    Mod1 = ModuleCategory(M1, modules, name=f"Mod({M1.name})")
    F2 = M2.functor

    def obj(m):
        lam = Mod1.action(m)
        return Module(F2(m.obj), C.compose(F2(lam), ell[m.obj]).coords)

    def mor(f):
        return Mod1.restrict(obj(f.source), obj(f.target), F2(Mod1.embed(f)))

    Mbar = FunctionFunctor(Mod1, Mod1, obj, mor, name=f"{M2.name}̄")
    mu = NatTrans(ComposedFunctor(Mbar, Mbar), Mbar,
                  lambda m: Mod1.restrict(obj(obj(m)), obj(m), M2.mu[m.obj]), name="μ̄")
    eta = NatTrans(IdentityFunctor(Mod1), Mbar,
                   lambda m: Mod1.restrict(m, obj(m), M2.eta[m.obj]), name="η̄")
    return Monad(Mod1, Mbar, mu, eta, list(modules), name=f"{M2.name}̄")


def psi(pair: CompatiblePair, m: Module, alpha: Sequence) -> Module:
    """``((x, λ), α) ↦ (x, α∘M₂(λ))``."""
    C, M1, M2 = pair.category, pair.first, pair.second
    a = Morphism(M2(m.obj), m.obj, 0, tuple(alpha), C.field)
    lam = Morphism(M1(m.obj), m.obj, 0, m.action, C.field)
    return Module(m.obj, C.compose(a, M2.functor(lam)).coords)


def psi_inverse(pair: CompatiblePair, n: Module) -> tuple[Module, tuple]:
    """``(x, β) ↦ ((x, β∘η₂_{M₁x}), β∘M₂(η₁_x))``."""
    C, M1, M2 = pair.category, pair.first, pair.second
    x = n.obj
    beta = Morphism(M2(M1(x)), x, 0, n.action, C.field)
    lam = C.compose(beta, M2.eta[M1(x)])
    alpha = C.compose(beta, M2.functor(M1.eta[x]))
    return Module(x, lam.coords), alpha.coords


def check_psi_equivalence(pair: CompatiblePair, sample: Sequence[tuple[Module, Sequence]],
                          composite: Monad | None = None) -> Verdict:
    """Ψ and its inverse on ``(M₁-module, α)`` samples, plus hom dimensions on both sides."""
    C = pair.category
    T = composite or compose_compatible(pair)
    m1s = []
    for m, _ in sample:
        if m not in m1s:
            m1s.append(m)
    Mbar = induced_monad(pair, m1s)
    Mod1 = Mbar.category
    v = Verdict(f"Ψ for ({pair.first.name}, {pair.second.name})", field=repr(C.field))
    v.extend(check_dg_monad(Mbar), prefix="M̄₂")
    bars, ts = [], []
    bad_bar = bad_t = bad_inv = None
    for m, alpha in sample:
        # α as a morphism of M₁-modules M̄₂(x, λ) -> (x, λ)
        a = Morphism(pair.second(m.obj), m.obj, 0, tuple(alpha), C.field)
        try:
            bm = Module(m, Mod1.restrict(Mbar(m), m, a).coords)
        except PresentationError:
            bm = None
        if bad_bar is None and (bm is None or not check_module(Mbar, bm).ok):
            bad_bar = {"module": str(m)}
        if bm is None:
            continue
        bars.append(bm)
        t = psi(pair, m, alpha)
        ts.append(t)
        if bad_t is None and not check_module(T, t).ok:
            bad_t = {"module": str(m)}
        back = psi_inverse(pair, t)
        if bad_inv is None and (back[0] != m or tuple(back[1]) != tuple(alpha)):
            bad_inv = {"module": str(m), "direction": "Ψ⁻¹Ψ"}
        if bad_inv is None and psi(pair, *back) != t:
            bad_inv = {"module": str(m), "direction": "ΨΨ⁻¹"}
    v.add("samples are M̄₂-modules", bad_bar is None, bad_bar)
    v.add("Ψ lands in modules over the composite", bad_t is None, bad_t)
    v.add("Ψ and Ψ⁻¹ mutually inverse", bad_inv is None, bad_inv)
    ModBar = ModuleCategory(Mbar, bars)
    ModT = ModuleCategory(T, ts)
    bad = None
    dims = []
    for i, a in enumerate(bars):
        for j, b in enumerate(bars):
            da = ModBar.hom(a, b).dims
            db = ModT.hom(ts[i], ts[j]).dims
            dims.append({"source": i, "target": j, "bar": _fmt_dims(da), "composite": _fmt_dims(db)})
            if bad is None and da != db:
                bad = dims[-1]
    v.add("hom dimensions agree degreewise", bad is None, bad)
    v.data["hom_dims"] = dims
    return v


def _fmt_dims(d: dict) -> dict:
    return {str(n): k for n, k in sorted(d.items())}


# --- algebra monads -------------------------------------------------------

def swap_exchange(C: ComplexCategory, M1: Monad, M2: Monad) -> NatTrans:
    """``a₁⊗a₂⊗x ↦ a₂⊗a₁⊗x`` for two algebra monads (algebras sit in degree 0)."""
    A1, A2 = M1.functor.algebra, M2.functor.algebra
    fld = C.field
    n1, n2 = A1.dim, A2.dim
    cols = [None] * (n1 * n2)
    for a in range(n1):
        for b in range(n2):
            cols[a * n2 + b] = tuple(fld.one if r == b * n1 + a else fld.zero for r in range(n1 * n2))
    P = Matrix.from_columns(fld, cols, n1 * n2)
    F1, F2 = M1.functor, M2.functor

    def comp(x):
        blocks = {n: _kron(fld, P, Matrix.identity(fld, x.dim(n))) for n in x.degrees()}
        return C.from_blocks(F1(F2(x)), F2(F1(x)), 0, blocks)

    return NatTrans(ComposedFunctor(F1, F2), ComposedFunctor(F2, F1), comp, name="ℓ")


def algebra_pair(C: ComplexCategory, A1, A2, objects: Sequence | None = None) -> CompatiblePair:
    """Two algebra monads exchanged by the swap (needs the algebras to commute, i.e. always)."""
    objs = list(C.objects if objects is None else objects)
    M1, M2 = algebra_monad(C, A1, objs), algebra_monad(C, A2, objs)
    return CompatiblePair(M1, M2, swap_exchange(C, M1, M2), objs)


def algebra_pair_samples(pair: CompatiblePair) -> list[tuple[Module, tuple]]:
    """``Ψ⁻¹`` of the free modules over the composite on each listed object."""
    T = compose_compatible(pair, check=False)
    out = []
    for x in pair.objects:
        out.append(psi_inverse(pair, free_module(T, x)))
    return out

