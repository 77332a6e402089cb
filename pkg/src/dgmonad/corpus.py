"""Worked examples as deterministic fixtures, plus the complexes-of-modules dictionary check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .cdg import (
    Algebra,
    Complex,
    ComplexCategory,
    ExtendScalars,
    RestrictScalars,
    extension_algebra,
    extension_counit,
    module_action,
    point,
)
from .dgcat import ComposedFunctor, IdentityFunctor, NatTrans, PresentationError, TableCategory
from .em import Module, ModuleCategory, action_morphism, check_module, make_module
from .fields import GF, QQ, Field, FieldError, is_prime
from .graded import Z, Z2, DGSpace
from .group_action import Group, cyclic_group, group_action_monad, symmetric_group_3, trivial_action
from .linalg import Matrix, kernel_basis
from .monads import Monad, algebra_monad
from .report import Verdict


def field_by_name(name: str) -> Field:
    """``Q``/``QQ`` or ``F<q>``/``GF<q>`` for a prime power ``q``."""
    s = name.strip().upper()
    if s in ("Q", "QQ"):
        return QQ
    for pre in ("GF", "F"):
        if s.startswith(pre) and s[len(pre):].isdigit():
            q = int(s[len(pre):])
            for p in range(2, q + 1):
                if q % p == 0:
                    break
            else:
                raise FieldError(f"{name!r} is not a field name")
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1 or not is_prime(p):
                raise FieldError(f"{q} is not a prime power")
            return GF(p, n)
    raise FieldError(f"unknown field {name!r}")


def field_name(F: Field) -> str:
    return "Q" if F.characteristic == 0 else f"F{F.order}"


# --- algebras --------------------------------------------------------------------

def field_algebra(k: Field) -> Algebra:
    return Algebra(k, [[[1]]], [1], name="k")


def truncated_polynomial(k: Field, modulus: Sequence[int], name: str | None = None) -> Algebra:
    """``k[X]/(f)`` for monic ``f`` given low degree first (leading 1 included)."""
    f = [k.coerce(c) for c in modulus]
    n = len(f) - 1
    if n < 1 or f[-1] != k.one:
        raise PresentationError("modulus must be monic of degree at least 1")

    def reduce(coeffs):
        c = list(coeffs)
        for d in range(len(c) - 1, n - 1, -1):
            lead = c[d]
            if lead != k.zero:
                for i in range(n + 1):
                    c[d - n + i] = k.sub(c[d - n + i], k.mul(lead, f[i]))
        return tuple(c[:n]) + (k.zero,) * max(0, n - len(c))

    mult = [[reduce([k.one if t == i + j else k.zero for t in range(2 * n - 1)]) for j in range(n)]
            for i in range(n)]
    unit = tuple(k.one if i == 0 else k.zero for i in range(n))
    return Algebra(k, mult, unit, name=name or f"k[X]/({','.join(str(k.format(c)) for c in f)})")


def dual_numbers(k: Field) -> Algebra:
    """``k[X]/(X²)`` with basis ``1, X``."""
    return truncated_polynomial(k, [0, 0, 1], name="k[X]/(X^2)")


def group_algebra(k: Field, G: Group) -> Algebra:
    n = G.order
    mult = [[tuple(k.one if t == G.mul(g, h) else k.zero for t in range(n)) for h in range(n)] for g in range(n)]
    unit = tuple(k.one if t == G.e else k.zero for t in range(n))
    return Algebra(k, mult, unit, name=f"k[{G.name}]")


def check_algebra(A: Algebra) -> Verdict:
    v = Verdict(f"algebra {A.name}", field=repr(A.field))
    B = A.basis()
    bad = next(({"triple": [i, j, l]} for (i, a), (j, b), (l, c) in itertools.product(enumerate(B), repeat=3)
                if A.mul(A.mul(a, b), c) != A.mul(a, A.mul(b, c))), None)
    v.add("associative", bad is None, bad)
    bad = next(({"basis": i} for i, a in enumerate(B) if A.mul(A.unit, a) != a or A.mul(a, A.unit) != a), None)
    v.add("unital", bad is None, bad)
    return v


def augmentation(A: Algebra) -> tuple | None:
    """Values on the basis of a character ``A -> k``, searched over small scalars."""
    k = A.field
    cands = list(k.elements()) if k.order else [k.zero, k.one, k.neg(k.one)]
    B = A.basis()
    for vals in itertools.product(cands, repeat=A.dim):
        if _dot(k, vals, A.unit) != k.one:
            continue
        if all(_dot(k, vals, A.mul(a, b)) == k.mul(_dot(k, vals, a), _dot(k, vals, b)) for a in B for b in B):
            return tuple(vals)
    return None


def _dot(k, u, v):
    acc = k.zero
    for a, b in zip(u, v):
        acc = k.add(acc, k.mul(a, b))
    return acc


# --- bundles -----------------------------------------------------------------

@dataclass
class FixtureBundle:
    """Named presentations plus the verdicts the checkers are expected to return."""

    name: str
    field: Field
    items: dict = dc_field(default_factory=dict)
    expected: dict = dc_field(default_factory=dict)
    metadata: dict = dc_field(default_factory=dict)

    def __getitem__(self, key):
        return self.items[key]


def example_dual_numbers(k: Field) -> FixtureBundle:
    """The two-periodic complex ``B: A --X--> A --X--> A`` of free ``A = k[X]/(X²)`` modules."""
    A = dual_numbers(k)
    X = A.left_matrix(A.basis()[1])
    B = Complex(k, Z2, {0: 2, 1: 2}, {0: X, 1: X}, name="B")
    C = ComplexCategory(k, Z2, [B, point(k, Z2, name="k")], name="C_dg(k)")
    T = algebra_monad(C, A, [B])
    lam = module_action(C, T.functor, B, [A.left_matrix(e) for e in A.basis()])
    m = make_module(T, B, lam)
    b = FixtureBundle("dual_numbers", k)
    b.items.update(algebra=A, category=C, object=B, monad=T, module=m)
    b.expected = {"monad": "pass", "module": "pass", "id_B null-homotopic over k": True,
                  "id_B null-homotopic over A": False, "forgetful faithful on H0": False,
                  "bousfield": False}
    b.metadata = {"not triangulated": "0 -> k -> k[X]/(X^2) -> k -> 0 does not split; recorded, not checked"}
    return b


def dual_numbers_report(b: FixtureBundle) -> Verdict:
    """``id_B`` dies over ``k`` but survives as a module map, so forgetting the action loses H^0 information."""
    C, T, m, B = b["category"], b["monad"], b["module"], b["object"]
    v = Verdict("dual numbers: forgetful functor on H^0", field=repr(C.field))
    v.extend(check_module(T, m), prefix="B")
    idB = C.identity(B)
    over_k = C.is_coboundary(idB)
    if over_k:
        v.data["homotopy over k"] = [C.field.format(x) for x in C.primitive(idB).coords]
    Mod = ModuleCategory(T, [m])
    over_a = Mod.is_coboundary(Mod.identity(m))
    v.add("id_B is a coboundary over k", over_k == b.expected["id_B null-homotopic over k"])
    v.add("id_B is not a coboundary in the module hom complex",
          over_a == b.expected["id_B null-homotopic over A"])
    v.data["H0 End over A"] = Mod.h0(m, m).dim
    v.data["H0 End over k"] = C.h0(B, B).dim
    v.data["forgetful faithful on H0"] = not (over_k and not over_a)
    v.data.update(b.metadata)
    return v


def example_field_extension(p: int, n: int) -> FixtureBundle:
    """``F_{p^n} ⊗ -`` on ``F_p`` complexes, with extension and restriction of scalars."""
    if not is_prime(p):
        raise PresentationError(f"{p} is not prime")
    if n < 1:
        raise PresentationError("extension degree must be positive")
    k, l = GF(p), GF(p, n)
    pt = point(k, Z, name="k")
    two = Complex(k, Z, {0: 1, 1: 1}, {0: Matrix.from_rows(k, [[1]])}, name="cone(k)")
    C = ComplexCategory(k, Z, [pt, two], name=f"C_dg(F{p})")
    D = ComplexCategory(l, Z, [], name=f"C_dg(F{p ** n})")
    if n == 1:
        # the trivial extension: both base change functors are the identity
        A = field_algebra(k)
        D = C
        F = G = IdentityFunctor(C)
        eps = NatTrans(ComposedFunctor(F, G), IdentityFunctor(C), C.identity, name="ε")
    else:
        A = extension_algebra(k, l)
        F, G = ExtendScalars(C, D), RestrictScalars(D, C)
        eps = extension_counit(D, F, G)
        D.objects = [F(x) for x in C.objects]
    T = algebra_monad(C, A, [pt, two])
    b = FixtureBundle(f"field_extension_{p}_{n}", k)
    b.items.update(algebra=A, category=C, target=D, monad=T, extend=F, restrict=G, counit=eps)
    b.expected = {"monad": "pass", "separable": "pass", "G∘F = M": True}
    return b


def group_by_name(name: str) -> Group:
    s = name.strip().upper().replace("Z/", "Z")
    if s == "S3":
        return symmetric_group_3()
    if s.startswith("Z") and s[1:].isdigit():
        n = int(s[1:])
        if n < 1:
            raise PresentationError("group order must be positive")
        return cyclic_group(n)
    raise PresentationError(f"unknown group {name!r}")


def one_object_category(k: Field, name: str = "k") -> TableCategory:
    return TableCategory(k, Z, ["x"], {("x", "x"): DGSpace(k, Z, {0: 1})},
                         {("x", "x", "x", 0, 0): Matrix.from_rows(k, [[1]])}, {"x": [1]}, name=name)


def example_group_action(group: Group | str, k: Field) -> FixtureBundle:
    G = group_by_name(group) if isinstance(group, str) else group
    if G.order > 6:
        raise PresentationError(f"group order {G.order} exceeds 6")
    C = one_object_category(k)
    act = trivial_action(C, G)
    T = group_action_monad(act)
    separable = k.characteristic == 0 or G.order % k.characteristic != 0
    b = FixtureBundle(f"group_action_{G.name}", k)
    b.items.update(category=C, action=act, monad=T, group=G)
    b.expected = {"monad": "pass", "separable": "pass" if separable else "infeasible"}
    return b


def swap_category(k: Field) -> TableCategory:
    """Objects ``u, w`` with ``End = k`` and ``Hom(u, w) = Hom(w, u) = k``, composites zero."""
    one = Matrix.from_rows(k, [[1]])
    zero = Matrix.from_rows(k, [[0]])
    homs = {(a, b): DGSpace(k, Z, {0: 1}) for a in "uw" for b in "uw"}
    comp = {}
    for a, b, c in itertools.product("uw", repeat=3):
        if a == b or b == c:
            comp[(a, b, c, 0, 0)] = one
        else:
            comp[(a, b, c, 0, 0)] = zero
    return TableCategory(k, Z, ["u", "w"], homs, comp, {"u": [1], "w": [1]}, name="swap")


def example_swap_action(k: Field) -> FixtureBundle:
    from .group_action import GroupAction, swap_functor

    C = swap_category(k)
    G = cyclic_group(2)
    act = GroupAction(C, G, {0: IdentityFunctor(C), 1: swap_functor(C, {"u": "w", "w": "u"})}, name="swap")
    T = group_action_monad(act)
    b = FixtureBundle("swap_action", k)
    b.items.update(category=C, action=act, monad=T, group=G)
    b.expected = {"action": "pass", "monad": "pass"}
    return b


def example_bousfield(k: Field) -> FixtureBundle:
    from .bousfield import collapse_fixture

    C, L, eta, objs = collapse_fixture(k)
    b = FixtureBundle("bousfield", k)
    b.items.update(category=C, functor=L, unit=eta, objects=objs)
    b.expected = {"bousfield": True, "kernel": ["b"]}
    return b


# --- complexes of modules versus modules over the tensor monad -------------------

@dataclass(frozen=True)
class ModuleComplex:
    """``M_0 -> M_1 -> ...`` in degrees ``0..len-1``; each term is a tuple of action matrices."""

    terms: tuple  # per degree: tuple of Matrix, one per algebra basis element
    diffs: tuple  # per degree i: Matrix M_i -> M_(i+1)


def base_modules(A: Algebra) -> list[tuple]:
    """Regular ``A`` and, when ``A`` has a character, the one dimensional module."""
    out = [tuple(A.left_matrix(e) for e in A.basis())]
    eps = augmentation(A)
    if eps is not None and A.dim > 1:
        out.append(tuple(Matrix.from_rows(A.field, [[c]]) for c in eps))
    if A.dim == 1:
        out.append((Matrix.identity(A.field, 2),))
    return out


def linear_maps(A: Algebra, P: tuple, Q: tuple) -> list[Matrix]:
    """Basis of ``Hom_A(P, Q)`` as matrices."""
    k = A.field
    p, q = P[0].ncols, Q[0].ncols
    rows = []
    # f P_a = Q_a f for each basis element a; unknowns f[i][j] at i*p + j
    for a in range(A.dim):
        for i in range(q):
            for j in range(p):
                row = [k.zero] * (q * p)
                for t in range(p):
                    x = P[a].rows[t][j]
                    if x != k.zero:
                        row[i * p + t] = k.add(row[i * p + t], x)
                for t in range(q):
                    x = Q[a].rows[i][t]
                    if x != k.zero:
                        row[t * p + j] = k.sub(row[t * p + j], x)
                rows.append(row)
    M = Matrix.from_rows(k, rows, q * p) if rows else Matrix.zeros(k, 0, q * p)
    return [Matrix(k, q, p, tuple(tuple(v[i * p:(i + 1) * p]) for i in range(q))) for v in kernel_basis(M)]


def module_complexes(A: Algebra, bound: int) -> list[ModuleComplex]:
    """Complexes of length ``≤ bound`` from the base modules, with zero or basis differentials."""
    mods = base_modules(A)
    out = []
    for length in range(1, bound + 1):
        for terms in itertools.product(mods, repeat=length):
            choices = []
            for i in range(length - 1):
                choices.append([None] + linear_maps(A, terms[i], terms[i + 1]))
            for ds in itertools.product(*choices):
                mats = []
                for i, d in enumerate(ds):
                    if d is None:
                        d = Matrix.zeros(A.field, terms[i + 1][0].ncols, terms[i][0].ncols)
                    mats.append(d)
                if all((mats[i + 1] @ mats[i]).is_zero() for i in range(len(mats) - 1)):
                    out.append(ModuleComplex(tuple(terms), tuple(mats)))
    return out


def underlying_complex(k: Field, mc: ModuleComplex, name: str | None = None) -> Complex:
    dims = {i: t[0].ncols for i, t in enumerate(mc.terms)}
    d = {i: m for i, m in enumerate(mc.diffs) if not m.is_zero()}
    return Complex(k, Z, dims, d, name)


def to_module(C: ComplexCategory, T: Monad, A: Algebra, mc: ModuleComplex) -> Module:
    """Complex of modules ↦ module over ``A ⊗ -`` on its underlying complex."""
    X = underlying_complex(C.field, mc)
    acts = [{i: mc.terms[i][a] for i in range(len(mc.terms))} for a in range(A.dim)]
    return make_module(T, X, module_action(C, T.functor, X, acts))


def from_module(C: ComplexCategory, T: Monad, A: Algebra, m: Module) -> ModuleComplex:
    """Inverse dictionary: read the per-degree actions and the differential off ``(X, λ)``."""
    X = m.obj
    k = C.field
    lam = C.blocks(action_morphism(T, m))
    terms, diffs = [], []
    degs = X.degrees()
    for i in degs:
        blk = lam[i]
        n = X.dim(i)
        terms.append(tuple(Matrix(k, n, n, tuple(tuple(r[a * n:(a + 1) * n]) for r in blk.rows))
                           for a in range(A.dim)))
    for i in degs[:-1]:
        diffs.append(X.d(i))
    return ModuleComplex(tuple(terms), tuple(diffs))


def hom_dims_blockwise(A: Algebra, P: ModuleComplex, Q: ModuleComplex) -> dict[int, int]:
    """``dim ⊕_i Hom_A(P_i, Q_(i+n))`` for each ``n`` (no differential needed for dimensions)."""
    out: dict[int, int] = {}
    for i, Pi in enumerate(P.terms):
        for j, Qj in enumerate(Q.terms):
            d = len(linear_maps(A, Pi, Qj))
            if d:
                out[j - i] = out.get(j - i, 0) + d
    return out


def check_complexes_commute(A: Algebra, bound: int = 2) -> Verdict:
    """Modules over ``A ⊗ -`` on complexes versus complexes of ``A``-modules, on the fixture set."""
    if not 1 <= bound <= 4:
        raise PresentationError("bound must be between 1 and 4")
    k = A.field
    v = Verdict(f"complexes of {A.name}-modules (bound {bound})", field=repr(k))
    v.extend(check_algebra(A), prefix="algebra")
    fixtures = module_complexes(A, bound)
    C = ComplexCategory(k, Z, [], name="C_dg(k)")
    T = algebra_monad(C, A, [])
    mods = []
    bad_mod = bad_round = None
    for idx, mc in enumerate(fixtures):
        m = to_module(C, T, A, mc)
        mods.append(m)
        if bad_mod is None and not check_module(T, m).ok:
            bad_mod = {"fixture": idx}
        if bad_round is None and from_module(C, T, A, m) != mc:
            bad_round = {"fixture": idx}
    v.add("complexes of modules give modules", bad_mod is None, bad_mod)
    v.add("dictionary round trip", bad_round is None, bad_round)
    distinct = len(set(mods)) == len(mods)
    v.add("dictionary injective on fixtures", distinct)
    Mod = ModuleCategory(T, mods)
    bad = None
    for (i, P), (j, Q) in itertools.product(enumerate(fixtures), repeat=2):
        lhs = Mod.hom(mods[i], mods[j]).dims
        rhs = hom_dims_blockwise(A, P, Q)
        if lhs != rhs:
            bad = {"source": i, "target": j, "module side": lhs, "complex side": rhs}
            break
    v.add("hom dimensions agree degreewise", bad is None, bad)
    v.data["fixtures"] = len(fixtures)
    return v


EXAMPLES = ("dual_numbers", "field_extension", "group_action", "swap_action", "bousfield")
