"""One-sided twisted complexes over a DG category.

A twisted complex is a list of entries ``(A_i, r_i)`` (an object and a
shift) with a strictly lower triangular twist ``q_ij ∈ Hom^(1+r_i-r_j)(A_j, A_i)``
(``i > j``) satisfying ``(-1)^r_i d q_ij + Σ_k q_ik q_kj = 0``.

A morphism of degree ``n`` is a block matrix with ``f_ij`` of degree
``n + r'_i - r_j``; its differential is ``D f = d̂ f + q' f - (-1)^n f q``
where ``(d̂ f)_ij = (-1)^r'_i d f_ij``.  Block products carry no signs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

from .dgcat import (
    ComposedFunctor,
    DGCategory,
    DGFunctor,
    Morphism,
    NatTrans,
    PresentationError,
    functors_agree,
    horizontal,
    nats_agree,
    vertical,
)
from .graded import DGSpace, sign, validate_dg
from .linalg import Matrix
from .report import Verdict


@dataclass(frozen=True, eq=False)
class TwistedComplex:
    entries: tuple  # ((object, shift), ...)
    q: tuple = ()  # (((i, j), coords), ...) sorted, nonzero blocks only

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.entries, self.q)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, TwistedComplex) and self._hash == other._hash
                and self.entries == other.entries and self.q == other.q)

    def __len__(self):
        return len(self.entries)

    def obj(self, i):
        return self.entries[i][0]

    def shift_of(self, i) -> int:
        return self.entries[i][1]

    def q_coords(self, i, j):
        for key, c in self.q:
            if key == (i, j):
                return c
        return None

    def __str__(self):
        ents = ", ".join(f"{a}[{r}]" if r else str(a) for a, r in self.entries)
        return f"⟨{ents}{' | q' if self.q else ''}⟩"

    __repr__ = __str__


class PretrCategory(DGCategory):
    def __init__(self, base: DGCategory, objects: Sequence[TwistedComplex] = (), name: str | None = None):
        super().__init__(base.field, base.grading, objects, name or f"Pretr({base.name})")
        self.base = base
        self._layouts: dict = {}
        self._block_cache: dict = {}

    # --- objects ------------------------------------------------------------
    def make(self, entries: Sequence, q: dict | None = None) -> TwistedComplex:
        """Build a twisted complex; ``q`` maps ``(i, j)`` to base morphisms or coordinates."""
        g = self.grading
        ents = tuple((a, g.norm(r) if g.kind == "Z2" else r) for a, r in entries)
        blocks = []
        z = self.field.zero
        for (i, j), val in sorted((q or {}).items()):
            coords = tuple(val.coords) if isinstance(val, Morphism) else tuple(self.field.coerce(x) for x in val)
            if any(x != z for x in coords):
                blocks.append(((i, j), coords))
        return TwistedComplex(ents, tuple(blocks))

    def embed(self, a) -> TwistedComplex:
        return TwistedComplex(((a, 0),))

    def q_block(self, T: TwistedComplex, i: int, j: int) -> Morphism:
        n = self.grading.norm(1 + T.shift_of(i) - T.shift_of(j))
        c = T.q_coords(i, j)
        if c is None:
            return self.base.zero(T.obj(j), T.obj(i), n)
        return Morphism(T.obj(j), T.obj(i), n, c, self.field)

    # --- hom complexes ------------------------------------------------------
    def block_degree(self, T, U, i, j, n) -> int:
        return self.grading.norm(n + U.shift_of(i) - T.shift_of(j))

    def layout(self, T, U, n) -> list[tuple[int, int, int, int]]:
        n = self.grading.norm(n)
        key = (T, U, n)
        out = self._layouts.get(key)
        if out is None:
            out, off = [], 0
            for i in range(len(U)):
                for j in range(len(T)):
                    k = self.base.hom_dim(T.obj(j), U.obj(i), self.block_degree(T, U, i, j, n))
                    if k:
                        out.append((i, j, off, k))
                        off += k
            self._layouts[key] = out
        return out

    def _make_hom(self, T, U):
        g = self.grading
        degs = set()
        for i in range(len(U)):
            for j in range(len(T)):
                for m in self.base.hom_degrees(T.obj(j), U.obj(i)):
                    degs.add(g.norm(m - U.shift_of(i) + T.shift_of(j)))
        dims = {n: sum(k for *_, k in self.layout(T, U, n)) for n in sorted(degs)}
        dims = {n: k for n, k in dims.items() if k}
        d = {}
        for n, k in dims.items():
            n1 = g.norm(n + 1)
            if not dims.get(n1):
                continue
            cols = []
            for e in range(k):
                coords = tuple(self.field.one if t == e else self.field.zero for t in range(k))
                cols.append(self._D(Morphism(T, U, n, coords, self.field)).coords)
            m = Matrix.from_columns(self.field, cols, dims[n1])
            if not m.is_zero():
                d[n] = m
        return DGSpace(self.field, g, dims, d)

    def blocks(self, f: Morphism) -> dict[tuple[int, int], Morphism]:
        """Nonzero blocks of ``f`` as base morphisms."""
        # the same operand is often reused across many products; memoize on identity
        hit = self._block_cache.get(id(f.coords))
        if hit is not None and hit[0] is f.coords and hit[1] == (f.source, f.target, f.degree):
            return hit[2]
        T, U = f.source, f.target
        z = self.field.zero
        if self.field.falsy_zero:
            nz = [t for t, x in enumerate(f.coords) if x]
        else:
            nz = [t for t, x in enumerate(f.coords) if x != z]
        if not nz:
            return {}
        lay = self.layout(T, U, f.degree)
        starts = self._starts(T, U, f.degree)
        out = {}
        for t in nz:
            pos = bisect.bisect_right(starts, t) - 1
            i, j, off, k = lay[pos]
            if (i, j) not in out:
                out[(i, j)] = Morphism(T.obj(j), U.obj(i), self.block_degree(T, U, i, j, f.degree),
                                       f.coords[off:off + k], self.field)
        if len(self._block_cache) > 4096:
            self._block_cache.clear()
        self._block_cache[id(f.coords)] = (f.coords, (T, U, f.degree), out)
        return out

    def _starts(self, T, U, n) -> list[int]:
        key = ("starts", T, U, self.grading.norm(n))
        out = self._layouts.get(key)
        if out is None:
            out = self._layouts[key] = [off for _, _, off, _ in self.layout(T, U, n)]
        return out

    def _index(self, T, U, n) -> dict:
        key = ("index", T, U, self.grading.norm(n))
        out = self._layouts.get(key)
        if out is None:
            out = {(i, j): (off, k) for i, j, off, k in self.layout(T, U, n)}
            out["total"] = (0, sum(k for _, _, _, k in self.layout(T, U, n)))
            self._layouts[key] = out
        return out

    def _accumulate(self, out: list, index: dict, key, m: Morphism, scale=None):
        fld = self.field
        pos = index.get(key)
        if pos is None:
            if not m.is_zero():
                raise PresentationError(f"block {key} lies in a zero hom space")
            return
        off = pos[0]
        for t, x in enumerate(m.coords):
            if x != fld.zero:
                if scale is not None:
                    x = fld.mul(scale, x)
                out[off + t] = fld.add(out[off + t], x)

    def from_blocks(self, T, U, n, blocks: dict) -> Morphism:
        n = self.grading.norm(n)
        out = []
        for i, j, off, k in self.layout(T, U, n):
            b = blocks.get((i, j))
            if b is None:
                out.extend([self.field.zero] * k)
            else:
                expect = (T.obj(j), U.obj(i), self.block_degree(T, U, i, j, n))
                if (b.source, b.target, b.degree) != expect:
                    raise PresentationError(f"block {(i, j)} lives in the wrong hom space")
                out.extend(b.coords)
        if len(blocks):
            index = self._index(T, U, n)
            for key, b in blocks.items():
                if key not in index and not b.is_zero():
                    raise PresentationError(f"block {key} lies in a zero hom space")
        return Morphism(T, U, n, tuple(out), self.field)

    def _D(self, f: Morphism) -> Morphism:
        B, fld, g = self.base, self.field, self.grading
        T, U, n = f.source, f.target, f.degree
        n1 = g.norm(n + 1)
        index = self._index(T, U, n1)
        out = [fld.zero] * index["total"][1]
        fb = self.blocks(f)
        for (i, j), b in fb.items():
            self._accumulate(out, index, (i, j), B.d(b), sign(fld, U.shift_of(i)))
        s = fld.neg(sign(fld, n))
        uq = self._q_by_source(U)
        tq = self._q_by_target(T)
        for (k, j), b in fb.items():
            for ii, qm in uq.get(k, ()):
                self._accumulate(out, index, (ii, j), B.compose(qm, b))
        for (i, k), b in fb.items():
            for j, qm in tq.get(k, ()):
                self._accumulate(out, index, (i, j), B.compose(b, qm), s)
        return Morphism(T, U, n1, tuple(out), fld)

    def _q_by_source(self, T) -> dict:
        key = ("qsrc", T)
        out = self._layouts.get(key)
        if out is None:
            out = {}
            for (i, j), _ in T.q:
                out.setdefault(j, []).append((i, self.q_block(T, i, j)))
            self._layouts[key] = out
        return out

    def _q_by_target(self, T) -> dict:
        key = ("qtgt", T)
        out = self._layouts.get(key)
        if out is None:
            out = {}
            for (i, j), _ in T.q:
                out.setdefault(i, []).append((j, self.q_block(T, i, j)))
            self._layouts[key] = out
        return out

    def compose(self, g, f):
        if g.source != f.target:
            raise PresentationError("composing non-composable twisted morphisms")
        B, fld = self.base, self.field
        n = self.grading.norm(f.degree + g.degree)
        index = self._index(f.source, g.target, n)
        out = [fld.zero] * index["total"][1]
        by_src: dict = {}
        for (i, k), gb in self.blocks(g).items():
            by_src.setdefault(k, []).append((i, gb))
        for (k, j), fb in self.blocks(f).items():
            for i, gb in by_src.get(k, ()):
                self._accumulate(out, index, (i, j), B.compose(gb, fb))
        return Morphism(f.source, g.target, n, tuple(out), fld)

    def identity(self, T):
        return self.from_blocks(T, T, 0, {(i, i): self.base.identity(T.obj(i)) for i in range(len(T))})

    # --- shifts and cones ---------------------------------------------------
    def shift(self, T: TwistedComplex, n: int) -> TwistedComplex:
        s = sign(self.field, n)
        return self.make([(a, r + n) for a, r in T.entries],
                         {key: tuple(self.field.mul(s, x) for x in c) for key, c in T.q})

    def shift_morphism(self, f: Morphism, n: int) -> Morphism:
        T, U = self.shift(f.source, n), self.shift(f.target, n)
        s = sign(self.field, n * f.degree)
        return Morphism(T, U, f.degree, tuple(self.field.mul(s, x) for x in f.coords), self.field)

    def cone(self, phi: Morphism) -> TwistedComplex:
        """Entries of ``T[1]`` then ``T'``; twist ``[[q_T[1], 0], [φ, q']]``."""
        T, U = phi.source, phi.target
        if phi.degree != 0:
            raise PresentationError("cone needs a degree 0 morphism")
        if not self.is_closed(phi):
            raise PresentationError("cone needs a closed morphism")
        T1 = self.shift(T, 1)
        m = len(T)
        q = {key: c for key, c in T1.q}
        for (i, j), c in U.q:
            q[(i + m, j + m)] = c
        for (i, j), b in self.blocks(phi).items():
            q[(i + m, j)] = b.coords
        return self.make(list(T1.entries) + list(U.entries), q)

    def cone_triangle(self, phi: Morphism) -> tuple[TwistedComplex, Morphism, Morphism]:
        """``(Cone φ, T' -> Cone φ, Cone φ -> T[1])``."""
        T, U = phi.source, phi.target
        Cn = self.cone(phi)
        m = len(T)
        T1 = self.shift(T, 1)
        inc = self.from_blocks(U, Cn, 0, {(i + m, i): self.base.identity(U.obj(i)) for i in range(len(U))})
        proj = self.from_blocks(Cn, T1, 0, {(i, i): self.base.identity(T.obj(i)) for i in range(m)})
        return Cn, inc, proj

    def direct_sum(self, Ts: Sequence[TwistedComplex]) -> TwistedComplex:
        entries, q, off = [], {}, 0
        for T in Ts:
            entries.extend(T.entries)
            for (i, j), c in T.q:
                q[(i + off, j + off)] = c
            off += len(T)
        return self.make(entries, q)


def validate_twisted(P: PretrCategory, T: TwistedComplex, subject: str | None = None) -> Verdict:
    B, fld = P.base, P.field
    v = Verdict(subject or f"twisted complex {T}", field=repr(fld))
    bad = None
    for (i, j), c in T.q:
        if not (0 <= j < i < len(T)):
            bad = {"block": [i, j]}
            break
    v.add("strictly lower triangular", bad is None, bad)
    bad = None
    for (i, j), c in T.q:
        n = P.grading.norm(1 + T.shift_of(i) - T.shift_of(j))
        if len(c) != B.hom_dim(T.obj(j), T.obj(i), n):
            bad = {"block": [i, j], "expected_degree": n}
            break
    v.add("twist degrees", bad is None, bad)
    if bad is not None or v.failures():
        return v
    bad = None
    for i in range(len(T)):
        for j in range(i):
            mc = B.d(P.q_block(T, i, j)).scale(sign(fld, T.shift_of(i)))
            for k in range(j + 1, i):
                mc = mc + B.compose(P.q_block(T, i, k), P.q_block(T, k, j))
            if not mc.is_zero():
                bad = {"block": [i, j]}
                break
        if bad:
            break
    v.add("Maurer-Cartan", bad is None, bad)
    return v


def twisted_hom_complex(P: PretrCategory, T: TwistedComplex, U: TwistedComplex) -> DGSpace:
    return P.hom(T, U)


def check_twisted_hom(P: PretrCategory, T: TwistedComplex, U: TwistedComplex) -> Verdict:
    return validate_dg(P.hom(T, U), subject=f"Hom({T}, {U})")


def totalize(P: PretrCategory, T: TwistedComplex):
    """The complex of a twisted complex over a complex category.

    ``Tot^m = ⊕_i A_i^(m + r_i)``, differential ``(-1)^r_i d_A_i + q``.
    """
    from .cdg import Complex

    B, fld, g = P.base, P.field, P.grading
    degs = sorted({g.norm(k - r) for a, r in T.entries for k in a.degrees()})
    pieces = {m: [(i, T.obj(i).dim(m + T.shift_of(i))) for i in range(len(T))] for m in degs}
    dims = {m: sum(k for _, k in ps) for m, ps in pieces.items()}
    d = {}
    for m in degs:
        m1 = g.norm(m + 1)
        if not dims.get(m1) or not dims[m]:
            continue
        rows = [[fld.zero] * dims[m] for _ in range(dims[m1])]
        coff = _offs(pieces[m])
        roff = _offs(pieces[m1])
        for i in range(len(T)):
            A, r = T.obj(i), T.shift_of(i)
            if A.dim(m + r) and A.dim(m + r + 1) and not A.has_zero_d(m + r):
                _put(fld, rows, roff[i], coff[i], A.d(m + r).scale(sign(fld, r)))
        for (i, j), c in T.q:
            qb = B.blocks(P.q_block(T, i, j))
            blk = qb.get(g.norm(m + T.shift_of(j)))
            if blk is not None:
                _put(fld, rows, roff[i], coff[j], blk)
        d[m] = Matrix(fld, dims[m1], dims[m], tuple(tuple(r) for r in rows))
    return Complex(fld, g, dims, d)


def _offs(ps):
    out, off = {}, 0
    for i, k in ps:
        out[i] = off
        off += k
    return out


def _put(fld, rows, r0, c0, blk: Matrix):
    for a, row in enumerate(blk.rows):
        for b, x in enumerate(row):
            if x != fld.zero:
                rows[r0 + a][c0 + b] = fld.add(rows[r0 + a][c0 + b], x)


# --- the Pretr 2-functor -------------------------------------------------------

class PretrFunctor(DGFunctor):
    """Entrywise application of a DG functor."""

    def __init__(self, F: DGFunctor, source: PretrCategory, target: PretrCategory | None = None):
        self.base = F
        self.source = source
        self.target = target or PretrCategory(F.target)
        self.name = f"Pretr({F.name})"

    def on_object(self, T):
        P = self.source
        return self.target.make([(self.base(a), r) for a, r in T.entries],
                                {(i, j): self.base(P.q_block(T, i, j)) for (i, j), _ in T.q})

    def on_morphism(self, f):
        T, U = self(f.source), self(f.target)
        blocks = {key: self.base(b) for key, b in self.source.blocks(f).items()}
        return self.target.from_blocks(T, U, f.degree, blocks)


def pretr_functor(F: DGFunctor, source: PretrCategory, target: PretrCategory | None = None) -> PretrFunctor:
    return PretrFunctor(F, source, target)


def pretr_nat(nu: NatTrans, F: PretrFunctor, G: PretrFunctor) -> NatTrans:
    """Diagonal components ``diag(ν_A_i)``."""
    D = F.target

    def comp(T):
        return D.from_blocks(F(T), G(T), 0, {(i, i): nu[T.obj(i)] for i in range(len(T))})

    return NatTrans(F, G, comp, name=f"Pretr({nu.name})")


def embedding(P: PretrCategory) -> DGFunctor:
    from .dgcat import FunctionFunctor

    def mor(f):
        return P.from_blocks(P.embed(f.source), P.embed(f.target), f.degree, {(0, 0): f})

    return FunctionFunctor(P.base, P, P.embed, mor, name="ι")


def check_pretr_2functor(F: DGFunctor, G: DGFunctor, alpha: NatTrans, beta: NatTrans,
                         gamma: NatTrans, delta: NatTrans, P: PretrCategory,
                         objects: Sequence[TwistedComplex]) -> Verdict:
    """Strict 2-functor laws of ``Pretr`` on a finite list of twisted complexes.

    ``F: C -> D``, ``G: D -> E``; ``alpha, beta`` are composable (vertically)
    transformations between endofunctors-or-functors ``C -> D``; ``gamma``
    is a transformation between functors ``D -> E`` (for the horizontal law)
    and ``delta`` one between functors ``C -> D``.
    """
    from .dgcat import IdentityFunctor, identity_nat

    v = Verdict("Pretr strict 2-functor laws", field=repr(P.field))
    PC = P
    PD = PretrCategory(F.target)
    PE = PretrCategory(G.target)
    idP = PretrFunctor(IdentityFunctor(P.base), PC, PC)
    v.add("identity functor", all(idP(T) == T for T in objects) and
          all(idP(e) == e for T in objects for U in objects for e in PC.all_basis(T, U)))
    PF, PG = PretrFunctor(F, PC, PD), PretrFunctor(G, PD, PE)
    PGF = PretrFunctor(ComposedFunctor(G, F), PC, PE)
    v.add("composite functor", functors_agree(ComposedFunctor(PG, PF), PGF, objects))

    def pf(functor, cat_from, cat_to):
        return PretrFunctor(functor, cat_from, cat_to)

    a_src, a_tgt = pf(alpha.source, PC, PD), pf(alpha.target, PC, PD)
    b_tgt = pf(beta.target, PC, PD)
    lhs = vertical(pretr_nat(beta, a_tgt, b_tgt), pretr_nat(alpha, a_src, a_tgt))
    rhs = pretr_nat(vertical(beta, alpha), a_src, b_tgt)
    v.add("vertical composition", nats_agree(lhs, rhs, objects))

    d_src, d_tgt = pf(delta.source, PC, PD), pf(delta.target, PC, PD)
    g_src, g_tgt = pf(gamma.source, PD, PE), pf(gamma.target, PD, PE)
    lhs = horizontal(pretr_nat(gamma, g_src, g_tgt), pretr_nat(delta, d_src, d_tgt))
    h = horizontal(gamma, delta)
    rhs = pretr_nat(h, pf(h.source, PC, PE), pf(h.target, PC, PE))
    v.add("horizontal composition", nats_agree(lhs, rhs, objects))
    idn = identity_nat(F)
    v.add("identity transformation", nats_agree(pretr_nat(idn, PF, PF), identity_nat(PF), objects))
    return v
