"""The DG category of finite complexes over a field and tensoring functors.

``Hom(X, Y)^n = ⊕_i Hom(X^i, Y^(i+n))``.  The basis of a hom space is the
elementary matrices, block by block in increasing source degree ``i`` and
row-major inside a block.  The differential is
``d f = d_Y ∘ f - (-1)^n f ∘ d_X``.
"""

from __future__ import annotations

from typing import Sequence

from .dgcat import DGCategory, DGFunctor, Morphism, NatTrans, PresentationError
from .fields import ExtensionField, Field, PrimeField
from .graded import DGSpace, Grading, sign
from .linalg import Matrix


class Complex(DGSpace):
    """A hashable finite complex; ``name`` is a display label only."""

    def __init__(self, field: Field, grading: Grading, dims: dict[int, int],
                 d: dict[int, Matrix] | None = None, name: str | None = None):
        super().__init__(field, grading, dims, d)
        self.name = name
        self._hash = hash((grading.kind, tuple(sorted(self.dims.items())),
                           tuple(sorted(self._d.items(), key=lambda kv: kv[0]))))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return DGSpace.__eq__(self, other)

    def __str__(self):
        if self.name:
            return self.name
        return "cx(" + ",".join(f"{n}:{k}" for n, k in sorted(self.dims.items())) + ")"

    __repr__ = __str__

    @classmethod
    def from_space(cls, V: DGSpace, name: str | None = None) -> Complex:
        return cls(V.field, V.grading, V.dims, {n: V.d(n) for n in V.degrees()}, name)

    def differential_blocks(self) -> dict[int, Matrix]:
        return dict(self._d)

    def to_json(self) -> dict:
        out = {"grading": self.grading.kind,
               "dims": {str(n): k for n, k in sorted(self.dims.items())},
               "d": {str(n): m.to_json() for n, m in sorted(self._d.items())}}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, field: Field, data: dict) -> Complex:
        grading = Grading(data.get("grading", "Z"))
        dims = {int(n): int(k) for n, k in data.get("dims", {}).items()}
        norm = {grading.norm(n): k for n, k in dims.items()}
        d = {}
        for n, rows in data.get("d", {}).items():
            n = int(n)
            d[n] = Matrix.from_json(field, rows, norm.get(grading.norm(n + 1), 0), norm.get(grading.norm(n), 0))
        return cls(field, grading, dims, d, data.get("name"))


def point(field: Field, grading: Grading, degree: int = 0, dim: int = 1, name: str | None = None) -> Complex:
    """``k^dim`` concentrated in one degree."""
    return Complex(field, grading, {degree: dim}, {}, name)


class ComplexCategory(DGCategory):
    def __init__(self, field: Field, grading: Grading, objects: Sequence[Complex] = (), name: str = "C_dg"):
        super().__init__(field, grading, objects, name)
        self._layouts: dict = {}

    def _check(self, X):
        if not isinstance(X, Complex) or X.field != self.field or X.grading != self.grading:
            raise PresentationError(f"{X!r} is not a complex over {self.field} graded by {self.grading}")

    def layout(self, X: Complex, Y: Complex, n: int) -> list[tuple[int, int, int, int]]:
        """Blocks ``(i, offset, rows, cols)`` of ``Hom(X, Y)^n``."""
        n = self.grading.norm(n)
        key = (X, Y, n)
        out = self._layouts.get(key)
        if out is None:
            out, off = [], 0
            for i in X.degrees():
                r, c = Y.dim(i + n), X.dim(i)
                if r and c:
                    out.append((i, off, r, c))
                    off += r * c
            self._layouts[key] = out
        return out

    def _make_hom(self, X, Y):
        self._check(X)
        self._check(Y)
        g = self.grading
        degs = sorted({g.norm(j - i) for i in X.degrees() for j in Y.degrees()})
        dims = {n: sum(r * c for _, _, r, c in self.layout(X, Y, n)) for n in degs}
        dims = {n: k for n, k in dims.items() if k}
        space = DGSpace(self.field, g, dims)
        d = {}
        for n in dims:
            n1 = g.norm(n + 1)
            if not dims.get(n1):
                continue
            m = self._d_matrix(X, Y, n, dims[n], dims[n1])
            if not m.is_zero():
                d[n] = m
        if d:
            space = DGSpace(self.field, g, dims, d)
        return space

    def _d_matrix(self, X, Y, n, k, k1) -> Matrix:
        """``d`` on ``Hom^n`` written down entry by entry from the elementary basis."""
        fld, g = self.field, self.grading
        n1 = g.norm(n + 1)
        s = sign(fld, n)
        tgt = {i: (off, r, c) for i, off, r, c in self.layout(X, Y, n1)}
        rows = [[fld.zero] * k for _ in range(k1)]
        for i, off, r, c in self.layout(X, Y, n):
            dy = None if Y.has_zero_d(i + n) else Y.d(i + n).rows
            dx = None if X.has_zero_d(i - 1) else X.d(i - 1).rows
            t1 = tgt.get(i)
            t2 = tgt.get(g.norm(i - 1))
            for a in range(r):
                for b in range(c):
                    col = off + a * c + b
                    if dy is not None and t1 is not None:
                        o1, _, c1 = t1
                        for t, row in enumerate(dy):
                            if row[a] != fld.zero:
                                rows[o1 + t * c1 + b][col] = fld.add(rows[o1 + t * c1 + b][col], row[a])
                    if dx is not None and t2 is not None:
                        o2, _, c2 = t2
                        for cc, x in enumerate(dx[b]):
                            if x != fld.zero:
                                idx = o2 + a * c2 + cc
                                rows[idx][col] = fld.sub(rows[idx][col], fld.mul(s, x))
        return Matrix(fld, k1, k, tuple(tuple(r) for r in rows))

    def _basis_raw(self, X, Y, n, k):
        f = self.field
        for j in range(k):
            yield tuple(f.one if i == j else f.zero for i in range(k))

    def blocks_of(self, X, Y, n, coords) -> dict[int, Matrix]:
        out = {}
        for i, off, r, c in self.layout(X, Y, n):
            flat = coords[off:off + r * c]
            out[i] = Matrix(self.field, r, c, tuple(tuple(flat[a * c:(a + 1) * c]) for a in range(r)))
        return out

    def blocks(self, f: Morphism) -> dict[int, Matrix]:
        return self.blocks_of(f.source, f.target, f.degree, f.coords)

    def flatten(self, X, Y, n, blocks: dict[int, Matrix]) -> tuple:
        out = []
        for i, _, r, c in self.layout(X, Y, n):
            m = blocks.get(i)
            if m is None:
                out.extend([self.field.zero] * (r * c))
            else:
                if m.shape != (r, c):
                    raise PresentationError(f"block at degree {i} has shape {m.shape}, expected {(r, c)}")
                for row in m.rows:
                    out.extend(row)
        return tuple(out)

    def from_blocks(self, X, Y, n, blocks: dict[int, Matrix]) -> Morphism:
        n = self.grading.norm(n)
        return Morphism(X, Y, n, self.flatten(X, Y, n, {self.grading.norm(i): m for i, m in blocks.items()}),
                        self.field)

    def _d_blocks(self, X, Y, n, fb: dict[int, Matrix]) -> dict[int, Matrix]:
        g = self.grading
        s = sign(self.field, n)
        out = {}
        for i in X.degrees():
            r, c = Y.dim(i + n + 1), X.dim(i)
            if not (r and c):
                continue
            acc = Matrix.zeros(self.field, r, c)
            fi = fb.get(g.norm(i))
            if fi is not None and not Y.has_zero_d(i + n):
                acc = acc + Y.d(i + n) @ fi
            fi1 = fb.get(g.norm(i + 1))
            if fi1 is not None and not X.has_zero_d(i):
                acc = acc - (fi1 @ X.d(i)).scale(s)
            out[i] = acc
        return out

    def compose(self, g, f):
        if g.source != f.target:
            raise PresentationError("composing non-composable morphisms")
        X, Z = f.source, g.target
        n = self.grading.norm(f.degree + g.degree)
        fb, gb = self.blocks(f), self.blocks(g)
        out = {}
        for i, m in fb.items():
            gm = gb.get(self.grading.norm(i + f.degree))
            if gm is not None:
                out[i] = gm @ m
        return self.from_blocks(X, Z, n, out)

    def identity(self, X):
        self._check(X)
        return self.from_blocks(X, X, 0, {i: Matrix.identity(self.field, X.dim(i)) for i in X.degrees()})

    def chain_map(self, X, Y, blocks: dict[int, Matrix]) -> Morphism:
        return self.from_blocks(X, Y, 0, blocks)


# --- tensoring with a fixed complex -------------------------------------------

def _kron(field: Field, a: Matrix, b: Matrix) -> Matrix:
    z = field.zero
    rows = []
    for ar in a.rows:
        for br in b.rows:
            rows.append(tuple(z if x == z or y == z else field.mul(x, y) for x in ar for y in br))
    return Matrix(field, a.nrows * b.nrows, a.ncols * b.ncols, tuple(rows))


def tensor_complex(V: Complex, X: Complex) -> Complex:
    """``V ⊗ X`` with ``(V⊗X)^n = ⊕_p V^p ⊗ X^(n-p)``, ``p`` ascending, index ``v*dim + x``."""
    fld, g = X.field, X.grading
    pieces = _tensor_pieces(V, X)
    dims = {n: sum(V.dim(p) * X.dim(n - p) for p in ps) for n, ps in pieces.items()}
    d = {}
    for n, ps in pieces.items():
        n1 = g.norm(n + 1)
        if n1 not in dims:
            continue
        m = [[fld.zero] * dims[n] for _ in range(dims[n1])]
        cin = _offsets(V, X, pieces, n)
        cout = _offsets(V, X, pieces, n1)
        for p in ps:
            q = g.norm(n - p)
            c0, dx = cin[p], X.dim(q)
            # dv ⊗ x
            p1 = g.norm(p + 1)
            if not V.has_zero_d(p) and p1 in cout and X.dim(q):
                _add_block(fld, m, cout[p1], c0, _kron(fld, V.d(p), Matrix.identity(fld, dx)))
            # (-1)^p v ⊗ dx
            if not X.has_zero_d(q) and p in cout:
                blk = _kron(fld, Matrix.identity(fld, V.dim(p)), X.d(q)).scale(sign(fld, p))
                _add_block(fld, m, cout[p], c0, blk)
        d[n] = Matrix(fld, dims[n1], dims[n], tuple(tuple(r) for r in m))
    return Complex(fld, g, dims, d)


def _tensor_pieces(V: Complex, X: Complex) -> dict[int, list[int]]:
    g = X.grading
    out: dict[int, list[int]] = {}
    for p in V.degrees():
        for q in X.degrees():
            out.setdefault(g.norm(p + q), []).append(p)
    return {n: sorted(ps) for n, ps in sorted(out.items())}


def _offsets(V, X, pieces, n) -> dict[int, int]:
    out, off = {}, 0
    for p in pieces.get(n, []):
        out[p] = off
        off += V.dim(p) * X.dim(n - p)
    return out


def _add_block(field, target, r0, c0, blk: Matrix):
    for i, row in enumerate(blk.rows):
        tr = target[r0 + i]
        for j, x in enumerate(row):
            if x != field.zero:
                tr[c0 + j] = field.add(tr[c0 + j], x)


class TensorFunctor(DGFunctor):
    """``V ⊗ -`` on a complex category; ``(1⊗f)(v⊗x) = (-1)^(p|f|) v ⊗ f(x)``."""

    def __init__(self, C: ComplexCategory, V: Complex, name: str | None = None):
        self.source = self.target = C
        self.V = V
        self.name = name or f"{V}⊗-"
        self._objs: dict = {}
        self._cache: dict = {}

    def on_object(self, X):
        out = self._objs.get(X)
        if out is None:
            out = self._objs[X] = tensor_complex(self.V, X)
        return out

    def on_morphism(self, f):
        key = (f.source, f.target, f.degree, f.coords)
        out = self._cache.get(key)
        if out is not None:
            return out
        C, V, fld, g = self.source, self.V, self.source.field, self.source.grading
        X, Y = f.source, f.target
        VX, VY = self(X), self(Y)
        fb = C.blocks(f)
        pin, pout = _tensor_pieces(V, X), _tensor_pieces(V, Y)
        blocks = {}
        for n in VX.degrees():
            n1 = g.norm(n + f.degree)
            r, c = VY.dim(n1), VX.dim(n)
            if not (r and c):
                continue
            m = [[fld.zero] * c for _ in range(r)]
            cin, cout = _offsets(V, X, pin, n), _offsets(V, Y, pout, n1)
            for p, c0 in cin.items():
                fi = fb.get(g.norm(n - p))
                if fi is None or p not in cout:
                    continue
                neg = (p * f.degree) % 2 == 1
                fr, fc = fi.nrows, fi.ncols
                entries = [(i, j, fld.neg(x) if neg else x)
                           for i, row in enumerate(fi.rows) for j, x in enumerate(row) if x != fld.zero]
                for v in range(V.dim(p)):
                    r0, c1 = cout[p] + v * fr, c0 + v * fc
                    for i, j, x in entries:
                        m[r0 + i][c1 + j] = x
            blocks[n] = Matrix(fld, r, c, tuple(tuple(x) for x in m))
        out = self._cache[key] = C.from_blocks(VX, VY, f.degree, blocks)
        return out


def tensor_nat(C: ComplexCategory, phi: Morphism, F: TensorFunctor, G: TensorFunctor) -> NatTrans:
    """``φ ⊗ -: V⊗- => W⊗-`` for a closed degree 0 map ``φ: V -> W``."""
    if phi.degree != 0 or phi.source != F.V or phi.target != G.V:
        raise PresentationError("φ must be a degree 0 map between the tensoring complexes")
    fld = C.field
    pb = C.blocks(phi)
    V, W = F.V, G.V

    def comp(X):
        FX, GX = F(X), G(X)
        pin, pout = _tensor_pieces(V, X), _tensor_pieces(W, X)
        blocks = {}
        for n in FX.degrees():
            r, c = GX.dim(n), FX.dim(n)
            if not r:
                continue
            m = [[fld.zero] * c for _ in range(r)]
            cin, cout = _offsets(V, X, pin, n), _offsets(W, X, pout, n)
            for p, c0 in cin.items():
                b = pb.get(p)
                if b is not None and p in cout:
                    _add_block(fld, m, cout[p], c0, _kron(fld, b, Matrix.identity(fld, X.dim(n - p))))
            blocks[n] = Matrix(fld, r, c, tuple(tuple(x) for x in m))
        return C.from_blocks(FX, GX, 0, blocks)

    return NatTrans(F, G, comp, name=f"{phi.source}->{phi.target}⊗-")


# --- algebras acting by tensoring -------------------------------------------

class Algebra:
    """A finite dimensional unital associative algebra in degree 0.

    ``mult[i][j]`` holds the coordinates of ``e_i e_j``; ``unit`` those of 1.
    """

    def __init__(self, field: Field, mult: Sequence[Sequence[Sequence]], unit: Sequence, name: str = "A"):
        self.field = field
        self.dim = len(unit)
        self.mult = tuple(tuple(tuple(field.coerce(x) for x in c) for c in row) for row in mult)
        self.unit = tuple(field.coerce(x) for x in unit)
        self.name = name
        if len(self.mult) != self.dim or any(len(r) != self.dim or any(len(c) != self.dim for c in r)
                                             for r in self.mult):
            raise PresentationError("structure constants do not match the unit length")

    def mul(self, a: Sequence, b: Sequence) -> tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, ai in enumerate(a):
            if ai == f.zero:
                continue
            for j, bj in enumerate(b):
                if bj == f.zero:
                    continue
                c = f.mul(ai, bj)
                for k, x in enumerate(self.mult[i][j]):
                    if x != f.zero:
                        out[k] = f.add(out[k], f.mul(c, x))
        return tuple(out)

    def basis(self) -> list[tuple]:
        f = self.field
        return [tuple(f.one if i == j else f.zero for i in range(self.dim)) for j in range(self.dim)]

    def mult_matrix(self) -> Matrix:
        """``dim × dim²``; column ``i*dim + j`` is ``e_i e_j``."""
        cols = [self.mult[i][j] for i in range(self.dim) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def left_matrix(self, a: Sequence) -> Matrix:
        return Matrix.from_columns(self.field, [self.mul(a, e) for e in self.basis()], self.dim)

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i] for i in range(self.dim) for j in range(self.dim))

    def complex(self, grading: Grading) -> Complex:
        return Complex(self.field, grading, {0: self.dim}, {}, self.name)

    def tensor(self, other: Algebra, name: str | None = None) -> Algebra:
        """``self ⊗ other`` with basis index ``a*other.dim + b``."""
        f, m, n = self.field, self.dim, other.dim
        mult = []
        for a in range(m):
            for b in range(n):
                row = []
                for c in range(m):
                    for e in range(n):
                        x, y = self.mult[a][c], other.mult[b][e]
                        row.append(tuple(f.mul(xi, yj) for xi in x for yj in y))
                mult.append(row)
        unit = tuple(f.mul(x, y) for x in self.unit for y in other.unit)
        return Algebra(f, mult, unit, name or f"{self.name}⊗{other.name}")

    def spec(self) -> dict:
        fmt = self.field.format
        return {"name": self.name,
                "mult": [[[fmt(x) for x in c] for c in row] for row in self.mult],
                "unit": [fmt(x) for x in self.unit]}

    @classmethod
    def from_spec(cls, field: Field, data: dict) -> Algebra:
        p = field.parse
        mult = [[[p(x) for x in c] for c in row] for row in data["mult"]]
        return cls(field, mult, [p(x) for x in data["unit"]], data.get("name", "A"))

    def __repr__(self):
        return f"Algebra({self.name}, dim {self.dim})"


class AlgebraTensorFunctor(TensorFunctor):
    """``A ⊗ -`` for an algebra ``A`` placed in degree 0."""

    def __init__(self, C: ComplexCategory, A: Algebra):
        super().__init__(C, A.complex(C.grading), name=f"{A.name}⊗-")
        self.algebra = A


def algebra_multiplication(C: ComplexCategory, M: AlgebraTensorFunctor) -> NatTrans:
    """``μ_X: A⊗(A⊗X) -> A⊗X``, ``a⊗b⊗x ↦ ab⊗x``."""
    from .dgcat import ComposedFunctor

    A, fld = M.algebra, C.field
    mm = A.mult_matrix()

    def comp(X):
        blocks = {n: _kron(fld, mm, Matrix.identity(fld, X.dim(n))) for n in X.degrees()}
        return C.from_blocks(M(M(X)), M(X), 0, blocks)

    return NatTrans(ComposedFunctor(M, M), M, comp, name="μ")


def algebra_unit(C: ComplexCategory, M: AlgebraTensorFunctor) -> NatTrans:
    """``η_X: X -> A⊗X``, ``x ↦ 1⊗x``."""
    from .dgcat import IdentityFunctor

    A, fld = M.algebra, C.field
    u = Matrix.from_columns(fld, [A.unit], A.dim)

    def comp(X):
        blocks = {n: _kron(fld, u, Matrix.identity(fld, X.dim(n))) for n in X.degrees()}
        return C.from_blocks(X, M(X), 0, blocks)

    return NatTrans(IdentityFunctor(C), M, comp, name="η")


def module_action(C: ComplexCategory, M: AlgebraTensorFunctor, X: Complex,
                  action: Sequence[Matrix]) -> Morphism:
    """``λ: A⊗X -> X`` from matrices ``action[a]`` of ``e_a`` acting on ``X`` (per total space).

    ``action[a]`` is given as a block-diagonal dict or one matrix per degree.
    """
    fld = C.field
    blocks = {}
    for n in X.degrees():
        cols = []
        for a in range(M.algebra.dim):
            act = action[a][n] if isinstance(action[a], dict) else action[a]
            for x in range(X.dim(n)):
                cols.append(act.column(x))
        blocks[n] = Matrix.from_columns(fld, cols, X.dim(n))
    return C.from_blocks(M(X), X, 0, blocks)


# --- base change along a finite field extension ------------------------------

def extension_algebra(k: PrimeField, l: ExtensionField) -> Algebra:
    """``ℓ`` as a ``k``-algebra in the power basis ``1, ω, ..., ω^(n-1)``."""
    n = l.degree
    basis = [tuple(1 if i == t else 0 for i in range(n)) for t in range(n)]
    mult = [[l.mul(a, b) for b in basis] for a in basis]
    return Algebra(k, mult, l.one, name=f"F{l.order}")


class ExtendScalars(DGFunctor):
    """``ℓ ⊗_k -``: same dimensions, matrices read in ``ℓ``."""

    def __init__(self, C: ComplexCategory, D: ComplexCategory):
        self.source, self.target = C, D
        self.name = "ℓ⊗-"
        self._objs: dict = {}

    def _lift(self, x):
        return self.target.field.from_int(x)

    def on_object(self, X):
        out = self._objs.get(X)
        if out is None:
            D = self.target
            d = {n: Matrix(D.field, m.nrows, m.ncols, tuple(tuple(self._lift(x) for x in r) for r in m.rows))
                 for n, m in X.differential_blocks().items()}
            out = self._objs[X] = Complex(D.field, X.grading, X.dims, d)
        return out

    def on_morphism(self, f):
        return Morphism(self(f.source), self(f.target), f.degree, tuple(self._lift(x) for x in f.coords),
                        self.target.field)


class RestrictScalars(DGFunctor):
    """Underlying ``k``-complex of an ``ℓ``-complex; coordinate ``(t, j)`` at index ``t*dim + j``."""

    def __init__(self, D: ComplexCategory, C: ComplexCategory):
        self.source, self.target = D, C
        self.l: ExtensionField = D.field
        self.name = "res"
        self._objs: dict = {}

    def matrix(self, m: Matrix) -> Matrix:
        l, n = self.l, self.l.degree
        r, c = m.nrows, m.ncols
        rows = [[0] * (n * c) for _ in range(n * r)]
        powers = [tuple(1 if i == t else 0 for i in range(n)) for t in range(n)]
        for i, row in enumerate(m.rows):
            for j, x in enumerate(row):
                if x == l.zero:
                    continue
                for t in range(n):
                    y = l.mul(x, powers[t])
                    for s in range(n):
                        if y[s]:
                            rows[s * r + i][t * c + j] = y[s]
        return Matrix(self.target.field, n * r, n * c, tuple(tuple(x) for x in rows))

    def on_object(self, Y):
        out = self._objs.get(Y)
        if out is None:
            n = self.l.degree
            d = {k: self.matrix(m) for k, m in Y.differential_blocks().items()}
            out = self._objs[Y] = Complex(self.target.field, Y.grading,
                                          {k: n * v for k, v in Y.dims.items()}, d)
        return out

    def on_morphism(self, f):
        D, C = self.source, self.target
        blocks = {i: self.matrix(m) for i, m in D.blocks(f).items()}
        return C.from_blocks(self(f.source), self(f.target), f.degree, blocks)


def extension_counit(D: ComplexCategory, F: ExtendScalars, G: RestrictScalars) -> NatTrans:
    """``ε_Y: ℓ⊗_k (res Y) -> Y``, ``(t, j) ↦ ω^t e_j``."""
    from .dgcat import ComposedFunctor, IdentityFunctor

    l, n = D.field, D.field.degree

    def comp(Y):
        blocks = {}
        for k in Y.degrees():
            dy = Y.dim(k)
            rows = [[l.zero] * (n * dy) for _ in range(dy)]
            for t in range(n):
                w = tuple(1 if i == t else 0 for i in range(n))
                for j in range(dy):
                    rows[j][t * dy + j] = w
            blocks[k] = Matrix(l, dy, n * dy, tuple(tuple(r) for r in rows))
        return D.from_blocks(F(G(Y)), Y, 0, blocks)

    return NatTrans(ComposedFunctor(F, G), IdentityFunctor(D), comp, name="ε")
