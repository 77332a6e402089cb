"""Dense exact matrices, row reduction, kernels and affine solving.

Prime fields are reduced with vectorised int64 numpy arithmetic, the
rationals with fraction-free integer elimination (content is divided out
of every row after each step), and extension fields with plain field
operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .fields import Field, FieldError, PrimeField, Rationals

Vector = tuple


class DimensionError(ValueError):
    pass


class InconsistentSystem(ArithmeticError):
    """``A x = b`` has no solution.

    ``certificate`` is a row vector ``y`` with ``y A = 0`` and ``y b != 0``.
    """

    def __init__(self, certificate: Vector, message: str = "system is inconsistent"):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise DimensionError(f"ragged data for a {self.nrows}x{self.ncols} matrix")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int) -> Matrix:
        cols = [tuple(c) for c in cols]
        rows = tuple(zip(*cols)) if cols else ((),) * nrows
        return cls(field, nrows, len(cols), rows)

    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> Matrix:
        z = field.zero
        return cls(field, m, n, tuple((z,) * n for _ in range(m)))

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else
                      tuple(() for _ in range(self.ncols)))

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    def _check(self, other: Matrix):
        if self.field != other.field:
            raise FieldError("mixed fields")

    def __add__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} + {other.shape}")
        add = self.field.add
        return Matrix(self.field, self.nrows, self.ncols,
                      tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: Matrix) -> Matrix:
        self._check(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} - {other.shape}")
        sub = self.field.sub
        return Matrix(self.field, self.nrows, self.ncols,
                      tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def scale(self, c) -> Matrix:
        f = self.field
        if c == f.one:
            return self
        z, mul = f.zero, f.mul
        return Matrix(f, self.nrows, self.ncols,
                      tuple(tuple(z if x == z else mul(c, x) for x in r) for r in self.rows))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            if self.ncols != other.nrows:
                raise DimensionError(f"{self.shape} @ {other.shape}")
            return Matrix(self.field, self.nrows, other.ncols, _sparse_matmul(self.field, self.rows, other.rows,
                                                                              other.ncols))
        v = tuple(other)
        if len(v) != self.ncols:
            raise DimensionError(f"{self.shape} @ vector of length {len(v)}")
        f = self.field
        nz = [(j, x) for j, x in enumerate(v) if x != f.zero]
        if isinstance(f, PrimeField):
            p = f.p
            return tuple(sum(r[j] * x for j, x in nz) % p for r in self.rows)
        out = []
        for r in self.rows:
            acc = f.zero
            for j, x in nz:
                a = r[j]
                if a != f.zero:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def hstack(self, other: Matrix) -> Matrix:
        if self.nrows != other.nrows:
            raise DimensionError("hstack row mismatch")
        return Matrix(self.field, self.nrows, self.ncols + other.ncols,
                      tuple(r + s for r, s in zip(self.rows, other.rows)))

    def vstack(self, other: Matrix) -> Matrix:
        if self.ncols != other.ncols:
            raise DimensionError("vstack column mismatch")
        return Matrix(self.field, self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def to_json(self) -> list[list[str]]:
        fmt = self.field.format
        return [[fmt(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, field: Field, data, nrows: int, ncols: int) -> Matrix:
        rows = [[field.parse(x) if isinstance(x, str) else field.coerce(x) for x in r] for r in data]
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DimensionError(f"expected a {nrows}x{ncols} matrix")
        return cls(field, nrows, ncols, tuple(tuple(r) for r in rows))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self.rows)
        return f"Matrix<{self.nrows}x{self.ncols}>[{body}]"


def _sparse_matmul(field: Field, arows, brows, ncols: int) -> tuple:
    """Row-by-row product that skips zero entries (most hom matrices are sparse)."""
    z = field.zero
    fast = isinstance(field, (PrimeField, Rationals))
    bsparse = [[(j, b) for j, b in enumerate(r) if b != z] for r in brows]
    out = []
    for r in arows:
        acc = [z] * ncols
        for k, a in enumerate(r):
            if a == z:
                continue
            for j, b in bsparse[k]:
                acc[j] = acc[j] + a * b if fast else field.add(acc[j], field.mul(a, b))
        if isinstance(field, PrimeField):
            acc = [x % field.p for x in acc]
        out.append(tuple(acc))
    return tuple(out)


def dot(field: Field, u: Sequence, v: Sequence):
    if isinstance(field, PrimeField):
        return sum(a * b for a, b in zip(u, v)) % field.p
    if isinstance(field, Rationals):
        return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))
    acc = field.zero
    for a, b in zip(u, v):
        if a != field.zero and b != field.zero:
            acc = field.add(acc, field.mul(a, b))
    return acc


def vec_add(field: Field, u: Sequence, v: Sequence) -> Vector:
    if isinstance(field, PrimeField):
        p = field.p
        return tuple((a + b) % p for a, b in zip(u, v))
    if isinstance(field, Rationals):
        return tuple(a + b for a, b in zip(u, v))
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_sub(field: Field, u: Sequence, v: Sequence) -> Vector:
    if isinstance(field, PrimeField):
        p = field.p
        return tuple((a - b) % p for a, b in zip(u, v))
    if isinstance(field, Rationals):
        return tuple(a - b for a, b in zip(u, v))
    return tuple(field.sub(a, b) for a, b in zip(u, v))


def vec_scale(field: Field, c, u: Sequence) -> Vector:
    return tuple(field.mul(c, a) for a in u)


def vec_is_zero(field: Field, u: Sequence) -> bool:
    z = field.zero
    return all(a == z for a in u)


# --- row reduction -----------------------------------------------------------

def _rref_prime(p: int, rows: list[list[int]], ncols: int, limit: int):
    if not rows:
        return [], []
    M = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    nrows = M.shape[0]
    r = 0
    pivots = []
    for c in range(limit):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            M[[r, i]] = M[[i, r]]
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r] = (M[r] * inv) % p
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit] = (M[hit] - np.outer(col[hit], M[r])) % p
        pivots.append(c)
        r += 1
    return M[:r].tolist(), pivots


def _content(row: list[int]) -> int:
    return reduce(gcd, row, 0)


def _rref_rational(rows: list[list[Fraction]], ncols: int, limit: int):
    work = []
    for row in rows:
        den = lcm(*(x.denominator for x in row)) if row else 1
        ints = [int(x * den) for x in row]
        g = _content(ints)
        if g:
            work.append([x // g for x in ints])
    nrows = len(work)
    r = 0
    pivots = []
    for c in range(limit):
        if r == nrows:
            break
        i = next((k for k in range(r, nrows) if work[k][c] != 0), None)
        if i is None:
            continue
        work[r], work[i] = work[i], work[r]
        prow = work[r]
        a = prow[c]
        for k in range(nrows):
            if k == r:
                continue
            b = work[k][c]
            if b == 0:
                continue
            new = [a * x - b * y for x, y in zip(work[k], prow)]
            g = _content(new)
            work[k] = [x // g for x in new] if g else new
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(work[:r], pivots):
        a = row[c]
        out.append([Fraction(x, a) for x in row])
    return out, pivots


def _rref_generic(field: Field, rows: list[list], ncols: int, limit: int):
    work = [list(r) for r in rows]
    nrows = len(work)
    r = 0
    pivots = []
    z = field.zero
    for c in range(limit):
        if r == nrows:
            break
        i = next((k for k in range(r, nrows) if work[k][c] != z), None)
        if i is None:
            continue
        work[r], work[i] = work[i], work[r]
        inv = field.inv(work[r][c])
        work[r] = [field.mul(inv, x) for x in work[r]]
        prow = work[r]
        for k in range(nrows):
            if k != r and work[k][c] != z:
                b = work[k][c]
                work[k] = [field.sub(x, field.mul(b, y)) for x, y in zip(work[k], prow)]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rref_rows(field: Field, rows: Iterable[Sequence], ncols: int, limit: int | None = None):
    """Reduced row echelon form; pivots are only sought in the first ``limit`` columns.

    Returns ``(nonzero_rows, pivot_columns)``; every returned row has a 1 in
    its pivot column and zeros in the other pivot columns.
    """
    rows = [list(r) for r in rows]
    if limit is None:
        limit = ncols
    if isinstance(field, PrimeField):
        return _rref_prime(field.p, rows, ncols, limit)
    if isinstance(field, Rationals):
        return _rref_rational(rows, ncols, limit)
    return _rref_generic(field, rows, ncols, limit)


def rref(A: Matrix) -> tuple[Matrix, list[int]]:
    rows, piv = rref_rows(A.field, A.rows, A.ncols)
    return Matrix(A.field, len(rows), A.ncols, tuple(tuple(r) for r in rows)), piv


def rank(A: Matrix) -> int:
    return len(rref_rows(A.field, A.rows, A.ncols)[1])


def _kernel_from_rref(field: Field, rows, pivots, ncols: int) -> list[Vector]:
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(rows, pivots):
            if row[f] != field.zero:
                v[pc] = field.neg(row[f])
        basis.append(tuple(v))
    return basis


def kernel_basis(A: Matrix) -> list[Vector]:
    rows, piv = rref_rows(A.field, A.rows, A.ncols)
    return _kernel_from_rref(A.field, rows, piv, A.ncols)


def solve_affine(A: Matrix, b: Sequence) -> tuple[Vector, list[Vector]]:
    """Solve ``A x = b``; returns ``(particular, kernel_basis)``.

    Raises ``InconsistentSystem`` carrying ``y`` with ``yA = 0``, ``yb != 0``.
    """
    field = A.field
    b = tuple(b)
    if len(b) != A.nrows:
        raise DimensionError(f"right-hand side of length {len(b)} for {A.nrows} equations")
    n = A.ncols
    rows, piv = rref_rows(field, (r + (x,) for r, x in zip(A.rows, b)), n + 1, limit=n + 1)
    if piv and piv[-1] == n:
        raise InconsistentSystem(_certificate(A, b))
    x = [field.zero] * n
    for row, pc in zip(rows, piv):
        x[pc] = row[n]
    kernel = _kernel_from_rref(field, [r[:n] for r in rows], piv, n)
    return tuple(x), kernel


def _certificate(A: Matrix, b: Vector) -> Vector:
    """``y`` with ``yA = 0`` and ``yb = 1``: a solution of the transposed system."""
    field = A.field
    z = field.zero
    m, n = A.nrows, A.ncols
    rows = [list(A.rows[i][j] for i in range(m)) + [z] for j in range(n)]
    rows.append(list(b) + [field.one])
    red, piv = rref_rows(field, rows, m + 1, limit=m + 1)
    if piv and piv[-1] == m:
        raise AssertionError("no certificate found for an inconsistent system")
    y = [z] * m
    for row, pc in zip(red, piv):
        y[pc] = row[m]
    return tuple(y)


def is_solvable(A: Matrix, b: Sequence) -> bool:
    try:
        solve_affine(A, b)
    except InconsistentSystem:
        return False
    return True


def inverse(A: Matrix) -> Matrix:
    if A.nrows != A.ncols:
        raise DimensionError("inverse of a non-square matrix")
    n = A.nrows
    aug = A.hstack(Matrix.identity(A.field, n))
    rows, piv = rref_rows(A.field, aug.rows, 2 * n, limit=n)
    if len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix(A.field, n, n, tuple(tuple(r[n:]) for r in rows))


def independent_subset(field: Field, vectors: Sequence[Sequence], dim: int) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    if not vectors:
        return []
    cols = Matrix.from_columns(field, vectors, dim)
    return rref_rows(field, cols.rows, cols.ncols)[1]


class Subspace:
    """A subspace given by a basis, with coordinates of members."""

    def __init__(self, field: Field, ambient_dim: int, vectors: Sequence[Sequence]):
        self.field = field
        self.ambient_dim = ambient_dim
        idx = independent_subset(field, vectors, ambient_dim)
        self.basis: list[Vector] = [tuple(vectors[i]) for i in idx]
        k = len(self.basis)
        self.dim = k
        if k:
            S = Matrix.from_columns(field, self.basis, ambient_dim)
            self._rows = rref_rows(field, S.T.rows, ambient_dim)[1]
            square = Matrix(field, k, k, tuple(S.rows[i] for i in self._rows))
            self._inv = inverse(square)
            self._inv_cols = self._inv.T.rows
        else:
            self._rows, self._inv, self._inv_cols = [], None, ()

    def coords(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in the basis; ValueError when ``v`` is not a member."""
        v = tuple(v)
        if not self.dim:
            if not vec_is_zero(self.field, v):
                raise ValueError("vector not in the zero subspace")
            return ()
        f = self.field
        c = [f.zero] * self.dim
        for i, col in zip(self._rows, self._inv_cols):
            x = v[i]
            if x != f.zero:
                for j, y in enumerate(col):
                    if y != f.zero:
                        c[j] = f.add(c[j], f.mul(x, y))
        c = tuple(c)
        if self.embed(c) != v:
            raise ValueError("vector not in subspace")
        return c

    def contains(self, v: Sequence) -> bool:
        try:
            self.coords(v)
        except ValueError:
            return False
        return True

    def embed(self, c: Sequence) -> Vector:
        f = self.field
        out = [f.zero] * self.ambient_dim
        for ci, b in zip(c, self.basis):
            if ci != f.zero:
                for i, x in enumerate(b):
                    if x != f.zero:
                        out[i] = f.add(out[i], f.mul(ci, x))
        return tuple(out)
