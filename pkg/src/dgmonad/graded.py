"""Graded vector spaces with degree +1 differentials.

Gradings are by the integers (finite support) or by Z/2.  A
``DGSpace`` stores one dimension and one differential block per degree;
blocks that are absent are zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fields import Field
from .linalg import (
    InconsistentSystem,
    Matrix,
    Subspace,
    kernel_basis,
    solve_affine,
    vec_is_zero,
)
from .report import Verdict


@dataclass(frozen=True)
class Grading:
    kind: str  # "Z" or "Z2"

    def __post_init__(self):
        if self.kind not in ("Z", "Z2"):
            raise ValueError(f"unknown grading {self.kind!r}")

    def norm(self, n: int) -> int:
        return n % 2 if self.kind == "Z2" else n

    def parity(self, n: int) -> int:
        return n % 2

    def __str__(self):
        return self.kind


Z = Grading("Z")
Z2 = Grading("Z2")


def sign(field: Field, n: int):
    """(-1)^n as a field element."""
    return field.one if n % 2 == 0 else field.neg(field.one)


class NotClosed(ValueError):
    pass


class NotACoboundary(ArithmeticError):
    """``z`` is closed but not exact; ``certificate`` proves it."""

    def __init__(self, certificate, message="element is not a coboundary"):
        super().__init__(message)
        self.certificate = certificate


class DGSpace:
    """A finite dimensional graded space with a differential of degree +1."""

    def __init__(self, field: Field, grading: Grading, dims: dict[int, int],
                 d: dict[int, Matrix] | None = None):
        self.field = field
        self.grading = grading
        self.dims = {grading.norm(k): v for k, v in dims.items() if v}
        self._d = {}
        for k, m in (d or {}).items():
            k = grading.norm(k)
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ValueError(f"differential at degree {k} has shape {m.shape}, "
                                 f"expected {(self.dim(k + 1), self.dim(k))}")
            if not m.is_zero():
                self._d[k] = m
        self._cohomology: dict[int, Cohomology] = {}

    def dim(self, n: int) -> int:
        return self.dims.get(self.grading.norm(n), 0)

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def d(self, n: int) -> Matrix:
        n = self.grading.norm(n)
        m = self._d.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.dim(n + 1), self.dim(n))
        return m

    def has_zero_d(self, n: int) -> bool:
        return self.grading.norm(n) not in self._d

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def zero(self, n: int) -> tuple:
        return (self.field.zero,) * self.dim(n)

    def apply_d(self, n: int, v: Sequence) -> tuple:
        if self.has_zero_d(n):
            return self.zero(n + 1)
        return self.d(n) @ tuple(v)

    def cohomology(self, n: int) -> Cohomology:
        n = self.grading.norm(n)
        c = self._cohomology.get(n)
        if c is None:
            c = self._cohomology[n] = Cohomology(self, n)
        return c

    def __eq__(self, other):
        return (isinstance(other, DGSpace) and self.field == other.field
                and self.grading == other.grading and self.dims == other.dims
                and self._d == other._d)

    def __repr__(self):
        return f"DGSpace({self.grading}, dims={self.dims})"


@dataclass(frozen=True)
class HomogeneousElement:
    space: DGSpace
    degree: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.space.dim(self.degree):
            raise ValueError("coordinate vector does not match the degree's dimension")

    def d(self) -> HomogeneousElement:
        return HomogeneousElement(self.space, self.space.grading.norm(self.degree + 1),
                                  self.space.apply_d(self.degree, self.coords))

    def is_closed(self) -> bool:
        return vec_is_zero(self.space.field, self.space.apply_d(self.degree, self.coords))


class Cohomology:
    """Cohomology at one degree with a chosen basis of cocycle representatives."""

    def __init__(self, space: DGSpace, n: int):
        self.space = space
        self.degree = n
        field = space.field
        dim = space.dim(n)
        self.ambient_dim = dim
        self.trivial_d = space.has_zero_d(n) and space.has_zero_d(n - 1)
        if self.trivial_d:
            self._cocycles = None
            self.boundaries = Subspace(field, dim, [])
            self._reps = None
            self._zspace = None
        else:
            self._cocycles = kernel_basis(space.d(n)) if dim else []
            prev = space.d(n - 1)
            self.boundaries = Subspace(field, dim, prev.columns())
            nb = self.boundaries.dim
            z = Subspace(field, dim, self.boundaries.basis + list(self._cocycles))
            self._reps = z.basis[nb:]
            self._zspace = z
        self.dim = dim if self.trivial_d else len(self._reps)

    def _unit_basis(self) -> list[tuple]:
        f, dim = self.space.field, self.ambient_dim
        return [tuple(f.one if i == j else f.zero for i in range(dim)) for j in range(dim)]

    @property
    def cocycles(self) -> list[tuple]:
        if self._cocycles is None:
            self._cocycles = self._unit_basis()
        return self._cocycles

    @property
    def reps(self) -> list[tuple]:
        if self._reps is None:
            self._reps = self._unit_basis()
        return self._reps

    def classify(self, z: Sequence) -> tuple:
        """Coordinates of the class of the cocycle ``z`` in the representative basis."""
        if self.trivial_d:
            return tuple(z)
        if not vec_is_zero(self.space.field, self.space.apply_d(self.degree, z)):
            raise NotClosed("cannot take the class of a non-closed element")
        c = self._zspace.coords(z)
        return c[self.boundaries.dim:]

    def lift(self, c: Sequence) -> tuple:
        if self.trivial_d:
            return tuple(c)
        f = self.space.field
        out = [f.zero] * self.ambient_dim
        for ci, r in zip(c, self.reps):
            if ci != f.zero:
                for i, x in enumerate(r):
                    if x != f.zero:
                        out[i] = f.add(out[i], f.mul(ci, x))
        return tuple(out)


def cohomology_at(V: DGSpace, n: int) -> tuple[int, list[tuple]]:
    """Dimension of H^n(V) and cocycles whose classes form a basis."""
    c = V.cohomology(n)
    return c.dim, list(c.reps)


def primitive(V: DGSpace, n: int, z: Sequence) -> tuple:
    """``g`` of degree ``n - 1`` with ``d g = z``.

    Raises ``NotClosed`` if ``d z != 0`` and ``NotACoboundary`` otherwise
    when no primitive exists.
    """
    z = tuple(z)
    field = V.field
    if len(z) != V.dim(n):
        raise ValueError("coordinate vector does not match the degree's dimension")
    if not vec_is_zero(field, V.apply_d(n, z)):
        raise NotClosed(f"d z != 0 at degree {n}")
    if vec_is_zero(field, z):
        return V.zero(n - 1)
    try:
        g, _ = solve_affine(V.d(n - 1), z)
    except InconsistentSystem as exc:
        raise NotACoboundary(exc.certificate) from None
    return g


def is_coboundary(V: DGSpace, n: int, z: Sequence) -> bool:
    try:
        primitive(V, n, z)
    except NotACoboundary:
        return False
    return True


def validate_dg(V: DGSpace, subject: str = "dg-space") -> Verdict:
    v = Verdict(subject, field=repr(V.field))
    degs = V.degrees() if V.grading.kind == "Z" else [0, 1]
    bad = None
    for n in degs:
        sq = V.d(n + 1) @ V.d(n)
        if not sq.is_zero():
            bad = n
            break
    v.add("d∘d = 0", bad is None, witness=None if bad is None else {"degree": bad})
    return v


def euler_characteristic(V: DGSpace) -> int:
    return sum((-1) ** n * k for n, k in V.dims.items())


def cohomological_euler_characteristic(V: DGSpace) -> int:
    return sum((-1) ** n * V.cohomology(n).dim for n in V.degrees())


def direct_sum(spaces: Iterable[DGSpace]) -> DGSpace:
    spaces = list(spaces)
    field, grading = spaces[0].field, spaces[0].grading
    degs = sorted({n for s in spaces for n in s.dims})
    dims = {n: sum(s.dim(n) for s in spaces) for n in degs}
    d = {}
    for n in degs:
        rows = [[field.zero] * dims[n] for _ in range(dims.get(grading.norm(n + 1), 0))]
        ro = co = 0
        for s in spaces:
            block = s.d(n)
            for i, row in enumerate(block.rows):
                for j, x in enumerate(row):
                    rows[ro + i][co + j] = x
            ro += s.dim(n + 1)
            co += s.dim(n)
        d[n] = Matrix(field, len(rows), dims[n], tuple(tuple(r) for r in rows))
    return DGSpace(field, grading, dims, d)
