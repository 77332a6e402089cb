"""Separability sections of a monad as one affine linear system.

A section is a family ``σ_z: M z -> M² z`` of degree 0 with

* ``μ_z ∘ σ_z = id``,
* naturality ``σ_w ∘ M f = M² f ∘ σ_z`` for basis morphisms ``f: z -> w``,
* the bimodule conditions ``M μ_x ∘ σ_(Mx) = σ_x ∘ μ_x = μ_(Mx) ∘ M σ_x``,

for ``z, w`` ranging over the listed objects and their images under ``M``.
In ``strict`` mode the unknowns are cochains (also required closed); in
``h0`` mode they are classes in the H^0 category.
"""

from __future__ import annotations

from typing import Callable

from .dgcat import LinearCategory, Morphism
from .h0 import H0Category, H0Functor
from .linalg import InconsistentSystem, Matrix, Subspace, independent_subset, solve_affine
from .monads import Monad
from .report import INFEASIBLE, Verdict


def _unit_vec(fld, k, j):
    return tuple(fld.one if i == j else fld.zero for i in range(k))


def naturality_generators(L: LinearCategory, S: list, z, w, deg: int, all_degrees: bool) -> list[Morphism]:
    """Basis morphisms ``z -> w`` whose naturality squares must be imposed.

    For endomorphisms, anything spanned by composites ``z -> u -> z`` through
    another object ``u`` of ``S`` is natural once the (fully imposed)
    squares for ``z -> u`` and ``u -> z`` hold, so only a complement is kept.
    """
    basis = L.basis(z, w, deg)
    if z != w or not basis:
        return basis
    g = L.grading
    vecs = []
    for u in S:
        if u == z:
            continue
        for d1 in (L.hom_degrees(z, u) if all_degrees else [0]):
            d2 = g.norm(deg - d1)
            gs = L.basis(u, w, d2)
            for f in L.basis(z, u, d1):
                vecs.extend(L.compose(h, f).coords for h in gs)
    if not vecs:
        return basis
    span = Subspace(L.field, len(basis), vecs)
    keep = independent_subset(L.field, span.basis + [e.coords for e in basis], len(basis))
    return [basis[i - span.dim] for i in keep if i >= span.dim]


def build_system(L: LinearCategory, M: Callable, mu: Callable, listed: list,
                 closed: bool = False, all_degrees: bool = False, summands: dict | None = None):
    """The matrix ``A``, right-hand side ``b`` and bookkeeping for the section equations.

    ``M`` applies the monad functor, ``mu(x)`` returns ``μ_x`` in ``L``.
    ``summands`` optionally maps ``M x`` to ``[(y, ι, π)]`` with ``Σ ι∘π = id``;
    naturality then forces ``σ_(Mx) = Σ M²ι ∘ σ_y ∘ Mπ``, so ``M x`` carries no
    unknowns of its own and only the summands ``y`` do.
    """
    fld = L.field
    summands = summands or {}
    S = []
    for x in listed:
        parts = summands.get(M(x))
        for z in [x] + ([y for y, _, _ in parts] if parts else [M(x)]):
            if z not in S:
                S.append(z)
    derived = {z: [(y, M(M(i)), M(p)) for y, i, p in parts]
               for z, parts in summands.items() if z not in S}
    offsets, dims, off = {}, {}, 0
    for z in S:
        k = L.hom_dim(M(z), M(M(z)), 0)
        offsets[z], dims[z] = off, k
        off += k
    n = off

    def basis(z):
        Mz, MMz = M(z), M(M(z))
        return [Morphism(Mz, MMz, 0, _unit_vec(fld, dims[z], j), fld) for j in range(dims[z])]

    bases = {z: basis(z) for z in S}
    groups = []  # (label, dim, rhs, [(z, fn)])

    for z in S:
        idz = L.identity(M(z))
        groups.append((f"μ∘σ = id at {z}", len(idz.coords), idz.coords,
                       [(z, lambda e, z=z: L.compose(mu(z), e))]))
        if closed:
            d1 = L.hom_dim(M(z), M(M(z)), 1)
            if d1:
                groups.append((f"dσ = 0 at {z}", d1, (fld.zero,) * d1, [(z, L.d)]))
    for z in S:
        for w in S:
            degs = L.hom_degrees(z, w) if all_degrees else [0]
            for deg in degs:
                for idx, f in enumerate(naturality_generators(L, S, z, w, deg, all_degrees)):
                    Mf, MMf = M(f), M(M(f))
                    k = L.hom_dim(M(z), M(M(w)), deg)
                    if not k:
                        continue
                    contrib = [(w, lambda e, Mf=Mf: L.compose(e, Mf)),
                               (z, lambda e, MMf=MMf: -L.compose(MMf, e))]
                    groups.append((f"naturality {z}->{w} deg {deg} #{idx}", k, (fld.zero,) * k, contrib))
    for x in listed:
        Mx = M(x)
        mux, muMx = mu(x), mu(Mx)
        Mmux = M(mux)
        k = L.hom_dim(M(Mx), M(Mx), 0)
        groups.append((f"Mμ∘σ_M = σ∘μ at {x}", k, (fld.zero,) * k,
                       [(Mx, lambda e, Mmux=Mmux: L.compose(Mmux, e)),
                        (x, lambda e, mux=mux: -L.compose(e, mux))]))
        groups.append((f"σ∘μ = μ_M∘Mσ at {x}", k, (fld.zero,) * k,
                       [(x, lambda e, mux=mux, muMx=muMx: L.compose(e, mux) - L.compose(muMx, M(e)))]))

    nrows = sum(g[1] for g in groups)
    cols = [[fld.zero] * nrows for _ in range(n)]
    rhs, labels = [], []
    r0 = 0
    for label, k, b, contrib in groups:
        for z, fn in contrib:
            for y, wrap in _expansion(L, z, derived):
                for j, e in enumerate(bases[y]):
                    v = fn(wrap(e)).coords
                    col = cols[offsets[y] + j]
                    for i, c in enumerate(v):
                        if c != fld.zero:
                            col[r0 + i] = fld.add(col[r0 + i], c)
        rhs.extend(b)
        labels.append((label, r0, k))
        r0 += k
    A = Matrix(fld, nrows, n, tuple(tuple(cols[j][i] for j in range(n)) for i in range(nrows)))
    return A, tuple(rhs), S, offsets, dims, labels, derived


def _expansion(L, z, derived):
    """Pairs ``(y, wrap)``: the unknown at ``y`` enters ``σ_z`` as ``wrap(e)``."""
    if z not in derived:
        return [(z, lambda e: e)]
    return [(y, lambda e, MMi=MMi, Mp=Mp: L.compose_many(MMi, e, Mp)) for y, MMi, Mp in derived[z]]


def assemble(L, sec: dict, derived: dict) -> dict:
    """Fill in ``σ`` on the summed objects from its values on the summands."""
    out = dict(sec)
    for z, parts in derived.items():
        acc = None
        for y, MMi, Mp in parts:
            t = L.compose_many(MMi, sec[y], Mp)
            acc = t if acc is None else acc + t
        out[z] = acc
    return out


def find_separability_section(T: Monad, mode: str = "h0") -> tuple[Verdict, dict | None]:
    """Solve for a section; returns the verdict and ``{object: σ}`` (or ``None``)."""
    if mode not in ("strict", "h0"):
        raise ValueError(f"unknown mode {mode!r}")
    C = T.category
    if mode == "h0" and C.is_dg:
        L = H0Category(C)
        HM = H0Functor(T.functor, L, L)
        M = HM
        mu = lambda x: L.cls(T.mu[x])
        closed, all_deg = False, False
    else:
        L = C
        M = T.functor
        mu = T.mu.component
        closed, all_deg = C.is_dg, True
    summands = {}
    split = getattr(T.functor, "summands", None)
    if split is not None:
        for x in T.objects:
            parts = split(x)
            if mode == "h0" and C.is_dg:
                parts = [(y, L.cls(i), L.cls(p)) for y, i, p in parts]
            summands[T.functor(x)] = parts
    A, b, S, offsets, dims, labels, derived = build_system(L, M, mu, list(T.objects), closed, all_deg,
                                                           summands)
    v = Verdict(f"separability of {T.name} ({mode})", field=repr(C.field))
    v.data["unknowns"] = A.ncols
    v.data["equations"] = A.nrows
    try:
        x, kernel = solve_affine(A, b)
    except InconsistentSystem as exc:
        cert = exc.certificate
        used = [lab for lab, r0, k in labels if any(c != C.field.zero for c in cert[r0:r0 + k])]
        v.add("section exists", False, {"certificate": [C.field.format(c) for c in cert],
                                        "equations": used}, failure=INFEASIBLE)
        return v, None
    sec = {}
    for z in S:
        o, k = offsets[z], dims[z]
        sec[z] = Morphism(M(z), M(M(z)), 0, tuple(x[o:o + k]), C.field)
    sec = assemble(L, sec, derived)
    v.add("section exists", True)
    v.add("section verified", verify_section(L, M, mu, list(T.objects), sec, all_deg))
    v.data["section"] = {str(z): [C.field.format(c) for c in s.coords] for z, s in sec.items()}
    v.data["solution_space_dim"] = len(kernel)
    return v, sec


def verify_section(L: LinearCategory, M, mu, listed, sec: dict, all_degrees: bool = False) -> bool:
    """Re-check every defining equation by direct evaluation."""
    for z, s in sec.items():
        if L.compose(mu(z), s) != L.identity(M(z)):
            return False
        if L.is_dg and all_degrees and not L.is_closed(s):
            return False
    for z in sec:
        for w in sec:
            for deg in (L.hom_degrees(z, w) if all_degrees else [0]):
                for f in L.basis(z, w, deg):
                    if L.compose(sec[w], M(f)) != L.compose(M(M(f)), sec[z]):
                        return False
    for x in listed:
        Mx = M(x)
        a = L.compose(M(mu(x)), sec[Mx])
        b = L.compose(sec[x], mu(x))
        c = L.compose(mu(Mx), M(sec[x]))
        if not (a == b == c):
            return False
    return True
