"""Random generators shared by the test modules."""

from __future__ import annotations

import itertools
import random

import numpy as np

from dgmonad.cdg import Complex, ComplexCategory, TensorFunctor, tensor_nat
from dgmonad.corpus import field_algebra, truncated_polynomial
from dgmonad.fields import GF, Field
from dgmonad.graded import Z, Z2, Grading
from dgmonad.linalg import Matrix, kernel_basis

F2, F3 = GF(2), GF(3)


def rand_elt(k: Field, rng: random.Random):
    if k.order:
        return rng.choice(list(k.elements()))
    return k.from_int(rng.randint(-2, 2))


def rand_matrix(k: Field, m: int, n: int, rng: random.Random) -> Matrix:
    return Matrix(k, m, n, tuple(tuple(rand_elt(k, rng) for _ in range(n)) for _ in range(m)))


def _combo(k, vecs, length, rng):
    out = [k.zero] * length
    for v in vecs:
        c = rand_elt(k, rng)
        out = [k.add(a, k.mul(c, b)) for a, b in zip(out, v)]
    return out


def _annihilating(k, d: Matrix, rows: int, rng) -> Matrix:
    """Random ``rows × d.nrows`` matrix ``e`` with ``e d = 0``."""
    left = kernel_basis(d.T) if d.ncols else [tuple(k.one if i == j else k.zero for i in range(d.nrows))
                                              for j in range(d.nrows)]
    return Matrix(k, rows, d.nrows, tuple(tuple(_combo(k, left, d.nrows, rng)) for _ in range(rows)))


def rand_complex(k: Field, rng: random.Random, grading: Grading = Z, maxdim: int = 2, name=None) -> Complex:
    """A random complex with ``d² = 0``: degrees 0..2 over ``Z``, 0..1 over ``Z2``."""
    if grading == Z2:
        a, b = rng.randint(1, maxdim), rng.randint(1, maxdim)
        d0 = rand_matrix(k, b, a, rng)
        # d1 = K R L: columns of K span ker d0, rows of L kill im d0
        ker, left = kernel_basis(d0), kernel_basis(d0.T)
        if ker and left:
            K = Matrix.from_columns(k, ker, a)
            L = Matrix.from_rows(k, left, b)
            d1 = K @ rand_matrix(k, len(ker), len(left), rng) @ L
        else:
            d1 = Matrix.zeros(k, a, b)
        d = {n: m for n, m in ((0, d0), (1, d1)) if not m.is_zero()}
        return Complex(k, Z2, {0: a, 1: b}, d, name)
    dims = {n: rng.randint(0, maxdim) for n in range(3)}
    if not any(dims.values()):
        dims[0] = 1
    d0 = rand_matrix(k, dims[1], dims[0], rng)
    d1 = _annihilating(k, d0, dims[2], rng) if dims[1] else Matrix.zeros(k, dims[2], 0)
    d = {n: m for n, m in ((0, d0), (1, d1)) if m.nrows and m.ncols and not m.is_zero()}
    return Complex(k, Z, {n: v for n, v in dims.items() if v}, d, name)


def rand_chain_map(C: ComplexCategory, X: Complex, Y: Complex, rng: random.Random):
    """A random closed degree 0 morphism."""
    return rand_cocycle(C, X, Y, 0, rng)


def rand_morphism(C, X, Y, n, rng):
    k = C.hom_dim(X, Y, n)
    return C.element(X, Y, n, tuple(rand_elt(C.field, rng) for _ in range(k)))


def rand_algebra(k: Field, rng: random.Random):
    """``k`` or ``k[X]/(f)`` for a random monic quadratic ``f``."""
    if rng.random() < 0.25:
        return field_algebra(k)
    f = [rand_elt(k, rng), rand_elt(k, rng), k.one]
    return truncated_polynomial(k, f)


def rand_presentation(k: Field, rng: random.Random, grading: Grading = Z):
    """``(C, F, G, α, β, γ, δ, objects)`` built from tensoring functors on random complexes.

    ``F = V⊗-``, ``α: V⊗- => V'⊗-``, ``β: V'⊗- => V''⊗-``, ``G = W⊗-``, ``γ: W⊗- => W'⊗-``.
    """
    objs = [rand_complex(k, rng, grading, maxdim=1) for _ in range(2)]
    C = ComplexCategory(k, grading, objs)
    V, V1, V2, W, W1 = (rand_complex(k, rng, grading, maxdim=1) for _ in range(5))
    a = rand_chain_map(C, V, V1, rng)
    b = rand_chain_map(C, V1, V2, rng)
    c = rand_chain_map(C, W, W1, rng)
    TV, TV1, TV2, TW, TW1 = (TensorFunctor(C, X) for X in (V, V1, V2, W, W1))
    alpha = tensor_nat(C, a, TV, TV1)
    beta = tensor_nat(C, b, TV1, TV2)
    gamma = tensor_nat(C, c, TW, TW1)
    return C, TV, TW, alpha, beta, gamma, alpha, objs


def monad_setting(T, mode: str):
    """``(L, M, mu, all_degrees)`` as used for sections in the given mode."""
    from dgmonad.h0 import H0Category, H0Functor

    C = T.category
    if mode == "h0" and C.is_dg:
        L = H0Category(C)
        return L, H0Functor(T.functor, L, L), (lambda x: L.cls(T.mu[x])), False
    return C, T.functor, T.mu.component, True


def brute_force_sections(T, mode: str) -> list[dict]:
    """Every separability section, by enumerating each component over a finite field.

    Components on summed objects are determined by the summands, exactly as a
    section must be natural along inclusions and projections.
    """
    from dgmonad.dgcat import Morphism
    from dgmonad.separability import assemble, verify_section

    L, M, mu, all_deg = monad_setting(T, mode)
    k = L.field
    split = getattr(T.functor, "summands", None)
    S, derived = [], {}
    for x in T.objects:
        zs = [x]
        if split is not None:
            parts = split(x)
            if L is not T.category:
                parts = [(y, L.cls(i), L.cls(p)) for y, i, p in parts]
            derived[M(x)] = [(y, M(M(i)), M(p)) for y, i, p in parts]
            zs += [y for y, _, _ in parts]
        else:
            zs.append(M(x))
        for z in zs:
            if z not in S:
                S.append(z)
    derived = {z: v for z, v in derived.items() if z not in S}
    choices = []
    for z in S:
        Mz, MMz = M(z), M(M(z))
        basis = L.basis(Mz, MMz, 0)
        # μ∘σ and dσ are linear in σ: evaluate on the basis, then on every candidate at once
        lin = [L.compose(mu(z), e).coords for e in basis]
        target = L.identity(Mz).coords
        if all_deg and L.is_dg:
            lin = [a + L.d(e).coords for a, e in zip(lin, basis)]
            target = target + (k.zero,) * (len(lin[0]) - len(target)) if lin else target
        cands = all_vectors(k, len(basis))
        keep = _matches(k, cands, lin, target, len(target))
        choices.append([Morphism(Mz, MMz, 0, tuple(int(c) for c in row), k) for row in cands[keep]])
    out = []
    for combo in itertools.product(*choices):
        sec = assemble(L, dict(zip(S, combo)), derived)
        if verify_section(L, M, mu, list(T.objects), sec, all_deg):
            out.append(sec)
    return out


def all_vectors(k: Field, n: int):
    """Every vector of ``k^n`` as rows of an integer array (prime fields only)."""
    p = k.order
    idx = np.arange(p ** n, dtype=np.int64)
    return np.stack([(idx // p ** (n - 1 - i)) % p for i in range(n)], axis=1) if n else np.zeros((1, 0), np.int64)


def _matches(k: Field, cands, cols, target, m):
    p = k.order
    if not cols:
        return np.full(len(cands), all(t == k.zero for t in target))
    A = np.array(cols, dtype=np.int64).T.reshape(m, len(cols))
    vals = (cands @ A.T) % p
    return np.all(vals == np.array(target, dtype=np.int64), axis=1)


def count_solutions(A: Matrix, b) -> tuple[int, set]:
    """Number of solutions of ``A x = b`` by enumerating ``k^n``, and the solution set."""
    k = A.field
    X = all_vectors(k, A.ncols)
    if A.nrows:
        keep = _matches(k, X, [A.column(j) for j in range(A.ncols)], tuple(b), A.nrows)
    else:
        keep = np.ones(len(X), dtype=bool)
    sols = {tuple(int(c) for c in row) for row in X[keep]}
    return len(sols), sols


def rand_cocycle(C, X, Y, n: int, rng: random.Random):
    """A random closed morphism ``X -> Y`` of degree ``n``."""
    g = C.grading
    n = g.norm(n)
    H = C.hom(X, Y)
    k = H.dim(n)
    if not k:
        return C.zero(X, Y, n)
    if H.dim(g.norm(n + 1)):
        cyc = kernel_basis(H.d(n))
    else:
        cyc = [tuple(C.field.one if i == j else C.field.zero for i in range(k)) for j in range(k)]
    return C.element(X, Y, n, tuple(_combo(C.field, cyc, k, rng)))


def rand_depth1_twisted(P, objects, rng: random.Random):
    """Entries in two layers; every twist block runs from the first layer to the second.

    With a single layer of twisting ``q∘q = 0``, so Maurer-Cartan reduces to closed blocks.
    """
    C = P.base
    m = rng.randint(2, 3)
    cut = rng.randint(1, m - 1)
    entries = [(rng.choice(objects), rng.randint(-1, 1)) for _ in range(m)]
    q = {}
    for i in range(cut, m):
        for j in range(cut):
            (a, ra), (b, rb) = entries[j], entries[i]
            f = rand_cocycle(C, a, b, 1 + rb - ra, rng)
            if not f.is_zero():
                q[(i, j)] = f
    return P.make(entries, q)
