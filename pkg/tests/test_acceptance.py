"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Limits are wall-clock seconds and are part of each criterion; all
comparisons are exact.
"""

from __future__ import annotations

import io
import json
import random
import time
from contextlib import contextmanager

from helpers import (
    F2,
    F3,
    brute_force_sections,
    count_solutions,
    rand_algebra,
    rand_chain_map,
    rand_complex,
    rand_depth1_twisted,
    rand_matrix,
    rand_presentation,
)

from dgmonad.bousfield import classify_bousfield, collapse_fixture
from dgmonad.cdg import ComplexCategory, extension_algebra, point
from dgmonad.cli import run
from dgmonad.compatible import algebra_pair, algebra_pair_samples, check_compatible, check_psi_equivalence
from dgmonad.corpus import (
    check_complexes_commute,
    dual_numbers,
    dual_numbers_report,
    example_dual_numbers,
    example_group_action,
    example_swap_action,
    field_algebra,
    module_complexes,
    to_module,
)
from dgmonad.dgcat import Morphism
from dgmonad.em import ModuleCategory, free_module
from dgmonad.fields import GF, QQ
from dgmonad.graded import Z, Z2
from dgmonad.group_action import cyclic_group, group_action_monad, trivial_action
from dgmonad.h0 import check_h0_2functor
from dgmonad.karoubi import brute_force_splits, check_splitting, karoubi_envelope
from dgmonad.linalg import InconsistentSystem, solve_affine
from dgmonad.monads import algebra_monad, identity_monad
from dgmonad.pretr import PretrCategory, embedding, check_pretr_2functor, check_twisted_hom, validate_twisted
from dgmonad.separability import build_system, find_separability_section


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time the body, print one line, then fail on a false verdict or an overrun."""
    state = {"ok": False, "note": ""}
    t0 = time.perf_counter()
    try:
        yield state
    finally:
        dt = time.perf_counter() - t0
        ok = state["ok"] and dt < limit
        note = f" {state['note']}" if state["note"] else ""
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({dt:.2f}s, limit {limit:.0f}s){note}")
    assert state["ok"], f"criterion {number} verdict failed"
    assert dt < limit, f"criterion {number} took {dt:.2f}s, limit {limit}s"


def _cli(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, json.loads(out.getvalue())


def _certificate_holds(T, data) -> bool:
    """``y A = 0`` and ``y b != 0`` for the reported certificate, against a rebuilt system."""
    from dgmonad.h0 import H0Category, H0Functor

    C = T.category
    L = H0Category(C)
    M = H0Functor(T.functor, L, L)
    summands = {}
    for x in T.objects:
        summands[T.functor(x)] = [(y, L.cls(i), L.cls(p)) for y, i, p in T.functor.summands(x)]
    A, b, *_ = build_system(L, M, lambda x: L.cls(T.mu[x]), list(T.objects), False, False, summands)
    k = C.field
    y = [k.parse(c) for c in data]
    yA = [k.zero] * A.ncols
    for yi, row in zip(y, A.rows):
        if yi != k.zero:
            yA = [k.add(a, k.mul(yi, r)) for a, r in zip(yA, row)]
    yb = k.zero
    for yi, bi in zip(y, b):
        yb = k.add(yb, k.mul(yi, bi))
    return all(c == k.zero for c in yA) and yb != k.zero


def test_criterion_01_group_separability(tmp_path):
    cases = [("Z2", "F3", True), ("Z3", "F2", True), ("Z2", "Q", True), ("Z2", "F2", False), ("Z3", "F3", False)]
    worst, ok = 0.0, True
    with criterion(1, "M_G separability in H^0 mode (sections and certificates)", 5) as st:
        for group, fld, separable in cases:
            d = tmp_path / f"{group}_{fld}"
            assert run(["example", "group_action", "--field", fld, "--group", group, "--emit", str(d)],
                       io.StringIO()) == 0
            t0 = time.perf_counter()
            code, data = _cli(["separable", str(d / "workspace.json"), "--monad", "M", "--mode", "h0"])
            worst = max(worst, time.perf_counter() - t0)
            if separable:
                ok &= code == 0 and data["status"] == "pass" and bool(data["data"]["section"])
                ok &= all(c["status"] == "pass" for c in data["checks"])
            else:
                ok &= code == 1 and data["status"] == "infeasible"
                cert = data["checks"][0]["witness"]["certificate"]
                field = {"F2": GF(2), "F3": GF(3)}[fld]
                T = example_group_action(group, field)["monad"]
                ok &= _certificate_holds(T, cert)
        st["ok"] = ok and worst < 1.0
        st["note"] = f"slowest case {worst:.2f}s (each < 1s)"


def test_criterion_02_dual_numbers():
    with criterion(2, "dual numbers: forgetful functor unfaithful on H^0", 1) as st:
        ok = True
        for k in (GF(2), GF(3), QQ):
            b = example_dual_numbers(k)
            C, B, T, m = b["category"], b["object"], b["monad"], b["module"]
            Mod = ModuleCategory(T, [m])
            ok &= C.is_coboundary(C.identity(B))
            ok &= not Mod.is_coboundary(Mod.identity(m))
            rep = dual_numbers_report(b)
            ok &= rep.ok and rep.data["forgetful faithful on H0"] is False
        st["ok"] = ok


def test_criterion_03_free_forgetful_h0():
    rng = random.Random(3)
    count = 0
    with criterion(3, "dim H^0 EmHom(Fx, m) = dim H^0 Hom(x, Gm) on random algebra monads", 10) as st:
        ok = True
        while count < 24:
            k = rng.choice([F2, F3])
            A = rand_algebra(k, rng)
            C = ComplexCategory(k, Z, [])
            T = algebra_monad(C, A, [])
            x = rand_complex(k, rng, maxdim=1)
            mcs = module_complexes(A, 2)
            if rng.random() < 0.5:
                m = to_module(C, T, A, rng.choice(mcs))
            else:
                m = free_module(T, rand_complex(k, rng, maxdim=1))
            Fx = free_module(T, x)
            Mod = ModuleCategory(T, [Fx, m])
            ok &= Mod.h0(Fx, m).dim == C.h0(x, m.obj).dim
            count += 1
        st["ok"] = ok
        st["note"] = f"{count} instances"


def test_criterion_04_two_functor_laws():
    rng = random.Random(4)
    with criterion(4, "H^0 and Pretr strict 2-functor laws", 30) as st:
        ok, n = True, 0
        for _ in range(100):
            k, g = rng.choice([F2, F3]), rng.choice([Z, Z2])
            C, F, G, a, b, c, d, objs = rand_presentation(k, rng, g)
            ok &= check_h0_2functor(F, G, a, b, c, d, objs).ok
            P = PretrCategory(C)
            f = rand_chain_map(C, objs[0], objs[1], rng)
            Ts = [P.embed(x) for x in objs] + [P.shift(P.embed(objs[0]), 1), P.cone(embedding(P)(f))]
            ok &= check_pretr_2functor(F, G, a, b, c, d, P, Ts).ok
            n += 1
        st["ok"] = ok
        st["note"] = f"{n} presentations each"


def test_criterion_05_twisted_complexes():
    rng = random.Random(5)
    with criterion(5, "D^2 = 0 and cone(id) contractible on depth-1 twisted complexes", 30) as st:
        ok, n = True, 0
        while n < 100:
            k, g = rng.choice([F2, F3]), rng.choice([Z, Z2])
            objs = [rand_complex(k, rng, g, maxdim=1) for _ in range(2)]
            P = PretrCategory(ComplexCategory(k, g, objs))
            T = rand_depth1_twisted(P, objs, rng)
            ok &= validate_twisted(P, T).ok
            ok &= check_twisted_hom(P, T, T).ok
            cone = P.cone(P.identity(T))
            ok &= validate_twisted(P, cone).ok
            ok &= P.is_coboundary(P.identity(cone))
            n += 1
        st["ok"] = ok
        st["note"] = f"{n} twisted complexes"


def _idempotents(C, X):
    """All closed degree 0 idempotents of ``X`` by enumeration."""
    import itertools

    k = C.field
    out = []
    for c in itertools.product(list(k.elements()), repeat=C.hom_dim(X, X, 0)):
        e = Morphism(X, X, 0, c, k)
        if C.compose(e, e) == e and C.is_closed(e):
            out.append(e)
    return out


def test_criterion_06_karoubi():
    rng = random.Random(6)
    with criterion(6, "Karoubi envelope splits every supplied idempotent (F2, brute force)", 10) as st:
        ok, n = True, 0
        tries = 0
        while n < 12 and tries < 200:
            tries += 1
            X = rand_complex(F2, rng, rng.choice([Z, Z2]), maxdim=2)
            C = ComplexCategory(F2, X.grading, [X])
            if sum(C.hom(X, X).dims.values()) > 8:
                continue
            es = _idempotents(C, X)
            K = karoubi_envelope(C, es)
            ok &= check_splitting(K).ok
            ok &= all(brute_force_splits(K, e) for e in es)
            n += 1
        st["ok"] = ok and n >= 12
        st["note"] = f"{n} objects"


def test_criterion_07_psi_equivalence():
    k = GF(2)
    algs = {"k": field_algebra(k), "k[X]/(X^2)": dual_numbers(k), "F4": extension_algebra(k, GF(2, 2))}
    C = ComplexCategory(k, Z, [point(k, Z, name="k")])
    with criterion(7, "Ψ equivalence and hom dimensions for compatible pairs", 10) as st:
        ok = True
        for A1 in algs.values():
            for A2 in algs.values():
                pair = algebra_pair(C, A1, A2)
                ok &= check_compatible(pair).ok
                ok &= check_psi_equivalence(pair, algebra_pair_samples(pair)).ok
        st["ok"] = ok
        st["note"] = f"{len(algs) ** 2} ordered pairs"


def test_criterion_08_bousfield():
    with criterion(8, "Bousfield: collapse fixture yes (kernel {b}), dual numbers no", 1) as st:
        ok = True
        for k in (GF(2), GF(3)):
            C, L, eta, objs = collapse_fixture(k)
            v, ker = classify_bousfield(L, eta, objs)
            ok &= v.ok and ker == ["b"]
            b = example_dual_numbers(k)
            T = b["monad"]
            v, _ = classify_bousfield(T.functor, T.eta, b["category"].objects)
            ok &= not v.ok
        st["ok"] = ok


def _separability_instance(rng):
    k = rng.choice([F2, F3])
    kind = rng.choice(["group", "swap", "identity", "complex_group"])
    if kind == "group":
        return example_group_action("Z2", k)["monad"]
    if kind == "swap":
        T = example_swap_action(k)["monad"]
        return T.with_objects(rng.sample(T.objects, 1))
    X = rand_complex(k, rng, maxdim=rng.randint(1, 2))
    C = ComplexCategory(k, Z, [X])
    if kind == "identity":
        return identity_monad(C)
    return group_action_monad(trivial_action(C, cyclic_group(2)))


def test_criterion_09_solver_oracles():
    rng = random.Random(9)
    with criterion(9, "solve_affine and find_separability_section against enumeration", 60) as st:
        ok, n_lin, n_sep = True, 0, 0
        while n_lin < 50:
            k = rng.choice([F2, F3])
            nvar = rng.randint(1, 12)
            A = rand_matrix(k, rng.randint(1, 8), nvar, rng)
            b = tuple(rng.choice(list(k.elements())) for _ in range(A.nrows))
            count, sols = count_solutions(A, b)
            try:
                x, kernel = solve_affine(A, b)
                ok &= count == k.order ** len(kernel) and tuple(x) in sols
            except InconsistentSystem:
                ok &= count == 0
            n_lin += 1
        while n_sep < 50:
            T = _separability_instance(rng)
            mode = rng.choice(["h0", "strict"])
            v, sec = find_separability_section(T, mode)
            k = T.category.field
            if v.data["unknowns"] > 12:
                continue
            found = brute_force_sections(T, mode)
            if sec is None:
                ok &= not found
            else:
                ok &= len(found) == k.order ** v.data["solution_space_dim"] and sec in found
            n_sep += 1
        st["ok"] = ok
        st["note"] = f"{n_lin} linear systems, {n_sep} separability instances"


def test_criterion_10_complexes_commute():
    k = GF(2)
    algs = [field_algebra(k), dual_numbers(k), extension_algebra(k, GF(2, 2))]
    with criterion(10, "check_complexes_commute for k, k[X]/(X^2), F4/F2 at bound 2", 10) as st:
        st["ok"] = all(check_complexes_commute(A, 2).ok for A in algs)

