"""Command line front end: one workspace file in, one JSON verdict report out.

Exit codes: 0 every check passed, 1 a check failed on valid input,
2 invalid input (I/O, syntax or validation), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable

from . import __version__
from .bousfield import classify_bousfield, h0_monad_from_bousfield
from .cdg import extension_algebra
from .compatible import (
    CompatiblePair,
    algebra_pair_samples,
    check_compatible,
    check_psi_equivalence,
    compose_compatible,
    swap_exchange,
)
from .corpus import (
    EXAMPLES,
    check_complexes_commute,
    dual_numbers,
    example_bousfield,
    example_dual_numbers,
    example_field_extension,
    example_group_action,
    example_swap_action,
    field_algebra,
    field_by_name,
)
from .dgcat import Morphism, PresentationError, validate_dg_functor
from .em import ModuleCategory, check_module, free_subcategory
from .exactadj import exactadj_pipeline
from .fields import FieldError
from .h0 import H0Category
from .karoubi import (
    KaroubiEnvelope,
    NotIdempotent,
    brute_force_splits,
    check_splitting,
    extend_monad_karoubi,
)
from .monads import check_dg_monad, check_weak_monad
from .pretr import PretrFunctor, validate_twisted
from .report import Verdict
from .separability import find_separability_section
from .workspace import Workspace, WorkspaceError, ingest, write_bundle

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    """Bad command arguments or references into the workspace."""


# --- helpers --------------------------------------------------------------------

def _ref(ws: Workspace, section: str, name: str):
    try:
        return ws.get(section, name)
    except WorkspaceError as exc:
        raise InputError(exc.message) from None


def _category_objects(ws: Workspace, cat: str, names) -> list:
    if cat not in ws.categories:
        raise InputError(f"no category named {cat!r}")
    objs = ws.objects[cat]
    if not names:
        return list(objs.values())
    missing = [n for n in names if n not in objs]
    if missing:
        raise InputError(f"unknown objects {missing} in {cat}")
    return [objs[n] for n in names]


def _twisted_or_object(ws: Workspace, name: str, category: str | None):
    if name in ws.twisted:
        T = ws.twisted[name]
        cat = ws.spec["twisted"][name]["category"]
        return ws.pretr_of(cat), T
    if category is None:
        raise InputError(f"{name!r} is not a twisted complex; pass --category to embed an object")
    objs = ws.objects.get(category)
    if objs is None or name not in objs:
        raise InputError(f"no twisted complex or object {name!r}")
    P = ws.pretr_of(category)
    return P, P.embed(objs[name])


def _dims(d: dict) -> dict:
    return {str(n): k for n, k in sorted(d.items())}


# --- commands -----------------------------------------------------------------------

def cmd_validate(ws: Workspace, args) -> Verdict:
    v = Verdict("workspace", field=repr(ws.field))
    for section in ("categories", "functors", "naturals", "monads", "modules", "twisted", "actions"):
        for name in getattr(ws, section):
            v.add(f"{section}/{name} validates", True)
    for name, T in ws.monads.items():
        v.data.setdefault("monads", {})[name] = {"objects": [str(x) for x in T.objects]}
    return v


def cmd_h0(ws: Workspace, args) -> Verdict:
    C = _ref(ws, "categories", args.category)
    objs = _category_objects(ws, args.category, args.objects)
    H = H0Category(C)
    v = Verdict(f"H^0 of {args.category}", field=repr(C.field))
    table = []
    for a in objs:
        for b in objs:
            dims = {n: H.hom_dim(a, b, n) for n in C.hom_degrees(a, b)}
            table.append({"source": str(a), "target": str(b), "H": _dims({n: k for n, k in dims.items() if k})})
    v.add("cohomology computed", True)
    v.data["homs"] = table
    return v


def cmd_check_monad(ws: Workspace, args) -> Verdict:
    return check_dg_monad(_ref(ws, "monads", args.monad))


def cmd_check_weak_monad(ws: Workspace, args) -> Verdict:
    return check_weak_monad(_ref(ws, "monads", args.monad))


def cmd_separable(ws: Workspace, args) -> Verdict:
    v, _ = find_separability_section(_ref(ws, "monads", args.monad), mode=args.mode)
    return v


def cmd_em_hom(ws: Workspace, args) -> Verdict:
    m1, m2 = _ref(ws, "modules", args.source), _ref(ws, "modules", args.target)
    T = ws.monads[ws.spec["modules"][args.source]["monad"]]
    if ws.monads[ws.spec["modules"][args.target]["monad"]] is not T:
        raise InputError("modules over different monads")
    mode = "weak" if args.weak else "strict"
    v = Verdict(f"EmHom({args.source}, {args.target})", field=repr(T.category.field))
    for nm, m in ((args.source, m1), (args.target, m2)):
        v.extend(check_module(T, m, mode), prefix=nm)
    if not v.ok:
        return v
    Mod = ModuleCategory(T, [m1, m2], weak=args.weak)
    C = T.category
    H = Mod.hom(m1, m2)
    fmt = C.field.format
    v.data["dims"] = _dims(H.dims)
    v.data["H0"] = Mod.h0(m1, m2).dim
    v.data["basis"] = [{"degree": n, "coords": [fmt(c) for c in Mod.embed(f).coords]}
                       for n in H.degrees() for f in Mod.basis(m1, m2, n)]
    if m1 == m2:
        over_base = C.is_dg and C.is_coboundary(C.identity(m1.obj))
        over_monad = Mod.is_dg and Mod.is_coboundary(Mod.identity(m1))
        v.data["id coboundary over the base"] = bool(over_base)
        v.data["id coboundary over the monad"] = bool(over_monad)
        v.data["forgetful faithful on H0"] = not (over_base and not over_monad)
    return v


def cmd_free_sub(ws: Workspace, args) -> Verdict:
    T = _ref(ws, "monads", args.monad)
    gens = T.objects
    if args.objects:
        names = [str(x) for x in T.objects]
        missing = [g for g in args.objects if g not in names]
        if missing:
            raise InputError(f"generators {missing} are not listed objects of {args.monad}")
        gens = [x for x in T.objects if str(x) in args.objects]
    Mod = free_subcategory(T, gens, weak=args.weak)
    v = Verdict(f"free modules of {T.name}", field=repr(T.category.field))
    bad = next(({"object": str(m.obj)} for m in Mod.objects if not check_module(T, m).ok), None)
    v.add("free modules are modules", bad is None, bad)
    v.data["homs"] = [{"source": str(x), "target": str(y), "dims": _dims(Mod.hom(a, b).dims),
                       "H0": Mod.h0(a, b).dim}
                      for x, a in zip(gens, Mod.objects) for y, b in zip(gens, Mod.objects)]
    return v


def cmd_cone(ws: Workspace, args) -> Verdict:
    P, T = _twisted_or_object(ws, args.twisted, args.category)
    cone = P.cone(P.identity(T))
    v = Verdict(f"cone(id) on {args.twisted}", field=repr(P.field))
    v.extend(validate_twisted(P, cone), prefix="cone")
    ident = P.identity(cone)
    contractible = P.is_coboundary(ident)
    w = None
    if contractible:
        h = P.primitive(ident)
        w = {"homotopy": [P.field.format(c) for c in h.coords]}
    v.add("cone(id) contractible", contractible, w)
    v.data["entries"] = [[str(a), r] for a, r in cone.entries]
    return v


def cmd_shift(ws: Workspace, args) -> Verdict:
    P, T = _twisted_or_object(ws, args.twisted, args.category)
    S = P.shift(T, args.by)
    v = Verdict(f"{args.twisted}[{args.by}]", field=repr(P.field))
    v.extend(validate_twisted(P, S), prefix="shift")
    v.add("shift round trip", P.shift(S, -args.by) == T)
    end_t, end_s = P.hom(T, T).dims, P.hom(S, S).dims
    v.add("End complex unchanged by shifting", end_t == end_s)
    v.data["entries"] = [[str(a), r] for a, r in S.entries]
    v.data["q"] = [{"row": i, "col": j, "coords": [P.field.format(c) for c in cs]} for (i, j), cs in S.q]
    return v


def cmd_pretr(ws: Workspace, args) -> Verdict:
    F = _ref(ws, "functors", args.functor)
    sname, tname = ws.category_name(F.source), ws.category_name(F.target)
    P, Q = ws.pretr_of(sname), ws.pretr_of(tname)
    PF = PretrFunctor(F, P, Q)
    names = args.twisted or [n for n, s in ws.spec["twisted"].items() if s["category"] == sname]
    objs = [P.embed(x) for x in ws.objects[sname].values()]
    for n in names:
        if n not in ws.twisted or ws.spec["twisted"][n]["category"] != sname:
            raise InputError(f"{n!r} is not a twisted complex over {sname}")
        objs.append(ws.twisted[n])
    v = Verdict(f"Pretr({args.functor})", field=repr(F.target.field))
    v.extend(validate_dg_functor(PF, objs), prefix="functor")
    bad = next(({"object": str(T)} for T in objs if not validate_twisted(Q, PF(T)).ok), None)
    v.add("images satisfy Maurer-Cartan", bad is None, bad)
    bad = None
    for T in objs:
        if PF(P.shift(T, 1)) != Q.shift(PF(T), 1) or PF(P.cone(P.identity(T))) != Q.cone(Q.identity(PF(T))):
            bad = {"object": str(T)}
            break
    v.add("commutes with shift and cone", bad is None, bad)
    return v


def cmd_karoubi(ws: Workspace, args) -> Verdict:
    C = _ref(ws, "categories", args.category)
    objs = ws.objects[args.category]
    es = []
    for name, coords in args.idempotent or []:
        if name not in objs:
            raise InputError(f"unknown object {name!r}")
        try:
            vals = json.loads(coords)
            x = objs[name]
            e = Morphism(x, x, 0, tuple(C.field.parse(str(c)) for c in vals), C.field)
        except (ValueError, FieldError) as exc:
            raise InputError(f"bad idempotent coordinates {coords!r}: {exc}") from None
        if len(e.coords) != C.hom_dim(x, x, 0):
            raise InputError(f"idempotent on {name} needs {C.hom_dim(x, x, 0)} coordinates")
        es.append(e)
    try:
        K = KaroubiEnvelope(C, es)
    except NotIdempotent as exc:
        v = Verdict(f"Karoubi envelope of {args.category}", field=repr(C.field))
        v.add("supplied morphisms are idempotent", False, {"object": str(exc.args[0]) if exc.args else None})
        return v
    v = check_splitting(K)
    if C.field.order is not None:
        bad = None
        for e in es:
            x = e.source
            if C.field.order ** (2 * C.hom_dim(x, x, 0)) <= 1 << 20 and not brute_force_splits(K, e):
                bad = {"object": str(x)}
        v.add("brute force splitting", bad is None, bad)
    if args.monad:
        T = _ref(ws, "monads", args.monad)
        if T.category is not C:
            raise InputError(f"{args.monad} does not live on {args.category}")
        v.extend(check_dg_monad(extend_monad_karoubi(T, K)), prefix="extended monad")
    v.data["objects"] = [str(P) for P in K.objects]
    return v


def _pair(ws: Workspace, args) -> CompatiblePair:
    M1, M2 = _ref(ws, "monads", args.first), _ref(ws, "monads", args.second)
    if M1.category is not M2.category:
        raise InputError("the monads live on different categories")
    if args.exchange:
        ell = _ref(ws, "naturals", args.exchange)
    elif args.first in ws.algebras and args.second in ws.algebras:
        ell = swap_exchange(M1.category, M1, M2)
    else:
        raise InputError("pass --exchange unless both monads are algebra monads")
    objs = [x for x in M1.objects if x in M2.objects] or list(M1.objects)
    return CompatiblePair(M1, M2, ell, objs)


def cmd_compose_compatible(ws: Workspace, args) -> Verdict:
    pair = _pair(ws, args)
    v = check_compatible(pair)
    if v.ok:
        T = compose_compatible(pair, check=False)
        v.extend(check_dg_monad(T), prefix="composite")
        v.data["composite"] = T.name
    return v


def cmd_psi_check(ws: Workspace, args) -> Verdict:
    pair = _pair(ws, args)
    pre = check_compatible(pair)
    if not pre.ok:
        return pre
    T = compose_compatible(pair, check=False)
    return check_psi_equivalence(pair, algebra_pair_samples(pair), T)


def cmd_bousfield(ws: Workspace, args) -> Verdict:
    if args.monad:
        T = _ref(ws, "monads", args.monad)
        L, eta = T.functor, T.eta
    elif args.functor and args.unit:
        L, eta = _ref(ws, "functors", args.functor), _ref(ws, "naturals", args.unit)
    else:
        raise InputError("pass --monad, or both --functor and --unit")
    cat = ws.category_name(L.source)
    objs = _category_objects(ws, cat, args.objects)
    v, ker = classify_bousfield(L, eta, objs)
    if v.ok:
        v.extend(h0_monad_from_bousfield(L, eta, objs), prefix="H^0 monad")
    return v


def cmd_exactadj(ws: Workspace, args) -> Verdict:
    T = _ref(ws, "monads", args.monad)
    try:
        return exactadj_pipeline(T).verdict
    except PresentationError as exc:
        v = getattr(exc, "verdict", None)
        if v is None:
            raise
        return v


ALGEBRAS = ("k", "dual", "extension")


def cmd_complexes_commute(args) -> Verdict:
    k = field_by_name(args.field)
    if args.algebra == "k":
        A = field_algebra(k)
    elif args.algebra == "dual":
        A = dual_numbers(k)
    else:
        if getattr(k, "degree", 1) != 1 or k.order is None:
            raise InputError("the extension algebra needs a prime base field")
        from .fields import GF
        A = extension_algebra(k, GF(k.order, args.degree))
    return check_complexes_commute(A, args.bound)


def cmd_example(args) -> Verdict:
    name = args.name
    k = field_by_name(args.field) if args.field else None
    if name == "dual_numbers":
        b = example_dual_numbers(k or field_by_name("F2"))
    elif name == "field_extension":
        l = k or field_by_name("F4")
        if l.order is None:
            raise InputError("field_extension needs a finite field")
        b = example_field_extension(l.characteristic, getattr(l, "degree", 1))
    elif name == "group_action":
        b = example_group_action(args.group, k or field_by_name("F3"))
    elif name == "swap_action":
        b = example_swap_action(k or field_by_name("F2"))
    elif name == "bousfield":
        b = example_bousfield(k or field_by_name("F2"))
    else:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    files = write_bundle(b, args.emit)
    v = Verdict(f"example {b.name}", field=repr(b.field))
    v.add("bundle written", True)
    v.data["files"] = files
    v.data["expected"] = b.expected
    return v


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "h0": cmd_h0,
    "check-monad": cmd_check_monad,
    "check-weak-monad": cmd_check_weak_monad,
    "separable": cmd_separable,
    "em-hom": cmd_em_hom,
    "free-sub": cmd_free_sub,
    "cone": cmd_cone,
    "shift": cmd_shift,
    "pretr": cmd_pretr,
    "karoubi": cmd_karoubi,
    "compose-compatible": cmd_compose_compatible,
    "psi-check": cmd_psi_check,
    "bousfield": cmd_bousfield,
    "exactadj": cmd_exactadj,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dgmonad", description="Exact checks for finitely presented DG monads.")
    ap.add_argument("--version", action="version", version=f"dgmonad {__version__}")
    ap.add_argument("--human", action="store_true", help="render a table instead of JSON")
    sub = ap.add_subparsers(dest="command", required=True)

    def ws_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("workspace")
        p.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
        return p

    ws_cmd("validate", "parse and validate a workspace")
    p = ws_cmd("h0", "cohomology dimensions of a category's homs")
    p.add_argument("--category", required=True)
    p.add_argument("--objects", nargs="*")
    for name in ("check-monad", "check-weak-monad", "exactadj"):
        ws_cmd(name, f"{name.replace('-', ' ')} on a named monad").add_argument("--monad", required=True)
    p = ws_cmd("separable", "solve for a separability section")
    p.add_argument("--monad", required=True)
    p.add_argument("--mode", choices=("strict", "h0"), default="h0")
    p = ws_cmd("em-hom", "hom complex between two modules")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--weak", action="store_true")
    p = ws_cmd("free-sub", "hom complexes among free modules")
    p.add_argument("--monad", required=True)
    p.add_argument("--objects", nargs="*")
    p.add_argument("--weak", action="store_true")
    for name in ("cone", "shift"):
        p = ws_cmd(name, f"{name} of a twisted complex")
        p.add_argument("--twisted", required=True, help="twisted complex, or object with --category")
        p.add_argument("--category")
    p.add_argument("--by", type=int, default=1)
    p = ws_cmd("pretr", "extend a functor to twisted complexes and check it")
    p.add_argument("--functor", required=True)
    p.add_argument("--twisted", nargs="*")
    p = ws_cmd("karoubi", "split idempotents")
    p.add_argument("--category", required=True)
    p.add_argument("--idempotent", nargs=2, action="append", metavar=("OBJECT", "COORDS_JSON"))
    p.add_argument("--monad")
    for name in ("compose-compatible", "psi-check"):
        p = ws_cmd(name, "compatible pair of monads")
        p.add_argument("--first", required=True)
        p.add_argument("--second", required=True)
        p.add_argument("--exchange")
    p = ws_cmd("bousfield", "classify a weak Bousfield localization")
    p.add_argument("--functor")
    p.add_argument("--unit")
    p.add_argument("--monad", help="use the functor and unit of a monad")
    p.add_argument("--objects", nargs="*")

    p = sub.add_parser("example", help="emit a corpus bundle")
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("--field")
    p.add_argument("--group", default="Z2")
    p.add_argument("--emit", required=True, metavar="DIR")
    p.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
    p = sub.add_parser("complexes-commute", help="complexes of modules versus modules over A ⊗ -")
    p.add_argument("--algebra", choices=ALGEBRAS, default="dual")
    p.add_argument("--field", default="F2")
    p.add_argument("--degree", type=int, default=2, help="extension degree for --algebra extension")
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
    return ap


def _render(v: Verdict, human: bool) -> str:
    if not human:
        return v.dumps()
    lines = [str(v)]
    for key, val in sorted(v.data.items()):
        lines.append(f"  {key}: {json.dumps(val, ensure_ascii=False, default=str)}")
    if v.elapsed_ms is not None:
        lines.append(f"  elapsed: {v.elapsed_ms:.1f} ms")
    return "\n".join(lines)


def _error(kind: str, message: str, human: bool, **extra) -> str:
    if human:
        loc = f" at {extra['path']}" if extra.get("path") else ""
        loc += f" (line {extra['line']})" if extra.get("line") else ""
        return f"error [{kind}]{loc}: {message}"
    return json.dumps({"status": "error", "error": kind, "message": message, **extra},
                      indent=2, sort_keys=True, ensure_ascii=False)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INPUT
    human = getattr(args, "human", False)
    t0 = time.perf_counter()
    try:
        if args.command == "example":
            v = cmd_example(args)
        elif args.command == "complexes-commute":
            v = cmd_complexes_commute(args)
        else:
            ws = ingest(args.workspace)
            v = COMMANDS[args.command](ws, args)
    except WorkspaceError as exc:
        print(_error(exc.kind, exc.message, human, path=exc.path, line=exc.line), file=out)
        return EXIT_INPUT
    except (InputError, PresentationError, FieldError) as exc:
        print(_error("input", str(exc), human), file=out)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - reported as an internal error
        print(_error("internal", f"{type(exc).__name__}: {exc}", human), file=out)
        return EXIT_INTERNAL
    v.elapsed_ms = (time.perf_counter() - t0) * 1000
    print(_render(v, human), file=out)
    if v.ok:
        return EXIT_PASS
    return EXIT_FAIL


def replay(directory) -> list[dict]:
    """Run every command of a bundle's ``expected.json`` and compare exit codes and data."""
    import io
    import os

    with open(os.path.join(directory, "expected.json"), encoding="utf-8") as fh:
        manifest = json.load(fh)
    results = []
    for cmd in manifest["commands"]:
        argv = [os.path.join(directory, a) if a == "workspace.json" else a for a in cmd["argv"]]
        buf = io.StringIO()
        code = run(argv, out=buf)
        report = json.loads(buf.getvalue())
        ok = code == cmd["exit"]
        for key, want in cmd.get("data", {}).items():
            got = report.get("status") if key == "status" else report.get("data", {}).get(key)
            ok = ok and got == want
        results.append({"argv": cmd["argv"], "exit": code, "ok": ok})
    return results


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
