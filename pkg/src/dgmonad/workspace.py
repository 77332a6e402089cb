"""The JSON workspace format: ingest with validation, canonical emit, bundle export.

A workspace is one UTF-8 JSON object with the top level fields ``version``,
``field``, ``categories``, ``functors``, ``naturals``, ``monads``,
``modules``, ``twisted`` and ``actions``.  Named entities live in maps keyed
by name; lists keep their order because it is meaningful (object order,
twisted complex entries).  Scalars are strings in the field's own format,
matrices are row-major nested arrays.

``emit`` writes the canonical form (sorted keys, two space indent, trailing
newline), so ``emit(ingest(emit(w))) == emit(w)`` byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

from .cdg import (
    Algebra,
    Complex,
    ComplexCategory,
    ExtendScalars,
    RestrictScalars,
    extension_counit,
)
from .corpus import FixtureBundle, check_algebra, field_by_name, field_name
from .dgcat import (
    FunctionFunctor,
    IdentityFunctor,
    Morphism,
    NatTrans,
    PresentationError,
    TableCategory,
    TableFunctor,
    tabulate_functor,
    validate_dg_category,
    validate_dg_functor,
)
from .em import make_module
from .fields import Field, FieldError, field_from_spec
from .graded import DGSpace, Grading
from .group_action import Group, GroupAction, group_action_monad
from .linalg import Matrix
from .monads import Monad, algebra_monad, identity_monad
from .pretr import PretrCategory, validate_twisted

VERSION = 1
SECTIONS = ("categories", "functors", "naturals", "monads", "modules", "twisted", "actions")


class WorkspaceError(Exception):
    """Invalid input; ``kind`` is ``io``, ``syntax`` or ``validation``."""

    def __init__(self, message: str, path: str = "", line: int | None = None, kind: str = "validation"):
        self.message, self.path, self.line, self.kind = message, path, line, kind
        where = f" at {path}" if path else ""
        at_line = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind} error{where}{at_line}: {message}")

    def to_json(self) -> dict:
        return {"error": self.kind, "message": self.message, "path": self.path, "line": self.line}


def _path_str(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _line_of(text: str | None, path, token: str | None = None) -> int | None:
    """Best effort line number: follow the string keys of ``path`` through the text."""
    if not text:
        return None
    pos = 0
    for p in path:
        if isinstance(p, str):
            i = text.find(json.dumps(p, ensure_ascii=False), pos)
            if i >= 0:
                pos = i
    if token is not None:
        i = text.find(json.dumps(token, ensure_ascii=False), pos)
        if i >= 0:
            pos = i
    return text.count("\n", 0, pos) + 1


@dataclass
class Workspace:
    """A parsed workspace: canonical ``spec`` plus the built objects by name."""

    spec: dict
    field: Field
    categories: dict = dc_field(default_factory=dict)
    objects: dict = dc_field(default_factory=dict)  # category -> {name: object}
    functors: dict = dc_field(default_factory=dict)
    naturals: dict = dc_field(default_factory=dict)
    monads: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    twisted: dict = dc_field(default_factory=dict)
    actions: dict = dc_field(default_factory=dict)
    algebras: dict = dc_field(default_factory=dict)  # monad name -> Algebra
    pretr: dict = dc_field(default_factory=dict)  # category name -> PretrCategory

    def get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            raise WorkspaceError(f"no {section[:-1]} named {name!r}", path=f"{section}.{name}")
        return table[name]

    def category_name(self, C) -> str | None:
        for n, c in self.categories.items():
            if c is C:
                return n
        for n, p in self.pretr.items():
            if p is C:
                return n
        return None

    def pretr_of(self, cat: str) -> PretrCategory:
        if cat not in self.pretr:
            self.pretr[cat] = PretrCategory(self.categories[cat], name=f"Pretr({cat})")
        return self.pretr[cat]

    def emit(self) -> str:
        return emit(self.spec)


def emit(spec: dict) -> str:
    return json.dumps(spec, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def empty_spec(fld: Field) -> dict:
    out: dict[str, Any] = {"version": VERSION, "field": fld.spec()}
    for s in SECTIONS:
        out[s] = {}
    return out


# --- parsing helpers ----------------------------------------------------------

class _Reader:
    def __init__(self, text: str | None):
        self.text = text

    def fail(self, path, message, token=None):
        raise WorkspaceError(message, _path_str(path), _line_of(self.text, path, token))

    def need(self, d, key, path, kind=None):
        if not isinstance(d, dict):
            self.fail(path, "expected an object")
        if key not in d:
            self.fail(path, f"missing field {key!r}")
        v = d[key]
        if kind is not None and (not isinstance(v, kind) or (kind is int and isinstance(v, bool))):
            self.fail(path + [key], f"expected {getattr(kind, '__name__', kind)}")
        return v

    def scalar(self, fld: Field, x, path):
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            self.fail(path, f"scalar must be a string, got {x!r}")
        try:
            return fld.parse(x) if isinstance(x, str) else fld.coerce(x)
        except (FieldError, ValueError, ZeroDivisionError) as exc:
            self.fail(path, f"malformed scalar {x!r}: {exc}", token=x if isinstance(x, str) else None)

    def vector(self, fld: Field, xs, path, length: int | None = None) -> tuple:
        if not isinstance(xs, list):
            self.fail(path, "expected a list of scalars")
        out = tuple(self.scalar(fld, x, path + [i]) for i, x in enumerate(xs))
        if length is not None and len(out) != length:
            self.fail(path, f"expected {length} coordinates, got {len(out)}")
        return out

    def matrix(self, fld: Field, rows, path, nrows: int, ncols: int) -> Matrix:
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            self.fail(path, "expected a nested array")
        if nrows == 0 and rows == []:
            return Matrix.zeros(fld, 0, ncols)
        vals = [self.vector(fld, r, path + [i]) for i, r in enumerate(rows)]
        if len(vals) != nrows or any(len(r) != ncols for r in vals):
            self.fail(path, f"expected a {nrows}x{ncols} matrix")
        return Matrix(fld, nrows, ncols, tuple(vals))

    def int_key(self, k, path) -> int:
        try:
            return int(k)
        except (TypeError, ValueError):
            self.fail(path, f"degree {k!r} is not an integer")

    def grading(self, d, path) -> Grading:
        g = d.get("grading", "Z")
        if g not in ("Z", "Z2"):
            self.fail(path + ["grading"], f"grading must be 'Z' or 'Z2', got {g!r}")
        return Grading(g)

    def field(self, spec, path) -> Field:
        try:
            if isinstance(spec, str):
                return field_by_name(spec)
            if isinstance(spec, dict):
                return field_from_spec(spec)
        except (FieldError, KeyError, ValueError) as exc:
            self.fail(path, f"bad field: {exc}")
        self.fail(path, "field must be a name or a field spec object")


def _fmt(fld: Field, xs) -> list[str]:
    return [fld.format(x) for x in xs]


def _mjson(m: Matrix) -> list:
    return m.to_json()


# --- ingest -------------------------------------------------------------------

def ingest_text(text: str) -> Workspace:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(exc.msg, line=exc.lineno, kind="syntax") from None
    return ingest_data(raw, text)


def ingest(path) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise WorkspaceError(str(exc), kind="io") from None
    return ingest_text(text)


def ingest_data(raw: Any, text: str | None = None) -> Workspace:
    r = _Reader(text)
    if not isinstance(raw, dict):
        r.fail([], "workspace must be a JSON object")
    unknown = sorted(set(raw) - {"version", "field", *SECTIONS})
    if unknown:
        r.fail([unknown[0]], f"unknown top level field {unknown[0]!r}")
    version = r.need(raw, "version", [], int)
    if version != VERSION:
        r.fail(["version"], f"unsupported version {version}")
    fld = r.field(r.need(raw, "field", []), ["field"])
    ws = Workspace(spec=empty_spec(fld), field=fld)
    for s in SECTIONS:
        sec = raw.get(s, {})
        if not isinstance(sec, dict):
            r.fail([s], "expected a map from names to entries")
    b = _Builder(ws, r)
    # construction order follows the dependencies between sections
    for name, entry in raw.get("categories", {}).items():
        b.category(name, entry)
    for name, entry in raw.get("functors", {}).items():
        b.functor(name, entry)
    for name, entry in raw.get("actions", {}).items():
        b.action(name, entry)
    for name, entry in raw.get("twisted", {}).items():
        b.twisted_complex(name, entry)
    for name, entry in raw.get("naturals", {}).items():
        b.natural(name, entry)
    for name, entry in raw.get("monads", {}).items():
        b.monad(name, entry)
    for name, entry in raw.get("modules", {}).items():
        b.module(name, entry)
    return ws


class _Builder:
    def __init__(self, ws: Workspace, r: _Reader):
        self.ws, self.r = ws, r
        self.twisted_cat: dict[str, str] = {}

    # categories --------------------------------------------------------------
    def cat_field(self, entry, path) -> tuple[Field, dict]:
        if "field" in entry:
            fld = self.r.field(entry["field"], path + ["field"])
            return fld, {"field": fld.spec()}
        return self.ws.field, {}

    def category(self, name, entry):
        path = ["categories", name]
        kind = self.r.need(entry, "kind", path, str)
        fld, extra = self.cat_field(entry, path)
        g = self.r.grading(entry, path)
        if kind == "complexes":
            self.complexes(name, entry, path, fld, g, extra)
        elif kind == "table":
            self.table(name, entry, path, fld, g, extra)
        else:
            self.r.fail(path + ["kind"], f"unknown category kind {kind!r}")

    def complexes(self, name, entry, path, fld, g, extra):
        objs, specs = {}, []
        for i, o in enumerate(self.r.need(entry, "objects", path, list)):
            p = path + ["objects", i]
            oname = self.r.need(o, "name", p, str)
            if oname in objs:
                self.r.fail(p, f"duplicate object {oname!r}")
            dims = {self.r.int_key(k, p + ["dims", k]): self.r.need(o["dims"], k, p + ["dims"], int)
                    for k in self.r.need(o, "dims", p, dict)}
            if any(v < 0 for v in dims.values()):
                self.r.fail(p + ["dims"], "dimensions must be nonnegative")
            nd = {g.norm(n): v for n, v in dims.items() if v}
            d = {}
            for k, rows in o.get("d", {}).items():
                n = self.r.int_key(k, p + ["d", k])
                d[n] = self.r.matrix(fld, rows, p + ["d", k], nd.get(g.norm(n + 1), 0), nd.get(g.norm(n), 0))
            try:
                X = Complex(fld, g, dims, d, oname)
            except ValueError as exc:
                self.r.fail(p, str(exc))
            for n in X.degrees():
                if not (X.d(n + 1) @ X.d(n)).is_zero():
                    self.r.fail(p + ["d"], f"d∘d is not zero at degree {n}")
            objs[oname] = X
            specs.append({"name": oname, "dims": {str(n): k for n, k in sorted(X.dims.items())},
                          "d": {str(n): _mjson(m) for n, m in sorted(X.differential_blocks().items())}})
        C = ComplexCategory(fld, g, list(objs.values()), name=name)
        self.ws.categories[name] = C
        self.ws.objects[name] = objs
        self.ws.spec["categories"][name] = {"kind": "complexes", "grading": g.kind, "objects": specs, **extra}

    def table(self, name, entry, path, fld, g, extra):
        objects = self.r.need(entry, "objects", path, list)
        if any(not isinstance(o, str) for o in objects) or len(set(objects)) != len(objects):
            self.r.fail(path + ["objects"], "objects must be distinct strings")
        homs, hspecs = {}, []
        for i, h in enumerate(entry.get("homs", [])):
            p = path + ["homs", i]
            a, b = self.obj_in(objects, h, "source", p), self.obj_in(objects, h, "target", p)
            if (a, b) in homs:
                self.r.fail(p, f"duplicate hom ({a}, {b})")
            dims = {g.norm(self.r.int_key(k, p + ["dims", k])): v for k, v in self.r.need(h, "dims", p, dict).items()}
            if any(not isinstance(v, int) or v < 0 for v in dims.values()):
                self.r.fail(p + ["dims"], "dimensions must be nonnegative integers")
            d = {}
            for k, rows in h.get("d", {}).items():
                n = g.norm(self.r.int_key(k, p + ["d", k]))
                d[n] = self.r.matrix(fld, rows, p + ["d", k], dims.get(g.norm(n + 1), 0), dims.get(n, 0))
            homs[(a, b)] = DGSpace(fld, g, dims, d)
        order = {o: i for i, o in enumerate(objects)}
        for (a, b), V in sorted(homs.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]])):
            if V.dims:
                hspecs.append({"source": a, "target": b, "dims": {str(n): k for n, k in sorted(V.dims.items())},
                               "d": {str(n): _mjson(V.d(n)) for n in V.degrees() if not V.d(n).is_zero()}})

        def hd(a, b, n):
            V = homs.get((a, b))
            return V.dim(n) if V is not None else 0

        comp, cspecs = {}, []
        for i, c in enumerate(entry.get("compose", [])):
            p = path + ["compose", i]
            a, b, cc = (self.obj_in(objects, c, k, p) for k in ("source", "middle", "target"))
            degs = self.r.need(c, "degrees", p, list)
            if len(degs) != 2 or any(not isinstance(x, int) or isinstance(x, bool) for x in degs):
                self.r.fail(p + ["degrees"], "degrees must be [outer, inner] integers")
            pp, q = g.norm(degs[0]), g.norm(degs[1])
            key = (a, b, cc, pp, q)
            if key in comp:
                self.r.fail(p, f"duplicate structure constants {key}")
            comp[key] = self.r.matrix(fld, self.r.need(c, "matrix", p), p + ["matrix"],
                                      hd(a, cc, pp + q), hd(b, cc, pp) * hd(a, b, q))
        for (a, b, cc, pp, q), m in sorted(comp.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]],
                                                                         order[kv[0][2]], kv[0][3], kv[0][4])):
            if not m.is_zero():
                cspecs.append({"source": a, "middle": b, "target": cc, "degrees": [pp, q], "matrix": _mjson(m)})
        ids = {}
        raw_ids = entry.get("identities", {})
        for o in objects:
            ids[o] = self.r.vector(fld, raw_ids.get(o, []), path + ["identities", o], hd(o, o, 0))
        extra_ids = set(raw_ids) - set(objects)
        if extra_ids:
            self.r.fail(path + ["identities"], f"unknown object {sorted(extra_ids)[0]!r}")
        try:
            C = TableCategory(fld, g, objects, homs, comp, ids, name=name)
        except (PresentationError, ValueError) as exc:
            self.r.fail(path, str(exc))
        ver = validate_dg_category(C)
        if not ver.ok:
            c = ver.first_failure()
            self.r.fail(path, f"{c.name} fails: {c.witness}")
        self.ws.categories[name] = C
        self.ws.objects[name] = {o: o for o in objects}
        self.ws.spec["categories"][name] = {"kind": "table", "grading": g.kind, "objects": list(objects),
                                           "homs": hspecs, "compose": cspecs,
                                           "identities": {o: _fmt(fld, ids[o]) for o in objects}, **extra}

    def obj_in(self, objects, d, key, path):
        v = self.r.need(d, key, path)
        if v not in objects:
            self.r.fail(path + [key], f"unknown object {v!r}")
        return v

    # references ----------------------------------------------------------------
    def cat_ref(self, entry, key, path) -> tuple[str, Any]:
        n = self.r.need(entry, key, path, str)
        if n not in self.ws.categories:
            self.r.fail(path + [key], f"unknown category {n!r}")
        return n, self.ws.categories[n]

    def obj_ref(self, cat: str, ref, path, pretr: bool = False):
        """An object name in ``cat``; with ``pretr`` also twisted complexes over ``cat``."""
        objs = self.ws.objects[cat]
        if pretr:
            P = self.ws.pretr_of(cat)
            if ref in self.ws.twisted and self.twisted_cat.get(ref) == cat:
                return self.ws.twisted[ref]
            if ref in objs:
                return P.embed(objs[ref])
        elif ref in objs:
            return objs[ref]
        self.r.fail(path, f"unknown object {ref!r} in {cat}")

    def functor_ref(self, entry, key, path):
        n = self.r.need(entry, key, path, str)
        if n not in self.ws.functors:
            self.r.fail(path + [key], f"unknown functor {n!r}")
        return n, self.ws.functors[n]

    # functors --------------------------------------------------------------------
    def functor(self, name, entry):
        path = ["functors", name]
        kind = self.r.need(entry, "kind", path, str)
        ws = self.ws
        if kind == "identity":
            cn, C = self.cat_ref(entry, "category", path)
            F = IdentityFunctor(C)
            spec = {"kind": kind, "category": cn}
        elif kind == "table":
            sn, S = self.cat_ref(entry, "source", path)
            tn, T = self.cat_ref(entry, "target", path)
            if not isinstance(S, TableCategory) or not isinstance(T, TableCategory):
                self.r.fail(path, "table functors need table categories")
            raw_map = self.r.need(entry, "objects", path, dict)
            omap = {}
            for a in S.objects:
                if a not in raw_map:
                    self.r.fail(path + ["objects"], f"object {a!r} is not mapped")
                omap[a] = self.obj_ref(tn, raw_map[a], path + ["objects", a])
            maps, mspecs = {}, []
            for i, m in enumerate(entry.get("maps", [])):
                p = path + ["maps", i]
                a, b = self.obj_in(S.objects, m, "source", p), self.obj_in(S.objects, m, "target", p)
                n = S.grading.norm(self.r.need(m, "degree", p, int))
                maps[(a, b, n)] = self.r.matrix(T.field, self.r.need(m, "matrix", p), p + ["matrix"],
                                                T.hom_dim(omap[a], omap[b], n), S.hom_dim(a, b, n))
            order = {o: i for i, o in enumerate(S.objects)}
            for (a, b, n), m in sorted(maps.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]], kv[0][2])):
                if not m.is_zero():
                    mspecs.append({"source": a, "target": b, "degree": n, "matrix": _mjson(m)})
            F = TableFunctor(S, T, omap, maps, name=name)
            spec = {"kind": kind, "source": sn, "target": tn, "objects": dict(omap), "maps": mspecs}
            self.validate_functor(F, path)
        elif kind == "permutation":
            cn, C = self.cat_ref(entry, "category", path)
            raw = self.r.need(entry, "permutation", path, dict)
            objs = ws.objects[cn]
            if set(raw) != set(objs) or set(raw.values()) != set(objs):
                self.r.fail(path + ["permutation"], "must permute the objects of the category")
            perm = {objs[a]: objs[b] for a, b in raw.items()}
            for a, b in perm.items():
                for c, d in perm.items():
                    if C.hom(a, c).dims != C.hom(b, d).dims:
                        self.r.fail(path + ["permutation"], f"Hom({a}, {c}) and Hom({b}, {d}) differ")

            def mor(f, perm=perm, C=C):
                return Morphism(perm[f.source], perm[f.target], f.degree, f.coords, C.field)

            F = FunctionFunctor(C, C, perm.__getitem__, mor, name=name)
            spec = {"kind": kind, "category": cn, "permutation": dict(sorted(raw.items()))}
            self.validate_functor(F, path)
        elif kind in ("extend_scalars", "restrict_scalars"):
            sn, S = self.cat_ref(entry, "source", path)
            tn, T = self.cat_ref(entry, "target", path)
            if not isinstance(S, ComplexCategory) or not isinstance(T, ComplexCategory):
                self.r.fail(path, "base change functors act on complex categories")
            small, big = (S, T) if kind == "extend_scalars" else (T, S)
            if getattr(big.field, "p", None) != getattr(small.field, "p", None) or small.field.order is None \
                    or big.field.order is None or getattr(small.field, "degree", 1) != 1:
                self.r.fail(path, "base change needs a prime field and an extension of it")
            F = ExtendScalars(S, T) if kind == "extend_scalars" else RestrictScalars(S, T)
            F.name = name
            spec = {"kind": kind, "source": sn, "target": tn}
        else:
            self.r.fail(path + ["kind"], f"unknown functor kind {kind!r}")
        ws.functors[name] = F
        ws.spec["functors"][name] = spec

    def validate_functor(self, F, path):
        ver = validate_dg_functor(F)
        if not ver.ok:
            c = ver.first_failure()
            self.r.fail(path, f"{c.name} fails: {c.witness}")

    # actions -------------------------------------------------------------------------
    def action(self, name, entry):
        path = ["actions", name]
        cn, C = self.cat_ref(entry, "category", path)
        graw = self.r.need(entry, "group", path, dict)
        try:
            G = Group(self.r.need(graw, "table", path + ["group"], list), name=graw.get("name", "G"))
        except (PresentationError, TypeError, ValueError) as exc:
            self.r.fail(path + ["group"], str(exc))
        fraw = self.r.need(entry, "functors", path, dict)
        funcs, fspec = {}, {}
        for g in G:
            ref = fraw.get(str(g))
            if ref is None:
                self.r.fail(path + ["functors"], f"no functor for group element {g}")
            if ref == "id":
                funcs[g] = IdentityFunctor(C)
            else:
                if ref not in self.ws.functors:
                    self.r.fail(path + ["functors", str(g)], f"unknown functor {ref!r}")
                F = self.ws.functors[ref]
                if F.source is not C or F.target is not C:
                    self.r.fail(path + ["functors", str(g)], f"{ref} is not an endofunctor of {cn}")
                funcs[g] = F
            fspec[str(g)] = ref
        act = GroupAction(C, G, funcs, name=name)
        ver = act.check_strict()
        if not ver.ok:
            c = ver.first_failure()
            self.r.fail(path, f"action is not strict: {c.name} fails at {c.witness}")
        self.ws.actions[name] = act
        self.ws.spec["actions"][name] = {"category": cn, "group": G.spec(), "functors": fspec}

    # twisted complexes ------------------------------------------------------------------
    def twisted_complex(self, name, entry):
        path = ["twisted", name]
        cn, C = self.cat_ref(entry, "category", path)
        P = self.ws.pretr_of(cn)
        ents, especs = [], []
        for i, e in enumerate(self.r.need(entry, "entries", path, list)):
            p = path + ["entries", i]
            if not isinstance(e, list) or len(e) != 2 or not isinstance(e[1], int) or isinstance(e[1], bool):
                self.r.fail(p, "entries are [object, shift] pairs")
            ents.append((self.obj_ref(cn, e[0], p), e[1]))
            especs.append([e[0], P.grading.norm(e[1]) if P.grading.kind == "Z2" else e[1]])
        T0 = P.make(ents)
        q, qspecs = {}, []
        for i, blk in enumerate(entry.get("q", [])):
            p = path + ["q", i]
            a, b = self.r.need(blk, "row", p, int), self.r.need(blk, "col", p, int)
            if not (0 <= a < len(ents) and 0 <= b < len(ents)):
                self.r.fail(p, f"block ({a}, {b}) out of range")
            if (a, b) in q:
                self.r.fail(p, f"duplicate block ({a}, {b})")
            n = P.grading.norm(1 + T0.shift_of(a) - T0.shift_of(b))
            q[(a, b)] = self.r.vector(C.field, self.r.need(blk, "coords", p), p + ["coords"],
                                      C.hom_dim(T0.obj(b), T0.obj(a), n))
        T = P.make(ents, q)
        for (a, b), c in T.q:
            qspecs.append({"row": a, "col": b, "coords": _fmt(C.field, c)})
        ver = validate_twisted(P, T)
        if not ver.ok:
            c = ver.first_failure()
            self.r.fail(path, f"{c.name} fails: {c.witness}")
        self.ws.twisted[name] = T
        self.twisted_cat[name] = cn
        self.ws.spec["twisted"][name] = {"category": cn, "entries": especs, "q": qspecs}

    # natural transformations ------------------------------------------------------------------
    def natural(self, name, entry):
        path = ["naturals", name]
        kind = self.r.need(entry, "kind", path, str)
        if kind == "table":
            sn, S = self.functor_ref(entry, "source", path)
            tn, T = self.functor_ref(entry, "target", path)
            if S.source is not T.source or S.target is not T.target:
                self.r.fail(path, "source and target functors must be parallel")
            C, D = S.source, S.target
            cn = self.ws.category_name(C)
            raw = self.r.need(entry, "components", path, dict)
            comps, cspec = {}, {}
            for oname, x in self.ws.objects[cn].items():
                if oname not in raw:
                    self.r.fail(path + ["components"], f"no component at {oname!r}")
                coords = self.r.vector(D.field, raw[oname], path + ["components", oname],
                                       D.hom_dim(S(x), T(x), 0))
                comps[x] = Morphism(S(x), T(x), 0, coords, D.field)
                cspec[oname] = _fmt(D.field, coords)
            extra = set(raw) - set(self.ws.objects[cn])
            if extra:
                self.r.fail(path + ["components"], f"unknown object {sorted(extra)[0]!r}")
            alpha = NatTrans(S, T, comps.__getitem__, name=name)
            spec = {"kind": kind, "source": sn, "target": tn, "components": cspec}
        elif kind == "extension_counit":
            en, E = self.functor_ref(entry, "extend", path)
            rn, R = self.functor_ref(entry, "restrict", path)
            if not isinstance(E, ExtendScalars) or not isinstance(R, RestrictScalars):
                self.r.fail(path, "needs an extend_scalars and a restrict_scalars functor")
            alpha = extension_counit(R.source, E, R)
            alpha.name = name
            spec = {"kind": kind, "extend": en, "restrict": rn}
        elif kind == "identity":
            fn, F = self.functor_ref(entry, "functor", path)
            alpha = NatTrans(F, F, lambda x, F=F: F.target.identity(F(x)), name=name)
            spec = {"kind": kind, "functor": fn}
        else:
            self.r.fail(path + ["kind"], f"unknown natural transformation kind {kind!r}")
        self.ws.naturals[name] = alpha
        self.ws.spec["naturals"][name] = spec

    # monads --------------------------------------------------------------------------------
    def algebra(self, fld, raw, path) -> Algebra:
        if not isinstance(raw, dict):
            self.r.fail(path, "algebra must be an object with mult and unit")
        mult = self.r.need(raw, "mult", path, list)
        n = len(mult)
        m = []
        for i, row in enumerate(mult):
            if not isinstance(row, list) or len(row) != n:
                self.r.fail(path + ["mult", i], f"expected {n} products")
            m.append([self.r.vector(fld, c, path + ["mult", i, j], n) for j, c in enumerate(row)])
        unit = self.r.vector(fld, self.r.need(raw, "unit", path, list), path + ["unit"], n)
        A = Algebra(fld, m, unit, name=raw.get("name", "A"))
        ver = check_algebra(A)
        if not ver.ok:
            self.r.fail(path, f"algebra is not {ver.first_failure().name}")
        return A

    def monad(self, name, entry):
        path = ["monads", name]
        kind = self.r.need(entry, "kind", path, str)
        ws = self.ws
        if kind in ("algebra", "identity"):
            cn, C = self.cat_ref(entry, "category", path)
            refs = entry.get("objects", list(ws.objects[cn]))
            objs = [self.obj_ref(cn, o, path + ["objects", i]) for i, o in enumerate(refs)]
            if kind == "algebra":
                if not isinstance(C, ComplexCategory):
                    self.r.fail(path, "algebra monads act on complex categories")
                A = self.algebra(C.field, self.r.need(entry, "algebra", path), path + ["algebra"])
                T = algebra_monad(C, A, objs)
                ws.algebras[name] = A
                spec = {"kind": kind, "category": cn, "algebra": A.spec(), "objects": list(refs)}
            else:
                T = identity_monad(C, objs)
                spec = {"kind": kind, "category": cn, "objects": list(refs)}
        elif kind == "group":
            an = self.r.need(entry, "action", path, str)
            if an not in ws.actions:
                self.r.fail(path + ["action"], f"unknown action {an!r}")
            act = ws.actions[an]
            cn = ws.category_name(act.category)
            P = ws.pretr_of(cn)
            refs = entry.get("objects", list(ws.objects[cn]))
            objs = [self.obj_ref(cn, o, path + ["objects", i], pretr=True) for i, o in enumerate(refs)]
            T = group_action_monad(act, P, objs)
            spec = {"kind": kind, "action": an, "objects": list(refs)}
        elif kind == "table":
            fn, F = self.functor_ref(entry, "functor", path)
            if F.source is not F.target:
                self.r.fail(path + ["functor"], "a monad needs an endofunctor")
            C = F.source
            cn = ws.category_name(C)
            mun, mu = self.nat_ref(entry, "mu", path)
            etn, eta = self.nat_ref(entry, "eta", path)
            refs = entry.get("objects", list(ws.objects[cn]))
            objs = [self.obj_ref(cn, o, path + ["objects", i]) for i, o in enumerate(refs)]
            for x in objs:
                for nat, label, src in ((mu, "mu", F(F(x))), (eta, "eta", x)):
                    c = nat[x]
                    if c.source != src or c.target != F(x):
                        self.r.fail(path + [label], f"component at {x} has the wrong source or target")
            T = Monad(C, F, mu, eta, objs, name=name)
            spec = {"kind": kind, "functor": fn, "mu": mun, "eta": etn, "objects": list(refs)}
        else:
            self.r.fail(path + ["kind"], f"unknown monad kind {kind!r}")
        T.name = name
        ws.monads[name] = T
        ws.spec["monads"][name] = spec

    def nat_ref(self, entry, key, path):
        n = self.r.need(entry, key, path, str)
        if n not in self.ws.naturals:
            self.r.fail(path + [key], f"unknown natural transformation {n!r}")
        return n, self.ws.naturals[n]

    # modules ----------------------------------------------------------------------------
    def module(self, name, entry):
        path = ["modules", name]
        mn = self.r.need(entry, "monad", path, str)
        if mn not in self.ws.monads:
            self.r.fail(path + ["monad"], f"unknown monad {mn!r}")
        T = self.ws.monads[mn]
        C = T.category
        pretr = isinstance(C, PretrCategory)
        cn = self.ws.category_name(C.base if pretr else C)
        ref = self.r.need(entry, "object", path)
        x = self.obj_ref(cn, ref, path + ["object"], pretr=pretr)
        coords = self.r.vector(C.field, self.r.need(entry, "action", path, list), path + ["action"],
                               C.hom_dim(T(x), x, 0))
        m = make_module(T, x, coords)
        self.ws.modules[name] = m
        self.ws.spec["modules"][name] = {"monad": mn, "object": ref, "action": _fmt(C.field, coords)}


# --- export of corpus bundles ------------------------------------------------------------

def table_category_spec(C: TableCategory) -> dict:
    fld, g = C.field, C.grading
    homs = []
    for a in C.objects:
        for b in C.objects:
            V = C.hom(a, b)
            if V.dims:
                homs.append({"source": a, "target": b, "dims": {str(n): k for n, k in sorted(V.dims.items())},
                             "d": {str(n): _mjson(V.d(n)) for n in V.degrees() if not V.d(n).is_zero()}})
    order = {o: i for i, o in enumerate(C.objects)}
    comp = [{"source": a, "middle": b, "target": c, "degrees": [p, q], "matrix": _mjson(m)}
            for (a, b, c, p, q), m in sorted(C.table.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]],
                                                                              order[kv[0][2]], kv[0][3], kv[0][4]))]
    return {"kind": "table", "grading": g.kind, "objects": list(C.objects), "homs": homs, "compose": comp,
            "identities": {a: _fmt(fld, C.identity(a).coords) for a in C.objects}}


def complexes_spec(C: ComplexCategory, names: list[str], fld: Field | None = None) -> dict:
    objs = []
    for X, n in zip(C.objects, names):
        objs.append({"name": n, "dims": {str(k): v for k, v in sorted(X.dims.items())},
                     "d": {str(k): _mjson(m) for k, m in sorted(X.differential_blocks().items())}})
    out = {"kind": "complexes", "grading": C.grading.kind, "objects": objs}
    if fld is not None:
        out["field"] = fld.spec()
    return out


def table_functor_spec(F, source: str, target: str) -> dict:
    C = F.source
    maps = []
    for (a, b, n), m in tabulate_functor(F, C.objects).items():
        if not m.is_zero():
            maps.append({"source": a, "target": b, "degree": n, "matrix": _mjson(m)})
    return {"kind": "table", "source": source, "target": target,
            "objects": {a: F(a) for a in C.objects}, "maps": maps}


@dataclass
class Expectation:
    """One replayable CLI invocation with its expected exit code and data."""

    argv: list
    exit: int
    data: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"argv": self.argv, "exit": self.exit}
        if self.data:
            out["data"] = self.data
        return out


def bundle_workspace(b: FixtureBundle) -> tuple[dict, list[Expectation]]:
    """Workspace spec of a corpus bundle plus the CLI verdicts it should produce."""
    k = b.field
    spec = empty_spec(k)
    W = "workspace.json"
    if b.name == "dual_numbers":
        A = b["algebra"]
        spec["categories"]["C"] = complexes_spec(b["category"], ["B", "k"])
        spec["monads"]["M"] = {"kind": "algebra", "category": "C", "algebra": A.spec(), "objects": ["B"]}
        spec["modules"]["B"] = {"monad": "M", "object": "B", "action": _fmt(k, b["module"].action)}
        exp = [Expectation(["check-monad", W, "--monad", "M"], 0),
               Expectation(["em-hom", W, "--source", "B", "--target", "B"], 0,
                           {"id coboundary over the base": True, "id coboundary over the monad": False,
                            "forgetful faithful on H0": False}),
               Expectation(["exactadj", W, "--monad", "M"], 0),
               Expectation(["bousfield", W, "--monad", "M", "--objects", "k", "B"], 1,
                           {"bousfield": b.expected["bousfield"]})]
    elif b.name.startswith("field_extension"):
        C, D = b["category"], b["target"]
        names = ["k", "cone(k)"]
        spec["categories"]["C"] = complexes_spec(C, names)
        A = b["algebra"]
        spec["monads"]["M"] = {"kind": "algebra", "category": "C", "algebra": A.spec(), "objects": names}
        if D is C:
            spec["functors"]["F"] = {"kind": "identity", "category": "C"}
            spec["functors"]["G"] = {"kind": "identity", "category": "C"}
            spec["naturals"]["counit"] = {"kind": "identity", "functor": "F"}
        else:
            spec["categories"]["D"] = complexes_spec(D, names, D.field)
            spec["functors"]["F"] = {"kind": "extend_scalars", "source": "C", "target": "D"}
            spec["functors"]["G"] = {"kind": "restrict_scalars", "source": "D", "target": "C"}
            spec["naturals"]["counit"] = {"kind": "extension_counit", "extend": "F", "restrict": "G"}
        exp = [Expectation(["check-monad", W, "--monad", "M"], 0),
               Expectation(["separable", W, "--monad", "M", "--mode", "strict"], 0),
               Expectation(["separable", W, "--monad", "M", "--mode", "h0"], 0)]
    elif b.name.startswith("group_action"):
        G = b["group"]
        spec["categories"]["k"] = table_category_spec(b["category"])
        spec["actions"]["trivial"] = {"category": "k", "group": G.spec(),
                                      "functors": {str(g): "id" for g in G}}
        spec["monads"]["M"] = {"kind": "group", "action": "trivial", "objects": ["x"]}
        ok = b.expected["separable"] == "pass"
        exp = [Expectation(["check-monad", W, "--monad", "M"], 0),
               Expectation(["separable", W, "--monad", "M", "--mode", "h0"], 0 if ok else 1,
                           {"status": b.expected["separable"]})]
    elif b.name == "swap_action":
        G = b["group"]
        spec["categories"]["swap"] = table_category_spec(b["category"])
        spec["functors"]["s"] = {"kind": "permutation", "category": "swap", "permutation": {"u": "w", "w": "u"}}
        spec["actions"]["swap"] = {"category": "swap", "group": G.spec(), "functors": {"0": "id", "1": "s"}}
        spec["monads"]["M"] = {"kind": "group", "action": "swap", "objects": ["u", "w"]}
        exp = [Expectation(["check-monad", W, "--monad", "M"], 0)]
    elif b.name == "bousfield":
        C = b["category"]
        spec["categories"]["C"] = table_category_spec(C)
        spec["functors"]["id"] = {"kind": "identity", "category": "C"}
        spec["functors"]["L"] = table_functor_spec(b["functor"], "C", "C")
        eta = b["unit"]
        spec["naturals"]["eta"] = {"kind": "table", "source": "id", "target": "L",
                                   "components": {a: _fmt(k, eta[a].coords) for a in C.objects}}
        exp = [Expectation(["bousfield", W, "--functor", "L", "--unit", "eta", "--objects", *b["objects"]], 0,
                           {"kernel": b.expected["kernel"]})]
    else:
        raise PresentationError(f"no workspace export for bundle {b.name!r}")
    # canonicalize through the parser so emitted files are already normal form
    ws = ingest_data(json.loads(emit(spec)))
    return ws.spec, exp


def bundle_manifest(b: FixtureBundle, expectations: list[Expectation]) -> dict:
    return {"bundle": b.name, "field": field_name(b.field), "version": VERSION,
            "expected": {k: v for k, v in b.expected.items()},
            "metadata": dict(b.metadata),
            "commands": [e.to_json() for e in expectations]}


def write_bundle(b: FixtureBundle, directory) -> list[str]:
    """Write ``workspace.json`` and ``expected.json`` into ``directory``."""
    import os

    os.makedirs(directory, exist_ok=True)
    spec, exp = bundle_workspace(b)
    files = []
    for fname, payload in (("workspace.json", emit(spec)), ("expected.json", emit(bundle_manifest(b, exp)))):
        p = os.path.join(directory, fname)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
        files.append(p)
    return files
