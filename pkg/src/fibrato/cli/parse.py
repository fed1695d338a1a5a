"""JSON and line-DSL documents, lowered to validated model objects.

Every document is a JSON object with a ``kind`` field (inferred when absent).
The DSL is sugar that compiles to the same JSON before validation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from ..algebra.action import GroupAction, check_action, natural_action
from ..algebra.perm import Perm, PermGroup, close_generators, standard_group
from ..core.actions import CatValuedAction, SetValuedAction
from ..core.category import FinCat, FinFunctor, check_category
from ..errors import (
    DanglingReference,
    DuplicateName,
    FibratoError,
    NonFunctorialAction,
    NotASubgroup,
    NotWideSubgroupoid,
    PresentationSyntaxError,
    SchemaError,
    ValidationError,
)
from ..geometry import GroupoidGeometry, KleinPair
from ..grothendieck import Variant, grothendieck_complete, transformation_groupoid
from ..hierarchy import HierarchySpec, block_hierarchy_spec

KINDS = (
    "category",
    "group",
    "action",
    "cat_valued_action",
    "set_valued_action",
    "hierarchy",
    "klein",
    "groupoid_geometry",
)


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Any

    __hash__ = None


# ---------------------------------------------------------------- helpers


def _expect(value, typ, path, what):
    if not isinstance(value, typ):
        raise SchemaError(path, f"expected {what}")
    return value


def _field(obj, key, path, typ=None, what=None, default=...):
    if key not in obj:
        if default is ...:
            raise SchemaError(f"{path}.{key}" if path else key, "missing field")
        return default
    value = obj[key]
    if typ is not None:
        _expect(value, typ, f"{path}.{key}" if path else key, what or typ.__name__)
    return value


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _forward(report, what):
    if not report.ok:
        v = report.violations[0]
        raise ValidationError(f"{what}: {v.law} violated at {list(v.witness)}", report)


# ---------------------------------------------------------------- categories


def load_category(data, path="", validate=True) -> FinCat:
    _expect(data, dict, path or "<root>", "a category object")
    objects = _field(data, "objects", path, list, "a list of object names")
    for k, X in enumerate(objects):
        _expect(X, str, _join(_join(path, "objects"), k), "a string")
    if len(set(objects)) != len(objects):
        raise SchemaError(_join(path, "objects"), "duplicate object name")
    objset = set(objects)
    raw = _field(data, "morphisms", path, list, "a list of morphisms")
    morphisms = []
    for k, m in enumerate(raw):
        mp = _join(_join(path, "morphisms"), k)
        _expect(m, dict, mp, "a morphism object")
        name = _field(m, "name", mp, str, "a string")
        for end in ("src", "tgt"):
            value = _field(m, end, mp, str, "a string")
            if value not in objset:
                raise SchemaError(_join(mp, end), f"unknown object {value!r}")
        morphisms.append((name, m["src"], m["tgt"]))
    names = [m[0] for m in morphisms]
    if len(set(names)) != len(names):
        raise SchemaError(_join(path, "morphisms"), "duplicate morphism name")
    known = set(names)
    identities = data.get("identities")
    if identities is None:
        identities = {}
        for X in objects:
            ident = f"id_{X}"
            if ident not in known:
                morphisms.insert(len(identities), (ident, X, X))
                known.add(ident)
            identities[X] = ident
    else:
        ip = _join(path, "identities")
        _expect(identities, dict, ip, "a map from objects to morphism names")
        for X, i in identities.items():
            if X not in objset:
                raise SchemaError(_join(ip, X), f"unknown object {X!r}")
            if i not in known:
                raise SchemaError(_join(ip, X), f"unknown morphism {i!r}")
    cp = _join(path, "compose")
    rows = _field(data, "compose", path, list, "a list of [g, f, gf] rows", default=[])
    compose = {}
    for k, row in enumerate(rows):
        rp = _join(cp, k)
        if not (isinstance(row, list) and len(row) == 3):
            raise SchemaError(rp, "expected [g, f, gf]")
        for j, n in enumerate(row):
            if n not in known:
                raise SchemaError(_join(rp, j), f"unknown morphism {n!r}")
        compose[row[0], row[1]] = row[2]
    C = FinCat.build(objects, morphisms, compose, identity=dict(identities))
    if validate:
        _forward(check_category(C), "category")
    return C


def dump_category(C: FinCat) -> dict:
    return {
        "objects": list(C.objects),
        "morphisms": [{"name": n, "src": s, "tgt": t} for n, s, t in C.morphisms],
        "identities": dict(C.identity),
        "compose": [[g, f, h] for (g, f), h in C.compose.items()],
    }


def load_functor_maps(data, dom: FinCat, cod: FinCat, path) -> FinFunctor:
    _expect(data, dict, path, "a functor object")
    ob = _field(data, "objects", path, dict, "an object map")
    mor = _field(data, "morphisms", path, dict, "a morphism map")
    for X in dom.objects:
        if ob.get(X) not in cod.object_index:
            raise SchemaError(_join(_join(path, "objects"), X), "missing or unknown image")
    for f in dom.names:
        if mor.get(f) not in cod.index:
            raise SchemaError(_join(_join(path, "morphisms"), f), "missing or unknown image")
    return FinFunctor(dom, cod, ob, mor)


def dump_functor(F: FinFunctor) -> dict:
    return {"objects": dict(F.object_map), "morphisms": dict(F.morphism_map)}


# ---------------------------------------------------------------- groups and actions


def load_group(data, path="") -> PermGroup:
    _expect(data, dict, path or "<root>", "a group object")
    if "standard" in data:
        std = _field(data, "standard", path, dict, "{kind, n}")
        try:
            return standard_group(std.get("kind"), int(std.get("n", 0)))
        except ValueError as exc:
            raise SchemaError(_join(path, "standard"), str(exc)) from None
    degree = _field(data, "degree", path, int, "an integer")
    gens = _field(data, "generators", path, dict, "a map of named one-line permutations")
    perms = {}
    for name, images in gens.items():
        gp = _join(_join(path, "generators"), name)
        if not isinstance(images, list) or len(images) != degree:
            raise SchemaError(gp, f"expected a list of {degree} integers")
        try:
            perms[name] = Perm(tuple(images))
        except (ValueError, TypeError) as exc:
            raise SchemaError(gp, str(exc)) from None
    return close_generators(degree, perms)


def dump_group(G: PermGroup) -> dict:
    return {"degree": G.degree, "generators": {n: list(p.images) for n, p in G.generators.items()}}


def load_action(data, path="") -> GroupAction:
    _expect(data, dict, path or "<root>", "an action object")
    G = load_group(_field(data, "group", path, dict, "a group object"), _join(path, "group"))
    carrier = data.get("carrier")
    if carrier is None:
        carrier = [str(i) for i in range(1, G.degree + 1)]
    _expect(carrier, list, _join(path, "carrier"), "a list of point names")
    if "table" not in data:
        if len(carrier) != G.degree:
            raise SchemaError(_join(path, "carrier"), "natural action needs one point per permuted letter")
        A = natural_action(G, carrier)
    else:
        tp = _join(path, "table")
        rows = _field(data, "table", path, list, "a list of [g, x, y] rows")
        points, names = set(carrier), set(G.names)
        table = {}
        for k, row in enumerate(rows):
            if not (isinstance(row, list) and len(row) == 3):
                raise SchemaError(_join(tp, k), "expected [g, x, y]")
            g, x, y = row
            if g not in names:
                raise SchemaError(_join(_join(tp, k), 0), f"unknown group element {g!r}")
            for j, p in ((1, x), (2, y)):
                if p not in points:
                    raise SchemaError(_join(_join(tp, k), j), f"unknown point {p!r}")
            table[g, x] = y
        A = GroupAction(G, carrier, table)
    try:
        report = check_action(A)
    except FibratoError as exc:
        raise ValidationError(str(exc)) from None
    _forward(report, "action")
    return A


def dump_action(A: GroupAction) -> dict:
    return {
        "group": dump_group(A.group),
        "carrier": list(A.carrier),
        "table": [[g, x, y] for (g, x), y in A.table.items()],
    }


def load_set_action(data, path="", base=None) -> SetValuedAction:
    _expect(data, dict, path or "<root>", "a set-valued action object")
    if base is None:
        base = load_category(_field(data, "base", path, dict, "a category"), _join(path, "base"))
    fiber = _field(data, "fiber", path, dict, "a map from objects to point lists")
    act = _field(data, "act", path, dict, "a map from morphisms to functions")
    for X in base.objects:
        if not isinstance(fiber.get(X), list):
            raise SchemaError(_join(_join(path, "fiber"), X), "missing point list")
    for f in base.names:
        if not isinstance(act.get(f), dict):
            raise SchemaError(_join(_join(path, "act"), f), "missing function")
    A = SetValuedAction(base, fiber, act)
    _forward(A.check(), "set-valued action")
    return A


def dump_set_action(A: SetValuedAction, with_base=True) -> dict:
    d = {"fiber": {X: list(v) for X, v in A.fiber.items()}, "act": {f: dict(m) for f, m in A.act.items()}}
    if with_base:
        d = {"base": dump_category(A.base), **d}
    return d


def load_cat_action(data, path="") -> CatValuedAction:
    _expect(data, dict, path or "<root>", "a cat-valued action object")
    base = load_category(_field(data, "base", path, dict, "a category"), _join(path, "base"))
    fp = _join(path, "fiber")
    raw = _field(data, "fiber", path, dict, "a map from objects to categories")
    fibers = {}
    for X in base.objects:
        if X not in raw:
            raise SchemaError(_join(fp, X), "missing fiber category")
        fibers[X] = load_category(raw[X], _join(fp, X))
    ap = _join(path, "act")
    act_raw = _field(data, "act", path, dict, "a map from morphisms to functors")
    act = {}
    for f in base.names:
        if f not in act_raw:
            raise SchemaError(_join(ap, f), "missing functor")
        act[f] = load_functor_maps(act_raw[f], fibers[base.src[f]], fibers[base.tgt[f]], _join(ap, f))
    A = CatValuedAction(base, fibers, act)
    _forward(A.check(), "cat-valued action")
    return A


def dump_cat_action(A: CatValuedAction) -> dict:
    return {
        "base": dump_category(A.base),
        "fiber": {X: dump_category(C) for X, C in A.fiber.items()},
        "act": {f: dump_functor(F) for f, F in A.act.items()},
    }


# ---------------------------------------------------------------- composite documents


def load_hierarchy(data, path="") -> HierarchySpec:
    _expect(data, dict, path or "<root>", "a hierarchy object")
    if "blocks" in data:
        blocks = _field(data, "blocks", path, list, "a list of point lists")
        inner = load_group(_field(data, "inner_group", path, dict, "a group"), _join(path, "inner_group"))
        outer = load_group(_field(data, "outer_group", path, dict, "a group"), _join(path, "outer_group"))
        try:
            return block_hierarchy_spec(blocks, inner, outer)
        except FibratoError as exc:
            raise ValidationError(f"{exc.code}: {exc}") from None
    B1 = load_category(_field(data, "outer_base", path, dict, "a category"), _join(path, "outer_base"))
    ip = _join(path, "inner")
    inner_raw = _field(data, "inner", path, dict, "a map from outer objects to inner data")
    inner, totals = {}, {}
    for I in B1.objects:
        if I not in inner_raw:
            raise SchemaError(_join(ip, I), "missing inner data")
        entry = inner_raw[I]
        base = load_category(_field(entry, "base", _join(ip, I), dict, "a category"), _join(_join(ip, I), "base"))
        action = load_set_action(
            _field(entry, "action", _join(ip, I), dict, "a set-valued action"), _join(_join(ip, I), "action"), base
        )
        inner[I] = (base, action)
        totals[I] = grothendieck_complete(action, Variant.CONCRETE_LEFT, level="inner").total
    op = _join(path, "outer_act")
    act_raw = _field(data, "outer_act", path, dict, "a map from outer morphisms to functors")
    outer_act = {}
    for u in B1.names:
        if u not in act_raw:
            raise SchemaError(_join(op, u), "missing functor")
        outer_act[u] = load_functor_maps(act_raw[u], totals[B1.src[u]], totals[B1.tgt[u]], _join(op, u))
    spec = HierarchySpec(B1, inner, outer_act)
    try:
        CatValuedAction(B1, totals, outer_act).validate(level="outer")
    except NonFunctorialAction as exc:
        raise ValidationError(str(exc)) from None
    return spec


def dump_hierarchy(H: HierarchySpec) -> dict:
    return {
        "outer_base": dump_category(H.outer_base),
        "inner": {
            I: {"base": dump_category(base), "action": dump_set_action(action, with_base=False)}
            for I, (base, action) in H.inner.items()
        },
        "outer_act": {u: dump_functor(F) for u, F in H.outer_act.items()},
    }


def load_klein(data, path="") -> KleinPair:
    _expect(data, dict, path or "<root>", "a klein object")
    G = load_group(_field(data, "group", path, dict, "a group"), _join(path, "group"))
    sp = _join(path, "subgroup")
    sub = _field(data, "subgroup", path, dict, "{generators} or {elements}")
    try:
        if "elements" in sub:
            perms = [Perm(tuple(p)) for p in _field(sub, "elements", sp, list, "a list of permutations")]
        else:
            gens = _field(sub, "generators", sp, dict, "a map of named permutations")
            perms = [Perm(tuple(p)) for p in gens.values()]
            perms = close_generators(G.degree, dict(zip(map(str, range(len(perms))), perms))).elements
    except (ValueError, TypeError) as exc:
        raise SchemaError(sp, str(exc)) from None
    try:
        H = G.subgroup(perms)
    except NotASubgroup as exc:
        raise ValidationError(f"NotASubgroup: {exc}") from None
    return KleinPair(G, H)


def dump_klein(K: KleinPair) -> dict:
    return {"group": dump_group(K.G), "subgroup": {"elements": [list(p.images) for p in K.H.elements]}}


def load_groupoid_geometry(data, path="") -> GroupoidGeometry:
    from ..geometry import wide_subgroupoid

    _expect(data, dict, path or "<root>", "a groupoid geometry object")
    gp = _join(path, "groupoid")
    raw = _field(data, "groupoid", path, dict, "a category or {transformation: action}")
    if "transformation" in raw:
        G = transformation_groupoid(load_action(raw["transformation"], _join(gp, "transformation")))
    else:
        G = load_category(raw, gp)
    names = _field(data, "subgroupoid", path, list, "a list of morphism names")
    for k, n in enumerate(names):
        if n not in G.index:
            raise SchemaError(_join(_join(path, "subgroupoid"), k), f"unknown morphism {n!r}")
    GG = GroupoidGeometry(G, wide_subgroupoid(G, names))
    try:
        GG.validate()
    except NotWideSubgroupoid as exc:
        raise ValidationError(f"NotWideSubgroupoid: {exc}") from None
    return GG


def dump_groupoid_geometry(GG: GroupoidGeometry) -> dict:
    return {
        "groupoid": dump_category(GG.G),
        "subgroupoid": [n for n in GG.B.names if n not in GG.G.identities],
    }


LOADERS = {
    "category": load_category,
    "group": load_group,
    "action": load_action,
    "set_valued_action": load_set_action,
    "cat_valued_action": load_cat_action,
    "hierarchy": load_hierarchy,
    "klein": load_klein,
    "groupoid_geometry": load_groupoid_geometry,
}
DUMPERS = {
    "category": dump_category,
    "group": dump_group,
    "action": dump_action,
    "set_valued_action": dump_set_action,
    "cat_valued_action": dump_cat_action,
    "hierarchy": dump_hierarchy,
    "klein": dump_klein,
    "groupoid_geometry": dump_groupoid_geometry,
}


def infer_kind(data: dict) -> str:
    keys = set(data)
    if "kind" in data:
        return data["kind"]
    if "objects" in keys and "morphisms" in keys:
        return "category"
    if "degree" in keys or "standard" in keys:
        return "group"
    if "subgroup" in keys:
        return "klein"
    if "subgroupoid" in keys:
        return "groupoid_geometry"
    if "outer_base" in keys or "blocks" in keys:
        return "hierarchy"
    if "group" in keys:
        return "action"
    if "base" in keys and isinstance(data.get("fiber"), dict):
        if any(isinstance(v, dict) for v in data["fiber"].values()):
            return "cat_valued_action"
        return "set_valued_action"
    raise SchemaError("kind", "cannot infer the document kind")


def from_json_data(data) -> Document:
    _expect(data, dict, "<root>", "a JSON object")
    kind = infer_kind(data)
    if kind not in LOADERS:
        raise SchemaError("kind", f"unknown kind {kind!r}")
    body = {k: v for k, v in data.items() if k != "kind"}
    try:
        payload = LOADERS[kind](body, "")
    except (DuplicateName, DanglingReference) as exc:
        raise SchemaError("<root>", str(exc)) from None
    return Document(kind, payload)


def parse(text: str, format: str = "json") -> Document:
    if format == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PresentationSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    elif format == "dsl":
        data = dsl_to_json(text)
    else:
        raise ValueError(f"unknown format {format!r}")
    return from_json_data(data)


def to_json_data(doc: Document) -> dict:
    return {"kind": doc.kind, **DUMPERS[doc.kind](doc.payload)}


def serialize(doc: Document) -> str:
    return json.dumps(to_json_data(doc), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- DSL

_MOR = re.compile(r"^(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_EQ = re.compile(r"^(\S+)\s*=\s*(.+)$")
_PERM = re.compile(r"^\(\s*(\d+(?:\s+\d+)*)\s*\)$")


def _perm(text, line, col):
    m = _PERM.match(text.strip())
    if not m:
        raise PresentationSyntaxError(f"expected a permutation like (2 3 1), got {text.strip()!r}", line, col)
    return [int(t) for t in m.group(1).split()]


def dsl_to_json(text: str) -> dict:
    """Compile the line DSL into a JSON document.

    Statements: ``kind K``, ``obj A B``, ``mor f: A -> B``, ``id A = e``,
    ``cmp g.f = h``, ``degree n``, ``gen r = (2 3 1)``, ``carrier x y``,
    ``act g x = y`` and ``sub h = (2 1 3)``.  ``#`` starts a comment.
    """
    doc = {}
    objects, morphisms, identities, compose = [], [], {}, []
    degree, gens, carrier, table, sub = None, {}, None, [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, _, rest = stripped.partition(" ")
        rest = rest.strip()
        rcol = col + len(head) + 1
        if head == "kind":
            if rest not in KINDS:
                raise PresentationSyntaxError(f"unknown kind {rest!r}", lineno, rcol)
            doc["kind"] = rest
        elif head == "obj":
            if not rest:
                raise PresentationSyntaxError("obj needs at least one name", lineno, rcol)
            objects += rest.split()
        elif head == "mor":
            m = _MOR.match(rest)
            if not m:
                raise PresentationSyntaxError("expected 'mor f: A -> B'", lineno, rcol)
            morphisms.append({"name": m.group(1), "src": m.group(2), "tgt": m.group(3)})
        elif head == "id":
            m = _EQ.match(rest)
            if not m:
                raise PresentationSyntaxError("expected 'id A = name'", lineno, rcol)
            identities[m.group(1)] = m.group(2).strip()
        elif head == "cmp":
            m = _EQ.match(rest)
            if not m or "." not in m.group(1):
                raise PresentationSyntaxError("expected 'cmp g.f = h'", lineno, rcol)
            g, f = m.group(1).split(".", 1)
            compose.append([g, f, m.group(2).strip()])
        elif head == "degree":
            if not rest.isdigit():
                raise PresentationSyntaxError("degree must be a non-negative integer", lineno, rcol)
            degree = int(rest)
        elif head in ("gen", "sub"):
            m = _EQ.match(rest)
            if not m:
                raise PresentationSyntaxError(f"expected '{head} name = (…)'", lineno, rcol)
            perm = _perm(m.group(2), lineno, rcol + rest.index("=") + 1)
            (gens if head == "gen" else sub)[m.group(1)] = perm
        elif head == "carrier":
            carrier = rest.split()
        elif head == "act":
            parts = rest.replace("=", " = ").split()
            if len(parts) != 4 or parts[2] != "=":
                raise PresentationSyntaxError("expected 'act g x = y'", lineno, rcol)
            table.append([parts[0], parts[1], parts[3]])
        else:
            raise PresentationSyntaxError(f"unknown statement {head!r}", lineno, col)

    group = None
    if degree is not None:
        group = {"degree": degree, "generators": gens}
    elif gens:
        raise PresentationSyntaxError("generators given without a degree", 1, 1)
    kind = doc.get("kind")
    if kind is None:
        if objects or morphisms:
            kind = "category"
        elif sub:
            kind = "klein"
        elif carrier is not None or table:
            kind = "action"
        elif group is not None:
            kind = "group"
        else:
            raise PresentationSyntaxError("empty document", 1, 1)
    if kind == "category":
        out = {"objects": objects, "morphisms": morphisms, "compose": compose}
        if identities:
            out["identities"] = identities
    elif kind == "group":
        out = dict(group or {})
    elif kind == "action":
        out = {"group": group or {}}
        if carrier is not None:
            out["carrier"] = carrier
        if table:
            out["table"] = table
    elif kind == "klein":
        out = {"group": group or {}, "subgroup": {"generators": sub}}
    else:
        raise PresentationSyntaxError(f"kind {kind!r} has no DSL form; use JSON", 1, 1)
    return {"kind": kind, **out}
