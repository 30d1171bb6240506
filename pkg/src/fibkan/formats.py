"""Versioned JSON file formats for spaces, sets over a base and finite categories."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .fincat import CategoryError, FinCategory, FunctorData, inclusion, validate_category
from .finset import FinSetOver
from .report import FibkanError
from .spaces import FibSpace, TopologyError, from_opens, is_continuous, point_space

VERSION = 1


class FormatError(FibkanError):
    """An input file problem, located by line/column or by a path into the document."""

    def __init__(self, message: str, where: str = "", subset=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
        self.subset = subset


def _label(v: Any):
    """JSON lists become tuples so labels stay hashable."""
    if isinstance(v, list):
        return tuple(_label(x) for x in v)
    return v


def _plain(v: Any):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    if isinstance(v, frozenset):
        return sorted((_plain(x) for x in v), key=json.dumps)
    return v


def load_document(text: str, kind: str, source: str = "<input>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, f"{source}:{e.lineno}:{e.colno}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", source)
    if doc.get("format") != f"fibkan/{kind}":
        raise FormatError(f"expected format 'fibkan/{kind}', found {doc.get('format')!r}", f"{source}:format")
    if doc.get("version") != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}", f"{source}:version")
    return doc


def _require(doc: dict, key: str, source: str):
    if key not in doc:
        raise FormatError(f"missing field {key!r}", source)
    return doc[key]


# ------------------------------------------------------------------ spaces

def _topology(points, opens, where: str):
    try:
        return from_opens([_label(p) for p in points], [[_label(p) for p in o] for o in opens])
    except TopologyError as e:
        raise FormatError(str(e), where, [_plain(p) for p in e.subset]) from None


def space_from_dict(doc: dict, source: str = "<input>") -> FibSpace:
    total = _topology(_require(doc, "points", source), _require(doc, "opens", source), f"{source}:opens")
    if "base" not in doc:
        return FibSpace(total, point_space(), tuple(0 for _ in total.points))
    bdoc = doc["base"]
    base = _topology(_require(bdoc, "points", f"{source}:base"), _require(bdoc, "opens", f"{source}:base"),
                     f"{source}:base.opens")
    proj_doc = _require(doc, "projection", source)
    proj = []
    for k, p in enumerate(total.points):
        key = json.dumps(_plain(p)) if not isinstance(p, str) else p
        if key not in proj_doc:
            raise FormatError(f"no projection for point {_plain(p)!r}", f"{source}:projection", [_plain(p)])
        b = _label(proj_doc[key])
        if b not in base.index:
            raise FormatError(f"projection of {_plain(p)!r} is not a base point", f"{source}:projection", [_plain(p)])
        proj.append(base.index[b])
    if not is_continuous(total, base, proj):
        bad = next(o for o in base.open_masks()
                   if not total.is_open(sum(1 << i for i, b in enumerate(proj) if o >> b & 1)))
        raise FormatError("projection is not continuous: preimage of an open set is not open",
                          f"{source}:projection", sorted(map(_plain, base.labels(bad)), key=json.dumps))
    return FibSpace(total, base, tuple(proj))


def space_to_dict(x: FibSpace) -> dict:
    doc = {"format": "fibkan/space", "version": VERSION,
           "points": [_plain(p) for p in x.points],
           "opens": [_plain(o) for o in _sorted_opens(x.total)]}
    if x.base.n != 1:
        doc["base"] = {"points": [_plain(p) for p in x.base.points],
                       "opens": [_plain(o) for o in _sorted_opens(x.base)]}
        doc["projection"] = {(p if isinstance(p, str) else json.dumps(_plain(p))): _plain(x.base.points[b])
                             for p, b in zip(x.points, x.proj)}
    return doc


def _sorted_opens(t) -> list:
    return [t.labels(m) for m in t.open_masks()]


def parse_space(path: str | Path) -> FibSpace:
    path = Path(path)
    return space_from_dict(load_document(path.read_text(), "space", str(path)), str(path))


def parse_space_text(text: str, source: str = "<input>") -> FibSpace:
    return space_from_dict(load_document(text, "space", source), source)


def emit_space(x: FibSpace) -> str:
    return json.dumps(space_to_dict(x), indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------ sets over a base

def setover_from_dict(doc: dict, source: str = "<input>") -> FinSetOver:
    base = tuple(_label(e) for e in _require(doc, "base", source))
    pos = {e: i for i, e in enumerate(base)}
    elements, proj = [], []
    for k, entry in enumerate(_require(doc, "elements", source)):
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError("element entries are [label, base point]", f"{source}:elements[{k}]")
        t, e = _label(entry[0]), _label(entry[1])
        if e not in pos:
            raise FormatError(f"unknown base point {entry[1]!r}", f"{source}:elements[{k}]")
        elements.append(t)
        proj.append(pos[e])
    return FinSetOver(tuple(elements), base, tuple(proj))


def setover_to_dict(x: FinSetOver) -> dict:
    return {"format": "fibkan/setover", "version": VERSION, "base": [_plain(e) for e in x.base],
            "elements": [[_plain(t), _plain(x.base[p])] for t, p in zip(x.elements, x.proj)]}


# -------------------------------------------------------------- categories

def category_from_dict(doc: dict, source: str = "<input>") -> FinCategory:
    objects, names = [], {}
    for k, o in enumerate(_require(doc, "objects", source)):
        if not isinstance(o, dict) or not isinstance(o.get("id"), int) or o["id"] < 0:
            raise FormatError("object ids are non-negative integers", f"{source}:objects[{k}]")
        objects.append(o["id"])
        if "name" in o:
            names[o["id"]] = o["name"]
    dom, cod, mor_names = {}, {}, {}
    for k, m in enumerate(_require(doc, "morphisms", source)):
        where = f"{source}:morphisms[{k}]"
        if not isinstance(m, dict) or not all(isinstance(m.get(f), int) for f in ("id", "dom", "cod")):
            raise FormatError("morphisms need integer id, dom and cod", where)
        if m["dom"] not in objects or m["cod"] not in objects:
            raise FormatError("dom/cod must be declared objects", where)
        dom[m["id"]], cod[m["id"]] = m["dom"], m["cod"]
        if "name" in m:
            mor_names[m["id"]] = m["name"]
    identity = {}
    for k, pair in enumerate(_require(doc, "identity", source)):
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError("identity entries are [object, morphism]", f"{source}:identity[{k}]")
        identity[pair[0]] = pair[1]
    missing = [o for o in objects if o not in identity]
    if missing:
        raise FormatError(f"objects without identity: {missing}", f"{source}:identity")
    table = {}
    for k, t in enumerate(_require(doc, "compose", source)):
        where = f"{source}:compose[{k}]"
        if not isinstance(t, list) or len(t) != 3:
            raise FormatError("composition entries are [g, f, g o f]", where)
        g, f, h = t
        if f not in dom or g not in dom or h not in dom:
            raise FormatError("composition mentions unknown morphisms", where)
        if cod[f] != dom[g]:
            raise FormatError(f"pair ({g}, {f}) is not composable", where)
        table[g, f] = h
    for f in sorted(dom):
        for g in sorted(dom):
            if cod[f] == dom[g] and (g, f) not in table:
                raise FormatError(f"composition table is partial: missing ({g}, {f})", f"{source}:compose")
    c = FinCategory(tuple(objects), dom, cod, identity, table, names, mor_names, doc.get("name", source))
    rep = validate_category(c)
    if not rep.verdict:
        raise FormatError(f"category axioms fail: {rep.witnesses[0]}", f"{source}:compose")
    return c


def category_to_dict(c: FinCategory) -> dict:
    doc = {"format": "fibkan/category", "version": VERSION,
           "objects": [{"id": o, **({"name": str(c.names[o])} if o in c.names else {})} for o in c.objects],
           "morphisms": [{"id": m, "dom": c.dom[m], "cod": c.cod[m]} for m in c.morphisms],
           "identity": [[o, c.identity[o]] for o in c.objects],
           "compose": [[g, f, c.comp(g, f)] for f in c.morphisms for g in c.morphisms if c.cod[f] == c.dom[g]]}
    if c.label:
        doc["name"] = c.label
    return doc


def parse_category(path: str | Path) -> FinCategory:
    path = Path(path)
    return category_from_dict(load_document(path.read_text(), "category", str(path)), str(path))


def parse_category_text(text: str, source: str = "<input>") -> FinCategory:
    return category_from_dict(load_document(text, "category", source), source)


def emit_category(c: FinCategory) -> str:
    return json.dumps(category_to_dict(c), indent=2, sort_keys=True) + "\n"


def functor_from_dict(doc: dict, source: str, cats: dict[str, FinCategory]) -> FunctorData:
    """Functor between named categories; 'inclusion' of listed objects is a shorthand."""
    target = cats[_require(doc, "target", source)]
    if "inclusion" in doc:
        try:
            return inclusion(target.full_subcategory(doc["inclusion"]), target)
        except CategoryError as e:
            raise FormatError(str(e), f"{source}:inclusion") from None
    src = cats[_require(doc, "source", source)]
    obj_map = {a: b for a, b in _require(doc, "objects", source)}
    mor_map = {a: b for a, b in _require(doc, "morphisms", source)}
    return FunctorData(src, target, obj_map, mor_map)
