"""Finite categories, functors, natural transformations, comma categories and
(co)limits found by exhaustive cone search."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .report import CheckReport, FibkanError


class CategoryError(FibkanError):
    pass


@dataclass(eq=False)
class FinCategory:
    """Objects and morphisms are opaque ids; names are metadata only.

    compose is either a dict {(g, f): g o f} over composable pairs or a
    callable (g, f) -> id for categories too large to tabulate.
    """
    objects: tuple
    dom: Mapping
    cod: Mapping
    identity: Mapping
    compose_table: Mapping | Callable
    names: Mapping = field(default_factory=dict)
    mor_names: Mapping = field(default_factory=dict)
    label: str = ""

    def __post_init__(self) -> None:
        self.objects = tuple(self.objects)
        self.morphisms = tuple(sorted(self.dom))
        if callable(self.compose_table) and not isinstance(self.compose_table, Mapping):
            self._comp = self.compose_table
        else:
            table = self.compose_table
            self._comp = lambda g, f: table[g, f]

    def compose(self, g, f):
        """g o f, faulting on a non-composable pair."""
        if self.cod[f] != self.dom[g]:
            raise CategoryError(f"morphisms {g} and {f} are not composable")
        return self._comp(g, f)

    def comp(self, g, f):
        """g o f without the composability check (hot loops only)."""
        return self._comp(g, f)

    @cached_property
    def _homs(self) -> dict:
        out = {(a, b): [] for a in self.objects for b in self.objects}
        for m in self.morphisms:
            out[self.dom[m], self.cod[m]].append(m)
        return {k: tuple(v) for k, v in out.items()}

    def hom(self, a, b) -> tuple:
        return self._homs[a, b]

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f):
        cache = self.__dict__.setdefault("_inverses", {})
        if f not in cache:
            a, b = self.dom[f], self.cod[f]
            ia, ib = self.identity[a], self.identity[b]
            cache[f] = next((g for g in self.hom(b, a)
                             if self._comp(g, f) == ia and self._comp(f, g) == ib), None)
        return cache[f]

    def isomorphic(self, a, b) -> bool:
        return any(self.is_iso(f) for f in self.hom(a, b))

    @cached_property
    def op(self) -> FinCategory:
        comp = self._comp
        c = FinCategory(self.objects, self.cod, self.dom, self.identity, lambda g, f: comp(f, g),
                        self.names, self.mor_names, self.label + "^op")
        c.__dict__["op"] = self
        return c

    def full_subcategory(self, objs: Iterable) -> FinCategory:
        keep = set(objs)
        unknown = keep - set(self.objects)
        if unknown:
            raise CategoryError(f"objects not in the category: {sorted(unknown)}")
        mors = [m for m in self.morphisms if self.dom[m] in keep and self.cod[m] in keep]
        return FinCategory(tuple(o for o in self.objects if o in keep),
                           {m: self.dom[m] for m in mors}, {m: self.cod[m] for m in mors},
                           {o: self.identity[o] for o in self.objects if o in keep}, self._comp,
                           {o: n for o, n in self.names.items() if o in keep},
                           {m: self.mor_names[m] for m in mors if m in self.mor_names},
                           self.label + "|sub")

    def name(self, obj) -> str:
        return str(self.names.get(obj, obj))

    def __repr__(self) -> str:
        return f"FinCategory({self.label or '?'}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def category_from_table(objects: Iterable, morphisms: Iterable[tuple], identity: Mapping,
                        table: Iterable[tuple], names: Mapping | None = None, label: str = "") -> FinCategory:
    """Build from (id, dom, cod) morphism triples and (g, f, g o f) composition triples."""
    dom, cod = {}, {}
    for m, a, b in morphisms:
        dom[m], cod[m] = a, b
    return FinCategory(tuple(objects), dom, cod, dict(identity), {(g, f): h for g, f, h in table},
                       dict(names or {}), {}, label)


def validate_category(c: FinCategory) -> CheckReport:
    """Every violated axiom is listed; violations are report content, not faults."""
    bad = []
    objs = set(c.objects)
    for m in c.morphisms:
        if c.dom[m] not in objs or c.cod[m] not in objs:
            bad.append({"axiom": "endpoints", "morphism": m})
    for o in c.objects:
        i = c.identity.get(o)
        if i is None or c.dom.get(i) != o or c.cod.get(i) != o:
            bad.append({"axiom": "identity endpoints", "object": o})
    if bad:
        return CheckReport("category axioms", False, "categories have identities and associative composition",
                           witnesses=bad)

    def comp(g, f):
        try:
            return c.comp(g, f)
        except (KeyError, LookupError):
            return None

    composite = {}
    for f in c.morphisms:
        for g in _from(c, c.cod[f]):
            h = comp(g, f)
            if h is None:
                bad.append({"axiom": "composition defined", "pair": [g, f]})
            elif h not in c.dom or c.dom[h] != c.dom[f] or c.cod[h] != c.cod[g]:
                bad.append({"axiom": "composite endpoints", "pair": [g, f], "composite": h})
            else:
                composite[g, f] = h
    for f in c.morphisms:
        a, b = c.dom[f], c.cod[f]
        if composite.get((c.identity[b], f)) != f:
            bad.append({"axiom": "left identity", "morphism": f})
        if composite.get((f, c.identity[a])) != f:
            bad.append({"axiom": "right identity", "morphism": f})
    for (g, f), gf in composite.items():
        for h in _from(c, c.cod[g]):
            hg = composite.get((h, g))
            if hg is None:
                continue
            lhs, rhs = composite.get((h, gf)), composite.get((hg, f))
            if lhs != rhs:
                bad.append({"axiom": "associativity", "triple": [h, g, f]})
    counts = {"objects": len(c.objects), "morphisms": len(c.morphisms), "composable_pairs": len(composite)}
    return CheckReport("category axioms", not bad, "categories have identities and associative composition",
                       witnesses=bad[:50], counts=counts)


def _from(c: FinCategory, a) -> Iterator:
    for b in c.objects:
        yield from c.hom(a, b)


# ---------------------------------------------------------------- functors

@dataclass(eq=False)
class FunctorData:
    source: FinCategory
    target: FinCategory
    obj_map: Mapping
    mor_map: Mapping

    def __call__(self, m):
        return self.mor_map[m]

    def ob(self, a):
        return self.obj_map[a]

    @cached_property
    def op(self) -> FunctorData:
        return FunctorData(self.source.op, self.target.op, self.obj_map, self.mor_map)


def validate_functor(f: FunctorData) -> CheckReport:
    s, t = f.source, f.target
    bad = []
    for m in s.morphisms:
        fm = f.mor_map.get(m)
        if fm is None or fm not in t.dom:
            bad.append({"law": "defined", "morphism": m})
        elif t.dom[fm] != f.obj_map[s.dom[m]] or t.cod[fm] != f.obj_map[s.cod[m]]:
            bad.append({"law": "endpoints", "morphism": m})
    for o in s.objects:
        if f.mor_map.get(s.identity[o]) != t.identity.get(f.obj_map.get(o)):
            bad.append({"law": "identity", "object": o})
    if not bad:
        for g1 in s.morphisms:
            for g2 in _from(s, s.cod[g1]):
                if f.mor_map[s.comp(g2, g1)] != t.comp(f.mor_map[g2], f.mor_map[g1]):
                    bad.append({"law": "composition", "pair": [g2, g1]})
    return CheckReport("functor laws", not bad, "functors preserve identities and composition",
                       witnesses=bad[:50])


def identity_functor(c: FinCategory) -> FunctorData:
    return FunctorData(c, c, {o: o for o in c.objects}, {m: m for m in c.morphisms})


def inclusion(sub: FinCategory, ambient: FinCategory) -> FunctorData:
    return FunctorData(sub, ambient, {o: o for o in sub.objects}, {m: m for m in sub.morphisms})


def compose_functors(g: FunctorData, f: FunctorData) -> FunctorData:
    """g o f."""
    return FunctorData(f.source, g.target, {o: g.obj_map[f.obj_map[o]] for o in f.source.objects},
                       {m: g.mor_map[f.mor_map[m]] for m in f.source.morphisms})


def terminal_category() -> FinCategory:
    return FinCategory((0,), {0: 0}, {0: 0}, {0: 0}, {(0, 0): 0}, label="1")


def constant_functor(source: FinCategory, target: FinCategory, obj) -> FunctorData:
    i = target.identity[obj]
    return FunctorData(source, target, {o: obj for o in source.objects}, {m: i for m in source.morphisms})


# ------------------------------------------------------ natural transformations

@dataclass(eq=False)
class NatTransData:
    source: FunctorData
    target: FunctorData
    components: Mapping

    def __getitem__(self, obj):
        return self.components[obj]


def validate_nat(n: NatTransData) -> CheckReport:
    f, g = n.source, n.target
    c, d = f.source, f.target
    bad = []
    for o in c.objects:
        m = n.components.get(o)
        if m is None or d.dom[m] != f.obj_map[o] or d.cod[m] != g.obj_map[o]:
            bad.append({"law": "component endpoints", "object": o})
    if not bad:
        for u in c.morphisms:
            a, b = c.dom[u], c.cod[u]
            if d.comp(g.mor_map[u], n.components[a]) != d.comp(n.components[b], f.mor_map[u]):
                bad.append({"law": "naturality", "morphism": u})
    return CheckReport("naturality", not bad, "components of a natural transformation commute with every morphism",
                       witnesses=bad[:50])


# ---------------------------------------------------------- comma categories

@dataclass(eq=False)
class CommaResult:
    category: FinCategory
    p: FunctorData
    q: FunctorData
    triples: dict  # object id -> (a, b, alpha)
    index: dict  # (a, b, alpha) -> object id


def comma_category(f: FunctorData, g: FunctorData) -> CommaResult:
    """F/G: objects (a, b, alpha: F a -> G b), morphisms (f', g') with G(g') o alpha = alpha' o F(f')."""
    if f.target is not g.target:
        raise CategoryError("comma category needs functors with a common target")
    c = f.target
    a_cat, b_cat = f.source, g.source
    triples = []
    for a in a_cat.objects:
        for b in b_cat.objects:
            for alpha in c.hom(f.obj_map[a], g.obj_map[b]):
                triples.append((a, b, alpha))
    index = {t: i for i, t in enumerate(triples)}
    dom, cod, pairs = {}, {}, {}
    ident = {}
    mid = 0
    pair_index = {}
    for i, (a, b, alpha) in enumerate(triples):
        for j, (a2, b2, alpha2) in enumerate(triples):
            for fa in a_cat.hom(a, a2):
                ffa = f.mor_map[fa]
                rhs = c.comp(alpha2, ffa)
                for gb in b_cat.hom(b, b2):
                    if c.comp(g.mor_map[gb], alpha) == rhs:
                        dom[mid], cod[mid], pairs[mid] = i, j, (fa, gb)
                        pair_index[i, j, fa, gb] = mid
                        if i == j and fa == a_cat.identity[a] and gb == b_cat.identity[b]:
                            ident[i] = mid
                        mid += 1

    def comp(m2, m1):
        fa1, gb1 = pairs[m1]
        fa2, gb2 = pairs[m2]
        return pair_index[dom[m1], cod[m2], a_cat.comp(fa2, fa1), b_cat.comp(gb2, gb1)]

    cat = FinCategory(tuple(range(len(triples))), dom, cod, ident, comp,
                      {i: t for i, t in enumerate(triples)}, {m: p for m, p in pairs.items()}, "comma")
    p = FunctorData(cat, a_cat, {i: t[0] for i, t in enumerate(triples)}, {m: pr[0] for m, pr in pairs.items()})
    q = FunctorData(cat, b_cat, {i: t[1] for i, t in enumerate(triples)}, {m: pr[1] for m, pr in pairs.items()})
    return CommaResult(cat, p, q, {i: t for i, t in enumerate(triples)}, index)


def slice_under(c: FinCategory, obj, g: FunctorData) -> CommaResult:
    """obj/G with objects (*, w, f: obj -> G w)."""
    one = terminal_category()
    return comma_category(FunctorData(one, c, {0: obj}, {0: c.identity[obj]}), g)


def slice_over(g: FunctorData, c: FinCategory, obj) -> CommaResult:
    """G/obj with objects (w, *, f: G w -> obj)."""
    one = terminal_category()
    return comma_category(g, FunctorData(one, c, {0: obj}, {0: c.identity[obj]}))


# -------------------------------------------------------------- (co)limits

@dataclass(eq=False)
class DiagramData:
    shape: FinCategory
    functor: FunctorData

    @property
    def ambient(self) -> FinCategory:
        return self.functor.target

    @cached_property
    def op(self) -> DiagramData:
        return DiagramData(self.shape.op, self.functor.op)


@dataclass(frozen=True)
class ConeData:
    apex: Hashable
    legs: tuple  # legs[i] for the i-th object of the shape
    direction: str = "limit"

    def leg(self, shape: FinCategory, obj):
        return self.legs[shape.objects.index(obj)]


def diagram_of(functor: FunctorData) -> DiagramData:
    return DiagramData(functor.source, functor)


class _ConeSearch:
    """Limit cones of a diagram, enumerated lazily per apex in lexicographic leg order."""

    def __init__(self, d: DiagramData):
        self.d = d
        c = d.ambient
        s = d.shape
        self.c = c
        self.targets = [d.functor.obj_map[o] for o in s.objects]
        pos = {o: i for i, o in enumerate(s.objects)}
        # constraint D(u) o leg_i = leg_j checked once both legs are assigned
        self.checks = [[] for _ in s.objects]
        for u in s.morphisms:
            i, j = pos[s.dom[u]], pos[s.cod[u]]
            du = d.functor.mor_map[u]
            if i == j and du == c.identity[self.targets[i]]:
                continue
            self.checks[max(i, j)].append((i, j, du))

    def cones(self, apex) -> Iterator[tuple]:
        c = self.c
        comp = c.comp
        homs = [c.hom(apex, t) for t in self.targets]
        n = len(homs)
        legs = [None] * n
        checks = self.checks

        def go(k):
            if k == n:
                yield tuple(legs)
                return
            for m in homs[k]:
                legs[k] = m
                if all(comp(du, legs[i]) == legs[j] for i, j, du in checks[k]):
                    yield from go(k + 1)
            legs[k] = None

        return go(0)

    def universality(self, apex, legs, stop_early: bool = True) -> tuple[bool, dict | None, int]:
        """Does every cone factor uniquely through (apex, legs)?  Returns a witness otherwise."""
        c = self.c
        comp = c.comp
        checked = 0
        for other in c.objects:
            images = {}
            for m in c.hom(other, apex):
                img = tuple(comp(l, m) for l in legs)
                if img in images:
                    return False, {"reason": "two factorizations", "apex": other,
                                   "cone": list(img), "maps": [images[img], m]}, checked
                images[img] = m
            for cone in self.cones(other):
                checked += 1
                if cone not in images:
                    return False, {"reason": "cone does not factor", "apex": other, "cone": list(cone)}, checked
        return True, None, checked


def is_limit_cone(d: DiagramData, cone: ConeData) -> CheckReport:
    """Exhaustive check that every cone factors through cone by exactly one morphism."""
    dd = d if cone.direction == "limit" else d.op
    ok, wit, checked = _ConeSearch(dd).universality(cone.apex, cone.legs)
    name = "limit cone" if cone.direction == "limit" else "colimit cone"
    return CheckReport(name, ok, "a limit is a terminal cone: every cone factors through it uniquely",
                       witnesses=[wit] if wit else [], counts={"cones_checked": checked})


def is_cone(d: DiagramData, cone: ConeData) -> bool:
    dd = d if cone.direction == "limit" else d.op
    search = _ConeSearch(dd)
    c = dd.ambient
    if any(c.dom[l] != cone.apex or c.cod[l] != t for l, t in zip(cone.legs, search.targets)):
        return False
    return all(c.comp(du, cone.legs[i]) == cone.legs[j] for row in search.checks for i, j, du in row)


def limit(d: DiagramData) -> tuple[ConeData, CheckReport] | None:
    """Terminal cone by exhaustive search; least apex id then lexicographic legs."""
    search = _ConeSearch(d)
    tried = 0
    c = d.ambient
    for apex in sorted(c.objects):
        # a limit apex has exactly as many cones as endomorphisms (cones at apex <-> hom(apex, apex))
        n_end = len(c.hom(apex, apex))
        n_cones = 0
        for _ in search.cones(apex):
            n_cones += 1
            if n_cones > n_end:
                break
        if n_cones != n_end:
            continue
        for legs in search.cones(apex):
            tried += 1
            ok, _, checked = search.universality(apex, legs)
            if ok:
                rep = CheckReport("limit", True, "a limit is a terminal cone: every cone factors through it uniquely",
                                  counts={"candidates_tried": tried, "cones_checked": checked})
                return ConeData(apex, legs, "limit"), rep
    return None


def colimit(d: DiagramData) -> tuple[ConeData, CheckReport] | None:
    found = limit(d.op)
    if found is None:
        return None
    cone, rep = found
    rep.check = "colimit"
    rep.provenance = "a colimit is an initial cocone: it factors uniquely into every cocone"
    return ConeData(cone.apex, cone.legs, "colimit"), rep


def all_cones(d: DiagramData, apex) -> list[tuple]:
    return list(_ConeSearch(d).cones(apex))


def all_cocones(d: DiagramData, apex) -> list[tuple]:
    return list(_ConeSearch(d.op).cones(apex))


# ------------------------------------------------------- (co)density checks

def canonical_codiagram(w: Iterable, ambient: FinCategory, x) -> tuple[DiagramData, ConeData, CommaResult]:
    """J^X: X/W -> C together with the tautological cone with apex X."""
    sub = ambient.full_subcategory(w)
    com = slice_under(ambient, x, inclusion(sub, ambient))
    functor = compose_functors(inclusion(sub, ambient), com.q)
    d = DiagramData(com.category, functor)
    legs = tuple(com.triples[o][2] for o in com.category.objects)
    return d, ConeData(x, legs, "limit"), com


def canonical_diagram(w: Iterable, ambient: FinCategory, x) -> tuple[DiagramData, ConeData, CommaResult]:
    """J_X: W/X -> C together with the tautological cocone with apex X."""
    sub = ambient.full_subcategory(w)
    com = slice_over(inclusion(sub, ambient), ambient, x)
    functor = compose_functors(inclusion(sub, ambient), com.p)
    d = DiagramData(com.category, functor)
    legs = tuple(com.triples[o][2] for o in com.category.objects)
    return d, ConeData(x, legs, "colimit"), com


def _check_members(w, ambient: FinCategory) -> list:
    w = list(w)
    missing = [o for o in w if o not in ambient.objects]
    if missing:
        raise CategoryError(f"W objects not in the ambient category: {missing}")
    return w


def is_codense(w: Iterable, ambient: FinCategory) -> CheckReport:
    """Every X is the limit of X/W -> C via the comparison X -> lim J^X."""
    w = _check_members(w, ambient)
    bad = []
    for x in ambient.objects:
        d, taut, _ = canonical_codiagram(w, ambient, x)
        found = limit(d)
        if found is None:
            bad.append({"object": x, "reason": "no limit"})
            continue
        cone, _ = found
        comparison = _factor_one(ambient, x, cone.apex, cone.legs, taut.legs)
        if comparison is None or not ambient.is_iso(comparison):
            bad.append({"object": x, "reason": "comparison is not an isomorphism", "limit_apex": cone.apex})
    return CheckReport("codense", not bad, "codense: every object is the limit of the canonical diagram of maps into W",
                       witnesses=bad, counts={"objects": len(ambient.objects), "W": len(w)})


def is_dense(w: Iterable, ambient: FinCategory) -> CheckReport:
    rep = is_codense(w, ambient.op)
    rep.check = "dense"
    rep.provenance = "dense: every object is the colimit of the canonical diagram of maps out of W"
    return rep


def _factor_one(c: FinCategory, src, apex, legs, targets):
    """The unique m: src -> apex with legs[i] o m = targets[i], or None."""
    found = [m for m in c.hom(src, apex) if all(c.comp(l, m) == t for l, t in zip(legs, targets))]
    return found[0] if len(found) == 1 else None


def factorizations(c: FinCategory, src, apex, legs, targets) -> list:
    return [m for m in c.hom(src, apex) if all(c.comp(l, m) == t for l, t in zip(legs, targets))]


def relabel_category(c: FinCategory, obj_perm: Mapping, mor_perm: Mapping) -> FinCategory:
    """Same category with object and morphism ids renamed."""
    inv = {v: k for k, v in mor_perm.items()}
    comp = c.comp
    return FinCategory(tuple(obj_perm[o] for o in c.objects),
                       {mor_perm[m]: obj_perm[c.dom[m]] for m in c.morphisms},
                       {mor_perm[m]: obj_perm[c.cod[m]] for m in c.morphisms},
                       {obj_perm[o]: mor_perm[c.identity[o]] for o in c.objects},
                       lambda g, f: mor_perm[comp(inv[g], inv[f])],
                       {obj_perm[o]: n for o, n in c.names.items()}, {}, c.label + "|relabel")


def relabel_functor(f: FunctorData, target: FinCategory, obj_perm: Mapping, mor_perm: Mapping) -> FunctorData:
    return FunctorData(f.source, target, {o: obj_perm[v] for o, v in f.obj_map.items()},
                       {m: mor_perm[v] for m, v in f.mor_map.items()})


def discrete_shape(n: int) -> FinCategory:
    return FinCategory(tuple(range(n)), {i: i for i in range(n)}, {i: i for i in range(n)},
                       {i: i for i in range(n)}, {(i, i): i for i in range(n)}, label=f"discrete{n}")


def parallel_pair_shape() -> FinCategory:
    """0 -a,b-> 1 with ids 0, 1 and arrows 2, 3."""
    dom = {0: 0, 1: 1, 2: 0, 3: 0}
    cod = {0: 0, 1: 1, 2: 1, 3: 1}
    table = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (3, 0): 3, (1, 2): 2, (1, 3): 3}
    return FinCategory((0, 1), dom, cod, {0: 0, 1: 1}, table, label="parallel pair")


def functor_from_arrows(shape: FinCategory, target: FinCategory, obj_map: Mapping, arrow_map: Mapping) -> FunctorData:
    """Complete a functor given on non-identity morphisms of a shape with no nontrivial composites."""
    mm = {shape.identity[o]: target.identity[obj_map[o]] for o in shape.objects}
    mm.update(arrow_map)
    return FunctorData(shape, target, dict(obj_map), mm)

