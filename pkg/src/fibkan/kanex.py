"""Pointwise Kan extensions of a functor along itself, the resulting codensity
monads and density comonads, idempotency, algebras and strong hulls."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .fincat import (
    CategoryError, ConeData, DiagramData, FinCategory, FunctorData, NatTransData, canonical_diagram, colimit,
    compose_functors, factorizations, identity_functor, inclusion, is_codense, is_dense, is_limit_cone, limit,
    slice_under,
    validate_functor, validate_nat,
)
from .report import CheckReport, FibkanError, InconsistencyError, PreconditionError, combine


class KanError(FibkanError):
    def __init__(self, message: str, obj=None):
        super().__init__(message)
        self.obj = obj


@dataclass(eq=False)
class MonadData:
    carrier: FunctorData
    unit: NatTransData
    mult: NatTransData

    @property
    def category(self) -> FinCategory:
        return self.carrier.source


@dataclass(eq=False)
class ComonadData:
    carrier: FunctorData
    counit: NatTransData
    comult: NatTransData

    @property
    def category(self) -> FinCategory:
        return self.carrier.source

    def as_op_monad(self) -> MonadData:
        """The same data read in the opposite category, where it is a monad."""
        return MonadData(self.carrier.op, _op_nat(self.counit), _op_nat(self.comult))


def _op_nat(n: NatTransData) -> NatTransData:
    return NatTransData(n.target.op, n.source.op, n.components)


@dataclass(frozen=True)
class AlgebraWitness:
    obj: object
    structure: object


@dataclass(eq=False)
class KanResult:
    extension: FunctorData
    mediating: NatTransData
    cones: dict = field(default_factory=dict)  # object -> ConeData
    report: CheckReport | None = None


def _unique(c: FinCategory, src, apex, legs, targets, what: str, obj):
    found = factorizations(c, src, apex, legs, targets)
    if len(found) != 1:
        raise KanError(f"{what} at object {obj!r}: {len(found)} factorizations instead of one", obj)
    return found[0]


def right_kan_self(g: FunctorData) -> tuple[KanResult, MonadData]:
    """R(B) = lim of B/G -> W -> C, with unit, counit and multiplication from the limit cones."""
    c = g.target
    w = g.source
    comp = c.comp
    apex, legs, lookup = {}, {}, {}
    for b in c.objects:
        com = slice_under(c, b, g)
        d = DiagramData(com.category, compose_functors(g, com.q))
        found = limit(d)
        if found is None:
            raise KanError(f"no limit of the canonical diagram at object {c.name(b)}", b)
        cone, _ = found
        apex[b] = cone.apex
        legs[b] = cone.legs
        lookup[b] = {(t[1], t[2]): k for k, t in com.triples.items()}

    def leg(b, wo, f):
        return legs[b][lookup[b][wo, f]]

    keys = {b: list(lookup[b]) for b in c.objects}
    r_mor = {}
    for h in c.morphisms:
        b, b2 = c.dom[h], c.cod[h]
        ls = [leg(b2, wo, f) for wo, f in keys[b2]]
        ts = [leg(b, wo, comp(f, h)) for wo, f in keys[b2]]
        r_mor[h] = _unique(c, apex[b], apex[b2], ls, ts, "functor value of the extension", h)
    r = FunctorData(c, c, dict(apex), r_mor)
    eta = {}
    for b in c.objects:
        ls = [leg(b, wo, f) for wo, f in keys[b]]
        ts = [f for wo, f in keys[b]]
        eta[b] = _unique(c, b, apex[b], ls, ts, "unit", b)
    eps = {a: leg(g.obj_map[a], a, c.identity[g.obj_map[a]]) for a in w.objects}
    mu = {}
    for b in c.objects:
        ls, ts = [], []
        for wo, f in keys[b]:
            l = leg(b, wo, f)
            ls.append(l)
            ts.append(comp(eps[wo], r_mor[l]))
        mu[b] = _unique(c, apex[apex[b]], apex[b], ls, ts, "multiplication", b)
    ident = identity_functor(c)
    rr = compose_functors(r, r)
    monad = MonadData(r, NatTransData(ident, r, eta), NatTransData(rr, r, mu))
    counit = NatTransData(compose_functors(r, g), g, eps)
    laws = check_monad_laws(monad)
    triangle = _unit_triangle(g, eta, eps)
    rep = combine("codensity monad", "the right Kan extension of a functor along itself carries a monad structure",
                  [laws, validate_nat(counit), triangle])
    if not rep.verdict:
        raise InconsistencyError("computed codensity monad violates its laws: " + rep.render())
    cones = {b: ConeData(apex[b], legs[b], "limit") for b in c.objects}
    return KanResult(r, counit, cones, rep), monad


def _unit_triangle(g: FunctorData, eta: dict, eps: dict) -> CheckReport:
    c = g.target
    bad = [a for a in g.source.objects
           if c.comp(eps[a], eta[g.obj_map[a]]) != c.identity[g.obj_map[a]]]
    return CheckReport("unit triangle", not bad, "the counit composed with the unit at G is the identity of G",
                       witnesses=[{"object": a} for a in bad])


def left_kan_self(g: FunctorData) -> tuple[KanResult, ComonadData]:
    """L(C) = colim of G/C -> W -> C, computed as the right extension in the opposite category."""
    c = g.target
    try:
        kr, m = right_kan_self(g.op)
    except KanError as e:
        raise KanError(f"no colimit of the canonical diagram at object {c.name(e.obj)}", e.obj) from None
    lf = FunctorData(c, c, kr.extension.obj_map, kr.extension.mor_map)
    ll = compose_functors(lf, lf)
    counit = NatTransData(lf, identity_functor(c), m.unit.components)
    comult = NatTransData(lf, ll, m.mult.components)
    unit = NatTransData(g, compose_functors(lf, g), kr.mediating.components)
    rep = kr.report
    rep.check = "density comonad"
    rep.provenance = "the left Kan extension of a functor along itself carries a comonad structure"
    cones = {b: ConeData(cone.apex, cone.legs, "colimit") for b, cone in kr.cones.items()}
    return KanResult(lf, unit, cones, rep), ComonadData(lf, counit, comult)


def check_monad_laws(m: MonadData) -> CheckReport:
    t = m.carrier
    c = t.source
    comp = c.comp
    bad = []
    for b in c.objects:
        tb = t.obj_map[b]
        mu, eta = m.mult.components[b], m.unit.components[b]
        ident = c.identity[tb]
        if comp(mu, m.unit.components[tb]) != ident:
            bad.append({"law": "left unit", "object": b})
        if comp(mu, t.mor_map[eta]) != ident:
            bad.append({"law": "right unit", "object": b})
        if comp(mu, m.mult.components[tb]) != comp(mu, t.mor_map[mu]):
            bad.append({"law": "associativity", "object": b})
    children = [validate_functor(t), validate_nat(m.unit), validate_nat(m.mult)]
    rep = CheckReport("monad laws", not bad, "a monad is a monoid of endofunctors: unit laws and associativity",
                      witnesses=bad)
    return combine("monad laws", rep.provenance, [rep] + children)


def _as_monad(m: MonadData | ComonadData) -> tuple[MonadData, bool]:
    if isinstance(m, ComonadData):
        return m.as_op_monad(), True
    return m, False


def is_idempotent(m: MonadData | ComonadData) -> CheckReport:
    """Four equivalent idempotency tests evaluated independently; they must agree."""
    mon, dual = _as_monad(m)
    t = mon.carrier
    c = t.source
    eta, mu = mon.unit.components, mon.mult.components
    items = {
        "mult iso": [b for b in c.objects if not c.is_iso(mu[b])],
        "unit at T iso": [b for b in c.objects if not c.is_iso(eta[t.obj_map[b]])],
        "T of unit iso": [b for b in c.objects if not c.is_iso(t.mor_map[eta[b]])],
        "unit at T equals T of unit": [b for b in c.objects if eta[t.obj_map[b]] != t.mor_map[eta[b]]],
    }
    verdicts = {k: not v for k, v in items.items()}
    if len(set(verdicts.values())) != 1:
        raise InconsistencyError(f"idempotency criteria disagree: {verdicts}")
    verdict = next(iter(verdicts.values()))
    if dual:
        names = {"mult iso": "comult iso", "unit at T iso": "counit at L iso",
                 "T of unit iso": "L of counit iso", "unit at T equals T of unit": "counit at L equals L of counit"}
        items = {names[k]: v for k, v in items.items()}
    children = [CheckReport(k, not v, "equivalent characterisations of idempotency",
                            witnesses=[{"object": b} for b in v]) for k, v in items.items()]
    witnesses = [{"criterion": k, "object": v[0]} for k, v in items.items() if v]
    kind = "comonad" if dual else "monad"
    return CheckReport(f"idempotent {kind}", verdict,
                       "a monad is idempotent iff its multiplication is invertible, iff either whiskered unit is, "
                       "iff the two whiskered units agree", witnesses=witnesses, children=children)


def algebra_objects(m: MonadData | ComonadData) -> tuple[set, list[AlgebraWitness]]:
    """Objects whose unit (counit) is invertible, each with its unique structure map."""
    if not is_idempotent(m).verdict:
        raise PreconditionError("algebra objects are only computed for idempotent (co)monads")
    mon, _ = _as_monad(m)
    c = mon.category
    t = mon.carrier
    objs, wits = set(), []
    for a in c.objects:
        eta = mon.unit.components[a]
        u = c.inverse(eta)
        if u is None:
            continue
        if c.comp(u, eta) != c.identity[a] or c.comp(u, t.mor_map[u]) != c.comp(u, mon.mult.components[a]):
            raise InconsistencyError(f"algebra squares fail at {a!r}")
        objs.add(a)
        wits.append(AlgebraWitness(a, u))
    return objs, wits


def is_replete(objs: Iterable, c: FinCategory) -> bool:
    s = set(objs)
    return all(b in s for a in s for b in c.objects if c.isomorphic(a, b))


def counit_component(w: Iterable, ambient: FinCategory, x) -> tuple[ConeData | None, object | None]:
    """Colimit of W/X -> C and the induced map to X, or (None, None) if the colimit is absent."""
    d, taut, _ = canonical_diagram(w, ambient, x)
    found = colimit(d)
    if found is None:
        return None, None
    cone, _ = found
    # counit: the unique L(X) -> X with counit o leg_i = tautological leg_i
    found = [m for m in ambient.hom(cone.apex, x)
             if all(ambient.comp(m, l) == t for l, t in zip(cone.legs, taut.legs))]
    return cone, found[0] if len(found) == 1 else None


def w_monic_witness(c: FinCategory, w: Iterable, m):
    """(w, f, g) with f != g and m o f = m o g, or None when m is W-monic."""
    for wo in w:
        seen = {}
        for f in c.hom(wo, c.dom[m]):
            k = c.comp(m, f)
            if k in seen:
                return wo, seen[k], f
            seen[k] = f
    return None


def density_defect(w: Iterable, ambient: FinCategory, a) -> CheckReport:
    """Local non-idempotency certificate for the density comonad at a.

    With L(a) the colimit of W/a -> C, the counit at L(a) can only be invertible
    when L(a) with its tautological cocone is itself the colimit of W/L(a) -> C.
    A cocone that fails to factor uniquely refutes this without needing L(L(a)).
    """
    w = list(w)
    cone, eps = counit_component(w, ambient, a)
    prov = "the density comonad is idempotent only if its counit is invertible at every value L(a)"
    if cone is None:
        raise KanError(f"no colimit of the canonical diagram at {ambient.name(a)}", a)
    la = cone.apex
    d, taut, _ = canonical_diagram(w, ambient, la)
    rep = is_limit_cone(d, taut)
    witnesses = []
    if not rep.verdict:
        witnesses.append({"component": f"counit at L({ambient.name(a)}) = {ambient.name(la)}",
                          "competing_cocone": rep.witnesses[0]})
    monic = w_monic_witness(ambient, w, eps)
    data = {"object": a, "L": la, "counit": eps, "tautological_cocone_is_colimit": rep.verdict}
    if monic is not None:
        data["counit_not_W_monic"] = {"from": monic[0], "maps": [monic[1], monic[2]]}
    return CheckReport("density comonad at one object", rep.verdict, prov, witnesses=witnesses,
                       counts={"cocones_checked": rep.counts.get("cones_checked", 0)},
                       children=[rep], data=data)


def certify_strong_hull(w: Iterable, ambient: FinCategory, side: str = "left") -> CheckReport:
    """Strong coreflective (left) or reflective (right) hull of W, or a refutation."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    w = list(w)
    if not w:
        raise PreconditionError("W must be nonempty")
    missing_w = [o for o in w if o not in ambient.objects]
    if missing_w:
        raise CategoryError(f"W objects not in the ambient category: {missing_w}")
    c = ambient if side == "left" else ambient.op
    kind = "coreflective" if side == "left" else "reflective"
    prov = (f"W has a strong {kind} hull iff it is Kan extendable, iff the canonical "
            f"{'counit is W-monic' if side == 'left' else 'unit is W-epic'} at every object")
    missing, bad = [], []
    for x in c.objects:
        cone, eps = counit_component(w, c, x)
        if cone is None:
            missing.append(x)
            continue
        if eps is None:
            raise InconsistencyError(f"canonical comparison at {x!r} is not unique")
        wit = w_monic_witness(c, w, eps)
        if wit is not None:
            bad.append({"object": x, "L": cone.apex, "counit": eps, "from": wit[0], "maps": [wit[1], wit[2]]})
    if bad:
        notes = [f"no canonical colimit at objects {missing}"] if missing else []
        return CheckReport(f"strong {kind} hull", False, prov, witnesses=bad, notes=notes,
                           data={"hull": None, "missing_colimits": missing})
    if missing:
        raise KanError(f"no (co)limit of the canonical diagram at object {missing[0]!r}", missing[0])
    sub = ambient.full_subcategory(w)
    if side == "left":
        _, com = left_kan_self(inclusion(sub, ambient))
    else:
        _, com = right_kan_self(inclusion(sub, ambient))
    idem = is_idempotent(com)
    children = [idem]
    hull = []
    if idem.verdict:
        hull = sorted(algebra_objects(com)[0])
        inside = set(w) <= set(hull)
        children.append(CheckReport("hull contains W", inside, "W lies in its hull",
                                    witnesses=[] if inside else [{"missing": sorted(set(w) - set(hull))}]))
        if inside:
            hull_cat = ambient.full_subcategory(hull)
            children.append(is_dense(w, hull_cat) if side == "left" else _codense(w, hull_cat))
        replete = is_replete(hull, ambient)
        children.append(CheckReport("hull replete", replete, "the hull is closed under isomorphism",
                                    witnesses=[] if replete else [{"hull": hull}]))
    rep = combine(f"strong {kind} hull", prov, children, data={"hull": hull if idem.verdict else None})
    return rep


def _codense(w, c: FinCategory) -> CheckReport:
    return is_codense(w, c)
