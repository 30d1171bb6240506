"""Reflectors onto separation-axiom subcategories and coreflectors onto
W-generated subcategories, with universal-property certification."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

from .report import CheckReport, FibkanError, PreconditionError, combine
from .separation import (
    fch_spaces, is_fib_hausdorff, is_k_hausdorff, is_weak_hausdorff, k_hausdorff_witness,
    satisfies, weak_hausdorff_witness,
    default_kh_bound,
)
from .spaces import (
    FibMap, FibSpace, FinTopSpace, bits, fib_maps, final_topology,
    point_space, quotient_by_labels, sierpinski, is_continuous, find_isomorphism,
)

REFLECT_AXIOMS = ("fibT1", "fibT2", "fibUrysohn", "fibWeakH", "fibKH")


class CertificationError(FibkanError):
    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


@dataclass(frozen=True)
class SubcategorySpec:
    objects: tuple
    name: str = "W"

    def __post_init__(self) -> None:
        if not self.objects:
            raise ValueError("a generating family must be nonempty")
        base = self.objects[0].base
        if any(o.base != base for o in self.objects):
            raise ValueError("all objects of a generating family must share a base")

    @property
    def base(self) -> FinTopSpace:
        return self.objects[0].base


def point_fiber_family(base: FinTopSpace) -> SubcategorySpec:
    """One-point spaces, one over each base point."""
    objs = tuple(FibSpace(point_space(base.points[b]), base, (b,)) for b in range(base.n))
    return SubcategorySpec(objs, "point fibres")


def fch_family(base: FinTopSpace, max_points: int) -> SubcategorySpec:
    return SubcategorySpec(fch_spaces(base, max_points),
                           f"fibrewise compact Hausdorff spaces with <= {max_points} points")


def sierpinski_family(base: FinTopSpace) -> SubcategorySpec:
    """The Sierpinski space with each continuous projection to the base."""
    s = sierpinski()
    objs = []
    for proj in fib_maps_plain(s, base):
        cand = FibSpace(s, base, proj)
        if not any(find_isomorphism(cand, o) for o in objs):
            objs.append(cand)
    return SubcategorySpec(tuple(objs), "Sierpinski family")


def fib_maps_plain(a: FinTopSpace, b: FinTopSpace) -> list:
    return [f for f in iproduct(range(b.n), repeat=a.n) if is_continuous(a, b, f)]


# ------------------------------------------------------------------ suitability

def check_suitable(w: SubcategorySpec, base: FinTopSpace) -> CheckReport:
    prov = "for every base point some generator has its only nonempty fibre there"
    if w.base != base:
        return CheckReport("suitable", False, prov, witnesses=[{"reason": "family lives over another base"}])
    uncovered = []
    for b in range(base.n):
        if not any(o.fibers[b] and all(not o.fibers[c] for c in range(base.n) if c != b)
                   for o in w.objects):
            uncovered.append(base.points[b])
    if uncovered:
        return CheckReport("suitable", False, prov, witnesses=[{"uncovered": uncovered}])
    return CheckReport("suitable", True, prov, counts={"generators": len(w.objects)})


@lru_cache(maxsize=None)
def _suitable(w: SubcategorySpec) -> bool:
    return check_suitable(w, w.base).verdict


# ------------------------------------------------------------------ coreflector

@dataclass(frozen=True)
class CoreflectionResult:
    coreflected: FibSpace
    counit: FibMap
    generators: SubcategorySpec


@lru_cache(maxsize=None)
def _coreflect(x: FibSpace, w: SubcategorySpec) -> FibSpace:
    maps_in = [(v.total, f) for v in w.objects for f in fib_maps(v, x)]
    total = final_topology(x.points, maps_in)
    return FibSpace(total, x.base, x.proj)


def coreflect(x: FibSpace, w: SubcategorySpec) -> CoreflectionResult:
    """Same points, final topology from every map out of a generator."""
    if x.base != w.base:
        raise PreconditionError("space and generators live over different bases")
    if not _suitable(w):
        raise PreconditionError(f"generating family {w.name!r} is not suitable")
    c = _coreflect(x, w)
    return CoreflectionResult(c, FibMap(c, x, tuple(range(x.n))), w)


def coreflected(x: FibSpace, w: SubcategorySpec) -> FibSpace:
    return coreflect(x, w).coreflected


def is_w_generated(x: FibSpace, w: SubcategorySpec) -> CheckReport:
    c = coreflected(x, w)
    prov = "carries the final topology of all maps out of generators"
    if c == x:
        return CheckReport("W-generated", True, prov, counts={"points": x.n})
    extra = [x.total.labels(c.total.nbhd[i]) for i in range(x.n) if c.total.nbhd[i] != x.total.nbhd[i]]
    return CheckReport("W-generated", False, prov,
                       witnesses=[{"open_in_final_topology_only": extra[0]}])


def generated(x: FibSpace, w: SubcategorySpec) -> bool:
    return coreflected(x, w) == x


# ------------------------------------------------------------------- reflector

@dataclass(frozen=True)
class ReflectionResult:
    reflected: FibSpace
    unit: FibMap
    axiom: str
    trace: tuple = field(default=())
    certificate: CheckReport | None = None


def _union_find_classes(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return [find(i) for i in range(n)]


def _all_violations(x: FibSpace, test) -> list:
    """Every same-fibre pair flagged by test(i, j)."""
    out = []
    for b in range(x.base.n):
        fb = list(bits(x.fibers[b]))
        for a, i in enumerate(fb):
            for j in fb[a + 1:]:
                if test(i, j):
                    out.append((i, j))
    return out


def forced_pairs(x: FibSpace, axiom: str, kh_bound: int | None = None) -> list:
    t = x.total
    if axiom == "fibT1":
        return _all_violations(x, lambda i, j: t.leq(i, j) or t.leq(j, i))
    if axiom == "fibT2":
        return _all_violations(x, lambda i, j: bool(t.nbhd[i] & t.nbhd[j]))
    if axiom == "fibUrysohn":
        return _all_violations(x, lambda i, j: bool(t.closure(t.nbhd[i]) & t.closure(t.nbhd[j])))
    if axiom == "fibWeakH":
        # over a T1 base weak Hausdorff spaces are fibrewise T1, so T1-forced pairs are sound
        pairs = forced_pairs(x, "fibT1")
        if pairs:
            return pairs
        w = weak_hausdorff_witness(x)
        if w is None:
            return []
        omega, xo, s, _top = w
        # a point of the closure outside the image must go to an image point of its own fibre
        out = []
        ct = xo.total
        for y in bits(ct.closure(s) & ~s):
            same = [i for i in bits(s) if xo.proj[i] == xo.proj[y] and ct.leq(y, i)]
            if len(same) == 1:
                out.append((x.total.index[ct.points[y]], x.total.index[ct.points[same[0]]]))
        return out
    if axiom == "fibKH":
        bound = default_kh_bound(x) if kh_bound is None else kh_bound
        w = k_hausdorff_witness(x, bound)
        if w is None:
            return []
        _omega, k, sq, u = w
        diag = {i for i, (a, b) in enumerate(sq.points) if a == b}
        out = []
        for i in range(k.n):
            if u[i] in diag:
                continue
            if any(u[j] in diag for j in bits(k.total.nbhd[i])):
                a, b = sq.points[u[i]]
                out.append((x.total.index[a], x.total.index[b]))
        return out
    raise ValueError(f"unknown axiom {axiom!r}")


def _satisfies(x: FibSpace, axiom: str, kh_bound: int | None) -> bool:
    if axiom == "fibWeakH":
        return is_weak_hausdorff(x).verdict
    if axiom == "fibKH":
        return is_k_hausdorff(x, kh_bound).verdict
    return satisfies(x, axiom)


def reflect_axiom(x: FibSpace, axiom: str, targets: Sequence[FibSpace] | None = None,
                  kh_bound: int | None = None) -> ReflectionResult:
    """Iterated quotient by forced identifications until the axiom holds."""
    if axiom not in REFLECT_AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    if axiom in ("fibWeakH", "fibKH") and not x.base.is_t1:
        raise PreconditionError(f"{axiom} reflection needs a T1 base")
    cur = x
    unit = list(range(x.n))
    trace = []
    while not _satisfies(cur, axiom, kh_bound):
        pairs = forced_pairs(cur, axiom, kh_bound)
        if not pairs:
            raise CertificationError(f"no forced identification found for {axiom}", cur)
        roots = _union_find_classes(cur.n, pairs)
        nxt, q = quotient_by_labels(cur, roots)
        trace.append({"round": len(trace) + 1,
                      "merged": [[cur.points[i], cur.points[j]] for i, j in pairs],
                      "points_before": cur.n, "points_after": nxt.n})
        unit = [q.mapping[u] for u in unit]
        cur = nxt
    eta = FibMap(x, cur, tuple(unit))
    cert = None
    if targets is not None:
        cert = certify_reflection(x, cur, eta, axiom, targets, kh_bound)
        if not cert.verdict:
            raise CertificationError("universal property fails", cert.witnesses[0])
    return ReflectionResult(cur, eta, axiom, tuple(trace), cert)


def certify_reflection(x: FibSpace, r: FibSpace, eta: FibMap, axiom: str,
                       targets: Sequence[FibSpace], kh_bound: int | None = None) -> CheckReport:
    """Precomposition with the unit is a bijection hom(R, V) -> hom(X, V) for every axiom target V."""
    checked = 0
    for v in targets:
        if v.base != x.base or not _satisfies(v, axiom, kh_bound):
            continue
        checked += 1
        via = {tuple(g[e] for e in eta.mapping) for g in fib_maps(r, v)}
        direct = set(fib_maps(x, v))
        if via != direct or len(via) != len(fib_maps(r, v)):
            missing = sorted(direct - via)
            return CheckReport("reflection universal property", False,
                               "maps into axiom spaces factor uniquely through the quotient unit",
                               witnesses=[{"target_points": list(v.points),
                                           "unfactored_map": [list(m) for m in missing[:1]]}],
                               counts={"targets": checked})
    return CheckReport("reflection universal property", True,
                       "maps into axiom spaces factor uniquely through the quotient unit",
                       counts={"targets": checked})


def unit_is_quotient(res: ReflectionResult) -> bool:
    """Surjective, and the target carries the final topology of the unit."""
    eta = res.unit
    if set(eta.mapping) != set(range(res.reflected.n)):
        return False
    final = final_topology(res.reflected.points, [(eta.source.total, eta.mapping)])
    return final == res.reflected.total


def unit_is_iso(res: ReflectionResult) -> bool:
    return unit_is_quotient(res) and len(set(res.unit.mapping)) == res.unit.source.n


# ------------------------------------------------------------------ hull tower

def hull_tower(w_small: SubcategorySpec, w_big: SubcategorySpec, corpus: Sequence[FibSpace]) -> CheckReport:
    """Nested generators: generated spaces nest, the smaller class is coreflective in the
    larger, and within fibrewise Hausdorff spaces generation commutes with intersection."""
    prov = "coreflective nesting of generated subcategories; generation within fibrewise Hausdorff spaces"
    corpus = [x for x in corpus if x.base == w_big.base]
    children = []

    bad = [list(o.points) for o in w_small.objects if not generated(o, w_big)]
    children.append(CheckReport("smaller generators are generated by the larger", not bad, prov,
                                witnesses=[{"not_generated": b} for b in bad]))

    bad = []
    for x in corpus:
        if generated(x, w_small) and not generated(x, w_big):
            bad.append(list(x.points))
    children.append(CheckReport("generated spaces nest", not bad, prov,
                                witnesses=[{"space": b} for b in bad], counts={"spaces": len(corpus)}))

    big_gen = [x for x in corpus if generated(x, w_big)]
    small_gen = [x for x in corpus if generated(x, w_small)]
    bad = []
    for x in big_gen:
        c = coreflected(x, w_small)
        if not generated(c, w_small):
            bad.append({"space": list(x.points), "reason": "coreflection not generated"})
            continue
        for v in small_gen:
            if set(fib_maps(v, c)) != set(fib_maps(v, x)):
                bad.append({"space": list(x.points), "test": list(v.points)})
                break
    children.append(CheckReport("smaller generated class is coreflective in the larger", not bad, prov,
                                witnesses=bad, counts={"spaces": len(big_gen)}))

    bad = []
    hausdorff = [x for x in corpus if is_fib_hausdorff(x)]
    for x in hausdorff:
        # generated inside the Hausdorff subcategory: colimits there are reflections of colimits
        refl = reflect_axiom(coreflected(x, w_big), "fibT2")
        lhs = unit_is_iso(refl) and refl.reflected.total.nbhd == x.total.nbhd
        rhs = generated(x, w_big)
        if lhs != rhs:
            bad.append({"space": list(x.points), "inside": lhs, "intersection": rhs})
    children.append(CheckReport("generation inside Hausdorff spaces equals intersection", not bad, prov,
                                witnesses=bad, counts={"spaces": len(hausdorff)}))
    return combine("hull tower", prov, children)
