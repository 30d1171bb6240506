"""The acceptance suite: ten criteria, each returning a CheckReport."""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .catalog import category_corpus, f2_vect
from .corpus import bases, corpus_by_base, generate_corpus, spaces_over
from .diagrams import lifting_suite
from .expocc import certify_adjunction, certify_ccc, exponential_w
from .fincat import canonical_diagram, colimit, inclusion
from .kanex import KanError, certify_strong_hull, density_defect, is_idempotent, left_kan_self, right_kan_self
from .oracles import preorder_exponential
from .reflect import (
    check_suitable, coreflect, coreflected, fch_family, generated, point_fiber_family, reflect_axiom,
    sierpinski_family, unit_is_iso, unit_is_quotient,
)
from .report import CheckReport, combine
from .separation import (
    is_fib_compact, is_k_hausdorff, is_weak_hausdorff, satisfies, tube_witness,
)
from .spaces import bits, fib_maps, product_over_B


@dataclass
class RunConfig:
    command: str = "suite"
    inputs: tuple = ()
    max_points: int = 4  # corpus bound for criteria phrased over "the corpus"
    max_base_points: int = 2
    kh_bound: int | None = None
    seed: int = 0
    output_format: str = "human"
    out: str | None = None
    criteria: tuple = ()  # empty means all

    def __post_init__(self) -> None:
        if self.max_points < 1 or self.max_base_points < 1:
            raise ValueError("bounds must be positive")
        if self.kh_bound is not None and self.kh_bound < 1:
            raise ValueError("kh_bound must be positive")
        if self.output_format not in ("human", "machine"):
            raise ValueError("output format is 'human' or 'machine'")
        unknown = [c for c in self.criteria if c not in CRITERIA]
        if unknown:
            raise ValueError(f"unknown criteria: {unknown}")


# ------------------------------------------------------------------ criteria

def c1_f2_example(cfg: RunConfig) -> CheckReport:
    c = f2_vect(3)
    w, a = [1], 2
    kids = []
    d, _, com = canonical_diagram(w, c, a)
    found = colimit(d)
    apex = found[0].apex if found else None
    elements = len(c.hom(1, apex)) if apex is not None else 0
    kids.append(CheckReport("colimit of the canonical diagram at F2^2 is F2^3", apex == 3 and elements == 8,
                            "the canonical diagram of maps F2 -> F2^2 has colimit F2^3 with 8 elements",
                            witnesses=[] if apex == 3 else [{"apex": apex}],
                            counts={"diagram_objects": len(com.category.objects), "elements": elements}))
    defect = density_defect(w, c, a)
    kids.append(CheckReport("density comonad not idempotent", not defect.verdict and bool(defect.witnesses),
                            "the counit at L(F2^2) = F2^3 is not invertible",
                            witnesses=[] if not defect.verdict else [{"unexpected": "tautological cocone is colimiting"}],
                            children=[defect], data=defect.data))
    hull = certify_strong_hull(w, c, "left")
    kids.append(CheckReport("no strong coreflective hull", not hull.verdict,
                            "a non W-monic counit rules out a strong coreflective hull",
                            witnesses=[] if not hull.verdict else [{"unexpected": "hull found"}],
                            children=[hull]))
    return combine("F2 vector space example", "the one-dimensional space is not left Kan extendable among "
                   "F2 vector spaces of dimension at most 3", kids)


def c2_idempotency_agreement(cfg: RunConfig, max_subset_objects: int = 5) -> CheckReport:
    total = computed = missing = 0
    verdicts = {True: 0, False: 0}
    bad = []
    for name, c in category_corpus(12):
        objs = list(c.objects)
        if len(objs) <= max_subset_objects:
            ws = [s for r in range(1, len(objs) + 1) for s in itertools.combinations(objs, r)]
        else:
            ws = [(o,) for o in objs] + [tuple(objs)]
        for w in ws:
            inc = inclusion(c.full_subcategory(w), c)
            for build in (left_kan_self, right_kan_self):
                total += 1
                try:
                    _, m = build(inc)
                except KanError:
                    missing += 1
                    continue
                computed += 1
                try:
                    verdicts[is_idempotent(m).verdict] += 1
                except Exception as e:  # disagreement raises; record it as a failure
                    bad.append({"category": name, "W": list(w), "side": build.__name__, "error": str(e)})
    return CheckReport("idempotency criteria agree", not bad,
                       "multiplication invertible, either whiskered unit invertible and whiskered units equal "
                       "are equivalent", witnesses=bad[:20],
                       counts={"extensions": total, "computed": computed, "missing_limits": missing,
                               "idempotent": verdicts[True], "not_idempotent": verdicts[False]})


def c3_exponential_adjunction(cfg: RunConfig) -> CheckReport:
    return certify_adjunction(3, 2)


def c4_reflectors(cfg: RunConfig) -> CheckReport:
    corpus = generate_corpus(cfg.max_points, cfg.max_base_points)
    by_base = {}
    for x in corpus:
        by_base.setdefault(x.base, []).append(x)
    kids = []
    for axiom in ("fibT1", "fibT2", "fibUrysohn"):
        bad = []
        targets = 0
        for x in corpus:
            res = reflect_axiom(x, axiom, targets=by_base[x.base])
            targets += res.certificate.counts["targets"]
            again = reflect_axiom(res.reflected, axiom)
            problems = [k for k, ok in (("unit not a quotient", unit_is_quotient(res)),
                                        ("axiom fails", satisfies(res.reflected, axiom)),
                                        ("not idempotent", unit_is_iso(again))) if not ok]
            if problems:
                bad.append({"space": list(x.total.nbhd), "proj": list(x.proj), "problems": problems})
        kids.append(CheckReport(f"{axiom} reflector", not bad,
                                "the quotient by forced identifications is a reflection onto the axiom subcategory",
                                witnesses=bad[:20], counts={"spaces": len(corpus), "target_checks": targets}))
    return combine("separation reflectors", "separation-axiom subcategories are reflective via quotient units", kids)


def _coreflector_report(w, corpus) -> CheckReport:
    xs = [x for x in corpus if x.base == w.base]
    gens = [x for x in xs if generated(x, w)]
    bad = []
    for x in xs:
        res = coreflect(x, w)
        cx = res.coreflected
        if coreflected(cx, w) != cx:
            bad.append({"space": list(x.total.nbhd), "law": "idempotent"})
        if res.counit.mapping != tuple(range(x.n)):
            bad.append({"space": list(x.total.nbhd), "law": "counit is the identity on points"})
        for v in gens:
            if set(fib_maps(v, cx)) != set(fib_maps(v, x)):
                bad.append({"space": list(x.total.nbhd), "test": list(v.total.nbhd), "law": "adjunction"})
    return CheckReport(f"{w.name} over base {list(w.base.nbhd)}", not bad,
                       "the generated-topology coreflector is idempotent with identity counit",
                       witnesses=bad[:20], counts={"spaces": len(xs), "generated": len(gens)})


def c5_coreflectors(cfg: RunConfig) -> CheckReport:
    corpus = generate_corpus(cfg.max_points, cfg.max_base_points)
    kids = []
    for b in bases(cfg.max_base_points):
        kids.append(_coreflector_report(point_fiber_family(b), corpus))
        w = fch_family(b, 2)
        if check_suitable(w, b).verdict:  # suitable exactly over T1 bases
            kids.append(_coreflector_report(w, corpus))
    pt = bases(1)[0]
    sier = sierpinski_family(pt)
    kids.append(_coreflector_report(sier, corpus))
    finite = spaces_over(pt, max(cfg.max_points, 4))
    bad = [list(x.total.nbhd) for x in finite if coreflected(x, sier) != x]
    kids.append(CheckReport("Sierpinski coreflector is the identity", not bad,
                            "every finite space is Alexandroff, hence generated by the Sierpinski space",
                            witnesses=[{"space": s} for s in bad], counts={"spaces": len(finite)}))
    return combine("generated coreflectors", "generated subcategories are coreflective", kids)


def c6_cartesian_closed(cfg: RunConfig) -> CheckReport:
    d2 = next(b for b in bases(2) if b.n == 2 and b.is_t1)
    cert = certify_ccc(fch_family(d2, 2), spaces_over(d2, 3), seed=cfg.seed)
    return cert.report


def c7_alexandroff(cfg: RunConfig) -> CheckReport:
    pt = bases(1)[0]
    w = sierpinski_family(pt)
    xs = spaces_over(pt, 3)
    bad = []
    for y in xs:
        for z in xs:
            e = exponential_w(y, z, w)
            up = preorder_exponential(y.points, y.total.open_sets(), z.points, z.total.open_sets())
            ref = {frozenset(g): frozenset(frozenset(h) for h in u) for g, u in up.items()}
            got = {frozenset(lab[1]): frozenset(frozenset(e.points[j][1]) for j in bits(e.total.nbhd[i]))
                   for i, lab in enumerate(e.points)}
            if ref != got:
                bad.append({"Y": list(y.total.nbhd), "Z": list(z.total.nbhd),
                            "engine_points": len(got), "oracle_points": len(ref)})
    return CheckReport("Alexandroff exponential", not bad,
                       "over a point the Sierpinski-generated exponential is the pointwise-ordered function space",
                       witnesses=bad[:20], counts={"pairs": len(xs) ** 2})


def c8_separation(cfg: RunConfig) -> CheckReport:
    corpus = generate_corpus(cfg.max_points, cfg.max_base_points)
    bound = cfg.kh_bound
    wh = {x: is_weak_hausdorff(x).verdict for x in corpus}
    t2 = {x: satisfies(x, "fibT2") for x in corpus}
    kids = []

    bad = [list(x.total.nbhd) for x in corpus if t2[x] != satisfies(x, "diagonalClosed")]
    kids.append(CheckReport("fibrewise Hausdorff iff closed diagonal", not bad,
                            "fibrewise Hausdorff iff the diagonal is closed in the fibred square",
                            witnesses=[{"space": s} for s in bad], counts={"spaces": len(corpus)}))
    bad = [list(x.total.nbhd) for x in corpus if t2[x] and not wh[x]]
    kids.append(CheckReport("fibrewise Hausdorff implies weak Hausdorff", not bad,
                            "fibrewise Hausdorff spaces are fibrewise weak Hausdorff",
                            witnesses=[{"space": s} for s in bad], counts={"hausdorff": sum(t2.values())}))

    t1 = [x for x in corpus if x.base.is_t1]
    bad, n = [], 0
    for x in t1:
        cg = generated(x, fch_family(x.base, x.n))
        kh = is_k_hausdorff(x, bound).verdict
        if cg and kh:
            n += 1
            if not wh[x]:
                bad.append({"space": list(x.total.nbhd)})
    kids.append(CheckReport("compactly generated k-Hausdorff implies weak Hausdorff", not bad,
                            "over a T1 base a compactly generated k-Hausdorff space is weak Hausdorff",
                            witnesses=bad, counts={"spaces": len(t1), "hypotheses_hold": n},
                            notes=[f"k-Hausdorff test spaces bounded by {bound}" if bound
                                   else "k-Hausdorff test spaces bounded by |X| + 2"]))
    bad = [list(x.total.nbhd) for x in t1 if wh[x] and not satisfies(x, "fibT1")]
    kids.append(CheckReport("weak Hausdorff implies fibrewise T1 over T1 bases", not bad,
                            "over a T1 base weak Hausdorff spaces are fibrewise T1",
                            witnesses=[{"space": s} for s in bad], counts={"spaces": len(t1)}))
    bad, n = [], 0
    weak = [x for x in t1 if wh[x] and x.n <= 3]
    for x, y in itertools.combinations_with_replacement(weak, 2):
        if x.base != y.base:
            continue
        n += 1
        if not is_weak_hausdorff(product_over_B(x, y)).verdict:
            bad.append({"X": list(x.total.nbhd), "Y": list(y.total.nbhd)})
    kids.append(CheckReport("products of weak Hausdorff spaces are weak Hausdorff", not bad,
                            "over a T1 base fibred products of weak Hausdorff spaces are weak Hausdorff",
                            witnesses=bad[:20], counts={"pairs": n}))
    return combine("separation suite", "implications between fibrewise separation axioms", kids)


def c9_lifting(cfg: RunConfig) -> CheckReport:
    return lifting_suite(corpus_by_base(3, 2))


def c10_tube(cfg: RunConfig) -> CheckReport:
    n, bad = 0, []
    for b, xs in corpus_by_base(3, 2):
        ks = [k for k in xs if is_fib_compact(k)]
        for x in xs:
            for k in ks:
                p = product_over_B(x, k)
                col = {}
                for pos, (a, _) in enumerate(p.points):
                    col[a] = col.get(a, 0) | 1 << pos
                for i0, x0 in enumerate(x.points):
                    c0 = col.get(x0, 0)
                    for o in p.total.open_masks():
                        if c0 & ~o:
                            continue
                        n += 1
                        v = tube_witness(x, k, x0, p.total.labels(o))
                        if v is None:
                            bad.append({"X": list(x.total.nbhd), "K": list(k.total.nbhd), "x0": x0, "O": o})
                            continue
                        vm = x.total.mask(v)
                        tube = 0
                        for i in bits(vm):
                            tube |= col.get(x.points[i], 0)
                        if not (x.total.is_open(vm) and vm >> i0 & 1 and tube & ~o == 0):
                            bad.append({"X": list(x.total.nbhd), "K": list(k.total.nbhd), "x0": x0, "O": o,
                                        "V": sorted(v)})
    return CheckReport("fibrewise tube lemma", not bad,
                       "for fibrewise compact K an open set containing a fibre slice contains a tube around it",
                       witnesses=bad[:20], counts={"instances": n})


# name, function, runtime budget in seconds
CRITERIA: dict[str, tuple[str, Callable[[RunConfig], CheckReport], float]] = {
    "c1": ("F2 density example", c1_f2_example, 5),
    "c2": ("idempotency criteria agree", c2_idempotency_agreement, 30),
    "c3": ("exponential adjunction", c3_exponential_adjunction, 60),
    "c4": ("separation reflectors", c4_reflectors, 60),
    "c5": ("generated coreflectors", c5_coreflectors, 60),
    "c6": ("cartesian closedness", c6_cartesian_closed, 180),
    "c7": ("Alexandroff exponential", c7_alexandroff, 30),
    "c8": ("separation suite", c8_separation, 180),
    "c9": ("fibrewise lifting", c9_lifting, 60),
    "c10": ("fibrewise tube lemma", c10_tube, 30),
}


def run_criterion(key: str, cfg: RunConfig) -> CheckReport:
    _, fn, _ = CRITERIA[key]
    t0 = time.perf_counter()
    rep = fn(cfg)
    rep.elapsed = time.perf_counter() - t0
    rep.seed = cfg.seed
    return rep


@dataclass
class SuiteResult:
    reports: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.verdict for r in self.reports.values())

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1


def run_suite(cfg: RunConfig) -> SuiteResult:
    keys = cfg.criteria or tuple(CRITERIA)
    result = SuiteResult()
    for key in keys:
        result.reports[key] = run_criterion(key, cfg)
    if cfg.out:
        write_reports(result, Path(cfg.out))
    return result


def write_reports(result: SuiteResult, out: Path) -> None:
    """One machine-format report per criterion plus an index; timing is left out so output is reproducible."""
    out.mkdir(parents=True, exist_ok=True)
    for key, rep in result.reports.items():
        (out / f"{key}.json").write_text(rep.to_json() + "\n")
    index = {"format": "fibkan/suite", "version": 1,
             "criteria": {k: r.verdict for k, r in result.reports.items()}, "passed": result.passed}
    (out / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
