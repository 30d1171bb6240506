"""Command-line entry point: `fibkan kan|top|reflect|expo|corpus|suite ...`."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import category_corpus, f2_vect
from .corpus import bases, generate_corpus
from .expocc import (
    MappingSpaceError, bijection_check, certify_ccc, exponential_w, internal_hom_w, mapping_space,
    product_w,
)
from .fincat import FinCategory, inclusion
from .formats import FormatError, parse_category, parse_space, space_to_dict
from .kanex import (
    KanError, algebra_objects, certify_strong_hull, check_monad_laws, density_defect, is_idempotent,
    left_kan_self, right_kan_self,
)
from .reflect import (
    CertificationError, REFLECT_AXIOMS, check_suitable, coreflect, fch_family, is_w_generated,
    point_fiber_family, reflect_axiom, sierpinski_family, unit_is_quotient,
)
from .report import CheckReport, FibkanError, PreconditionError
from .separation import AXIOMS, is_compactly_generated, is_k_hausdorff, is_weak_hausdorff, separation_predicate
from .spaces import (
    FibSpace, alexandroff_of, discrete, indiscrete, over_point, point_space, product_over_B, sierpinski,
    specialization_preorder,
)
from .suite import CRITERIA, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

BUILTIN_SPACES = {
    "point": lambda: over_point(point_space()),
    "sierpinski": lambda: over_point(sierpinski()),
    "discrete2": lambda: over_point(discrete((0, 1))),
    "indiscrete2": lambda: over_point(indiscrete((0, 1))),
    "sierpinski-over-itself": lambda: FibSpace(sierpinski(), sierpinski(), (0, 1)),
}


class InputError(FibkanError):
    pass


def load_space(ref: str) -> FibSpace:
    if ref in BUILTIN_SPACES:
        return BUILTIN_SPACES[ref]()
    if not Path(ref).exists():
        raise InputError(f"{ref}: no such file or builtin space ({', '.join(BUILTIN_SPACES)})")
    return parse_space(ref)


def load_category(ref: str) -> FinCategory:
    if ref.startswith("f2-vect"):
        try:
            return f2_vect(int(ref[len("f2-vect"):]))
        except ValueError:
            raise InputError(f"{ref}: expected f2-vectN with N a dimension bound") from None
    if Path(ref).exists():
        return parse_category(ref)
    named = dict(category_corpus(12))
    if ref in named:
        return named[ref]
    raise InputError(f"{ref}: no such file or builtin category")


def family(name: str, base) -> object:
    if name == "points":
        return point_fiber_family(base)
    if name.startswith("fch"):
        return fch_family(base, int(name[3:] or 2))
    if name == "sierpinski":
        return sierpinski_family(base)
    raise InputError(f"unknown family {name!r}; use points, fchN or sierpinski")


def _space_report(check: str, x: FibSpace, prov: str, **data) -> CheckReport:
    return CheckReport(check, True, prov, counts={"points": x.n}, data={"space": space_to_dict(x), **data})


# -------------------------------------------------------------------- kan

def cmd_kan(args) -> CheckReport:
    c = load_category(args.category)
    w = [int(o) for o in args.w] if args.w else list(c.objects)
    bad = [o for o in w if o not in c.objects]
    if bad:
        raise InputError(f"W objects not in the category: {bad}")
    inc = inclusion(c.full_subcategory(w), c)
    if args.action == "hull":
        return certify_strong_hull(w, c, args.side)
    if args.action == "defect":
        return density_defect(w, c, int(args.object))
    side = {"right-self": "right", "left-self": "left"}.get(args.action, args.side)
    build = right_kan_self if side == "right" else left_kan_self
    try:
        result, m = build(inc)
    except KanError as e:
        return CheckReport(f"{side} Kan extension", False, "pointwise Kan extension of the inclusion along itself",
                           witnesses=[{"object": c.name(e.obj), "missing": "limit" if side == "right" else "colimit"}],
                           notes=[str(e)])
    if args.action == "idempotent":
        rep = is_idempotent(m)
        if rep.verdict:
            objs, _ = algebra_objects(m)
            rep.data = {"algebra_objects": sorted(objs)}
        return rep
    laws = check_monad_laws(m.as_op_monad() if build is left_kan_self else m)
    ext = result.extension
    laws.data = {"extension": {c.name(o): c.name(ext.obj_map[o]) for o in c.objects},
                 "mediating": {c.name(o): a for o, a in result.mediating.components.items()}}
    return laws


# -------------------------------------------------------------------- top

def cmd_top(args) -> CheckReport:
    x = load_space(args.space)
    if args.action == "check":
        axioms = [args.axiom] if args.axiom else list(AXIOMS) + ["fibWeakH", "fibKH", "compactlyGenerated"]
        kids, notes, verdicts = [], [], {}
        for a in axioms:
            if a == "fibWeakH":
                kid = is_weak_hausdorff(x)
            elif a == "fibKH":
                kid = is_k_hausdorff(x, args.kh_bound)
            elif a == "compactlyGenerated":
                try:
                    kid = is_compactly_generated(x)
                except PreconditionError as e:
                    notes.append(f"compactly generated not evaluated: {e}")
                    continue
            else:
                kid = separation_predicate(x, a)
            kids.append(kid)
            verdicts[a] = kid.verdict
        failed = [a for a, v in verdicts.items() if not v]
        return CheckReport("separation profile", not failed, "separation predicates of one space",
                           witnesses=[{"failed": failed}] if failed else [], counts={"points": x.n},
                           children=kids, notes=notes, data=verdicts)
    if args.action == "reflect-axiom":
        return _reflect(x, args.axiom or "fibT2", args)
    if args.action == "preorder":
        p = specialization_preorder(x.total)
        same = alexandroff_of(p) == x.total
        return CheckReport("specialization preorder", same, "finite spaces are Alexandroff",
                           witnesses=[] if same else [{"round_trip": "differs"}],
                           data={"relation": sorted(p.relation, key=repr)})
    if args.action == "product":
        if not args.other:
            raise InputError("product needs a second space")
        y = load_space(args.other)
        if x.base != y.base:
            raise InputError("spaces live over different bases")
        return _space_report("fibred product", product_over_B(x, y), "pairs in a common fibre, subspace topology")
    raise InputError(f"unknown top action {args.action!r}")


# ----------------------------------------------------------------- reflect

def _reflect(x: FibSpace, axiom: str, args) -> CheckReport:
    if axiom not in REFLECT_AXIOMS:
        raise InputError(f"unknown axiom {axiom!r}; choose from {', '.join(REFLECT_AXIOMS)}")
    targets = [t for t in generate_corpus(args.max_points, max(1, x.base.n)) if t.base == x.base]
    try:
        res = reflect_axiom(x, axiom, targets=targets, kh_bound=args.kh_bound)
    except CertificationError as e:
        return CheckReport(f"{axiom} reflection", False, "reflection onto the axiom subcategory",
                           witnesses=[{"counterexample": str(e.counterexample)}], notes=[str(e)])
    rep = _space_report(f"{axiom} reflection", res.reflected, "quotient by forced identifications",
                        unit=[x.points[i] for i in range(x.n)], unit_images=list(res.unit.mapping),
                        trace=list(res.trace), unit_is_quotient=unit_is_quotient(res))
    rep.children = [res.certificate]
    return rep


def cmd_reflect(args) -> CheckReport:
    x = load_space(args.space)
    if args.action == "axiom":
        return _reflect(x, args.axiom or "fibT2", args)
    w = family(args.family, x.base)
    if args.action == "suitable":
        return check_suitable(w, x.base)
    if args.action == "coreflect":
        res = coreflect(x, w)
        return _space_report("coreflection", res.coreflected, "final topology of all maps out of generators",
                             family=w.name)
    if args.action == "generated":
        return is_w_generated(x, w)
    raise InputError(f"unknown reflect action {args.action!r}")


# -------------------------------------------------------------------- expo

def cmd_expo(args) -> CheckReport:
    if args.action == "certify-ccc":
        base = _base_by_name(args.base)
        w = family(args.family, base)
        corpus = [x for x in generate_corpus(args.max_points, base.n) if x.base == base]
        return certify_ccc(w, corpus, seed=args.seed).report
    spaces = [load_space(s) for s in args.spaces]
    if args.action == "map-space":
        _need(spaces, 2, "map-space K Y")
        m = mapping_space(*spaces)
        return _space_report("mapping space", m.space, "continuous fibre maps with the (C, O, Omega) topology")
    if args.action == "transpose":
        _need(spaces, 3, "transpose X K Y")
        x, k, y = spaces
        p = product_over_B(x, k)
        e = mapping_space(k, y).space
        ok, nl, nr = bijection_check(x, k, p, e, y)
        return CheckReport("transpose bijection", ok, "maps X x_B K -> Y correspond to maps X -> map_B(K, Y)",
                           witnesses=[] if ok else [{"left": nl, "right": nr}], counts={"left": nl, "right": nr})
    if args.action == "hom":
        _need(spaces, 2, "hom Y Z")
        y, z = spaces
        w = family(args.family, y.base)
        hom = internal_hom_w(y, z, w)
        return _space_report("internal hom", exponential_w(y, z, w), "coreflected internal hom",
                             uncoreflected_nbhd=list(hom.total.nbhd))
    if args.action == "product":
        _need(spaces, 2, "product X Y")
        w = family(args.family, spaces[0].base)
        return _space_report("generated product", product_w(*spaces, w), "coreflected fibred product")
    raise InputError(f"unknown expo action {args.action!r}")


def _need(spaces, n, usage):
    if len(spaces) != n:
        raise InputError(f"usage: expo {usage}")


def _base_by_name(name: str):
    table = {"point": bases(1)[0]}
    for b in bases(2):
        kind = "discrete2" if b.is_t1 else ("indiscrete2" if b.nbhd == (3, 3) else "sierpinski")
        table[kind] = b
    if name not in table:
        raise InputError(f"unknown base {name!r}; choose from {', '.join(table)}")
    return table[name]


# ------------------------------------------------------------------ corpus

def cmd_corpus(args) -> CheckReport:
    xs = generate_corpus(args.max_points, args.max_base_points)
    counts = {}
    for x in xs:
        key = f"base {list(x.base.nbhd)}"
        counts[key] = counts.get(key, 0) + 1
    return CheckReport("corpus", True, "all spaces up to fibrewise homeomorphism", counts={"spaces": len(xs)},
                       data={"per_base": counts})


# ------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-points", type=int, default=None,
                        help="corpus bound (default 3, or 4 for the suite)")
    common.add_argument("--max-base-points", type=int, default=2)
    common.add_argument("--kh-bound", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--out", default=None)

    p = argparse.ArgumentParser(prog="fibkan", description="Kan extensions, reflections and exponentials "
                                "on finite categories and finite spaces over a base.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kan", parents=[common], help="Kan extensions of an inclusion along itself")
    k.add_argument("action", choices=("right-self", "left-self", "idempotent", "hull", "defect"))
    k.add_argument("category", help="category file, f2-vectN, or a builtin corpus name")
    k.add_argument("--w", nargs="+", help="object ids of the full subcategory W")
    k.add_argument("--side", choices=("left", "right"), default="left")
    k.add_argument("--object", default="0", help="object for 'defect'")
    k.set_defaults(func=cmd_kan)

    t = sub.add_parser("top", parents=[common], help="separation predicates and constructions")
    t.add_argument("action", choices=("check", "reflect-axiom", "preorder", "product"))
    t.add_argument("space")
    t.add_argument("other", nargs="?")
    t.add_argument("--axiom")
    t.set_defaults(func=cmd_top)

    r = sub.add_parser("reflect", parents=[common], help="reflectors and generated coreflectors")
    r.add_argument("action", choices=("axiom", "coreflect", "generated", "suitable"))
    r.add_argument("space")
    r.add_argument("--axiom")
    r.add_argument("--family", default="points", help="points, fchN or sierpinski")
    r.set_defaults(func=cmd_reflect)

    e = sub.add_parser("expo", parents=[common], help="mapping spaces and cartesian closedness")
    e.add_argument("action", choices=("map-space", "transpose", "hom", "product", "certify-ccc"))
    e.add_argument("spaces", nargs="*")
    e.add_argument("--family", default="fch2")
    e.add_argument("--base", default="discrete2")
    e.set_defaults(func=cmd_expo)

    c = sub.add_parser("corpus", parents=[common], help="count the generated space corpus")
    c.set_defaults(func=cmd_corpus)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance suite")
    s.add_argument("--criteria", nargs="+", choices=tuple(CRITERIA))
    s.set_defaults(func=None)
    return p


def emit(rep: CheckReport, fmt: str, out: str | None) -> None:
    text = rep.to_json() + "\n" if fmt == "machine" else rep.render() + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            cfg = RunConfig(max_points=4 if args.max_points is None else args.max_points, max_base_points=args.max_base_points,
                            kh_bound=args.kh_bound, seed=args.seed, output_format=args.format,
                            out=args.out, criteria=tuple(args.criteria or ()))
            result = run_suite(cfg)
            for key, rep in result.reports.items():
                if args.format == "machine" and not args.out:
                    sys.stdout.write(rep.to_json() + "\n")
                elif args.format == "human":
                    mark = "PASS" if rep.verdict else "FAIL"
                    sys.stdout.write(f"{key:>4} [{mark}] {CRITERIA[key][0]}  {rep.elapsed:.2f}s\n")
            return result.exit_status
        if args.max_points is None:
            args.max_points = 3
        if args.max_points < 1 or args.max_base_points < 1:
            raise InputError("bounds must be positive")
        rep = args.func(args)
        rep.seed = args.seed
    except (InputError, FormatError, FileNotFoundError, PreconditionError, MappingSpaceError,
            KanError, ValueError) as e:
        sys.stderr.write(f"fibkan: {e}\n")
        return EXIT_INPUT
    emit(rep, args.format, args.out)
    return EXIT_OK if rep.verdict else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
