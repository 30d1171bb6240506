"""Limits and colimits of finite diagrams of spaces over a base, and the
fibrewise lifting laws comparing them with (co)limits of the fibres."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product as iproduct
from typing import Iterator, Sequence

from .finset import FibFunction, FinSetOver, SetDiagram, colimit_over, limit_over
from .report import CheckReport, combine
from .spaces import (
    FibSpace, FinTopSpace, TopologyError, bits, fib_maps, final_topology, initial_topology, is_continuous,
    over_point,
)


@dataclass(frozen=True)
class SpaceDiagram:
    """Objects plus generating arrows (i, j, index map objects[i] -> objects[j])."""
    objects: tuple
    arrows: tuple = ()

    def __post_init__(self) -> None:
        base = self.objects[0].base
        for x in self.objects:
            if x.base != base:
                raise TopologyError("diagram objects must share a base")
        for i, j, f in self.arrows:
            src, tgt = self.objects[i], self.objects[j]
            if not is_continuous(src.total, tgt.total, f):
                raise TopologyError("diagram arrow is not continuous")
            if any(src.proj[k] != tgt.proj[v] for k, v in enumerate(f)):
                raise TopologyError("diagram arrow is not fibrewise")

    @property
    def base(self) -> FinTopSpace:
        return self.objects[0].base

    @classmethod
    def trusted(cls, objects: tuple, arrows: tuple = ()) -> SpaceDiagram:
        """Skip validation for arrows produced by the map enumerator."""
        d = object.__new__(cls)
        object.__setattr__(d, "objects", objects)
        object.__setattr__(d, "arrows", arrows)
        return d


@lru_cache(maxsize=None)
def underlying_set(x: FibSpace) -> FinSetOver:
    return FinSetOver(x.points, x.base.points, x.proj)


def _set_diagram(d: SpaceDiagram) -> SetDiagram:
    objs = tuple(underlying_set(x) for x in d.objects)
    return SetDiagram(objs, tuple((i, j, FibFunction(objs[i], objs[j], tuple(f))) for i, j, f in d.arrows))


def limit_space(d: SpaceDiagram) -> tuple[FibSpace, tuple]:
    """Limit in spaces over B: compatible same-fibre families with the initial topology."""
    cone = limit_over(_set_diagram(d))
    apex = cone.apex
    maps_out = [(leg.mapping, x.total) for leg, x in zip(cone.legs, d.objects)]
    maps_out.append((apex.proj, d.base))
    top = initial_topology(apex.elements, maps_out)
    return FibSpace(top, d.base, apex.proj), tuple(leg.mapping for leg in cone.legs)


def colimit_space(d: SpaceDiagram) -> tuple[FibSpace, tuple]:
    """Colimit in spaces over B: glued sets with the final topology and the induced projection."""
    cone = colimit_over(_set_diagram(d))
    apex = cone.apex
    top = final_topology(apex.elements, [(x.total, leg.mapping) for leg, x in zip(cone.legs, d.objects)])
    return FibSpace(top, d.base, apex.proj), tuple(leg.mapping for leg in cone.legs)


@lru_cache(maxsize=None)
def _fibre_object(x: FibSpace, b: int) -> tuple[FibSpace, dict]:
    keep = list(bits(x.fibers[b]))
    return over_point(x.total.subspace(x.fibers[b])), {old: new for new, old in enumerate(keep)}


def fibre_diagram(d: SpaceDiagram, b: int) -> SpaceDiagram:
    """The diagram of fibres over base point b, as spaces over a point."""
    parts = [_fibre_object(x, b) for x in d.objects]
    arrows = tuple((i, j, tuple(parts[j][1][f[k]] for k in bits(d.objects[i].fibers[b])))
                   for i, j, f in d.arrows)
    return SpaceDiagram.trusted(tuple(p[0] for p in parts), arrows)


def same_labelled_space(a: FinTopSpace, b: FinTopSpace) -> bool:
    """Equal point labels and equal open sets, ignoring point order."""
    if set(a.points) != set(b.points) or len(a.points) != len(b.points):
        return False
    perm = [b.index[p] for p in a.points]
    return all(sorted(perm[j] for j in bits(a.nbhd[i])) == sorted(bits(b.nbhd[perm[i]]))
               for i in range(a.n))


def fibre_law(d: SpaceDiagram, kind: str) -> list[dict]:
    """Base points where the fibre of the (co)limit differs from the (co)limit of the fibres."""
    build = limit_space if kind == "limit" else colimit_space
    whole, _ = build(d)
    bad = []
    for b in range(d.base.n):
        left = whole.total.subspace(whole.fibers[b])
        right, _ = build(fibre_diagram(d, b))
        if not same_labelled_space(left, right.total):
            bad.append({"base_point": d.base.points[b], "kind": kind})
    return bad


# ------------------------------------------------------------ diagram corpus

def corpus_diagrams(spaces: Sequence[FibSpace], small: Sequence[FibSpace] | None = None) -> Iterator[tuple[str, SpaceDiagram]]:
    """Diagrams with at most three objects over a common base.

    Shapes: one object, an arrow, discrete pairs, parallel pairs, spans and
    cospans over `spaces`, and discrete triples over `small` (default spaces).
    """
    small = spaces if small is None else small
    n = len(spaces)
    for x in spaces:
        yield "object", SpaceDiagram.trusted((x,))
    for i, j in combinations_with_replacement(range(n), 2):
        yield "pair", SpaceDiagram.trusted((spaces[i], spaces[j]))
    for i, j, k in combinations_with_replacement(range(len(small)), 3):
        yield "triple", SpaceDiagram.trusted((small[i], small[j], small[k]))
    for x in spaces:
        for y in spaces:
            maps = fib_maps(x, y)
            for f in maps:
                yield "arrow", SpaceDiagram.trusted((x, y), ((0, 1, f),))
            for a in range(len(maps)):
                for c in range(a + 1, len(maps)):
                    yield "parallel pair", SpaceDiagram.trusted((x, y), ((0, 1, maps[a]), (0, 1, maps[c])))
    for z in small:
        for x in small:
            for y in small:
                for f, g in iproduct(fib_maps(z, x), fib_maps(z, y)):
                    yield "span", SpaceDiagram.trusted((z, x, y), ((0, 1, f), (0, 2, g)))
                for f, g in iproduct(fib_maps(x, z), fib_maps(y, z)):
                    yield "cospan", SpaceDiagram.trusted((x, y, z), ((0, 2, f), (1, 2, g)))


def lifting_suite(bases_and_spaces, small_points: int = 2) -> CheckReport:
    """Fibre of a limit is the limit of fibres on every base; the same for colimits over T1 bases."""
    lim_bad, colim_bad = [], []
    n_lim = n_colim = 0
    for base, spaces in bases_and_spaces:
        small = [x for x in spaces if x.n <= small_points]
        for shape, d in corpus_diagrams(spaces, small):
            n_lim += 1
            for w in fibre_law(d, "limit"):
                lim_bad.append({"shape": shape, "base": list(base.nbhd), **w})
            if base.is_t1:
                n_colim += 1
                for w in fibre_law(d, "colimit"):
                    colim_bad.append({"shape": shape, "base": list(base.nbhd), **w})
    lim = CheckReport("fibres of limits", not lim_bad, "fibre functors preserve limits of spaces over a base",
                      witnesses=lim_bad[:20], counts={"diagrams": n_lim})
    colim = CheckReport("fibres of colimits over T1 bases", not colim_bad,
                        "over a T1 base fibre functors preserve colimits of spaces over the base",
                        witnesses=colim_bad[:20], counts={"diagrams": n_colim})
    return combine("fibrewise lifting", "limits and colimits of spaces over a base are computed fibrewise",
                   [lim, colim])
