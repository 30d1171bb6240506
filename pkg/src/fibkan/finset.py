"""Finite sets over a finite base E: fibrewise limits, colimits via connected
components of the category of elements, and exponentials."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct
from typing import Hashable, Iterable, Iterator, Sequence

from .report import CheckReport, FibkanError


class FinSetError(FibkanError):
    pass


@dataclass(frozen=True)
class FinSetOver:
    elements: tuple
    base: tuple
    proj: tuple  # index into base for every element

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise FinSetError("duplicate element labels")
        if len(set(self.base)) != len(self.base):
            raise FinSetError("duplicate base labels")
        if len(self.proj) != len(self.elements):
            raise FinSetError("one projection value per element required")
        if any(not 0 <= p < len(self.base) for p in self.proj):
            raise FinSetError("projection must land in the base")

    @cached_property
    def index(self) -> dict:
        return {t: i for i, t in enumerate(self.elements)}

    @cached_property
    def fibers(self) -> tuple:
        out = [[] for _ in self.base]
        for i, p in enumerate(self.proj):
            out[p].append(i)
        return tuple(tuple(f) for f in out)

    def fiber(self, e: Hashable) -> tuple:
        """Labels of the elements over base point e."""
        return tuple(self.elements[i] for i in self.fibers[self.base.index(e)])

    @property
    def fiber_sizes(self) -> tuple:
        return tuple(len(f) for f in self.fibers)

    def over(self, t: Hashable) -> Hashable:
        return self.base[self.proj[self.index[t]]]

    def __len__(self) -> int:
        return len(self.elements)


def from_fibers(base: Sequence, sizes: Sequence[int]) -> FinSetOver:
    """Elements (e, k) for k < sizes[e]."""
    base = tuple(base)
    elements, proj = [], []
    for i, (e, n) in enumerate(zip(base, sizes)):
        for k in range(n):
            elements.append((e, k))
            proj.append(i)
    return FinSetOver(tuple(elements), base, tuple(proj))


def base_as_identity(base: Sequence) -> FinSetOver:
    base = tuple(base)
    return FinSetOver(base, base, tuple(range(len(base))))


@dataclass(frozen=True)
class FibFunction:
    source: FinSetOver
    target: FinSetOver
    mapping: tuple  # element index -> element index

    def __post_init__(self) -> None:
        if self.source.base != self.target.base:
            raise FinSetError("fibrewise functions need a common base")
        if len(self.mapping) != len(self.source):
            raise FinSetError("mapping must be total")
        for i, j in enumerate(self.mapping):
            if self.source.proj[i] != self.target.proj[j]:
                raise FinSetError(f"element {self.source.elements[i]!r} is sent to another fibre")

    def __call__(self, t: Hashable) -> Hashable:
        return self.target.elements[self.mapping[self.source.index[t]]]


def fib_function(source: FinSetOver, target: FinSetOver, pairs: dict) -> FibFunction:
    return FibFunction(source, target, tuple(target.index[pairs[t]] for t in source.elements))


def fib_functions(x: FinSetOver, y: FinSetOver) -> Iterator[tuple]:
    """All fibre-preserving functions as index tuples, in lexicographic order."""
    choices = [y.fibers[p] for p in x.proj]
    return iproduct(*choices)


def _same_base(x: FinSetOver, y: FinSetOver) -> None:
    if x.base != y.base:
        raise FinSetError("objects live over different bases")


def product_over(x: FinSetOver, y: FinSetOver) -> FinSetOver:
    _same_base(x, y)
    elements, proj = [], []
    for e in range(len(x.base)):
        for i in x.fibers[e]:
            for j in y.fibers[e]:
                elements.append((x.elements[i], y.elements[j]))
                proj.append(e)
    return FinSetOver(tuple(elements), x.base, tuple(proj))


def coproduct_over(xs: Sequence[FinSetOver]) -> FinSetOver:
    base = xs[0].base
    for x in xs:
        _same_base(x, xs[0])
    elements, proj = [], []
    for k, x in enumerate(xs):
        for t, p in zip(x.elements, x.proj):
            elements.append((k, t))
            proj.append(p)
    return FinSetOver(tuple(elements), base, tuple(proj))


@dataclass(frozen=True)
class SetDiagram:
    """Objects plus generating arrows (i, j, f: objects[i] -> objects[j])."""
    objects: tuple
    arrows: tuple = ()

    def __post_init__(self) -> None:
        for i, j, f in self.arrows:
            if f.source != self.objects[i] or f.target != self.objects[j]:
                raise FinSetError("arrow endpoints do not match the diagram objects")


@dataclass(frozen=True)
class SetCone:
    apex: FinSetOver
    legs: tuple  # legs[i]: FibFunction between apex and objects[i]


def limit_over(d: SetDiagram) -> SetCone:
    """Compatible families (t_0, ..., t_n) lying in a common fibre."""
    objs = d.objects
    base = objs[0].base
    for x in objs:
        _same_base(x, objs[0])
    elements, proj = [], []
    for e in range(len(base)):
        for combo in iproduct(*(x.fibers[e] for x in objs)):
            if all(f.mapping[combo[i]] == combo[j] for i, j, f in d.arrows):
                elements.append(tuple(x.elements[k] for x, k in zip(objs, combo)))
                proj.append(e)
    apex = FinSetOver(tuple(elements), base, tuple(proj))
    legs = tuple(FibFunction(apex, x, tuple(x.index[t[i]] for t in elements)) for i, x in enumerate(objs))
    return SetCone(apex, legs)


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {t: t for t in items}

    def find(self, t):
        root = t
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[t] != root:
            self.parent[t], t = root, self.parent[t]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def colimit_over(d: SetDiagram) -> SetCone:
    """Connected components of the category of elements; [(i, t)] lies over p_i(t)."""
    objs = d.objects
    base = objs[0].base
    for x in objs:
        _same_base(x, objs[0])
    nodes = [(i, k) for i, x in enumerate(objs) for k in range(len(x))]
    uf = _UnionFind(nodes)
    for i, j, f in d.arrows:
        for k, v in enumerate(f.mapping):
            uf.union((i, k), (j, v))
    classes = {}
    for n in nodes:
        classes.setdefault(uf.find(n), []).append(n)
    reps = sorted(classes)
    label = {}
    elements, proj = [], []
    for r in reps:
        members = tuple((i, objs[i].elements[k]) for i, k in sorted(classes[r]))
        lab = members if len(members) > 1 else members[0]
        for n in classes[r]:
            label[n] = len(elements)
        elements.append(lab)
        proj.append(objs[r[0]].proj[r[1]])
    apex = FinSetOver(tuple(elements), base, tuple(proj))
    legs = tuple(FibFunction(x, apex, tuple(label[(i, k)] for k in range(len(x)))) for i, x in enumerate(objs))
    return SetCone(apex, legs)


def exponential_over(y: FinSetOver, z: FinSetOver) -> FinSetOver:
    """Fibre over e is the set of all functions Y_e -> Z_e, labelled (e, ((y, z), ...))."""
    _same_base(y, z)
    elements, proj = [], []
    for e, name in enumerate(y.base):
        ys = [y.elements[i] for i in y.fibers[e]]
        zs = [z.elements[i] for i in z.fibers[e]]
        for vals in iproduct(zs, repeat=len(ys)):
            elements.append((name, tuple(zip(ys, vals))))
            proj.append(e)
    return FinSetOver(tuple(elements), y.base, tuple(proj))


def curry_bijection_check(x: FinSetOver, y: FinSetOver, z: FinSetOver) -> CheckReport:
    """Transpose both ways between maps X x Y -> Z and X -> Z^Y, exhaustively."""
    _same_base(x, y)
    _same_base(x, z)
    p = product_over(x, y)
    ex = exponential_over(y, z)
    pidx, eidx = p.index, ex.index
    left = list(fib_functions(p, z))
    right = list(fib_functions(x, ex))
    bad = []

    def curry(f):
        out = []
        for i, t in enumerate(x.elements):
            e = x.proj[i]
            fn = tuple((y.elements[j], z.elements[f[pidx[(t, y.elements[j])]]]) for j in y.fibers[e])
            out.append(eidx[(x.base[e], fn)])
        return tuple(out)

    def uncurry(g):
        out = []
        for a, b in p.elements:
            fn = dict(ex.elements[g[x.index[a]]][1])
            out.append(z.index[fn[b]])
        return tuple(out)

    right_set = set(right)
    for f in left:
        g = curry(f)
        if g not in right_set or uncurry(g) != f:
            bad.append({"map": list(f)})
            break
    if not bad:
        for g in right:
            if curry(uncurry(g)) != g:
                bad.append({"map": list(g)})
                break
    if len(left) != len(right):
        bad.append({"left": len(left), "right": len(right)})
    return CheckReport("curry bijection over a base", not bad,
                       "sets over a base are cartesian closed: maps X x Y -> Z correspond to maps X -> Z^Y",
                       witnesses=bad, counts={"left": len(left), "right": len(right)})


def restrict_subbase(x: FinSetOver, subset: Iterable[Hashable]) -> FinSetOver:
    """Pull back along the inclusion of a subset of the base."""
    keep = set(subset)
    unknown = keep - set(x.base)
    if unknown:
        raise FinSetError(f"not base points: {sorted(map(repr, unknown))}")
    new_base = tuple(e for e in x.base if e in keep)
    pos = {e: k for k, e in enumerate(new_base)}
    elements, proj = [], []
    for t, p in zip(x.elements, x.proj):
        e = x.base[p]
        if e in keep:
            elements.append(t)
            proj.append(pos[e])
    return FinSetOver(tuple(elements), new_base, tuple(proj))


def restrict_function(f: FibFunction, subset: Iterable[Hashable]) -> FibFunction:
    s = restrict_subbase(f.source, subset)
    t = restrict_subbase(f.target, subset)
    return FibFunction(s, t, tuple(t.index[f(a)] for a in s.elements))


def restrict_diagram(d: SetDiagram, subset: Iterable[Hashable]) -> SetDiagram:
    subset = list(subset)
    return SetDiagram(tuple(restrict_subbase(x, subset) for x in d.objects),
                      tuple((i, j, restrict_function(f, subset)) for i, j, f in d.arrows))


def fiber_set(x: FinSetOver, e: Hashable) -> FinSetOver:
    """The fibre over e as a set over a one-point base."""
    return restrict_subbase(x, [e])


def is_bijection(f: FibFunction) -> bool:
    return len(set(f.mapping)) == len(f.mapping) == len(f.target)


def isomorphic_over(x: FinSetOver, y: FinSetOver) -> bool:
    return x.base == y.base and x.fiber_sizes == y.fiber_sizes


def is_colimit_cone(d: SetDiagram, cone: SetCone) -> bool:
    """Compare with the connected-components colimit through the induced map."""
    ref = colimit_over(d)
    if ref.apex.fiber_sizes != cone.apex.fiber_sizes:
        return False
    induced = {}
    for leg_ref, leg in zip(ref.legs, cone.legs):
        for k, v in enumerate(leg_ref.mapping):
            w = leg.mapping[k]
            if induced.setdefault(v, w) != w:
                return False
    return len(induced) == len(ref.apex) and len(set(induced.values())) == len(cone.apex)
