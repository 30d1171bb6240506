"""Concrete finite categories: F2 vector spaces, posets, monoids and categories of finite spaces."""
from __future__ import annotations

from itertools import combinations, product as iproduct
from typing import Callable, Hashable, Sequence

from .corpus import topologies
from .fincat import FinCategory
from .spaces import FibSpace, discrete, fib_maps, over_point, point_space


def _apply(cols: tuple, v: int) -> int:
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= cols[i]
        v >>= 1
        i += 1
    return out


def f2_vect(max_dim: int) -> FinCategory:
    """Objects F2^0..F2^max_dim (object id = dimension), morphisms all linear maps.

    A morphism n -> m is stored by its column vectors as bitmasks in F2^m;
    composition is matrix multiplication over F2.
    """
    dims = range(max_dim + 1)
    mats = []
    for n in dims:
        for m in dims:
            for cols in iproduct(range(1 << m), repeat=n):
                mats.append((n, m, cols))
    index = {mat: i for i, mat in enumerate(mats)}
    dom = {i: mat[0] for i, mat in enumerate(mats)}
    cod = {i: mat[1] for i, mat in enumerate(mats)}
    ident = {n: index[(n, n, tuple(1 << k for k in range(n)))] for n in dims}

    def comp(g, f):
        n, _, fc = mats[f]
        _, p, gc = mats[g]
        return index[(n, p, tuple(_apply(gc, v) for v in fc))]

    names = {n: f"F2^{n}" for n in dims}
    return FinCategory(tuple(dims), dom, cod, ident, comp, names, {i: mat for i, mat in enumerate(mats)},
                       f"F2-vect(dim<={max_dim})")


def f2_matrix(c: FinCategory, m) -> tuple:
    """(dom dim, cod dim, column bitmasks) of an F2-vect morphism."""
    return c.mor_names[m]


def f2_morphism(c: FinCategory, n: int, m: int, cols: Sequence[int]) -> int:
    key = (n, m, tuple(cols))
    for mid, mat in c.mor_names.items():
        if mat == key:
            return mid
    raise KeyError(key)


def poset_category(elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool], label: str = "poset") -> FinCategory:
    """Objects 0..n-1 named by the elements; one morphism i -> j whenever elements[i] <= elements[j]."""
    n = len(elements)
    pairs = [(i, j) for i in range(n) for j in range(n) if leq(elements[i], elements[j])]
    index = {p: k for k, p in enumerate(pairs)}
    dom = {k: p[0] for k, p in enumerate(pairs)}
    cod = {k: p[1] for k, p in enumerate(pairs)}
    ident = {i: index[(i, i)] for i in range(n)}
    table = {(index[(j, k)], index[(i, j)]): index[(i, k)]
             for (i, j) in pairs for (j2, k) in pairs if j2 == j}
    return FinCategory(tuple(range(n)), dom, cod, ident, table, {i: e for i, e in enumerate(elements)},
                       {k: p for k, p in enumerate(pairs)}, label)


def chain(n: int) -> FinCategory:
    return poset_category(list(range(n)), lambda a, b: a <= b, f"chain{n}")


def subset_lattice(k: int) -> FinCategory:
    """Subsets of {1..k} ordered by inclusion."""
    subs = [frozenset(c) for r in range(k + 1) for c in combinations(range(1, k + 1), r)]
    return poset_category(subs, lambda a, b: a <= b, f"subsets{k}")


def diamond() -> FinCategory:
    """M3: bottom, three atoms, top."""
    els = ["0", "a", "b", "c", "1"]
    return poset_category(els, lambda x, y: x == y or x == "0" or y == "1", "M3")


def pentagon() -> FinCategory:
    """N5: 0 < a < b < 1 and 0 < c < 1."""
    up = {"0": {"0", "a", "b", "c", "1"}, "a": {"a", "b", "1"}, "b": {"b", "1"}, "c": {"c", "1"}, "1": {"1"}}
    return poset_category(list(up), lambda x, y: y in up[x], "N5")


def monoid_category(elements: Sequence[Hashable], mult: Callable, unit: Hashable, label: str = "monoid") -> FinCategory:
    """One object 0; morphism k is elements[k]; g o f = mult(g, f)."""
    idx = {e: k for k, e in enumerate(elements)}
    n = len(elements)
    table = {(g, f): idx[mult(elements[g], elements[f])] for g in range(n) for f in range(n)}
    return FinCategory((0,), {k: 0 for k in range(n)}, {k: 0 for k in range(n)}, {0: idx[unit]}, table,
                       {0: label}, {k: e for k, e in enumerate(elements)}, label)


def cyclic_group(n: int) -> FinCategory:
    return monoid_category(list(range(n)), lambda a, b: (a + b) % n, 0, f"Z/{n}")


def space_category(spaces: Sequence[FibSpace], label: str = "spaces") -> FinCategory:
    """Objects 0..n-1 are the given spaces over a common base; morphisms all fibrewise maps."""
    mors = []
    for i, x in enumerate(spaces):
        for j, y in enumerate(spaces):
            for f in fib_maps(x, y):
                mors.append((i, j, f))
    index = {m: k for k, m in enumerate(mors)}
    dom = {k: m[0] for k, m in enumerate(mors)}
    cod = {k: m[1] for k, m in enumerate(mors)}
    ident = {i: index[(i, i, tuple(range(x.n)))] for i, x in enumerate(spaces)}

    def comp(g, f):
        i, _, fm = mors[f]
        _, k, gm = mors[g]
        return index[(i, k, tuple(gm[v] for v in fm))]

    return FinCategory(tuple(range(len(spaces))), dom, cod, ident, comp, {i: x for i, x in enumerate(spaces)},
                       {k: m for k, m in enumerate(mors)}, label)


def object_of(c: FinCategory, name) -> int:
    for o, n in c.names.items():
        if n == name:
            return o
    raise KeyError(name)


def category_corpus(max_objects: int = 12) -> list[tuple[str, FinCategory]]:
    """Small categories used for the (co)density consistency sweep."""
    out = [
        ("terminal", chain(1)),
        ("chain2", chain(2)),
        ("chain3", chain(3)),
        ("chain4", chain(4)),
        ("subsets1", subset_lattice(1)),
        ("subsets2", subset_lattice(2)),
        ("subsets3", subset_lattice(3)),
        ("M3", diamond()),
        ("N5", pentagon()),
        ("V", poset_category(["a", "b", "t"], lambda x, y: x == y or y == "t", "V")),
        ("Z/2", cyclic_group(2)),
        ("Z/3", cyclic_group(3)),
        ("idempotent monoid", monoid_category(["1", "e"], lambda a, b: "e" if "e" in (a, b) else "1", "1", "{1,e}")),
        ("F2-vect(dim<=1)", f2_vect(1)),
        ("F2-vect(dim<=2)", f2_vect(2)),
    ]
    spaces = [over_point(discrete(())), over_point(point_space())] + [over_point(t) for t in topologies(2)]
    out.append(("spaces(<=2 points)", space_category(spaces, "spaces(<=2 points)")))
    out.extend((c.label, c) for c in action_categories())
    return [(name, c) for name, c in out if len(c.objects) <= max_objects]


def monoid_tables(n: int) -> list[tuple]:
    """Multiplication tables on 0..n-1 with unit 0, as flat tuples tab[a*n+b] = a*b."""
    out = []
    for tab in iproduct(range(n), repeat=n * n):
        if any(tab[a] != a or tab[a * n] != a for a in range(n)):
            continue
        if any(tab[tab[a * n + b] * n + c] != tab[a * n + tab[b * n + c]]
               for a in range(n) for b in range(n) for c in range(n)):
            continue
        out.append(tab)
    return out


def right_actions(tab: tuple, n: int, k: int) -> list[tuple]:
    """Right actions of the monoid on 0..k-1 as flat tuples act[s*n+m] = s.m."""
    out = []
    for act in iproduct(range(k), repeat=k * n):
        if any(act[s * n] != s for s in range(k)):
            continue
        if any(act[act[s * n + m] * n + m2] != act[s * n + tab[m * n + m2]]
               for s in range(k) for m in range(n) for m2 in range(n)):
            continue
        out.append(act)
    return out


def action_category(tab: tuple, n: int, act: tuple, k: int) -> FinCategory:
    """Objects a=0, b=1; End(a) is the monoid, hom(a, b) the right M-set, hom(b, a) empty.

    Morphism ids: 0..n-1 the monoid (0 = id_a), n = id_b, n+1+s the elements of the M-set.
    """
    dom, cod = {}, {}
    for m in range(n):
        dom[m], cod[m] = 0, 0
    dom[n], cod[n] = 1, 1
    for s in range(k):
        dom[n + 1 + s], cod[n + 1 + s] = 0, 1

    def comp(g, f):
        if g < n and f < n:
            return tab[g * n + f]
        if g == n:
            return f
        if f == n:
            return g
        return n + 1 + act[(g - n - 1) * n + f]

    return FinCategory((0, 1), dom, cod, {0: 0, 1: n}, comp, {0: "a", 1: "b"}, {}, f"act(M{tab},S{act})")


def action_categories(max_monoid: int = 3, max_set: int = 3) -> list[FinCategory]:
    return [action_category(tab, n, act, k)
            for n in range(1, max_monoid + 1) for tab in monoid_tables(n)
            for k in range(1, max_set + 1) for act in right_actions(tab, n, k)]
