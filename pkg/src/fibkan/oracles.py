"""Independent reference computations used to cross-check the engine.

These deliberately avoid the bitmask machinery: spaces are handled as explicit
families of open sets and orders as sets of pairs.
"""
from __future__ import annotations

from itertools import permutations, product as iproduct
from typing import Hashable, Sequence


def order_from_opens(points: Sequence[Hashable], opens: Sequence[frozenset]) -> set:
    """Pairs (x, y) with y in every open set containing x."""
    return {(x, y) for x in points for y in points if all(y in o for o in opens if x in o)}


def monotone_maps(src_points: Sequence, src_order: set, tgt_points: Sequence, tgt_order: set) -> list[dict]:
    out = []
    for vals in iproduct(tgt_points, repeat=len(src_points)):
        f = dict(zip(src_points, vals))
        if all((f[a], f[b]) in tgt_order for a, b in src_order):
            out.append(f)
    return out


def preorder_exponential(y_points: Sequence, y_opens: Sequence[frozenset],
                         z_points: Sequence, z_opens: Sequence[frozenset]) -> dict:
    """Monotone maps Y -> Z under the pointwise order, as {graph: up-set of graphs}.

    A map is represented by its graph, a tuple of (y, z) pairs in Y's point order.
    The up-set of a map is its smallest open neighbourhood in the Alexandroff topology.
    """
    yo = order_from_opens(y_points, y_opens)
    zo = order_from_opens(z_points, z_opens)
    maps = monotone_maps(list(y_points), yo, list(z_points), zo)
    graphs = [tuple((p, f[p]) for p in y_points) for f in maps]
    up = {}
    for g, f in zip(graphs, maps):
        up[g] = frozenset(h for h, k in zip(graphs, maps) if all((f[p], k[p]) in zo for p in y_points))
    return up


def count_continuous(src_points: Sequence, src_opens: Sequence[frozenset],
                     tgt_points: Sequence, tgt_opens: Sequence[frozenset]) -> int:
    """Functions whose preimages of opens are open, by direct enumeration."""
    opens_src = set(src_opens)
    n = 0
    for vals in iproduct(tgt_points, repeat=len(src_points)):
        f = dict(zip(src_points, vals))
        if all(frozenset(p for p in src_points if f[p] in o) in opens_src for o in tgt_opens):
            n += 1
    return n


def topologies_bruteforce(n: int) -> int:
    """Topologies on n points up to homeomorphism, by filtering all subset families."""
    pts = range(n)
    subsets = [frozenset(s for s in pts if m >> s & 1) for m in range(1 << n)]
    full, empty = frozenset(pts), frozenset()
    proper = [s for s in subsets if s != full and s != empty]
    seen = set()
    for choice in range(1 << len(proper)):
        fam = {empty, full} | {s for k, s in enumerate(proper) if choice >> k & 1}
        if any(a | b not in fam or a & b not in fam for a in fam for b in fam):
            continue
        code = min(tuple(sorted(tuple(sorted(perm[i] for i in s)) for s in fam))
                   for perm in permutations(pts))
        seen.add(code)
    return len(seen)
