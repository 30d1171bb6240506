"""Separation axioms, properness and related searches for spaces over a base.

Every finite space is compact, so a map is proper exactly when it is closed;
reports say so explicitly.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct

from .report import CheckReport, PreconditionError
from .spaces import (
    FibSpace, FinTopSpace, bits, canonical_code, fib_maps, image_mask, mask_of,
    product_over_B, restrict_to_mask, subspace_over_B,
)

FINITE_PROPER_NOTE = "fibres of maps between finite spaces are finite, hence compact: proper = closed"

AXIOMS = ("fibT1", "fibT2", "fibUrysohn", "fibRegular", "diagonalClosed", "fibCompact")


def closed_map_witness(src: FinTopSpace, tgt: FinTopSpace, f) -> int | None:
    """A point whose closure has non-closed image, or None if f is closed."""
    for i in range(src.n):
        img = image_mask(f, src.below[i])
        if tgt.closure(img) != img:
            return i
    return None


def is_proper(src: FinTopSpace, tgt: FinTopSpace, f) -> CheckReport:
    bad = closed_map_witness(src, tgt, f)
    if bad is None:
        return CheckReport("proper map", True, "proper iff closed with compact fibres",
                           notes=[FINITE_PROPER_NOTE], counts={"points": src.n})
    img = image_mask(f, src.below[bad])
    return CheckReport("proper map", False, "proper iff closed with compact fibres",
                       witnesses=[{"closed_set": src.labels(src.below[bad]),
                                   "image": tgt.labels(img)}],
                       notes=[FINITE_PROPER_NOTE])


def is_fib_compact(x: FibSpace) -> bool:
    return closed_map_witness(x.total, x.base, x.proj) is None


def _same_fiber_pairs(x: FibSpace):
    for b in range(x.base.n):
        fb = list(bits(x.fibers[b]))
        for a, i in enumerate(fb):
            for j in fb[a + 1:]:
                yield i, j


def t1_violation(x: FibSpace):
    t = x.total
    for i, j in _same_fiber_pairs(x):
        if t.leq(i, j) or t.leq(j, i):
            return i, j
    return None


def t2_violation(x: FibSpace):
    t = x.total
    for i, j in _same_fiber_pairs(x):
        if t.nbhd[i] & t.nbhd[j]:
            return i, j
    return None


def urysohn_violation(x: FibSpace):
    t = x.total
    for i, j in _same_fiber_pairs(x):
        if t.closure(t.nbhd[i]) & t.closure(t.nbhd[j]):
            return i, j
    return None


def regular_violation(x: FibSpace):
    """A point x0 for which no neighbourhood U of x0 and Omega of p(x0) has cl(U) restricted to Omega inside the smallest neighbourhood."""
    t = x.total
    for i in range(x.n):
        u = t.nbhd[i]
        omega = x.over(x.base.nbhd[x.proj[i]])
        if t.closure(u) & omega & ~u:
            return i
    return None


def is_fib_hausdorff(x: FibSpace) -> bool:
    return t2_violation(x) is None


def is_fch(x: FibSpace) -> bool:
    """Fibrewise compact and fibrewise Hausdorff."""
    return is_fib_hausdorff(x) and is_fib_compact(x)


def diagonal_violation(x: FibSpace):
    p = product_over_B(x, x)
    diag = mask_of(k for k, (a, b) in enumerate(p.points) if a == b)
    extra = p.total.closure(diag) & ~diag
    if extra:
        k = next(bits(extra))
        return p.points[k]
    return None


_PROVENANCE = {
    "fibT1": "fibres are T1 subspaces",
    "fibT2": "distinct points of a fibre have disjoint neighbourhoods in the total space",
    "fibUrysohn": "distinct points of a fibre have disjoint closed neighbourhoods",
    "fibRegular": "closure of a neighbourhood over a base neighbourhood stays inside a given neighbourhood",
    "diagonalClosed": "fibrewise Hausdorff iff the diagonal is closed in the fibred square",
    "fibCompact": "fibrewise compact iff the projection is proper",
}


def separation_predicate(x: FibSpace, axiom: str) -> CheckReport:
    if axiom not in AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    pts = x.points
    prov = _PROVENANCE[axiom]
    wit = None
    notes = []
    if axiom == "fibT1":
        v = t1_violation(x)
        wit = v and {"pair": [pts[v[0]], pts[v[1]]]}
    elif axiom == "fibT2":
        v = t2_violation(x)
        wit = v and {"pair": [pts[v[0]], pts[v[1]]]}
    elif axiom == "fibUrysohn":
        v = urysohn_violation(x)
        wit = v and {"pair": [pts[v[0]], pts[v[1]]]}
    elif axiom == "fibRegular":
        v = regular_violation(x)
        wit = None if v is None else {"point": pts[v]}
    elif axiom == "diagonalClosed":
        v = diagonal_violation(x)
        wit = v and {"pair_in_closure_of_diagonal": list(v)}
    else:
        v = closed_map_witness(x.total, x.base, x.proj)
        wit = None if v is None else {"closed_set": x.total.labels(x.total.below[v]),
                                      "image": x.base.labels(image_mask(x.proj, x.total.below[v]))}
        notes.append(FINITE_PROPER_NOTE)
    if wit is None:
        return CheckReport(axiom, True, prov, notes=notes, counts={"points": x.n})
    return CheckReport(axiom, False, prov, witnesses=[wit], notes=notes, counts={"points": x.n})


def satisfies(x: FibSpace, axiom: str) -> bool:
    return separation_predicate(x, axiom).verdict


# ------------------------------------------------------------- weak Hausdorff

WEAK_H_NOTE = ("test spaces reduced to topologies on the image set that are finer than the "
               "subspace topology, fibrewise Hausdorff, with closed projection")


def _transitive_subrelations(n: int, pairs: list):
    """All transitive relations (as neighbourhood masks) using a subset of pairs."""
    pairs = sorted(pairs)
    base = [1 << i for i in range(n)]

    def closed(nb):
        return all(not nb[j] & ~nb[i] for i in range(n) for j in bits(nb[i]))

    def go(k, nb):
        if k == len(pairs):
            if closed(nb):
                yield tuple(nb)
            return
        yield from go(k + 1, nb)
        i, j = pairs[k]
        nb2 = list(nb)
        nb2[i] |= 1 << j
        yield from go(k + 1, nb2)

    yield from go(0, base)


def _fch_topology_on(sub: FibSpace):
    """A topology on the same points, finer than sub's, fibrewise compact Hausdorff over sub's base."""
    n = sub.n
    t = sub.total
    disc = FibSpace(FinTopSpace(t.points, tuple(1 << i for i in range(n))), sub.base, sub.proj)
    if is_fch(disc):
        return disc.total
    pairs = [(i, j) for i in range(n) for j in bits(t.nbhd[i])
             if i != j and sub.proj[i] != sub.proj[j]]
    for nb in _transitive_subrelations(n, pairs):
        try:
            cand = FibSpace(FinTopSpace(t.points, nb), sub.base, sub.proj)
        except Exception:
            continue
        if is_fch(cand):
            return cand.total
    return None


def weak_hausdorff_witness(x: FibSpace):
    """(omega mask, subset mask of X_omega, witness topology) or None."""
    for omega in x.base.open_masks():
        if omega == 0:
            continue
        xo = restrict_to_mask(x, omega)
        t = xo.total
        for s in range(1, t.full + 1):
            if t.closure(s) == s:
                continue
            sub = subspace_over_B(xo, s)
            top = _fch_topology_on(sub)
            if top is not None:
                return omega, xo, s, top
    return None


def is_weak_hausdorff(x: FibSpace, size_bound: int | None = None) -> CheckReport:
    bound = x.n if size_bound is None else size_bound
    if bound < x.n:
        raise PreconditionError("size_bound must be at least the number of points")
    w = weak_hausdorff_witness(x)
    notes = [WEAK_H_NOTE, f"size_bound={bound}"]
    prov = "images of fibrewise compact Hausdorff test spaces over open base sets are closed"
    if w is None:
        return CheckReport("fibWeakH", True, prov, notes=notes, counts={"points": x.n})
    omega, xo, s, top = w
    return CheckReport("fibWeakH", False, prov, notes=notes, witnesses=[{
        "base_open": x.base.labels(omega),
        "image": xo.total.labels(s),
        "test_space_opens": top.open_sets(),
    }])


# ------------------------------------------------------------------ k-Hausdorff

def default_kh_bound(x: FibSpace) -> int:
    return x.n + 2


@lru_cache(maxsize=None)
def fch_spaces(base: FinTopSpace, max_points: int) -> tuple:
    """Fibrewise compact Hausdorff spaces over base with 1..max_points points, up to isomorphism."""
    out = []
    seen = set()
    for n in range(1, max_points + 1):
        for proj in iproduct(range(base.n), repeat=n):
            if list(proj) != sorted(proj):
                continue  # fibres listed in order; relabelings are covered by sorting
            pairs = [(i, j) for i in range(n) for j in range(n)
                     if proj[i] != proj[j] and base.leq(proj[i], proj[j])]
            for nb in _transitive_subrelations(n, pairs):
                try:
                    k = FibSpace(FinTopSpace(tuple(range(n)), nb), base, tuple(proj))
                except Exception:
                    continue
                if not is_fch(k):
                    continue
                code = canonical_code(k)
                if code in seen:
                    continue
                seen.add(code)
                out.append(FibSpace(FinTopSpace(tuple(range(n)), code[1]), base, code[0]))
    return tuple(out)


def k_hausdorff_witness(x: FibSpace, bound: int):
    for omega in x.base.open_masks():
        if omega == 0:
            continue
        xo = restrict_to_mask(x, omega)
        sq = product_over_B(xo, xo)
        diag = mask_of(k for k, (a, b) in enumerate(sq.points) if a == b)
        for k in fch_spaces(xo.base, bound):
            if all(u == 1 << i for i, u in enumerate(k.total.nbhd)):
                continue  # every subset of a discrete test space is closed
            for u in fib_maps(k, sq):
                pre = mask_of(i for i, y in enumerate(u) if diag >> y & 1)
                if k.total.closure(pre) != pre:
                    return omega, k, sq, u
    return None


def is_k_hausdorff(x: FibSpace, size_bound: int | None = None) -> CheckReport:
    bound = default_kh_bound(x) if size_bound is None else size_bound
    if bound < 1:
        raise PreconditionError("size_bound must be positive")
    notes = [f"test spaces limited to fibrewise compact Hausdorff spaces with at most {bound} points",
             "finite compact Hausdorff fibres are discrete"]
    prov = "preimage of the diagonal under maps from fibrewise compact Hausdorff test spaces is closed"
    w = k_hausdorff_witness(x, bound)
    if w is None:
        return CheckReport("fibKH", True, prov, notes=notes, counts={"size_bound": bound})
    omega, k, sq, u = w
    return CheckReport("fibKH", False, prov, notes=notes, counts={"size_bound": bound}, witnesses=[{
        "base_open": x.base.labels(omega),
        "test_space_opens": k.total.open_sets(),
        "map": {str(k.points[i]): sq.points[y] for i, y in enumerate(u)},
    }])


# -------------------------------------------------------- compactly generated

def fib_compact_subspaces(x: FibSpace) -> list[int]:
    out = []
    for m in range(1, x.total.full + 1):
        if is_fib_compact(subspace_over_B(x, m)):
            out.append(m)
    return out


def is_compactly_generated(x: FibSpace) -> CheckReport:
    """Open sets are exactly those meeting every fibrewise compact subspace in a relatively open set."""
    if not x.base.is_t1:
        raise PreconditionError("base must be T1; use reflect.is_w_generated for the general case")
    if not is_fib_hausdorff(x):
        raise PreconditionError("space must be fibrewise Hausdorff; use reflect.is_w_generated")
    t = x.total
    ks = fib_compact_subspaces(x)
    subs = {k: t.subspace(k) for k in ks}

    def rel_open(a, k):
        sub = subs[k]
        inner = mask_of(pos for pos, i in enumerate(bits(k)) if a >> i & 1)
        return sub.is_open(inner)

    prov = "open iff the trace on every fibrewise compact subspace is open"
    for a in range(t.full + 1):
        if t.is_open(a):
            continue
        if all(rel_open(a, k) for k in ks):
            return CheckReport("compactly generated", False, prov,
                               witnesses=[{"k_open_not_open": t.labels(a)}],
                               counts={"test_subspaces": len(ks)})
    return CheckReport("compactly generated", True, prov, counts={"test_subspaces": len(ks)})


# ------------------------------------------------------------------ tube lemma

def tube_witness(x: FibSpace, k: FibSpace, x0, o) -> frozenset | None:
    """Largest open V around x0 with V x_B K inside o; o is a set of product point labels."""
    if not is_fib_compact(k):
        raise PreconditionError("K must be fibrewise compact")
    p = product_over_B(x, k)
    omask = p.total.mask(o)
    if not p.total.is_open(omask):
        raise PreconditionError("o must be open in the fibred product")
    i0 = x.total.index[x0]
    col = {}
    for pos, (a, _) in enumerate(p.points):
        col.setdefault(x.total.index[a], 0)
        col[x.total.index[a]] |= 1 << pos
    inside = mask_of(i for i in range(x.n) if col.get(i, 0) & ~omask == 0)
    if not inside >> i0 & 1:
        raise PreconditionError("{x0} x_B K must lie inside o")
    v = x.total.interior(inside)
    if not v >> i0 & 1:
        return None
    tube = 0
    for i in bits(v):
        tube |= col.get(i, 0)
    if tube & ~omask:
        return None
    return x.total.labels(v)
