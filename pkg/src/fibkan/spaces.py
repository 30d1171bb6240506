"""Finite topological spaces and spaces over a base.

A finite topology is stored by the minimal open neighbourhood of each point,
as a bitmask over point indices.  Every open set is a union of these, so the
representation is equivalent to the full open family while staying small for
mapping spaces with dozens of points.  Point i sits below point j in the
specialization preorder (i lies in the closure of j) exactly when bit j is set
in nbhd[i].
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Hashable, Iterable, Iterator, Sequence

from .report import FibkanError


class TopologyError(FibkanError):
    def __init__(self, message: str, subset: Iterable = ()):
        super().__init__(message)
        self.subset = tuple(subset)


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class FinTopSpace:
    points: tuple
    nbhd: tuple

    def __post_init__(self) -> None:
        n = len(self.points)
        if len(set(self.points)) != n:
            raise TopologyError("duplicate point labels", self.points)
        if len(self.nbhd) != n:
            raise TopologyError("one neighbourhood per point required")
        full = (1 << n) - 1
        for i, u in enumerate(self.nbhd):
            if not (u >> i) & 1 or u & ~full:
                raise TopologyError("minimal neighbourhood must contain its point", [self.points[i]])
            for j in bits(u):
                if self.nbhd[j] & ~u:
                    raise TopologyError("minimal neighbourhoods are not nested", [self.points[i], self.points[j]])

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.points, self.nbhd))

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    @cached_property
    def below(self) -> tuple:
        """below[j] = mask of points in the closure of {j}."""
        out = [0] * self.n
        for i, u in enumerate(self.nbhd):
            for j in bits(u):
                out[j] |= 1 << i
        return tuple(out)

    def leq(self, i: int, j: int) -> bool:
        return bool((self.nbhd[i] >> j) & 1)

    def is_open(self, mask: int) -> bool:
        return all(self.nbhd[i] & ~mask == 0 for i in bits(mask))

    def is_closed(self, mask: int) -> bool:
        return self.is_open(self.full & ~mask)

    def up(self, mask: int) -> int:
        """Smallest open set containing mask."""
        out = 0
        for i in bits(mask):
            out |= self.nbhd[i]
        return out

    def closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.below[i]
        return out

    def interior(self, mask: int) -> int:
        return mask_of(i for i in bits(mask) if self.nbhd[i] & ~mask == 0)

    def open_masks(self) -> list[int]:
        found = {0}
        for u in self.nbhd:
            found |= {o | u for o in found}
        return sorted(found)

    def closed_masks(self) -> list[int]:
        return sorted(self.full & ~o for o in self.open_masks())

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in bits(mask))

    def mask(self, labels: Iterable[Hashable]) -> int:
        return mask_of(self.index[p] for p in labels)

    def open_sets(self) -> list[frozenset]:
        return [self.labels(m) for m in self.open_masks()]

    def subspace(self, mask: int) -> FinTopSpace:
        keep = list(bits(mask))
        pos = {old: new for new, old in enumerate(keep)}
        nb = tuple(mask_of(pos[j] for j in bits(self.nbhd[i] & mask)) for i in keep)
        return FinTopSpace(tuple(self.points[i] for i in keep), nb)

    def relabel(self, labels: Sequence) -> FinTopSpace:
        return FinTopSpace(tuple(labels), self.nbhd)

    @property
    def is_t1(self) -> bool:
        return all(u == 1 << i for i, u in enumerate(self.nbhd))

    @property
    def is_t0(self) -> bool:
        return all(not (self.nbhd[j] >> i) & 1 for i in range(self.n) for j in bits(self.nbhd[i]) if j != i)

    def __repr__(self) -> str:
        opens = sorted((sorted(map(repr, s)) for s in self.open_sets()), key=lambda s: (len(s), s))
        if len(opens) > 12:
            return f"FinTopSpace({self.n} points)"
        return f"FinTopSpace({list(self.points)!r}, opens={opens})"


def from_nbhds(points: Sequence, nbhds: Sequence[Iterable]) -> FinTopSpace:
    idx = {p: i for i, p in enumerate(points)}
    return FinTopSpace(tuple(points), tuple(mask_of(idx[q] for q in u) for u in nbhds))


def from_opens(points: Sequence, opens: Iterable[Iterable]) -> FinTopSpace:
    """Validate an explicit open family and convert it."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise TopologyError("duplicate point labels", points)
    idx = {p: i for i, p in enumerate(points)}
    family = set()
    for o in opens:
        o = list(o)
        unknown = [p for p in o if p not in idx]
        if unknown:
            raise TopologyError("open set mentions unknown points", unknown)
        family.add(mask_of(idx[p] for p in o))
    full = (1 << len(points)) - 1
    if 0 not in family:
        raise TopologyError("empty set missing", ())
    if full not in family:
        raise TopologyError("total set missing", points)
    fam = sorted(family)
    for a in fam:
        for b in fam:
            if a | b not in family:
                raise TopologyError("union of two opens is not open",
                                    [p for i, p in enumerate(points) if (a | b) >> i & 1])
            if a & b not in family:
                raise TopologyError("intersection of two opens is not open",
                                    [p for i, p in enumerate(points) if (a & b) >> i & 1])
    nb = []
    for i in range(len(points)):
        u = full
        for o in fam:
            if o >> i & 1:
                u &= o
        nb.append(u)
    return FinTopSpace(points, tuple(nb))


def generated(points: Sequence, subbasis: Iterable[int]) -> FinTopSpace:
    """Topology generated by a family of subsets given as masks."""
    points = tuple(points)
    n = len(points)
    nb = [(1 << n) - 1] * n
    for s in subbasis:
        for i in bits(s):
            nb[i] &= s
    return FinTopSpace(points, tuple(nb))


def discrete(points: Sequence) -> FinTopSpace:
    points = tuple(points)
    return FinTopSpace(points, tuple(1 << i for i in range(len(points))))


def indiscrete(points: Sequence) -> FinTopSpace:
    points = tuple(points)
    full = (1 << len(points)) - 1
    return FinTopSpace(points, tuple(full for _ in points))


def sierpinski() -> FinTopSpace:
    """Points 0 and 1 with {1} the only proper nonempty open."""
    return FinTopSpace((0, 1), (0b11, 0b10))


def point_space(label: Hashable = 0) -> FinTopSpace:
    return FinTopSpace((label,), (1,))


def is_continuous(src: FinTopSpace, tgt: FinTopSpace, f: Sequence[int]) -> bool:
    tn = tgt.nbhd
    for i, u in enumerate(src.nbhd):
        allowed = tn[f[i]]
        for j in bits(u):
            if not (allowed >> f[j]) & 1:
                return False
    return True


def image_mask(f: Sequence[int], mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << f[i]
    return out


def preimage_mask(f: Sequence[int], mask: int) -> int:
    return mask_of(i for i, y in enumerate(f) if (mask >> y) & 1)


def initial_topology(points: Sequence, maps_out: Iterable[tuple[Sequence[int], FinTopSpace]]) -> FinTopSpace:
    """Coarsest topology making each (index map, target) continuous."""
    points = tuple(points)
    n = len(points)
    nb = [(1 << n) - 1] * n
    for f, tgt in maps_out:
        pre = {}
        for i in range(n):
            y = f[i]
            if y not in pre:
                pre[y] = preimage_mask(f, tgt.nbhd[y])
            nb[i] &= pre[y]
    return FinTopSpace(points, tuple(nb))


def final_topology(points: Sequence, maps_in: Iterable[tuple[FinTopSpace, Sequence[int]]]) -> FinTopSpace:
    """Finest topology making each (source, index map) continuous."""
    points = tuple(points)
    n = len(points)
    step = [1 << i for i in range(n)]
    for src, f in maps_in:
        for i, u in enumerate(src.nbhd):
            for j in bits(u):
                step[f[i]] |= 1 << f[j]
    return FinTopSpace(points, tuple(_reach(step)))


def _reach(step: list[int]) -> list[int]:
    out = list(step)
    changed = True
    while changed:
        changed = False
        for i in range(len(out)):
            m = out[i]
            acc = m
            for j in bits(m):
                acc |= out[j]
            if acc != m:
                out[i] = acc
                changed = True
    return out


def product(a: FinTopSpace, b: FinTopSpace) -> FinTopSpace:
    pts = tuple((p, q) for p in a.points for q in b.points)
    nb_ = b.n
    nb = []
    for i in range(a.n):
        for j in range(b.n):
            m = 0
            for k in bits(a.nbhd[i]):
                for l in bits(b.nbhd[j]):
                    m |= 1 << (k * nb_ + l)
            nb.append(m)
    return FinTopSpace(pts, tuple(nb))


# ---------------------------------------------------------------- preorders


@dataclass(frozen=True)
class PreorderData:
    points: tuple
    relation: frozenset

    def __post_init__(self) -> None:
        pts = set(self.points)
        for a, b in self.relation:
            if a not in pts or b not in pts:
                raise ValueError(f"relation mentions unknown point in {(a, b)!r}")
        for p in self.points:
            if (p, p) not in self.relation:
                raise ValueError(f"not reflexive at {p!r}")
        for a, b in self.relation:
            for c, d in self.relation:
                if b == c and (a, d) not in self.relation:
                    raise ValueError(f"not transitive at {(a, b, d)!r}")

    def leq(self, a, b) -> bool:
        return (a, b) in self.relation


def specialization_preorder(x: FinTopSpace) -> PreorderData:
    """x <= y iff x lies in the closure of {y}."""
    rel = frozenset((x.points[i], x.points[j]) for i in range(x.n) for j in bits(x.nbhd[i]))
    return PreorderData(x.points, rel)


def alexandroff_of(p: PreorderData) -> FinTopSpace:
    """Topology of up-sets: the open sets are the sets closed upwards."""
    idx = {q: i for i, q in enumerate(p.points)}
    nb = [0] * len(p.points)
    for a, b in p.relation:
        nb[idx[a]] |= 1 << idx[b]
    return FinTopSpace(tuple(p.points), tuple(nb))


# ------------------------------------------------------------ spaces over B


@dataclass(frozen=True)
class FibSpace:
    total: FinTopSpace
    base: FinTopSpace
    proj: tuple

    def __post_init__(self) -> None:
        if len(self.proj) != self.total.n:
            raise TopologyError("projection must be defined on every point")
        for i, b in enumerate(self.proj):
            if not 0 <= b < self.base.n:
                raise TopologyError("projection lands outside the base", [self.total.points[i]])
        for i, u in enumerate(self.total.nbhd):
            allowed = self.base.nbhd[self.proj[i]]
            for j in bits(u):
                if not (allowed >> self.proj[j]) & 1:
                    bad = self.base.nbhd[self.proj[i]]
                    raise TopologyError(
                        "projection is not continuous: preimage of an open base set is not open",
                        sorted(self.base.labels(bad), key=repr))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.total, self.base, self.proj))

    @property
    def n(self) -> int:
        return self.total.n

    @property
    def points(self) -> tuple:
        return self.total.points

    @cached_property
    def fibers(self) -> tuple:
        out = [0] * self.base.n
        for i, b in enumerate(self.proj):
            out[b] |= 1 << i
        return tuple(out)

    def over(self, base_mask: int) -> int:
        m = 0
        for b in bits(base_mask):
            m |= self.fibers[b]
        return m

    def fiber(self, b: int) -> FinTopSpace:
        return self.total.subspace(self.fibers[b])

    def fiber_sizes(self) -> tuple:
        return tuple(bin(m).count("1") for m in self.fibers)

    def __repr__(self) -> str:
        return (f"FibSpace({self.total!r} over {self.base!r}, "
                f"proj={[self.base.points[b] for b in self.proj]})")


def over_point(x: FinTopSpace) -> FibSpace:
    return FibSpace(x, point_space(), tuple(0 for _ in x.points))


def base_as_identity(base: FinTopSpace) -> FibSpace:
    """The terminal object: the base over itself."""
    return FibSpace(base, base, tuple(range(base.n)))


def fib_space(total: FinTopSpace, base: FinTopSpace, proj: dict) -> FibSpace:
    """Build from a label-level projection."""
    return FibSpace(total, base, tuple(base.index[proj[p]] for p in total.points))


@dataclass(frozen=True)
class FibMap:
    source: FibSpace
    target: FibSpace
    mapping: tuple

    def __post_init__(self) -> None:
        if self.source.base != self.target.base:
            raise TopologyError("maps must be between spaces over the same base")
        for i, y in enumerate(self.mapping):
            if self.source.proj[i] != self.target.proj[y]:
                raise TopologyError("map does not commute with projections", [self.source.points[i]])
        if not is_continuous(self.source.total, self.target.total, self.mapping):
            raise TopologyError("map is not continuous")

    def __call__(self, label):
        return self.target.points[self.mapping[self.source.total.index[label]]]

    def as_dict(self) -> dict:
        return {p: self.target.points[y] for p, y in zip(self.source.points, self.mapping)}


def fib_map(source: FibSpace, target: FibSpace, assignment: dict) -> FibMap:
    return FibMap(source, target, tuple(target.total.index[assignment[p]] for p in source.points))


def compose_maps(g: FibMap, f: FibMap) -> FibMap:
    return FibMap(f.source, g.target, tuple(g.mapping[y] for y in f.mapping))


def identity_map(x: FibSpace) -> FibMap:
    return FibMap(x, x, tuple(range(x.n)))


@lru_cache(maxsize=None)
def fib_maps(src: FibSpace, tgt: FibSpace) -> tuple:
    """All continuous fibrewise maps src -> tgt as index tuples (memoized)."""
    if src.base != tgt.base:
        raise TopologyError("maps must be between spaces over the same base")
    n = src.n
    fib = [tgt.fibers[src.proj[i]] for i in range(n)]
    if any(not m for m in fib):
        return ()
    if n == 0:
        return ((),)
    snb = src.total.nbhd
    # f(j) must lie above f(i) whenever j lies above i; checked against earlier points
    above_earlier = [[j for j in bits(snb[i]) if j < i] for i in range(n)]
    below_earlier = [[j for j in range(i) if (snb[j] >> i) & 1] for i in range(n)]
    tn = tgt.total.nbhd
    tb = tgt.total.below
    out = []
    f = [0] * n
    last = n - 1

    def go(i: int) -> None:
        allowed = fib[i]
        for j in below_earlier[i]:
            allowed &= tn[f[j]]
        for j in above_earlier[i]:
            allowed &= tb[f[j]]
        if i == last:
            while allowed:
                low = allowed & -allowed
                f[i] = low.bit_length() - 1
                out.append(tuple(f))
                allowed ^= low
            return
        while allowed:
            low = allowed & -allowed
            f[i] = low.bit_length() - 1
            go(i + 1)
            allowed ^= low

    go(0)
    return tuple(out)


def maps_between(a: FinTopSpace, b: FinTopSpace) -> tuple:
    return fib_maps(over_point(a), over_point(b))


# ------------------------------------------------------------ constructions


def product_over_B(x: FibSpace, y: FibSpace) -> FibSpace:
    """Fibred product: pairs with equal projection, subspace topology."""
    if x.base != y.base:
        raise TopologyError("product over B needs a common base")
    pairs = [(i, j) for i in range(x.n) for j in bits(y.fibers[x.proj[i]])]
    pos = {p: k for k, p in enumerate(pairs)}
    nb = []
    for i, j in pairs:
        m = 0
        for k in bits(x.total.nbhd[i]):
            for l in bits(y.total.nbhd[j] & y.fibers[x.proj[k]]):
                m |= 1 << pos[(k, l)]
        nb.append(m)
    total = FinTopSpace(tuple((x.points[i], y.points[j]) for i, j in pairs), tuple(nb))
    return FibSpace(total, x.base, tuple(x.proj[i] for i, _ in pairs))


def product_projections(x: FibSpace, y: FibSpace, p: FibSpace) -> tuple[tuple, tuple]:
    """Index maps of the two projections out of product_over_B(x, y)."""
    return (tuple(x.total.index[a] for a, _ in p.points),
            tuple(y.total.index[b] for _, b in p.points))


def sum_over_B(spaces: Sequence[FibSpace]) -> FibSpace:
    """Coproduct: disjoint union with points (k, label)."""
    base = spaces[0].base
    pts, nb, proj = [], [], []
    offset = 0
    for k, s in enumerate(spaces):
        if s.base != base:
            raise TopologyError("coproduct over B needs a common base")
        pts.extend((k, p) for p in s.points)
        nb.extend(u << offset for u in s.total.nbhd)
        proj.extend(s.proj)
        offset += s.n
    return FibSpace(FinTopSpace(tuple(pts), tuple(nb)), base, tuple(proj))


@dataclass(frozen=True)
class FibEquivRelation:
    classes: tuple  # tuple of tuples of point labels

    @staticmethod
    def from_classes(classes: Iterable[Iterable]) -> FibEquivRelation:
        return FibEquivRelation(tuple(tuple(c) for c in classes))


def quotient_fibrewise(x: FibSpace, r: FibEquivRelation) -> tuple[FibSpace, FibMap]:
    """Quotient by a fibrewise partition; points of the result are the classes."""
    idx = x.total.index
    seen = set()
    classes = []
    for c in r.classes:
        members = sorted((idx[p] for p in c))
        if not members:
            continue
        if len({x.proj[i] for i in members}) != 1:
            raise TopologyError("equivalence class meets more than one fibre", c)
        if seen & set(members):
            raise TopologyError("classes overlap", c)
        seen |= set(members)
        classes.append(members)
    for i in range(x.n):
        if i not in seen:
            classes.append([i])
    classes.sort()
    q = [0] * x.n
    for k, c in enumerate(classes):
        for i in c:
            q[i] = k
    labels = tuple(x.points[c[0]] if len(c) == 1 else tuple(x.points[i] for i in c) for c in classes)
    total = final_topology(labels, [(x.total, q)])
    quot = FibSpace(total, x.base, tuple(x.proj[c[0]] for c in classes))
    return quot, FibMap(x, quot, tuple(q))


def quotient_by_labels(x: FibSpace, q: Sequence[int]) -> tuple[FibSpace, FibMap]:
    """Quotient by the partition into fibres of an index map."""
    groups: dict = {}
    for i, k in enumerate(q):
        groups.setdefault(k, []).append(x.points[i])
    return quotient_fibrewise(x, FibEquivRelation.from_classes(groups.values()))


def pullback_base(x: FibSpace, a: Iterable) -> FibSpace:
    """Restriction X_A over the subspace A of the base (A given by labels)."""
    amask = x.base.mask(a)
    return restrict_to_mask(x, amask)


def restrict_to_mask(x: FibSpace, amask: int) -> FibSpace:
    base = x.base.subspace(amask)
    keep = x.over(amask)
    total = x.total.subspace(keep)
    newb = {old: new for new, old in enumerate(bits(amask))}
    return FibSpace(total, base, tuple(newb[x.proj[i]] for i in bits(keep)))


def subspace_over_B(x: FibSpace, mask: int) -> FibSpace:
    total = x.total.subspace(mask)
    return FibSpace(total, x.base, tuple(x.proj[i] for i in bits(mask)))


def fiber_over_point(x: FibSpace, b: int) -> FibSpace:
    """The fibre X_b as a space over the one-point space."""
    return over_point(x.fiber(b))


# ------------------------------------------------------------ isomorphism


def find_isomorphism(x: FibSpace, y: FibSpace) -> tuple | None:
    """An index bijection x -> y that is a fibrewise homeomorphism, if any."""
    if x.base != y.base or x.n != y.n or x.fiber_sizes() != y.fiber_sizes():
        return None
    n = x.n

    def sig(s: FibSpace, i: int) -> tuple:
        return (s.proj[i], bin(s.total.nbhd[i]).count("1"), bin(s.total.below[i]).count("1"))

    sx = [sig(x, i) for i in range(n)]
    sy = [sig(y, i) for i in range(n)]
    if sorted(sx) != sorted(sy):
        return None
    f = [-1] * n
    used = [False] * n

    def go(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or sy[j] != sx[i]:
                continue
            ok = True
            for k in range(i):
                if x.total.leq(i, k) != y.total.leq(j, f[k]) or x.total.leq(k, i) != y.total.leq(f[k], j):
                    ok = False
                    break
            if ok:
                f[i] = j
                used[j] = True
                if go(i + 1):
                    return True
                used[j] = False
        return False

    return tuple(f) if go(0) else None


def fib_isomorphic(x: FibSpace, y: FibSpace) -> bool:
    return find_isomorphism(x, y) is not None


def homeomorphic(a: FinTopSpace, b: FinTopSpace) -> bool:
    return fib_isomorphic(over_point(a), over_point(b))


def canonical_code(x: FibSpace) -> tuple:
    """Isomorphism invariant code for small spaces (brute force over relabelings)."""
    n = x.n
    best = None
    for perm in permutations(range(n)):
        # perm[i] = new position of old point i
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        proj = tuple(x.proj[inv[k]] for k in range(n))
        if best is not None and proj > best[0]:
            continue
        nb = tuple(mask_of(perm[j] for j in bits(x.total.nbhd[inv[k]])) for k in range(n))
        code = (proj, nb)
        if best is None or code < best:
            best = code
    return best if best is not None else ((), ())
