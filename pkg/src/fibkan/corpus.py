"""Exhaustive small-instance corpora of finite spaces over finite bases."""
from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct

from .spaces import FibSpace, FinTopSpace, canonical_code, is_continuous, over_point


@lru_cache(maxsize=None)
def topologies(n: int) -> tuple:
    """All topologies on points 0..n-1 up to homeomorphism, deterministic order."""
    if n == 0:
        return (FinTopSpace((), ()),)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = {}
    for choice in range(1 << len(pairs)):
        rel = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if choice >> k & 1:
                rel[i] |= 1 << j
        # transitivity: nbhd of every member is contained in the nbhd
        if any(rel[j] & ~rel[i] for i in range(n) for j in range(n) if rel[i] >> j & 1):
            continue
        space = FinTopSpace(tuple(range(n)), tuple(rel))
        code = canonical_code(over_point(space))
        if code not in seen:
            seen[code] = FinTopSpace(tuple(range(n)), code[1])
    return tuple(seen[c] for c in sorted(seen, key=lambda c: (_open_count(c[1]), c)))


def _open_count(nb: tuple) -> int:
    return len(FinTopSpace(tuple(range(len(nb))), nb).open_masks())


def bases(max_base_points: int) -> tuple:
    return tuple(t for k in range(1, max_base_points + 1) for t in topologies(k))


@lru_cache(maxsize=None)
def spaces_over(base: FinTopSpace, max_points: int, min_points: int = 1) -> tuple:
    """All spaces over base with min..max points up to fibrewise homeomorphism."""
    out = []
    for n in range(min_points, max_points + 1):
        seen = set()
        for top in topologies(n):
            for proj in iproduct(range(base.n), repeat=n):
                if not is_continuous(top, base, proj):
                    continue
                x = FibSpace(top, base, tuple(proj))
                code = canonical_code(x)
                if code in seen:
                    continue
                seen.add(code)
                out.append((n, code))
    out.sort()
    return tuple(FibSpace(FinTopSpace(tuple(range(n)), code[1]), base, code[0]) for n, code in out)


def generate_corpus(max_points: int, max_base_points: int) -> list[FibSpace]:
    """Every space on 1..max_points points over every base on 1..max_base_points points."""
    if max_points < 1 or max_base_points < 1:
        raise ValueError("bounds must be at least 1")
    return [x for b in bases(max_base_points) for x in spaces_over(b, max_points)]


def corpus_by_base(max_points: int, max_base_points: int) -> list[tuple[FinTopSpace, tuple]]:
    return [(b, spaces_over(b, max_points)) for b in bases(max_base_points)]
