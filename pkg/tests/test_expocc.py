import pytest

from fibkan.corpus import bases, corpus_by_base, spaces_over
from fibkan.expocc import (
    MappingSpaceError, certify_ccc, check_day_conditions, evaluation, exponential_w, exponentiable_route,
    hom_space, internal_hom_w, mapping_space, product_w, transpose, untranspose,
)
from fibkan.oracles import count_continuous, preorder_exponential
from fibkan.reflect import SubcategorySpec, fch_family, generated, point_fiber_family, sierpinski_family
from fibkan.report import PreconditionError
from fibkan.separation import fch_spaces, satisfies
from fibkan.spaces import (
    FibMap, FibSpace, base_as_identity, bits, discrete, fib_maps, find_isomorphism, homeomorphic, over_point,
    point_space, product, product_over_B, sierpinski,
)
from strategies import close_family

POINT, INDISCRETE2, SIERPINSKI, DISCRETE2 = bases(2)
BY_BASE = dict(corpus_by_base(3, 2))
T1_BASES = (POINT, DISCRETE2)


def fibre_total(x, b):
    return x.total.subspace(x.fibers[b])


def subbasis_topology(k, y, m):
    """Open sets of the mapping space generated by {gamma over Omega : gamma(C) inside O}, by set arithmetic."""
    funcs = [(lab[0], dict(lab[1])) for lab in m.points]
    closed = [frozenset(k.points) - o for o in k.total.open_sets()]
    family = []
    for c in closed:
        for o in y.total.open_sets():
            for omega in k.base.open_sets():
                family.append(frozenset(m.points[i] for i, (b, fn) in enumerate(funcs)
                                        if b in omega and all(fn[p] in o for p in c if p in fn)))
    return close_family(m.points, family)


# ------------------------------------------------------------ mapping spaces

def test_maps_from_discrete_pair_to_sierpinski():
    m = mapping_space(over_point(discrete((0, 1))), over_point(sierpinski())).space
    assert m.n == 4
    assert homeomorphic(m.total, product(sierpinski(), sierpinski()))


@pytest.mark.parametrize("base", T1_BASES, ids=["point", "discrete2"])
def test_mapping_space_topology_matches_subbasis(base):
    for k in fch_spaces(base, 2):
        for y in BY_BASE[base]:
            ms = mapping_space(k, y)
            assert set(ms.space.total.open_sets()) == subbasis_topology(k, y, ms.space)
            assert len(ms.subbasis()) == (len(k.total.open_sets()) * len(y.total.open_sets())
                                          * len(base.open_sets()))


@pytest.mark.parametrize("base", T1_BASES, ids=["point", "discrete2"])
def test_mapping_space_fibres_count_continuous_maps(base):
    for k in fch_spaces(base, 2):
        for y in BY_BASE[base]:
            m = mapping_space(k, y).space
            for b in range(base.n):
                kb, yb = fibre_total(k, b), fibre_total(y, b)
                expected = count_continuous(kb.points, kb.open_sets(), yb.points, yb.open_sets())
                assert len(list(bits(m.fibers[b]))) == expected


def test_point_generator_gives_fibre_and_singletons():
    b = 0
    k = FibSpace(point_space(), DISCRETE2, (b,))
    y = FibSpace(discrete((0, 1, 2)), DISCRETE2, (0, 0, 1))
    m = mapping_space(k, y).space
    assert m.fiber_sizes() == (2, 1)
    assert homeomorphic(fibre_total(m, b), fibre_total(y, b))


def test_empty_fibre_of_k_gives_singleton():
    k = FibSpace(point_space(), DISCRETE2, (1,))
    y = FibSpace(discrete((0, 1, 2)), DISCRETE2, (0, 0, 0))
    assert mapping_space(k, y).space.fiber_sizes() == (1, 0)


def test_mapping_space_needs_compact_hausdorff_k():
    with pytest.raises(MappingSpaceError):
        mapping_space(over_point(sierpinski()), over_point(sierpinski()))


def test_mapping_space_preserves_t1_over_t1_bases():
    for base in T1_BASES:
        for k in fch_spaces(base, 2):
            for z in BY_BASE[base]:
                if satisfies(z, "fibT1"):
                    assert satisfies(mapping_space(k, z).space, "fibT1")


# ---------------------------------------------------------------- evaluation

def test_evaluation_at_one_point_is_continuous():
    k = over_point(point_space())
    for y in BY_BASE[POINT]:
        ev = evaluation(k, y)
        assert sorted(ev.mapping) == list(range(y.n))


def test_evaluation_on_sierpinski_example():
    ev = evaluation(over_point(discrete((0, 1))), over_point(sierpinski()))
    assert ev.source.n == 8
    for (g, kk), v in zip(ev.source.points, ev.mapping):
        assert dict(g[1])[kk] == ev.target.points[v]


@pytest.mark.parametrize("base", T1_BASES, ids=["point", "discrete2"])
def test_evaluation_continuous_on_corpus(base):
    for k in fch_spaces(base, 2):
        for y in BY_BASE[base]:
            evaluation(k, y)


# ----------------------------------------------------------------- transpose

def test_sierpinski_transpose_counts():
    x, k, y = over_point(sierpinski()), over_point(discrete((0, 1))), over_point(sierpinski())
    p = product_over_B(x, k)
    m = mapping_space(k, y).space
    left = count_continuous(p.points, p.total.open_sets(), y.points, y.total.open_sets())
    right = count_continuous(x.points, x.total.open_sets(), m.points, m.total.open_sets())
    assert left == right == 9
    assert len(fib_maps(p, y)) == len(fib_maps(x, m)) == 9


def test_projection_transpose_against_base_as_identity():
    base = DISCRETE2
    k = base_as_identity(base)
    for x in BY_BASE[base]:
        p = product_over_B(x, k)
        proj = tuple(x.total.index[a] for a, _ in p.points)
        g = transpose(FibMap(p, x, proj), x, k)
        assert len(set(g.mapping)) == x.n
        assert untranspose(g, k, x).mapping == proj


@pytest.mark.parametrize("base", T1_BASES, ids=["point", "discrete2"])
def test_transpose_round_trips(base):
    xs = [x for x in BY_BASE[base] if x.n <= 2]
    for k in fch_spaces(base, 2):
        for y in xs:
            for x in xs:
                p = product_over_B(x, k)
                for f in fib_maps(p, y):
                    g = transpose(FibMap(p, y, f), x, k)
                    assert untranspose(g, k, y).mapping == f
                    assert transpose(untranspose(g, k, y), x, k).mapping == g.mapping


# -------------------------------------------------------------- internal hom

def test_internal_hom_of_generator_is_mapping_space():
    w = fch_family(DISCRETE2, 2)
    zs = [z for z in BY_BASE[DISCRETE2] if generated(z, w)]
    for y in w.objects:
        for z in zs:
            h = internal_hom_w(y, z, w)
            assert find_isomorphism(h, mapping_space(y, z).space) is not None


def test_internal_hom_fibres_count_continuous_maps():
    w = sierpinski_family(POINT)
    for y in BY_BASE[POINT]:
        for z in BY_BASE[POINT]:
            h = internal_hom_w(y, z, w)
            assert h.n == count_continuous(y.points, y.total.open_sets(), z.points, z.total.open_sets())


def test_exponential_over_point_matches_preorder_oracle():
    w = sierpinski_family(POINT)
    for y in spaces_over(POINT, 2):
        for z in spaces_over(POINT, 3):
            e = exponential_w(y, z, w)
            up = preorder_exponential(y.points, y.total.open_sets(), z.points, z.total.open_sets())
            ref = {frozenset(g): frozenset(frozenset(h) for h in u) for g, u in up.items()}
            got = {frozenset(lab[1]): frozenset(frozenset(e.points[j][1]) for j in bits(e.total.nbhd[i]))
                   for i, lab in enumerate(e.points)}
            assert got == ref


def test_exponential_with_point_fibres_is_coreflected_target():
    w = point_fiber_family(DISCRETE2)
    one = FibSpace(discrete((0, 1)), DISCRETE2, (0, 1))
    for z in BY_BASE[DISCRETE2]:
        if generated(z, w):
            assert find_isomorphism(exponential_w(one, z, w), z) is not None


def test_internal_hom_needs_generated_arguments():
    w = point_fiber_family(POINT)
    with pytest.raises(PreconditionError):
        internal_hom_w(over_point(sierpinski()), over_point(point_space()), w)


def test_exponentiable_routes():
    assert exponentiable_route(over_point(discrete((0, 1)))) == "fibrewise compact Hausdorff"
    assert exponentiable_route(FibSpace(sierpinski(), DISCRETE2, (0, 0))) == "single fibre over a closed point"
    assert exponentiable_route(over_point(sierpinski())) == "single fibre over a closed point"
    # a discrete pair over the open base point is neither compact nor over a closed point
    bad = FibSpace(discrete((0, 1)), SIERPINSKI, (0, 0))
    assert exponentiable_route(bad) is None
    with pytest.raises(PreconditionError):
        hom_space(bad, bad)


def test_products_with_generators_stay_generated():
    for base in T1_BASES:
        w = fch_family(base, 2)
        ys = [y for y in BY_BASE[base] if generated(y, w)]
        for v in w.objects:
            for y in ys:
                assert generated(product_over_B(v, y), w)


def test_nested_families_agree_on_products():
    small, big = point_fiber_family(DISCRETE2), fch_family(DISCRETE2, 2)
    xs = [x for x in BY_BASE[DISCRETE2] if generated(x, small)]
    for x in xs:
        for y in xs:
            assert product_w(x, y, small) == product_w(x, y, big)


# ------------------------------------------------------------ Day conditions

def test_day_conditions_hold_for_compact_hausdorff_over_discrete_pair():
    assert check_day_conditions(fch_family(DISCRETE2, 2), DISCRETE2).verdict


def test_day_conditions_fail_over_sierpinski():
    rep = check_day_conditions(sierpinski_family(SIERPINSKI), SIERPINSKI)
    t1 = rep.children[0]
    assert t1.check == "base is T1" and not t1.verdict


def test_day_conditions_fail_without_point_generator():
    w = SubcategorySpec((FibSpace(point_space(), DISCRETE2, (0,)),))
    rep = check_day_conditions(w, DISCRETE2)
    assert not rep.children[1].verdict


# ------------------------------------------------------------ certificates

def test_sierpinski_family_certifies_alexandroff_spaces():
    cert = certify_ccc(sierpinski_family(POINT), spaces_over(POINT, 2))
    assert cert.verdict, cert.report.render()
    assert all(r["ok"] for r in cert.records)


def test_compact_hausdorff_certificate_over_discrete_pair():
    cert = certify_ccc(fch_family(DISCRETE2, 2), spaces_over(DISCRETE2, 3))
    assert cert.verdict
    assert cert.report.counts["bijections"] == cert.report.counts["objects"] ** 3


def test_certificate_refuses_failed_day_conditions():
    cert = certify_ccc(sierpinski_family(SIERPINSKI), spaces_over(SIERPINSKI, 2))
    assert not cert.verdict
    assert cert.report.witnesses == [{"precondition": "Day conditions"}]


def test_certificate_is_deterministic_for_a_seed():
    a = certify_ccc(fch_family(DISCRETE2, 2), spaces_over(DISCRETE2, 2), seed=3, sample_limit=5)
    b = certify_ccc(fch_family(DISCRETE2, 2), spaces_over(DISCRETE2, 2), seed=3, sample_limit=5)
    assert a.report.to_json() == b.report.to_json()
    assert a.report.seed == 3
