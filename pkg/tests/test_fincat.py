from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from fibkan.catalog import chain, diamond, f2_vect, poset_category, space_category, subset_lattice
from fibkan.fincat import (
    CategoryError, canonical_diagram, category_from_table, colimit, comma_category, constant_functor, diagram_of,
    discrete_shape, factorizations, all_cones, functor_from_arrows, identity_functor, inclusion, is_codense,
    is_dense, is_limit_cone, limit, parallel_pair_shape, relabel_category, relabel_functor, slice_over,
    terminal_category, validate_category, validate_functor,
)
from fibkan.spaces import discrete, over_point

V = poset_category(["a", "b", "t"], lambda x, y: x == y or y == "t", "V")
POSETS = [chain(2), chain(3), subset_lattice(2), diamond(), V]


def finite_sets(k):
    """Discrete spaces over a point: all functions are maps, so this is a category of sets."""
    return space_category([over_point(discrete(tuple(range(n)))) for n in range(k + 1)], "sets")


def test_terminal_category_is_valid():
    assert validate_category(terminal_category()).verdict


def test_two_chain_is_valid():
    c = chain(2)
    assert len(c.morphisms) == 3
    assert validate_category(c).verdict


def test_wrong_codomain_is_reported():
    c = category_from_table([0, 1], [(0, 0, 0), (1, 1, 1), (2, 0, 1)], {0: 0, 1: 1},
                            [(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 0)])
    rep = validate_category(c)
    assert not rep.verdict
    assert {"axiom": "composite endpoints", "pair": [1, 2], "composite": 0} in rep.witnesses


def test_generated_categories_are_valid():
    for c in POSETS + [f2_vect(2), finite_sets(2)]:
        assert validate_category(c).verdict, c


# ---------------------------------------------------------------- comma

def linear_maps_f2_to_f2_squared():
    """Functions {0,1} -> {0,1,2,3} that respect xor, by brute force."""
    out = []
    for a in range(4):
        for b in range(4):
            f = {0: a, 1: b}
            if all(f[x ^ y] == f[x] ^ f[y] for x in range(2) for y in range(2)):
                out.append(f)
    return out


def test_comma_of_generator_over_plane():
    c = f2_vect(3)
    f = inclusion(c.full_subcategory([1]), c)
    g = constant_functor(terminal_category(), c, 2)
    com = comma_category(f, g)
    assert len(com.category.objects) == len(linear_maps_f2_to_f2_squared()) == 4


def test_slice_objects_are_morphisms_into_target():
    c = diamond()
    for x in c.objects:
        com = slice_over(identity_functor(c), c, x)
        assert sorted(t[2] for t in com.triples.values()) == sorted(
            m for a in c.objects for m in c.hom(a, x))


def test_comma_of_constant_functors_on_terminal():
    one = terminal_category()
    com = comma_category(constant_functor(one, one, 0), constant_functor(one, one, 0))
    assert len(com.category.objects) == 1 and len(com.category.morphisms) == 1


def test_comma_needs_common_target():
    with pytest.raises(CategoryError):
        comma_category(identity_functor(chain(2)), identity_functor(chain(3)))


@pytest.mark.parametrize("c", POSETS + [f2_vect(1)], ids=lambda c: c.label)
def test_comma_projections_are_functors(c):
    for x in c.objects:
        com = slice_over(identity_functor(c), c, x)
        assert validate_category(com.category).verdict
        assert validate_functor(com.p).verdict and validate_functor(com.q).verdict


# -------------------------------------------------------------- limits

def pair_diagram(c, a, b):
    return diagram_of(functor_from_arrows(discrete_shape(2), c, {0: a, 1: b}, {}))


def test_empty_diagram_limit_is_terminal_object():
    c = chain(3)
    d = diagram_of(functor_from_arrows(discrete_shape(0), c, {}, {}))
    assert limit(d)[0].apex == 2
    assert colimit(d)[0].apex == 0


def test_subset_meet_and_join():
    c = subset_lattice(2)
    ids = {v: k for k, v in c.names.items()}
    d = pair_diagram(c, ids[frozenset({1})], ids[frozenset({2})])
    assert c.names[limit(d)[0].apex] == frozenset()
    assert c.names[colimit(d)[0].apex] == frozenset({1, 2})


def test_equalizer_of_functions():
    c = finite_sets(2)
    maps = {m[2]: k for k, m in c.mor_names.items() if m[0] == 2 and m[1] == 2}
    f, g = (0, 1), (0, 0)
    d = diagram_of(functor_from_arrows(parallel_pair_shape(), c, {0: 2, 1: 2}, {2: maps[f], 3: maps[g]}))
    cone, _ = limit(d)
    agree = [x for x in range(2) if f[x] == g[x]]
    assert c.names[cone.apex].n == len(agree)


def test_f2_canonical_colimit_has_eight_elements():
    c = f2_vect(3)
    d, _, com = canonical_diagram([1], c, 2)
    cone, _ = colimit(d)
    assert cone.apex == 3 and len(c.hom(1, cone.apex)) == 8


@pytest.mark.parametrize("c", POSETS + [f2_vect(1)], ids=lambda c: c.label)
def test_limit_cones_factor_uniquely(c):
    for a in c.objects:
        for b in c.objects:
            d = pair_diagram(c, a, b)
            found = limit(d)
            if found is None:
                continue
            cone, _ = found
            assert is_limit_cone(d, cone).verdict
            for apex in c.objects:
                for legs in all_cones(d, apex):
                    assert len(factorizations(c, apex, cone.apex, cone.legs, legs)) == 1


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_limits_stable_under_relabeling(data):
    c = data.draw(st.sampled_from(POSETS + [f2_vect(1)]))
    objs = list(c.objects)
    mors = list(c.morphisms)
    obj_perm = dict(zip(objs, data.draw(st.permutations(objs))))
    mor_perm = dict(zip(mors, data.draw(st.permutations(mors))))
    r = relabel_category(c, obj_perm, mor_perm)
    a, b = data.draw(st.sampled_from(objs)), data.draw(st.sampled_from(objs))
    f = functor_from_arrows(discrete_shape(2), c, {0: a, 1: b}, {})
    for op in (limit, colimit):
        one = op(diagram_of(f))
        two = op(diagram_of(relabel_functor(f, r, obj_perm, mor_perm)))
        assert (one is None) == (two is None)
        if one is not None:
            assert r.isomorphic(obj_perm[one[0].apex], two[0].apex)


# ------------------------------------------------------------ codensity

def poset_codense(c, w):
    """In a poset, W is codense iff each x is the meet of the W-elements above it."""
    leq = lambda a, b: bool(c.hom(a, b))
    for x in c.objects:
        above = [v for v in w if leq(x, v)]
        lower = [y for y in c.objects if all(leq(y, v) for v in above)]
        meets = [y for y in lower if all(leq(z, y) for z in lower)]
        if meets != [x]:
            return False
    return True


def test_all_objects_are_codense():
    for c in POSETS + [f2_vect(2)]:
        assert is_codense(c.objects, c).verdict


def test_terminal_object_in_two_chain_is_not_codense():
    rep = is_codense([1], chain(2))
    assert not rep.verdict
    assert [w["object"] for w in rep.witnesses] == [0]
    assert poset_codense(chain(2), [1]) is False


@pytest.mark.parametrize("c", POSETS, ids=lambda c: c.label)
def test_codensity_matches_poset_oracle(c):
    for k in range(1, len(c.objects) + 1):
        for w in combinations(c.objects, k):
            assert is_codense(w, c).verdict == poset_codense(c, w), w


def test_generator_is_not_dense_among_f2_spaces():
    rep = is_dense([1], f2_vect(2))
    assert not rep.verdict
    assert any(w["object"] == 2 for w in rep.witnesses)
