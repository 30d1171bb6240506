from itertools import combinations

import pytest

from fibkan.catalog import category_corpus, chain, diamond, f2_vect, poset_category, space_category, subset_lattice
from fibkan.corpus import bases, spaces_over, topologies
from fibkan.fincat import identity_functor, inclusion
from fibkan.kanex import (
    KanError, algebra_objects, certify_strong_hull, check_monad_laws, density_defect, is_idempotent, is_replete,
    left_kan_self, right_kan_self,
)
from fibkan.spaces import FibSpace, FinTopSpace, over_point, point_space

V = poset_category(["a", "b", "t"], lambda x, y: x == y or y == "t", "V")
POSETS = [chain(2), chain(3), subset_lattice(2), diamond(), V]


def incl(c, w):
    return inclusion(c.full_subcategory(w), c)


def leq(c, a, b):
    return bool(c.hom(a, b))


def poset_meet(c, xs):
    lower = [y for y in c.objects if all(leq(c, y, v) for v in xs)]
    top = [y for y in lower if all(leq(c, z, y) for z in lower)]
    return top[0] if top else None


def poset_join(c, xs):
    upper = [y for y in c.objects if all(leq(c, v, y) for v in xs)]
    bottom = [y for y in upper if all(leq(c, y, z) for z in upper)]
    return bottom[0] if bottom else None


def small_spaces():
    """Spaces with at most two points over a point: empty, point, indiscrete, Sierpinski, discrete."""
    empty = over_point(FinTopSpace((), ()))
    return [empty, over_point(point_space())] + [over_point(t) for t in topologies(2)]


# ------------------------------------------------------------- monads

@pytest.mark.parametrize("c", POSETS + [f2_vect(2)], ids=lambda c: c.label)
def test_identity_functor_gives_trivial_monad(c):
    kr, m = right_kan_self(identity_functor(c))
    assert kr.extension.obj_map == {o: o for o in c.objects}
    assert all(c.is_iso(m.unit.components[o]) for o in c.objects)
    assert is_idempotent(m).verdict
    assert algebra_objects(m)[0] == set(c.objects)


def test_identity_functor_gives_trivial_comonad():
    c = f2_vect(2)
    _, com = left_kan_self(identity_functor(c))
    assert com.carrier.obj_map == {o: o for o in c.objects}
    assert all(c.is_iso(com.counit.components[o]) for o in c.objects)


def test_fully_faithful_generator_line():
    c = f2_vect(1)
    kr, m = right_kan_self(incl(c, [1]))
    assert kr.extension.obj_map[1] == 1
    assert c.is_iso(kr.mediating.components[1])
    assert c.is_iso(m.unit.components[1])


@pytest.mark.parametrize("c", POSETS, ids=lambda c: c.label)
def test_codensity_monad_on_posets_is_meet_of_upper_bounds(c):
    for k in range(1, len(c.objects) + 1):
        for w in combinations(c.objects, k):
            expected = {x: poset_meet(c, [v for v in w if leq(c, x, v)]) for x in c.objects}
            if None in expected.values():
                with pytest.raises(KanError):
                    right_kan_self(incl(c, w))
                continue
            kr, m = right_kan_self(incl(c, w))
            assert kr.extension.obj_map == expected


@pytest.mark.parametrize("c", POSETS, ids=lambda c: c.label)
def test_density_comonad_on_posets_is_join_of_lower_bounds(c):
    for k in range(1, len(c.objects) + 1):
        for w in combinations(c.objects, k):
            expected = {x: poset_join(c, [v for v in w if leq(c, v, x)]) for x in c.objects}
            if None in expected.values():
                with pytest.raises(KanError):
                    left_kan_self(incl(c, w))
                continue
            _, com = left_kan_self(incl(c, w))
            assert com.carrier.obj_map == expected


def test_bottom_object_extension_is_constant():
    c = chain(3)
    _, com = left_kan_self(incl(c, [0]))
    assert com.carrier.obj_map == {0: 0, 1: 0, 2: 0}


def test_top_object_extension_drops_to_bottom_below_top():
    # from the top element there are no maps to smaller elements, so their canonical diagram is empty
    c = chain(3)
    _, com = left_kan_self(incl(c, [2]))
    assert com.carrier.obj_map == {0: 0, 1: 0, 2: 2}


def test_codense_inclusion_gives_trivial_monad():
    c = subset_lattice(2)
    w = [o for o in c.objects if c.names[o]]
    kr, m = right_kan_self(incl(c, w))
    assert all(c.is_iso(m.unit.components[o]) for o in c.objects)
    assert kr.extension.obj_map == {o: o for o in c.objects}


def test_non_invertible_unit_excludes_object():
    c = chain(2)
    _, m = right_kan_self(incl(c, [1]))
    assert is_idempotent(m).verdict
    objs, wits = algebra_objects(m)
    assert objs == {1}
    assert all(c.comp(w.structure, m.unit.components[w.obj]) == c.identity[w.obj] for w in wits)


def test_missing_colimit_names_the_object():
    c = f2_vect(2)
    with pytest.raises(KanError) as e:
        left_kan_self(incl(c, [1]))
    assert e.value.obj == 2


# ---------------------------------------------------------- F2 example

def test_f2_density_comonad_has_non_invertible_counit():
    c = f2_vect(3)
    rep = density_defect([1], c, 2)
    assert not rep.verdict
    assert rep.data["L"] == 3
    assert rep.witnesses[0]["component"] == "counit at L(F2^2) = F2^3"


def test_f2_density_comonad_is_not_total():
    with pytest.raises(KanError) as e:
        left_kan_self(incl(f2_vect(3), [1]))
    assert e.value.obj == 3


def test_f2_generator_has_no_strong_hull():
    rep = certify_strong_hull([1], f2_vect(3))
    assert not rep.verdict
    assert rep.witnesses[0]["object"] == 2 and rep.witnesses[0]["L"] == 3


# ------------------------------------------------------- spaces and hulls

def test_sierpinski_density_comonad_is_identity():
    c = space_category(small_spaces())
    _, com = left_kan_self(incl(c, [3]))
    assert is_idempotent(com).verdict
    assert algebra_objects(com)[0] == set(c.objects)


def test_all_objects_hull_is_ambient():
    for c in POSETS + [f2_vect(2), space_category(small_spaces())]:
        rep = certify_strong_hull(list(c.objects), c)
        assert rep.verdict and rep.data["hull"] == sorted(c.objects)


def test_point_hull_is_discrete_spaces_over_point():
    spaces = small_spaces()
    rep = certify_strong_hull([1], space_category(spaces))
    discrete = [i for i, x in enumerate(spaces) if all(nb == 1 << k for k, nb in enumerate(x.total.nbhd))]
    assert rep.verdict and rep.data["hull"] == discrete == [0, 1, 4]


def test_point_fibre_hull_is_fibrewise_discrete_over_two_points():
    base = bases(2)[3]
    spaces = [FibSpace(FinTopSpace((), ()), base, ())] + list(spaces_over(base, 2))
    w = [i for i, x in enumerate(spaces) if x.n == 1]
    rep = certify_strong_hull(w, space_category(spaces))
    discrete = [i for i, x in enumerate(spaces) if all(nb == 1 << k for k, nb in enumerate(x.total.nbhd))]
    assert rep.verdict and rep.data["hull"] == discrete


# ------------------------------------------------------------ properties

CORPUS = category_corpus(8)


@pytest.mark.parametrize("name,c", CORPUS, ids=[n for n, _ in CORPUS])
def test_codensity_laws_and_unit_triangle(name, c):
    for w in [[o] for o in c.objects] + [list(c.objects)]:
        try:
            kr, m = right_kan_self(incl(c, w))
        except KanError:
            continue
        assert check_monad_laws(m).verdict
        assert kr.report.verdict
        # the inclusion is fully faithful, so the counit is invertible
        assert all(c.is_iso(e) for e in kr.mediating.components.values())
        if is_idempotent(m).verdict:
            objs, _ = algebra_objects(m)
            assert set(w) <= objs
            assert is_replete(objs, c)
