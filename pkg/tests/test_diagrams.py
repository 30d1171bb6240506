import pytest
from hypothesis import given, settings, strategies as st

from fibkan.corpus import bases, corpus_by_base
from fibkan.diagrams import (
    SpaceDiagram, colimit_space, fibre_diagram, fibre_law, lifting_suite, limit_space,
)
from fibkan.spaces import (
    FibSpace, TopologyError, bits, discrete, fib_isomorphic, fib_maps, from_nbhds, point_space,
    product_over_B, sierpinski, sum_over_B,
)
from strategies import fib_spaces, small_bases

POINT, INDISCRETE2, SIERPINSKI, DISCRETE2 = bases(2)


@st.composite
def spans(draw, base=None):
    b = base if base is not None else draw(st.sampled_from(small_bases()))
    z, x, y = (draw(fib_spaces(3, base=b)) for _ in range(3))
    fs, gs = fib_maps(z, x), fib_maps(z, y)
    if not fs or not gs:
        return SpaceDiagram((x, y))
    return SpaceDiagram((z, x, y), ((0, 1, draw(st.sampled_from(fs))), (0, 2, draw(st.sampled_from(gs)))))


@st.composite
def cospans(draw, base=None):
    b = base if base is not None else draw(st.sampled_from(small_bases()))
    x, y, z = (draw(fib_spaces(3, base=b)) for _ in range(3))
    fs, gs = fib_maps(x, z), fib_maps(y, z)
    if not fs or not gs:
        return SpaceDiagram((x, y))
    return SpaceDiagram((x, y, z), ((0, 2, draw(st.sampled_from(fs))), (1, 2, draw(st.sampled_from(gs)))))


def test_limit_of_pair_is_fibred_product():
    for base, xs in corpus_by_base(2, 2):
        for x in xs:
            for y in xs:
                apex, _ = limit_space(SpaceDiagram((x, y)))
                assert fib_isomorphic(apex, product_over_B(x, y))


def test_colimit_of_pair_is_fibred_sum():
    for base, xs in corpus_by_base(2, 2):
        for x in xs:
            for y in xs:
                apex, _ = colimit_space(SpaceDiagram((x, y)))
                assert fib_isomorphic(apex, sum_over_B([x, y]))


def test_limit_legs_are_continuous_and_fibrewise():
    x = FibSpace(sierpinski(), DISCRETE2, (0, 0))
    y = FibSpace(discrete((0, 1, 2)), DISCRETE2, (0, 1, 1))
    apex, legs = limit_space(SpaceDiagram((x, y)))
    assert apex.fiber_sizes() == (2, 0)
    for leg, obj in zip(legs, (x, y)):
        assert tuple(leg) in fib_maps(apex, obj)


def test_diagram_arrows_are_validated():
    x, y = FibSpace(sierpinski(), POINT, (0, 0)), FibSpace(discrete((0, 1)), POINT, (0, 0))
    with pytest.raises(TopologyError):
        SpaceDiagram((x, y), ((0, 1, (0, 1)),))
    with pytest.raises(TopologyError):
        SpaceDiagram((FibSpace(point_space(), DISCRETE2, (0,)), FibSpace(point_space(), DISCRETE2, (1,))),
                     ((0, 1, (0,)),))
    with pytest.raises(TopologyError):
        SpaceDiagram((x, FibSpace(point_space(), DISCRETE2, (0,))))


def test_fibre_diagram_restricts_arrows():
    z = FibSpace(point_space(), DISCRETE2, (1,))
    x = FibSpace(discrete((0, 1, 2)), DISCRETE2, (0, 1, 1))
    d = SpaceDiagram((z, x), ((0, 1, (2,)),))
    f0, f1 = fibre_diagram(d, 0), fibre_diagram(d, 1)
    assert [o.n for o in f0.objects] == [0, 1] and f0.arrows == ((0, 1, ()),)
    assert [o.n for o in f1.objects] == [1, 2] and f1.arrows == ((0, 1, (1,)),)


@given(st.one_of(spans(), cospans()))
@settings(max_examples=60, deadline=None)
def test_fibres_of_limits_are_limits_of_fibres(d):
    assert fibre_law(d, "limit") == []


@given(st.sampled_from([POINT, DISCRETE2]).flatmap(lambda b: st.one_of(spans(b), cospans(b))))
@settings(max_examples=60, deadline=None)
def test_fibres_of_colimits_over_t1_bases(d):
    assert fibre_law(d, "colimit") == []


def test_colimit_fibres_can_differ_over_indiscrete_base():
    # Z is one point over 0, glued to the open point x0 of X and to the closed point y0 of a Sierpinski Y.
    # Any open set around x1 contains x0, hence y0, hence y1, so x1 and y1 are not separated over 1.
    z = FibSpace(point_space("z"), INDISCRETE2, (0,))
    x = FibSpace(from_nbhds(("x0", "x1"), [["x0"], ["x0", "x1"]]), INDISCRETE2, (0, 1))
    y = FibSpace(from_nbhds(("y0", "y1"), [["y0", "y1"], ["y1"]]), INDISCRETE2, (0, 1))
    d = SpaceDiagram((z, x, y), ((0, 1, (0,)), (0, 2, (0,))))
    apex, legs = colimit_space(d)
    fibre = apex.total.subspace(apex.fibers[1])
    x1, y1 = legs[1][1], legs[2][1]
    local = {old: new for new, old in enumerate(bits(apex.fibers[1]))}
    assert fibre.nbhd[local[x1]] >> local[y1] & 1
    right, _ = colimit_space(fibre_diagram(d, 1))
    assert all(nb == 1 << i for i, nb in enumerate(right.total.nbhd))
    assert fibre_law(d, "colimit") == [{"base_point": 1, "kind": "colimit"}]


def test_lifting_suite_on_small_corpus():
    rep = lifting_suite(corpus_by_base(2, 2))
    assert rep.verdict
    lim, colim = rep.children
    assert lim.counts["diagrams"] > colim.counts["diagrams"] > 0
