import pytest

from fibkan.corpus import bases, corpus_by_base, generate_corpus, spaces_over, topologies
from fibkan.oracles import topologies_bruteforce
from fibkan.spaces import canonical_code, is_continuous


@pytest.mark.parametrize("n", [1, 2, 3])
def test_topology_counts_match_bruteforce(n):
    assert len(topologies(n)) == topologies_bruteforce(n)


def test_topology_counts():
    assert [len(topologies(n)) for n in (1, 2, 3)] == [1, 3, 9]


def test_four_point_topologies_match_bruteforce():
    assert len(topologies(4)) == topologies_bruteforce(4)


def test_bounds_must_be_positive():
    with pytest.raises(ValueError):
        generate_corpus(0, 1)
    with pytest.raises(ValueError):
        generate_corpus(2, 0)


def test_corpus_is_deterministic_and_duplicate_free():
    a, b = generate_corpus(3, 2), generate_corpus(3, 2)
    assert a == b
    codes = [(x.base, canonical_code(x)) for x in a]
    assert len(set(codes)) == len(codes)


def test_corpus_projections_are_continuous():
    for x in generate_corpus(3, 2):
        assert is_continuous(x.total, x.base, x.proj)


def test_corpus_groups_by_base():
    grouped = corpus_by_base(3, 2)
    assert [b for b, _ in grouped] == list(bases(2))
    assert sum(len(s) for _, s in grouped) == len(generate_corpus(3, 2))


def test_spaces_over_point_are_topologies():
    pt = bases(1)[0]
    assert len(spaces_over(pt, 3)) == sum(len(topologies(n)) for n in (1, 2, 3))
