import random

import pytest

from hittingset.settrie import SetTrie


def naive_has_subset(stored, s):
    return any(set(a) <= set(s) for a in stored)


def naive_has_superset(stored, s):
    return any(set(a) >= set(s) for a in stored)


def test_add_counts_and_idempotence():
    t = SetTrie()
    t.add([1, 2])
    assert len(t) == 1
    nodes = t.num_nodes
    t.add([1, 2])
    assert len(t) == 1 and t.num_nodes == nodes


def test_add_retrievable():
    t = SetTrie([[1], [1, 2], [2, 3]])
    assert [1] in t and [1, 2] in t and [2, 3] in t
    assert [2] not in t and [1, 3] not in t


def test_add_rejects_unsorted():
    with pytest.raises(ValueError):
        SetTrie().add([2, 1])
    with pytest.raises(ValueError):
        SetTrie().add([1, 1])


def test_has_subset_examples():
    assert SetTrie([[1, 2]]).has_subset([1, 2, 3])
    assert not SetTrie([[1, 4]]).has_subset([1, 2, 3])
    assert not SetTrie().has_subset([1])


def test_has_superset_examples():
    assert SetTrie([[1, 2, 3]]).has_superset([1, 3])
    assert not SetTrie([[1, 2, 3]]).has_superset([1, 4])
    assert not SetTrie([[2, 3]]).has_superset([1])


def test_empty_set_conventions():
    empty = SetTrie()
    assert not empty.has_superset([])
    assert not empty.has_subset([])
    t = SetTrie([[4]])
    assert t.has_superset([])
    assert not t.has_subset([])
    with_empty = SetTrie([[]])
    assert with_empty.has_subset([7, 8])
    assert with_empty.has_superset([])
    assert not with_empty.has_superset([7])


@pytest.mark.parametrize("seed", range(5))
def test_random_against_naive(seed):
    rng = random.Random(seed)
    universe = rng.randint(3, 15)

    def rand_set():
        return sorted(rng.sample(range(universe), rng.randint(0, min(6, universe))))

    stored = [rand_set() for _ in range(200)]
    stored = [s for s in stored if s]  # the solver never stores empty sets
    t = SetTrie(stored)
    for _ in range(200):
        q = rand_set()
        assert t.has_subset(q) == naive_has_subset(stored, q)
        assert t.has_superset(q) == naive_has_superset(stored, q)
