import random

import pytest

from rgproc.dsu import new_partition


class SetPartition:
    """Reference implementation storing explicit vertex sets."""

    def __init__(self, n):
        self.sets = {v: {v} for v in range(1, n + 1)}
        self.where = {v: v for v in range(1, n + 1)}

    def union(self, u, v):
        a, b = self.where[u], self.where[v]
        if a == b:
            return False
        sa, sb = self.sets[a], self.sets[b]
        if len(sa) < len(sb) or (len(sa) == len(sb) and b < a):
            a, b, sa, sb = b, a, sb, sa
        for w in sb:
            self.where[w] = a
        sa |= sb
        del self.sets[b]
        return True

    def size_of(self, v):
        return len(self.sets[self.where[v]])

    def largest(self):
        return max(len(s) for s in self.sets.values())

    def count(self):
        return len(self.sets)


def test_new_partition_basics():
    p = new_partition(1)
    assert p.component_count() == 1 and p.largest_size() == 1
    p = new_partition(5)
    assert p.component_count() == 5 and p.largest_size() == 1
    big = new_partition(10**6)
    assert int(big.csize[1:].sum()) == 10**6  # all singletons: sizes sum to n
    with pytest.raises(ValueError):
        new_partition(0)


def test_find_basics():
    p = new_partition(6)
    assert p.find(3) == 3
    p.union(1, 2)
    assert p.find(1) == p.find(2)
    assert p.find(p.find(5)) == p.find(5)
    with pytest.raises(ValueError):
        p.find(0)
    with pytest.raises(ValueError):
        p.find(7)


def test_union_examples():
    p = new_partition(4)
    out = p.union(1, 2)
    assert out.merged and out.new_size == 2 and p.largest_size() == 2
    out = p.union(2, 3)
    assert out.merged and out.new_size == 3
    out = p.union(1, 3)
    assert not out.merged
    assert out.root_a == out.root_b
    assert p.edge_count == 2  # the no-op did not count


def test_size_queries():
    p = new_partition(6)
    for v in range(1, 7):
        assert p.component_size(v) == 1
    p.union(1, 2)
    p.union(3, 4)
    p.union(1, 3)
    assert p.largest_size() == 4
    assert p.component_count() == 3
    assert p.largest_size() >= p.n / p.component_count()


def test_deterministic_roots():
    # equal sizes: smaller root label wins
    p = new_partition(6)
    out = p.union(5, 4)
    assert out.new_root == 4
    out = p.union(2, 3)
    assert out.new_root == 2
    # size dominates over label
    out = p.union(6, 5)  # {4,5} size 2 vs {6} size 1
    assert out.new_root == 4


def test_members_ring():
    p = new_partition(8)
    p.union(2, 7)
    p.union(7, 5)
    assert sorted(p.members(5)) == [2, 5, 7]
    assert p.members(1) == [1]


def test_against_reference_random_sequences():
    rnd = random.Random(11)
    for n in (2, 3, 17, 120, 500):
        p = new_partition(n)
        ref = SetPartition(n)
        last_largest = 1
        for _ in range(3 * n):
            u = rnd.randint(1, n)
            v = rnd.randint(1, n)
            out = p.union(u, v)
            merged = ref.union(u, v)
            assert out.merged == merged
            if merged:
                assert out.new_size == ref.size_of(u)
            assert p.component_size(u) == ref.size_of(u)
            assert p.largest_size() == ref.largest()
            assert p.component_count() == ref.count()
            assert p.largest_size() >= last_largest
            last_largest = p.largest_size()
        # full-scan invariants: sizes sum to n, largest is max, rings match sets
        total = 0
        seen_roots = set()
        for v in range(1, n + 1):
            r = p.find(v)
            if r not in seen_roots:
                seen_roots.add(r)
                total += p.component_size(r)
                assert sorted(p.members(r)) == sorted(ref.sets[ref.where[r]])
        assert total == n
        assert p.largest_size() == max(p.component_size(v) for v in range(1, n + 1))


def test_merge_outcome_fields():
    p = new_partition(5)
    p.union(1, 2)
    out = p.union(3, 1)
    assert out.merged
    assert {out.root_a, out.root_b} == {3, 1}
    assert {out.size_a, out.size_b} == {1, 2}
    assert out.new_size == out.size_a + out.size_b
    assert out.new_root == 1
