import pytest

from simembed.depth2 import (
    DepthExceeded,
    depth2_trees,
    embed_depth2,
    enumerate_depth2_suite,
    plan_depth2,
    verify_conditions,
)
from simembed.model import Instance, PathGraph, RootedTree
from simembed.planarity import check_simultaneous


def inst(parent, order):
    return Instance(RootedTree.from_parent(parent), PathGraph.of(order))


def assert_good(i):
    d = embed_depth2(i)
    assert verify_conditions(i, d).valid
    tr, pr = check_simultaneous(i, d)
    assert tr.planar and pr.planar
    return d


class TestEmbed:
    def test_two_children_path_through_root(self):
        d = assert_good(inst([None, 0, 0], [1, 0, 2]))
        assert d.point(1).x == 1 and d.point(2).x == 2

    def test_star5_root_endpoint(self):
        assert_good(inst([None] + [0] * 5, [0, 1, 2, 3, 4, 5]))

    def test_depth2_zigzag(self):
        # r; children 1,2; grandchildren 3,4 under 1 and 5,6 under 2
        assert_good(inst([None, 0, 0, 1, 1, 2, 2], [3, 1, 5, 0, 4, 2, 6]))

    def test_single_vertex(self):
        d = embed_depth2(inst([None], [0]))
        assert d.point(0).x == 0

    def test_two_vertices(self):
        assert_good(inst([None, 0], [0, 1]))

    def test_u_and_v_in_same_subtree(self):
        # both path neighbours of the root live under child 1
        assert_good(inst([None, 0, 0, 1, 1], [3, 0, 4, 1, 2]))

    def test_depth3_refused(self):
        i = inst([None, 0, 1, 2], [3, 2, 1, 0])
        with pytest.raises(DepthExceeded):
            embed_depth2(i)

    def test_deterministic(self):
        i = inst([None, 0, 0, 1, 2], [3, 1, 0, 2, 4])
        assert embed_depth2(i).pos == embed_depth2(i).pos

    def test_denominators_polynomial(self):
        # slopes have denominator t*(k+1) with t, k < n, so every
        # coordinate denominator is below n^2
        i = inst([None] + [0] * 6, [3, 1, 5, 0, 4, 2, 6])
        d = embed_depth2(i)
        n = 7
        assert all(p.x.denominator <= n * n and p.y.denominator <= n * n
                   for p in d.pos.values())


class TestPlan:
    def test_ranks_are_permutation(self):
        i = inst([None, 0, 0, 1, 1], [3, 1, 0, 2, 4])
        plan = plan_depth2(i)
        assert sorted(plan.ranks.values()) == [1, 2, 3, 4]
        assert plan.ranks[plan.u] == 1
        assert plan.ranks[plan.v] == 4

    def test_u_first_subtree_v_last(self):
        i = inst([None, 0, 0, 1, 2], [3, 1, 0, 2, 4])
        plan = plan_depth2(i)
        assert plan.assignment[plan.u] == 0
        assert plan.assignment[plan.v] == plan.t - 1


class TestTreeEnumeration:
    def test_counts_are_partition_numbers(self):
        # rooted depth-<=2 trees up to isomorphism = partitions of n-1
        assert len(list(depth2_trees(5))) == 5
        assert len(list(depth2_trees(7))) == 11

    def test_all_depth_at_most_two(self):
        for t in depth2_trees(6):
            assert max(t.depths().values()) <= 2


class TestSuite:
    def test_exhaustive_n5(self):
        rep = enumerate_depth2_suite(5)
        assert rep.ok and rep.pairs > 0

    def test_sampled_n9(self):
        rep = enumerate_depth2_suite(9, trials=20, seed=3)
        assert rep.ok
