"""Stack detection, coloring, nine-set selection, and the 14/9 sequence."""

import random

import pytest

from fixtures import level1_bottom, level1_top
from treeflip.conflict import build_conflict_graph, max_acyclic_exact, topological_order
from treeflip.flip_engine import FlipKind, bfs_distance, random_tree, validate_sequence
from treeflip.pairing import pair_trees, near_near_gaps
from treeflip.stacked import (
    NotStackedWitness,
    StackPartition,
    best_stacked_acyclic,
    is_stacked,
    nine_partition,
    random_stacked_tree,
    stack_graph,
    stacked_report,
    stacked_sequence,
    stacks_wrt,
)
from treeflip.tree_core import ConvexTree, covers_edge, path_tree, validate_tree

# three towers against a bottom whose near edges cross all three mutually;
# the stack graph is a triangle, forcing all three colors
THREE_STACK_TOP = [
    (1, 4), (2, 4), (3, 4), (4, 8), (5, 7), (5, 8), (6, 7),
    (8, 9), (8, 10), (8, 11), (8, 12),
]
THREE_STACK_BOTTOM = [
    (1, 11), (1, 12), (2, 7), (3, 4), (3, 7), (5, 6), (5, 7),
    (7, 9), (7, 10), (7, 11), (8, 9),
]


def three_stack_pair():
    return pair_trees(
        ConvexTree.from_edges(12, THREE_STACK_TOP),
        ConvexTree.from_edges(12, THREE_STACK_BOTTOM),
    )


def level1_pair():
    return pair_trees(level1_top(), level1_bottom())


# not stacked w.r.t.: (1,8) covers the near edges (2,4) and (5,7)
WITNESS_TOP = [(1, 2), (1, 8), (2, 4), (3, 4), (4, 5), (5, 6), (5, 7)]
WITNESS_BOTTOM = [(1, 2), (1, 3), (3, 4), (4, 5), (4, 7), (4, 8), (5, 6)]


class TestIsStacked:
    def test_path_tree(self):
        ok, wit = is_stacked(path_tree(7))
        assert ok and wit is None

    def test_star_tree(self):
        from treeflip.tree_core import star_tree

        ok, _ = is_stacked(star_tree(6))
        assert ok  # star edges form one nested chain

    def test_forbidden_triple(self):
        t = ConvexTree.from_edges(6, [(1, 6), (2, 3), (4, 5), (2, 4), (5, 6)])
        ok, wit = is_stacked(t)
        assert not ok
        assert wit == NotStackedWitness((1, 6), (2, 3), (4, 5))

    @pytest.mark.parametrize("seed", range(25))
    def test_generator_always_stacked(self, seed):
        t = random_stacked_tree(4 + seed % 9, random.Random(seed))
        assert validate_tree(t) is None
        ok, wit = is_stacked(t)
        assert ok, wit


class TestStacksWrt:
    def test_empty_near_near(self):
        p = pair_trees(path_tree(6), path_tree(6))
        sp = stacks_wrt(p)
        assert isinstance(sp, StackPartition)
        assert len(sp) == 0

    def test_level1_three_stacks(self):
        sp = stacks_wrt(level1_pair())
        assert isinstance(sp, StackPartition)
        assert [list(s) for s in sp.stacks] == [
            [(1, 5), (2, 5), (2, 4)],
            [(5, 9), (6, 9), (6, 8)],
            [(9, 11)],
        ]

    def test_chain_properties(self):
        sp = stacks_wrt(three_stack_pair())
        assert isinstance(sp, StackPartition)
        for si, s in enumerate(sp.stacks):
            for a, b in zip(s, s[1:]):
                assert covers_edge(a, b)
            for sj, other in enumerate(sp.stacks):
                if si == sj:
                    continue
                for e in s:
                    for f in other:
                        assert not covers_edge(e, f)

    def test_witness_pair(self):
        p = pair_trees(
            ConvexTree.from_edges(8, WITNESS_TOP), ConvexTree.from_edges(8, WITNESS_BOTTOM)
        )
        assert near_near_gaps(p) == [2, 6, 7]
        wit = stacks_wrt(p)
        assert wit == NotStackedWitness((1, 8), (2, 4), (5, 7))

    @pytest.mark.parametrize("seed", range(20))
    def test_stacked_top_always_partitions(self, seed):
        rng = random.Random(400 + seed)
        n = 5 + seed % 8
        p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
        assert isinstance(stacks_wrt(p), StackPartition)


class TestStackGraph:
    def test_level1_triangle(self):
        p = level1_pair()
        col = stack_graph(p, stacks_wrt(p))
        assert col.graph_edges == ((0, 1), (0, 2), (1, 2))
        assert col.color == {0: 3, 1: 2, 2: 1}

    def test_three_stack_triangle(self):
        p = three_stack_pair()
        sp = stacks_wrt(p)
        assert [list(s) for s in sp.stacks] == [
            [(1, 4), (2, 4)], [(5, 8)], [(8, 12), (8, 11), (8, 10)],
        ]
        col = stack_graph(p, sp)
        assert col.graph_edges == ((0, 1), (0, 2), (1, 2))
        assert len(col.colors_used()) == 3

    def test_single_stack_single_color(self):
        # star against star: one nested chain of above pairs
        from treeflip.tree_core import star_tree

        p = pair_trees(star_tree(7), ConvexTree.from_edges(7, [(1, 2)] + [(2, j) for j in range(3, 8)]))
        sp = stacks_wrt(p)
        assert len(sp) == 1
        col = stack_graph(p, sp)
        assert col.graph_edges == ()
        assert col.colors_used() == {1}

    def test_proper_coloring_random(self):
        for seed in range(30):
            rng = random.Random(800 + seed)
            n = 6 + seed % 8
            p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
            sp = stacks_wrt(p)
            col = stack_graph(p, sp)
            for i, j in col.graph_edges:
                assert col.color[i] != col.color[j]


class TestNinePartition:
    def test_level1_sets(self):
        p = level1_pair()
        col = stack_graph(p, stacks_wrt(p))
        np_ = nine_partition(p, col)
        assert np_.above == {1: (), 2: (5,), 3: (1,)}
        nonempty = {k: v for k, v in np_.below_cross.items() if v}
        assert nonempty == {
            (1, 3): (10,), (2, 1): (8,), (2, 3): (7,), (3, 1): (3,), (3, 2): (4,),
        }

    def test_partition_covers_all_near_near(self):
        p = three_stack_pair()
        col = stack_graph(p, stacks_wrt(p))
        np_ = nine_partition(p, col)
        assert np_.all_gaps() == near_near_gaps(p)

    def test_all_above_pair(self):
        # two stars: every near-near pair shares the far endpoint, top longer
        from treeflip.tree_core import star_tree

        p = pair_trees(star_tree(7), ConvexTree.from_edges(7, [(1, 2)] + [(2, j) for j in range(3, 8)]))
        col = stack_graph(p, stacks_wrt(p))
        np_ = nine_partition(p, col)
        assert sum(len(v) for v in np_.above.values()) == len(near_near_gaps(p))
        assert all(not v for v in np_.below_cross.values())

    def test_single_stack_smallest_color_rule(self):
        # swapped stars: below pairs with nothing to cross go to B_{1,2}
        from treeflip.tree_core import star_tree

        p = pair_trees(ConvexTree.from_edges(7, [(1, 2)] + [(2, j) for j in range(3, 8)]), star_tree(7))
        col = stack_graph(p, stacks_wrt(p))
        np_ = nine_partition(p, col)
        assert np_.below_cross[(1, 2)] != ()
        assert all(v == () for k, v in np_.below_cross.items() if k != (1, 2))

    @pytest.mark.parametrize("seed", range(25))
    def test_each_gap_in_exactly_four_sets(self, seed):
        rng = random.Random(1300 + seed)
        n = 6 + seed % 8
        p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
        col = stack_graph(p, stacks_wrt(p))
        np_ = nine_partition(p, col)
        cands = np_.candidate_sets()
        assert len(cands) == 9
        for g in near_near_gaps(p):
            assert sum(g in members for members in cands.values()) == 4

    @pytest.mark.parametrize("seed", range(25))
    def test_all_nine_sets_acyclic(self, seed):
        from treeflip.conflict import DirectedCycle

        rng = random.Random(1600 + seed)
        n = 6 + seed % 8
        p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
        h = build_conflict_graph(p)
        col = stack_graph(p, stacks_wrt(p))
        np_ = nine_partition(p, col)
        for members in np_.candidate_sets().values():
            assert not isinstance(topological_order(h, set(members)), DirectedCycle)


class TestBestStackedAcyclic:
    def test_level1_matches_exact(self):
        p = level1_pair()
        col = stack_graph(p, stacks_wrt(p))
        best = best_stacked_acyclic(p, nine_partition(p, col))
        assert best.members == (1, 7, 8, 10)
        exact = max_acyclic_exact(build_conflict_graph(p))
        assert len(best) == len(exact)

    def test_empty(self):
        p = pair_trees(path_tree(5), path_tree(5))
        col = stack_graph(p, stacks_wrt(p))
        best = best_stacked_acyclic(p, nine_partition(p, col))
        assert best.members == ()

    @pytest.mark.parametrize("seed", range(25))
    def test_four_ninths(self, seed):
        rng = random.Random(2100 + seed)
        n = 6 + seed % 9
        p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
        col = stack_graph(p, stacks_wrt(p))
        best = best_stacked_acyclic(p, nine_partition(p, col))
        assert 9 * len(best) >= 4 * len(near_near_gaps(p))


class TestStackedSequence:
    def test_identical_trees_empty(self):
        t = random_stacked_tree(9, random.Random(5))
        seq = stacked_sequence(pair_trees(t, t))
        assert len(seq) == 0

    def test_level1(self):
        p = level1_pair()
        seq = stacked_sequence(p)
        assert len(seq) == 10
        assert len(seq) <= 14 * (p.n - 1) / 9
        assert validate_sequence(seq, p.bottom) is None

    def test_three_stack_fixture(self):
        p = three_stack_pair()
        seq = stacked_sequence(p)
        assert validate_sequence(seq, p.bottom) is None
        assert len(seq) <= 14 * (p.n - 1) / 9

    def test_rejects_unstacked(self):
        p = pair_trees(
            ConvexTree.from_edges(8, WITNESS_TOP), ConvexTree.from_edges(8, WITNESS_BOTTOM)
        )
        with pytest.raises(ValueError, match="not stacked"):
            stacked_sequence(p)

    @pytest.mark.parametrize("seed", range(60))
    def test_random_sweep(self, seed):
        rng = random.Random(3000 + seed)
        n = 5 + seed % 8
        p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
        seq = stacked_sequence(p)
        assert validate_sequence(seq, p.bottom) is None
        assert len(seq) <= 14 * (n - 1) / 9
        best = best_stacked_acyclic(
            p, nine_partition(p, stack_graph(p, stacks_wrt(p)))
        )
        assert len(seq) <= 2 * (n - 1) - len(best)

    @pytest.mark.parametrize("seed", range(12))
    def test_never_below_true_distance(self, seed):
        rng = random.Random(4000 + seed)
        n = 5 + seed % 3
        p = pair_trees(random_stacked_tree(n, rng), random_tree(n, rng))
        seq = stacked_sequence(p)
        d, _ = bfs_distance(p.top, p.bottom, FlipKind.GENERAL)
        assert len(seq) >= d


class TestStackedReport:
    def test_level1(self):
        r = stacked_report(level1_pair())
        assert r.n == 11
        assert r.stack_count == 3
        assert r.colors_used == 3
        assert r.chosen == "H21"
        assert r.chosen_size == 4
        assert r.exact_ac == 4
        assert r.sequence_length == 10
        assert r.within_bound
        # membership happens four times per gap, so sizes sum to 4|V(H)|
        assert sum(r.set_sizes.values()) == 4 * 7

    def test_exact_skipped_over_budget(self):
        p = level1_pair()
        r = stacked_report(p, exact_budget=3)
        assert r.exact_ac is None
