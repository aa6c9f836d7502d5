"""Level-indexed pair family: construction, structure report, acyclic maxima."""

import dataclasses
import itertools
from fractions import Fraction

import pytest

from fixtures import level1_bottom, level1_top
from treeflip.conflict import (
    DirectedCycle,
    ExactBudgetExceeded,
    build_conflict_graph,
    max_acyclic_exact,
    topological_order,
)
from treeflip.lowerbound_family import (
    FamilyInstance,
    build_family,
    expected_doubles,
    family_ac,
    family_conflict_graph,
    family_ratio,
    points_for_level,
    verify_family,
)
from treeflip.pairing import TreePair, pair_trees
from treeflip.tree_core import ConvexTree, TripwireError, make_edge, validate_tree

# level 2, worked out by hand from the insertion rules before running the code
LEVEL2_TOP = [
    (1, 5), (2, 3), (2, 4), (2, 5), (5, 16), (6, 11), (6, 16), (7, 8), (7, 9),
    (7, 10), (7, 11), (11, 15), (12, 13), (12, 14), (12, 15), (16, 17), (16, 18), (16, 19),
]
LEVEL2_BOTTOM = [
    (1, 3), (2, 3), (3, 18), (3, 19), (4, 8), (4, 9), (5, 8), (6, 8), (7, 8),
    (9, 17), (9, 18), (10, 13), (10, 14), (11, 13), (12, 13), (14, 17), (15, 17), (16, 17),
]
LEVEL2_GAPS = {
    (1, 2): 1, (2, 2): 3, (3, 2): 4, (4, 2): 5, (5, 2): 8, (6, 2): 15, (7, 2): 18,
    (1, 1): 6, (2, 1): 9, (3, 1): 10, (4, 1): 11, (5, 1): 13, (6, 1): 14, (7, 1): 17,
}


class TestBuildFamily:
    def test_level1_matches_fixture(self):
        fi = build_family(1)
        assert fi.pair.top.edge_list() == level1_top().edge_list()
        assert fi.pair.bottom.edge_list() == level1_bottom().edge_list()
        assert fi.gap_index == {
            (1, 1): 1, (2, 1): 3, (3, 1): 4, (4, 1): 5, (5, 1): 7, (6, 1): 8, (7, 1): 10,
        }

    def test_level2_pinned(self):
        fi = build_family(2)
        assert fi.n == 19
        assert fi.pair.top.edge_list() == LEVEL2_TOP
        assert fi.pair.bottom.edge_list() == LEVEL2_BOTTOM
        assert fi.gap_index == LEVEL2_GAPS

    @pytest.mark.parametrize("level", range(1, 6))
    def test_point_count(self, level):
        fi = build_family(level)
        assert fi.n == points_for_level(level) == 11 + 8 * (level - 1)
        assert len(fi.pair.top.edge_list()) == fi.n - 1
        assert len(fi.pair.bottom.edge_list()) == fi.n - 1
        assert validate_tree(fi.pair.top) is None
        assert validate_tree(fi.pair.bottom) is None

    def test_deterministic(self):
        assert build_family(3).pair == build_family(3).pair

    def test_rejects_level_zero(self):
        with pytest.raises(ValueError):
            build_family(0)


class TestVerifyFamily:
    @pytest.mark.parametrize("level", range(1, 5))
    def test_promised_structure_holds(self, level):
        r = verify_family(build_family(level))
        assert r.ok
        assert r.missing_doubles == ()
        assert r.unexpected_doubles == ()

    def test_level1_has_no_cross_level_arcs(self):
        r = verify_family(build_family(1))
        assert r.extra_cross_level == ()
        assert r.single_arc_count == 8

    @pytest.mark.parametrize("level", (2, 3, 4))
    def test_unpromised_doubles_link_adjacent_levels_only(self, level):
        # beyond the promised set, the construction happens to carry two
        # more doubles between each consecutive pair of levels
        fi = build_family(level)
        r = verify_family(fi)
        want = set()
        for j in range(1, level):
            want.add(tuple(sorted((fi.gap_index[(4, j + 1)], fi.gap_index[(2, j)]))))
            want.add(tuple(sorted((fi.gap_index[(5, j + 1)], fi.gap_index[(1, j)]))))
        assert set(r.extra_cross_level) == want

    @pytest.mark.parametrize("level,singles", [(2, 30), (3, 60), (4, 98)])
    def test_single_arc_counts(self, level, singles):
        assert verify_family(build_family(level)).single_arc_count == singles

    def test_expected_doubles_count(self):
        fi = build_family(3)
        assert len(expected_doubles(fi)) == 3 * 6 + 3

    def test_invalid_tree_reported(self):
        fi = build_family(1)
        bad = ConvexTree.from_edges(11, [(1, 3), (2, 4)] + [(4, j) for j in range(5, 12)] + [(1, 2)])
        r = verify_family(FamilyInstance(1, TreePair(bad, fi.pair.bottom, {}), fi.gap_index))
        assert not r.ok
        assert r.top_violation is not None


def _valid_single_edge_mutations(tree):
    """Yield (edge, replacement, mutated tree) over all still-valid rewires."""
    n = tree.n
    edges = set(tree.edge_list())
    for e in sorted(edges):
        for cand in [
            (e[0] - 1, e[1]), (e[0] + 1, e[1]), (e[0], e[1] - 1), (e[0], e[1] + 1),
            (e[0], e[0] + 1), (e[1] - 1, e[1]),
        ]:
            a, b = min(cand), max(cand)
            if a < 1 or b > n or a == b or (a, b) in edges:
                continue
            mutated = ConvexTree.from_edges(n, (edges - {e}) | {make_edge(a, b)})
            if validate_tree(mutated) is None:
                yield e, (a, b), mutated
                break


class TestMutationControl:
    def test_top_rewire_flagged(self):
        fi = build_family(2)
        mut = ConvexTree.from_edges(
            19, (set(LEVEL2_TOP) - {(7, 9)}) | {(8, 9)}
        )
        bad = dataclasses.replace(fi, pair=pair_trees(mut, fi.pair.bottom))
        r = verify_family(bad)
        assert not r.ok
        assert not r.near_near_ok

    @pytest.mark.parametrize("side", ("top", "bottom"))
    def test_every_valid_rewire_detected(self, side):
        fi = build_family(2)
        tree = getattr(fi.pair, side)
        other = fi.pair.bottom if side == "top" else fi.pair.top
        tried = 0
        for _, _, mutated in _valid_single_edge_mutations(tree):
            pair = pair_trees(mutated, other) if side == "top" else pair_trees(other, mutated)
            assert not verify_family(dataclasses.replace(fi, pair=pair)).ok
            tried += 1
        assert tried >= 6


class TestFamilyAc:
    @pytest.mark.parametrize("level,want", [(1, (7, 4)), (2, (14, 7)), (3, (21, 10)), (4, (28, 13))])
    def test_closed_forms(self, level, want):
        assert family_ac(build_family(level)) == want

    def test_budget_exceeded(self):
        with pytest.raises(ExactBudgetExceeded, match="too large"):
            family_ac(build_family(6))

    def test_mismatch_is_hard_failure(self):
        fi = build_family(2)
        mut = ConvexTree.from_edges(19, (set(LEVEL2_TOP) - {(7, 9)}) | {(8, 9)})
        bad = dataclasses.replace(fi, pair=pair_trees(mut, fi.pair.bottom))
        with pytest.raises(TripwireError):
            family_ac(bad)


class TestMaxSetStructure:
    def test_level1_unique_quad(self):
        h = family_conflict_graph(build_family(1))
        quads = [
            s for s in itertools.combinations(h.vertices, 4)
            if not isinstance(topological_order(h, set(s)), DirectedCycle)
        ]
        assert quads == [(1, 7, 8, 10)]

    @pytest.mark.parametrize("level", (2, 3))
    def test_exactly_one_level_contributes_four(self, level):
        fi = build_family(level)
        best = max_acyclic_exact(build_conflict_graph(fi.pair))
        rev = {g: key for key, g in fi.gap_index.items()}
        per_level = {}
        for g in best.members:
            i, j = rev[g]
            per_level.setdefault(j, []).append(i)
        fours = [j for j, ids in per_level.items() if len(ids) == 4]
        assert len(fours) == 1
        assert sorted(per_level[fours[0]]) == [1, 5, 6, 7]
        assert all(len(ids) == 3 for j, ids in per_level.items() if j != fours[0])

    def test_two_level_quads_are_cyclic(self):
        fi = build_family(2)
        quad = {fi.gap_index[(i, j)] for i in (1, 5, 6, 7) for j in (1, 2)}
        h = build_conflict_graph(fi.pair)
        assert isinstance(topological_order(h, quad), DirectedCycle)


class TestFamilyRatio:
    def test_values(self):
        assert family_ratio(1) == Fraction(10, 7)
        assert family_ratio(7) == Fraction(76, 49)

    def test_monotone_below_limit(self):
        vals = [family_ratio(level) for level in range(1, 13)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert all(v < Fraction(11, 7) for v in vals)

    def test_rejects_level_zero(self):
        with pytest.raises(ValueError):
            family_ratio(0)
