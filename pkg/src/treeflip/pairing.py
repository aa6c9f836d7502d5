"""Pairing of two trees through their shared gap assignment.

Both trees live on the same spine; the gap-edge bijection of each tree pairs
the two edges assigned to a common gap.  Gaps whose two edges are distinct
and both near are the interesting ones: the top edge e and the bottom edge
e' then either share a gap endpoint (Above when e is longer, Below when e'
is) or sit on opposite gap endpoints, in which case the chords cross
(Crossing).  Everything else is Identical (e = e') or NonNearNear.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from treeflip.tree_core import (
    ConvexTree,
    Edge,
    EdgeClass,
    TripwireError,
    assert_valid_tree,
    crosses,
    edge_length,
    gap_edge_bijection,
)


class GapLabel(Enum):
    ABOVE = "above"
    BELOW = "below"
    CROSSING = "crossing"
    NON_NEAR_NEAR = "non-near-near"
    IDENTICAL = "identical"


@dataclass(frozen=True)
class TreePair:
    top: ConvexTree
    bottom: ConvexTree
    pairs: dict[int, tuple[Edge, Edge]]

    @property
    def n(self) -> int:
        return self.top.n

    def swap(self) -> "TreePair":
        return TreePair(
            top=self.bottom,
            bottom=self.top,
            pairs={g: (ep, e) for g, (e, ep) in self.pairs.items()},
        )


def pair_trees(top: ConvexTree, bottom: ConvexTree) -> TreePair:
    if top.n != bottom.n:
        raise ValueError(f"point counts differ: {top.n} vs {bottom.n}")
    assert_valid_tree(top)
    assert_valid_tree(bottom)
    bt = gap_edge_bijection(top)
    bb = gap_edge_bijection(bottom)
    return TreePair(top=top, bottom=bottom, pairs={g: (bt[g], bb[g]) for g in top.gaps()})


def edge_class_of(t: ConvexTree, e: Edge, g: int) -> EdgeClass:
    """Class of e relative to gap g (e is assumed assigned to g)."""
    shared = len({e[0], e[1]} & {g, g + 1})
    return (EdgeClass.WIDE, EdgeClass.NEAR, EdgeClass.SHORT)[shared]


def near_anchor(e: Edge, g: int) -> int:
    """The single gap endpoint a near edge shares with its gap."""
    shared = {e[0], e[1]} & {g, g + 1}
    if len(shared) != 1:
        raise ValueError(f"edge {e} is not near for gap {g}")
    return shared.pop()


def classify_gap(p: TreePair, g: int) -> GapLabel:
    e, ep = p.pairs[g]
    if e == ep:
        return GapLabel.IDENTICAL
    if edge_class_of(p.top, e, g) is not EdgeClass.NEAR:
        return GapLabel.NON_NEAR_NEAR
    if edge_class_of(p.bottom, ep, g) is not EdgeClass.NEAR:
        return GapLabel.NON_NEAR_NEAR
    adjacent = bool({e[0], e[1]} & {ep[0], ep[1]})
    if not adjacent:
        if not crosses(e, ep):
            raise TripwireError(f"non-adjacent near-near pair at gap {g} fails to cross")
        return GapLabel.CROSSING
    # adjacent near-near distinct edges extend from the same gap endpoint,
    # so their lengths differ
    if edge_length(e) == edge_length(ep):
        raise TripwireError(f"adjacent near-near pair at gap {g} with equal lengths")
    return GapLabel.ABOVE if edge_length(e) > edge_length(ep) else GapLabel.BELOW


def near_near_gaps(p: TreePair) -> list[int]:
    keep = (GapLabel.ABOVE, GapLabel.BELOW, GapLabel.CROSSING)
    return [g for g in sorted(p.pairs) if classify_gap(p, g) in keep]


def gap_table(p: TreePair) -> list[tuple[int, Edge, Edge, GapLabel]]:
    return [(g, *p.pairs[g], classify_gap(p, g)) for g in sorted(p.pairs)]
