"""Blowups: inflating near-near gaps with extra points.

Blowing up a gap g by beta inserts beta new points inside g and connects
each of them, in either tree, to the endpoint of that tree's gap edge that
is not adjacent to g.  The single near-near pair at g becomes beta+1
near-near sub-pairs, one per sub-gap, each of the same label as g and with
the same conflicts toward gaps of other labels.  Blowups scale the price of
a conflict: any flip sequence must now pay per copy, which is what turns
acyclic-set size into a flip-distance threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from treeflip.conflict import build_conflict_graph, max_acyclic_exact
from treeflip.pairing import (
    GapLabel,
    TreePair,
    classify_gap,
    near_anchor,
    near_near_gaps,
    pair_trees,
)
from treeflip.tree_core import ConvexTree, Edge, TripwireError


def far_endpoint(e: Edge, g: int) -> int:
    """Endpoint of a near edge not shared with its gap."""
    anchor = near_anchor(e, g)
    return e[1] if e[0] == anchor else e[0]


@dataclass(frozen=True)
class BlowupResult:
    base: TreePair
    spec: dict[int, int]
    pair: TreePair
    point_map: dict[int, int]  # base point -> blown point
    groups: dict[int, list[int]]  # base near-near gap -> its sub-gaps, ascending

    @property
    def provenance(self) -> dict[int, int]:
        return {sub: g for g, subs in self.groups.items() for sub in subs}


def normalize_spec(p: TreePair, spec: dict[int, int]) -> dict[int, int]:
    nn = set(near_near_gaps(p))
    for g, beta in spec.items():
        if g not in nn:
            raise ValueError(f"gap {g} is not a near-near gap; cannot blow up")
        if beta < 0:
            raise ValueError(f"negative beta {beta} for gap {g}")
    return {g: spec.get(g, 0) for g in sorted(nn)}


def uniform_spec(p: TreePair, beta: int) -> dict[int, int]:
    return {g: beta for g in near_near_gaps(p)}


def blow_up(p: TreePair, spec: dict[int, int]) -> BlowupResult:
    spec = normalize_spec(p, spec)
    n = p.n
    # prefix shift: points after gap g move right by beta(g)
    shift = 0
    point_map: dict[int, int] = {}
    inserted: dict[int, list[int]] = {}
    for v in range(1, n + 1):
        point_map[v] = v + shift
        beta = spec.get(v, 0)  # gap v sits just right of point v
        if v < n and beta:
            inserted[v] = [point_map[v] + 1 + t for t in range(beta)]
            shift += beta
    new_n = n + shift

    def lifted(t: ConvexTree, side: int) -> ConvexTree:
        edges = [(point_map[i], point_map[j]) for (i, j) in t.edges]
        for g, points in inserted.items():
            e = p.pairs[g][side]
            hub = point_map[far_endpoint(e, g)]
            edges.extend((q, hub) for q in points)
        return ConvexTree.from_edges(new_n, edges)

    blown = pair_trees(lifted(p.top, 0), lifted(p.bottom, 1))
    groups = {
        g: list(range(point_map[g], point_map[g] + spec.get(g, 0) + 1))
        for g in spec
    }
    for g, subs in groups.items():
        want = classify_gap(p, g)
        for sub in subs:
            got = classify_gap(blown, sub)
            if got is not want:
                raise TripwireError(
                    f"sub-gap {sub} of gap {g} classified {got.value}, expected {want.value}"
                )
    lifted_nn = {sub for subs in groups.values() for sub in subs}
    if lifted_nn != set(near_near_gaps(blown)):
        raise TripwireError("blowup created or destroyed near-near gaps outside groups")
    return BlowupResult(base=p, spec=spec, pair=blown, point_map=point_map, groups=groups)


@dataclass(frozen=True)
class ConflictMismatch:
    source: int  # base gap
    target: int  # base gap
    copy_source: int
    copy_target: int
    expected_arc: bool


def verify_blowup_conflicts(b: BlowupResult) -> Optional[ConflictMismatch]:
    """Check that conflicts between gaps of different labels lift copy-wise."""
    hb = build_conflict_graph(b.base)
    hB = build_conflict_graph(b.pair)
    for g in hb.vertices:
        for h in hb.vertices:
            if g == h or hb.labels[g] is hb.labels[h]:
                continue
            expected = (g, h) in hb.arcs
            for gc in b.groups[g]:
                for hc in b.groups[h]:
                    if ((gc, hc) in hB.arcs) != expected:
                        return ConflictMismatch(g, h, gc, hc, expected)
    return None


@dataclass(frozen=True)
class LowerBoundReport:
    n: int
    conflict_vertices: int
    ac: int
    beta: int
    bound: int  # (beta - 2n)(2|V(H)| - ac)
    vacuous: bool
    bfs_distance: Optional[int]
    ok: bool


def lower_bound_check(
    p: TreePair, beta: int, state_budget: int = 5_000_000
) -> LowerBoundReport:
    """Blow up uniformly and compare true distance against the scaling bound.

    The bound (beta - 2n)(2|V(H)| - ac(H)) only bites once beta exceeds 2n;
    below that it is reported as vacuous and BFS is skipped.
    """
    from treeflip.flip_engine import FlipKind, bfs_distance  # late: avoids cycle

    h = build_conflict_graph(p)
    ac = len(max_acyclic_exact(h))
    bound = (beta - 2 * p.n) * (2 * len(h.vertices) - ac)
    if bound <= 0:
        return LowerBoundReport(
            n=p.n, conflict_vertices=len(h.vertices), ac=ac, beta=beta,
            bound=bound, vacuous=True, bfs_distance=None, ok=True,
        )
    blown = blow_up(p, uniform_spec(p, beta))
    dist, _ = bfs_distance(
        blown.pair.top, blown.pair.bottom, FlipKind.GENERAL, budget=state_budget
    )
    return LowerBoundReport(
        n=p.n, conflict_vertices=len(h.vertices), ac=ac, beta=beta,
        bound=bound, vacuous=False, bfs_distance=dist, ok=dist >= bound,
    )


def crossing_pair_base() -> TreePair:
    """Smallest pair whose only near-near gap is a single crossing pair."""
    top = ConvexTree.from_edges(4, [(1, 2), (2, 4), (3, 4)])
    bottom = ConvexTree.from_edges(4, [(1, 2), (1, 3), (3, 4)])
    return pair_trees(top, bottom)


LABELS_BLOWABLE = (GapLabel.ABOVE, GapLabel.BELOW, GapLabel.CROSSING)
