"""Stacked trees: detection, stack graph coloring, and the 14/9 sequence.

A tree is stacked when its edges split into stacks: groups that are totally
ordered by covering, with no covering between different groups.  Relative to
a second tree only the edges of near-near pairs matter, so a tree can be
stacked with respect to a partner without being stacked outright.

Stacks occupy disjoint gap intervals, so the stack graph built from
bottom-edge crossings embeds in a triangulated polygon and admits a proper
3-coloring by peeling low-degree vertices.  The coloring drives a partition
of the near-near pairs into nine sets whose unions give nine certified
acyclic candidate sets; every near-near gap lands in exactly four of them,
so the best one carries at least 4/9 of the conflict graph's vertices and
the three-phase construction stays within 14/9 (n-1) flips.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from treeflip.conflict import (
    AcyclicSet,
    DirectedCycle,
    build_conflict_graph,
    max_acyclic_exact,
    topological_order,
)
from treeflip.flip_engine import FlipSequence, sequence_from_acyclic_set
from treeflip.pairing import GapLabel, TreePair, classify_gap, near_near_gaps
from treeflip.tree_core import ConvexTree, Edge, TripwireError, covers_edge, crosses, edge_length

COLORS = (1, 2, 3)


@dataclass(frozen=True)
class NotStackedWitness:
    cover: Edge
    first: Edge
    second: Edge


def random_stacked_tree(n: int, rng) -> ConvexTree:
    """Random stacked tree: staircase towers over a random interval split."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    k = rng.randint(0, n - 2)
    cuts = sorted(rng.sample(range(2, n), k)) if k else []
    edges = []
    for a, b in zip([1] + cuts, cuts + [n]):
        lo, hi = a, b
        while hi - lo >= 1:
            edges.append((lo, hi))
            if rng.random() < 0.5:
                lo += 1
            else:
                hi -= 1
    return ConvexTree.from_edges(n, edges)


def _disjoint_covered_pair(cover: Edge, candidates: list[Edge]) -> Optional[tuple[Edge, Edge]]:
    covered = [f for f in candidates if f != cover and covers_edge(cover, f)]
    if len(covered) < 2:
        return None
    narrow = min(covered, key=lambda f: (f[1], f[0]))
    for f in sorted(covered):
        if f[0] >= narrow[1]:  # gap intervals cannot overlap
            return narrow, f
    return None


def is_stacked(t: ConvexTree) -> tuple[bool, Optional[NotStackedWitness]]:
    edges = t.edge_list()
    for e in edges:
        hit = _disjoint_covered_pair(e, edges)
        if hit is not None:
            return False, NotStackedWitness(e, hit[0], hit[1])
    return True, None


@dataclass(frozen=True)
class StackPartition:
    # each stack sorted outermost first; stacks ordered by leftmost gap
    stacks: tuple[tuple[Edge, ...], ...]

    def stack_of(self) -> dict[Edge, int]:
        return {e: i for i, s in enumerate(self.stacks) for e in s}

    def __len__(self) -> int:
        return len(self.stacks)


def stacks_wrt(p: TreePair) -> StackPartition | NotStackedWitness:
    """Partition near-near top edges into maximal covering chains."""
    near = sorted({p.pairs[g][0] for g in near_near_gaps(p)})
    parent = list(range(len(near)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, e in enumerate(near):
        for j in range(i + 1, len(near)):
            f = near[j]
            if covers_edge(e, f) or covers_edge(f, e):
                parent[find(i)] = find(j)

    groups: dict[int, list[Edge]] = {}
    for i, e in enumerate(near):
        groups.setdefault(find(i), []).append(e)

    stacks = []
    for members in groups.values():
        chain = sorted(members, key=lambda e: (-edge_length(e), e))
        for a, b in zip(chain, chain[1:]):
            if not covers_edge(a, b):
                witness = _chain_witness(members, a, b)
                return witness
        stacks.append(tuple(chain))
    stacks.sort(key=lambda s: s[0][0])
    return StackPartition(stacks=tuple(stacks))


def _chain_witness(members: list[Edge], a: Edge, b: Edge) -> NotStackedWitness:
    lo, hi = sorted((a, b))
    for h in sorted(members, key=lambda e: -edge_length(e)):
        if covers_edge(h, lo) and covers_edge(h, hi):
            return NotStackedWitness(h, lo, hi)
    raise TripwireError(f"nested component holds incomparable edges {a}, {b} with no common cover")


@dataclass(frozen=True)
class StackColoring:
    partition: StackPartition
    graph_edges: tuple[tuple[int, int], ...]  # stack index pairs, i < j
    color: dict[int, int] = field(compare=False)

    def colors_used(self) -> set[int]:
        return set(self.color.values())


def _cross_stacks(p: TreePair, sp: StackPartition) -> dict[int, int]:
    """For each near-near gap whose bottom edge crosses a foreign stack,
    the index of that stack; foreign crossings must stay in one stack."""
    stack_of = sp.stack_of()
    out: dict[int, int] = {}
    for g in near_near_gaps(p):
        e, ep = p.pairs[g]
        own = stack_of[e]
        hit = {stack_of[f] for f in stack_of if stack_of[f] != own and crosses(f, ep)}
        if len(hit) > 1:
            raise TripwireError(f"bottom edge {ep} of gap {g} crosses stacks {sorted(hit)}")
        if hit:
            out[g] = hit.pop()
    return out


def stack_graph(p: TreePair, sp: StackPartition) -> StackColoring:
    stack_of = sp.stack_of()
    edges: set[tuple[int, int]] = set()
    for g, j in _cross_stacks(p, sp).items():
        i = stack_of[p.pairs[g][0]]
        edges.add((min(i, j), max(i, j)))

    # peel low-degree vertices, then color greedily on the way back
    adj: dict[int, set[int]] = {i: set() for i in range(len(sp))}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    live = dict(adj)
    order: list[int] = []
    while live:
        v = min((u for u in live if len(live[u]) <= 2), default=None)
        if v is None:
            raise TripwireError("stack graph has minimum degree 3; peeling failed")
        for w in live[v]:
            live[w].discard(v)
        del live[v]
        order.append(v)

    color: dict[int, int] = {}
    for v in reversed(order):
        taken = {color[w] for w in adj[v] if w in color}
        free = [c for c in COLORS if c not in taken]
        if not free:
            raise TripwireError(f"no color left for stack {v}")
        color[v] = free[0]
    return StackColoring(partition=sp, graph_edges=tuple(sorted(edges)), color=color)


@dataclass(frozen=True, eq=False)
class NinePartition:
    above: dict[int, tuple[int, ...]]  # color -> gaps
    below_cross: dict[tuple[int, int], tuple[int, ...]]

    def all_gaps(self) -> list[int]:
        out = [g for gs in self.above.values() for g in gs]
        out += [g for gs in self.below_cross.values() for g in gs]
        return sorted(out)

    def candidate_sets(self) -> dict[str, tuple[int, ...]]:
        a, b = self.above, self.below_cross
        out: dict[str, tuple[int, ...]] = {}
        for x, y, z in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
            out[f"H{x}"] = tuple(sorted(a[y] + a[z] + b[(x, y)] + b[(x, z)]))
        for x in COLORS:
            for y in COLORS:
                if x == y:
                    continue
                z = 6 - x - y
                out[f"H{x}{y}"] = tuple(sorted(a[z] + b[(y, z)] + b[(x, y)] + b[(x, z)]))
        return out


def nine_partition(p: TreePair, coloring: StackColoring) -> NinePartition:
    stack_of = coloring.partition.stack_of()
    crossed = _cross_stacks(p, coloring.partition)
    above: dict[int, list[int]] = {c: [] for c in COLORS}
    below_cross: dict[tuple[int, int], list[int]] = {
        (i, j): [] for i in COLORS for j in COLORS if i != j
    }
    for g in near_near_gaps(p):
        e, _ = p.pairs[g]
        i = coloring.color[stack_of[e]]
        if classify_gap(p, g) is GapLabel.ABOVE:
            above[i].append(g)
            continue
        if g in crossed:
            j = coloring.color[crossed[g]]
            if j == i:
                raise TripwireError(f"gap {g} crosses a stack of its own color {i}")
        else:
            j = min(c for c in COLORS if c != i)
        below_cross[(i, j)].append(g)
    return NinePartition(
        above={c: tuple(gs) for c, gs in above.items()},
        below_cross={k: tuple(gs) for k, gs in below_cross.items()},
    )


def best_stacked_acyclic(p: TreePair, np: NinePartition) -> AcyclicSet:
    """Largest of the nine candidate sets, with acyclicity spot-verified."""
    h = build_conflict_graph(p)
    best_name, best_members, best_order = None, None, None
    for name, members in np.candidate_sets().items():
        order = topological_order(h, set(members))
        if isinstance(order, DirectedCycle):
            raise TripwireError(f"candidate {name} contains conflict cycle {order.vertices}")
        if best_members is None or len(members) > len(best_members):
            best_name, best_members, best_order = name, members, order
    if best_members is None:  # no near-near gaps at all
        return AcyclicSet((), ())
    total = len(near_near_gaps(p))
    if 9 * len(best_members) < 4 * total:
        raise TripwireError(f"best set {best_name} smaller than 4/9 of {total}")
    return AcyclicSet(members=tuple(sorted(best_members)), order=tuple(best_order))


def stacked_sequence(p: TreePair) -> FlipSequence:
    sp = stacks_wrt(p)
    if isinstance(sp, NotStackedWitness):
        raise ValueError(
            f"top tree is not stacked with respect to the bottom tree: "
            f"{sp.cover} covers both {sp.first} and {sp.second}"
        )
    coloring = stack_graph(p, sp)
    np = nine_partition(p, coloring)
    best = best_stacked_acyclic(p, np)
    return sequence_from_acyclic_set(p, best)


@dataclass(frozen=True, eq=False)
class StackedReport:
    n: int
    stack_count: int
    colors_used: int
    set_sizes: dict[str, int]
    chosen: str
    chosen_size: int
    exact_ac: Optional[int]
    sequence_length: int
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.sequence_length <= self.bound


def stacked_report(p: TreePair, exact_budget: int = 24) -> StackedReport:
    """Full run plus, when the graph is small, the exact acyclic optimum."""
    sp = stacks_wrt(p)
    if isinstance(sp, NotStackedWitness):
        raise ValueError(
            f"top tree is not stacked with respect to the bottom tree: "
            f"{sp.cover} covers both {sp.first} and {sp.second}"
        )
    coloring = stack_graph(p, sp)
    np = nine_partition(p, coloring)
    sizes = {name: len(members) for name, members in np.candidate_sets().items()}
    best = best_stacked_acyclic(p, np)
    chosen = ""
    for name, members in np.candidate_sets().items():
        if tuple(sorted(members)) == best.members:
            chosen = name
            break
    seq = sequence_from_acyclic_set(p, best)
    h = build_conflict_graph(p)
    exact: Optional[int] = None
    if len(h.vertices) <= exact_budget:
        exact = len(max_acyclic_exact(h))
    return StackedReport(
        n=p.n,
        stack_count=len(sp),
        colors_used=len(coloring.colors_used()),
        set_sizes=sizes,
        chosen=chosen,
        chosen_size=len(best),
        exact_ac=exact,
        sequence_length=len(seq),
        bound=14 * (p.n - 1) / 9,
    )
