"""Directed conflict graph on near-near gaps, and maximum acyclic sets.

Vertices are the gaps whose top/bottom edges are distinct and both near.
For two such gaps g_i != g_j there is an arc g_i -> g_j when flipping the
pair at g_i first would obstruct the pair at g_j, which happens in exactly
three situations (e_i is the top edge at g_i, e'_j the bottom edge at g_j):

  type 1: e_i crosses e'_j
  type 2: e'_j covers e_i and e_i covers g_j
  type 3: e_i covers e'_j and e'_j covers g_i

ac(H) is the size of a largest vertex subset inducing no directed cycle.
The exact solver is a branch-and-bound over feedback vertices: branch on a
shortest directed cycle, bound by a greedy packing of vertex-disjoint
cycles, decompose by strongly connected components, and finish with a
lexicographic sweep so ties between maximum sets resolve deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from treeflip.pairing import GapLabel, TreePair, classify_gap, near_near_gaps
from treeflip.tree_core import TripwireError, covers_edge, covers_gap, crosses

Arc = tuple[int, int]

CONFLICT_CLASS_LABELS = (GapLabel.ABOVE, GapLabel.BELOW, GapLabel.CROSSING)


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[int, ...]
    arcs: dict[Arc, frozenset[int]]  # (src, dst) -> conflict types
    labels: dict[int, GapLabel] = field(default_factory=dict)

    def __post_init__(self):
        vs = set(self.vertices)
        for (a, b) in self.arcs:
            if a == b:
                raise ValueError(f"self-loop on {a}")
            if a not in vs or b not in vs:
                raise ValueError(f"arc ({a}, {b}) leaves vertex set")

    def successors(self) -> dict[int, list[int]]:
        succ: dict[int, list[int]] = {v: [] for v in self.vertices}
        for (a, b) in sorted(self.arcs):
            succ[a].append(b)
        return succ

    def double_arcs(self) -> set[frozenset[int]]:
        return {
            frozenset((a, b))
            for (a, b) in self.arcs
            if (b, a) in self.arcs
        }

    def class_members(self, label: GapLabel) -> list[int]:
        return [v for v in self.vertices if self.labels.get(v) is label]


@dataclass(frozen=True)
class AcyclicSet:
    members: tuple[int, ...]
    order: tuple[int, ...]  # topological order of the induced subgraph

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class DirectedCycle:
    vertices: tuple[int, ...]  # v0 -> v1 -> ... -> v0


class ExactBudgetExceeded(ValueError):
    pass


def build_conflict_graph(p: TreePair) -> ConflictGraph:
    gaps = near_near_gaps(p)
    labels = {g: classify_gap(p, g) for g in gaps}
    arcs: dict[Arc, frozenset[int]] = {}
    for gi in gaps:
        ei = p.pairs[gi][0]
        for gj in gaps:
            if gi == gj:
                continue
            epj = p.pairs[gj][1]
            types = set()
            if crosses(ei, epj):
                types.add(1)
            if covers_edge(epj, ei) and covers_gap(ei, gj):
                types.add(2)
            if covers_edge(ei, epj) and covers_gap(epj, gi):
                types.add(3)
            if types:
                arcs[(gi, gj)] = frozenset(types)
    return ConflictGraph(vertices=tuple(gaps), arcs=arcs, labels=labels)


def topological_order(
    h: ConflictGraph, s: Optional[set[int]] = None
) -> Union[list[int], DirectedCycle]:
    """Kahn's algorithm on the subgraph induced by s, smallest vertex first.

    Returns the order, or a shortest directed cycle of the induced subgraph.
    """
    active = set(h.vertices) if s is None else set(s)
    if not active <= set(h.vertices):
        raise ValueError(f"subset {sorted(active - set(h.vertices))} outside vertex set")
    succ = {v: [w for w in ws if w in active] for v, ws in h.successors().items() if v in active}
    indeg = {v: 0 for v in active}
    for v, ws in succ.items():
        for w in ws:
            indeg[w] += 1
    import heapq

    ready = [v for v in active if indeg[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) == len(active):
        return order
    remaining = active - set(order)
    cycle = _shortest_cycle(succ, remaining)
    assert cycle is not None  # Kahn leftovers always contain a cycle
    return DirectedCycle(vertices=tuple(cycle))


def _shortest_cycle(succ: dict[int, list[int]], active: set[int]) -> Optional[list[int]]:
    """Vertex list of a shortest directed cycle inside active, or None."""
    best: Optional[list[int]] = None
    for start in sorted(active):
        # BFS for the shortest path back to start
        parent = {start: None}
        queue = [start]
        found = None
        while queue and found is None:
            nxt = []
            for v in queue:
                for w in succ.get(v, ()):
                    if w not in active:
                        continue
                    if w == start:
                        found = v
                        break
                    if w not in parent:
                        parent[w] = v
                        nxt.append(w)
                if found is not None:
                    break
            queue = nxt
        if found is None:
            continue
        path = [found]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()  # start .. found
        if best is None or len(path) < len(best):
            best = path
            if len(best) == 2:
                break
    return best


def _cycle_packing_count(succ: dict[int, list[int]], active: set[int]) -> int:
    """Greedy count of vertex-disjoint directed cycles (lower bound on deletions)."""
    pool = set(active)
    count = 0
    while True:
        cycle = _shortest_cycle(succ, pool)
        if cycle is None:
            return count
        pool -= set(cycle)
        count += 1


def _sccs(vertices: tuple[int, ...], succ: dict[int, list[int]]) -> list[list[int]]:
    """Kosaraju; components returned with vertices sorted."""
    pred: dict[int, list[int]] = {v: [] for v in vertices}
    for v, ws in succ.items():
        for w in ws:
            pred[w].append(v)
    seen: set[int] = set()
    finish: list[int] = []
    for root in vertices:
        if root in seen:
            continue
        stack = [(root, iter(succ[root]))]
        seen.add(root)
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
            if not advanced:
                finish.append(v)
                stack.pop()
    assigned: set[int] = set()
    comps: list[list[int]] = []
    for root in reversed(finish):
        if root in assigned:
            continue
        comp = [root]
        assigned.add(root)
        stack = [root]
        while stack:
            v = stack.pop()
            for w in pred[v]:
                if w not in assigned:
                    assigned.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _ac_size(succ: dict[int, list[int]], active: frozenset[int], memo: dict) -> int:
    cycle = _shortest_cycle(succ, set(active))
    if cycle is None:
        return len(active)
    hit = memo.get(active)
    if hit is not None:
        return hit
    bound = len(active) - _cycle_packing_count(succ, set(active))
    best = 0
    for v in sorted(cycle):
        if bound <= best:
            break
        child = _ac_size(succ, active - {v}, memo)
        if child > best:
            best = child
    memo[active] = best
    return best


def _feasible(
    succ: dict[int, list[int]],
    active: frozenset[int],
    forced: frozenset[int],
    target: int,
    memo: dict,
) -> bool:
    """Does active contain an acyclic subset of size target including forced?"""
    if len(active) < target:
        return False
    cycle = _shortest_cycle(succ, set(active))
    if cycle is None:
        return True  # active itself is acyclic and contains forced
    key = (active, forced)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if len(active) - _cycle_packing_count(succ, set(active)) < target:
        memo[key] = False
        return False
    out = False
    for v in cycle:
        if v in forced:
            continue
        if _feasible(succ, active - {v}, forced, target, memo):
            out = True
            break
    memo[key] = out
    return out


def max_acyclic_exact(h: ConflictGraph, budget: int = 40) -> AcyclicSet:
    """Maximum acyclic set, lexicographically smallest members on ties.

    Strongly connected components are solved independently; sizes add and
    the per-component lexicographic minima union to the global one because
    no directed cycle crosses components.
    """
    if len(h.vertices) > budget:
        raise ExactBudgetExceeded(
            f"{len(h.vertices)} vertices: too large for exact (budget {budget})"
        )
    succ = h.successors()
    members: list[int] = []
    for comp in _sccs(h.vertices, succ):
        comp_set = frozenset(comp)
        comp_succ = {v: [w for w in succ[v] if w in comp_set] for v in comp}
        opt = _ac_size(comp_succ, comp_set, {})
        included: list[int] = []
        excluded: set[int] = set()
        fmemo: dict = {}
        for v in comp:
            trial = frozenset(included) | {v}
            if _feasible(comp_succ, comp_set - frozenset(excluded), trial, opt, fmemo):
                included.append(v)
            else:
                excluded.add(v)
        if len(included) != opt:  # pragma: no cover
            raise TripwireError("lexicographic sweep lost the optimum")
        members.extend(included)
    members.sort()
    order = topological_order(h, set(members))
    if isinstance(order, DirectedCycle):  # pragma: no cover
        raise TripwireError("exact solver returned a cyclic set")
    return AcyclicSet(members=tuple(members), order=tuple(order))


def max_acyclic_greedy(h: ConflictGraph) -> AcyclicSet:
    """Best label class, then augment by ascending gap index.

    Each of the three label classes is acyclic for graphs built from tree
    pairs; a cyclic class therefore trips an internal error.
    """
    best: set[int] = set()
    for label in CONFLICT_CLASS_LABELS:
        seed = set(h.class_members(label))
        if not seed:
            continue
        if isinstance(topological_order(h, seed), DirectedCycle):
            raise TripwireError(f"label class {label.value} induces a directed cycle")
        if len(seed) > len(best):
            best = seed
    for v in h.vertices:
        if v in best:
            continue
        if not isinstance(topological_order(h, best | {v}), DirectedCycle):
            best.add(v)
    order = topological_order(h, best)
    assert not isinstance(order, DirectedCycle)
    return AcyclicSet(members=tuple(sorted(best)), order=tuple(order))


def check_abc_acyclic(p: TreePair) -> Optional[tuple[GapLabel, DirectedCycle]]:
    """Verify each of the Above/Below/Crossing classes induces no cycle."""
    h = build_conflict_graph(p)
    for label in CONFLICT_CLASS_LABELS:
        got = topological_order(h, set(h.class_members(label)))
        if isinstance(got, DirectedCycle):
            return (label, got)
    return None
