"""Flips, flip sequences, BFS distances, and constructive sequence builders.

A flip exchanges one tree edge for another so that the result is again a
non-crossing spanning tree.  Flips are graded: a rotation (removed and added
edge share an endpoint) is also compatible (removed and added edge do not
cross), and every compatible flip is a general flip.

Exact distances come from bidirectional BFS over bit-packed edge sets.  The
constructive builders turn an acyclic set of the conflict graph into an
explicit sequence: park every top edge not backed by the acyclic set on its
gap's hull edge, flip the acyclic set directly in topological order, then
lift the parked edges to their targets.  The rotation variants refine each
phase so that every single step is a rotation, at the price of extra steps
for wide edges and crossing groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, TYPE_CHECKING

from treeflip.conflict import AcyclicSet, DirectedCycle, build_conflict_graph, topological_order
from treeflip.pairing import (
    GapLabel,
    TreePair,
    classify_gap,
    near_anchor,
    pair_trees,
)
from treeflip.tree_core import (
    ConvexTree,
    Edge,
    TripwireError,
    components_without_edge,
    crosses,
    edge_length,
    iter_all_point_pairs,
    make_edge,
)

if TYPE_CHECKING:
    from treeflip.blowup import BlowupResult


class FlipKind(Enum):
    GENERAL = "general"
    COMPATIBLE = "compatible"
    ROTATION = "rotation"

    @property
    def rank(self) -> int:
        return (FlipKind.GENERAL, FlipKind.COMPATIBLE, FlipKind.ROTATION).index(self)


@dataclass(frozen=True)
class FlipStep:
    remove: Edge
    add: Edge

    def __post_init__(self):
        object.__setattr__(self, "remove", make_edge(*self.remove))
        object.__setattr__(self, "add", make_edge(*self.add))
        if self.remove == self.add:
            raise ValueError(f"flip must exchange distinct edges, got {self.remove} twice")

    def reversed(self) -> "FlipStep":
        return FlipStep(remove=self.add, add=self.remove)


def classify_flip(s: FlipStep) -> FlipKind:
    if set(s.remove) & set(s.add):
        return FlipKind.ROTATION
    if not crosses(s.remove, s.add):
        return FlipKind.COMPATIBLE
    return FlipKind.GENERAL


class FlipError(ValueError):
    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind


def apply_flip(t: ConvexTree, s: FlipStep) -> ConvexTree:
    if s.remove not in t.edges:
        raise FlipError("remove-missing", f"edge {s.remove} not in tree")
    if s.add in t.edges:
        raise FlipError("add-present", f"edge {s.add} already in tree")
    if not (1 <= s.add[0] and s.add[1] <= t.n):
        raise FlipError("add-out-of-range", f"edge {s.add} outside 1..{t.n}")
    side, _ = components_without_edge(t, s.remove)
    if (s.add[0] in side) == (s.add[1] in side):
        raise FlipError("disconnected", f"edge {s.add} does not reconnect after removing {s.remove}")
    for e in t.edges:
        if e != s.remove and crosses(e, s.add):
            raise FlipError("crossing", f"added edge {s.add} crosses {e}")
    return ConvexTree(n=t.n, edges=(t.edges - {s.remove}) | {s.add})


@dataclass(frozen=True)
class FlipSequence:
    start: ConvexTree
    steps: tuple[FlipStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def trees(self) -> list[ConvexTree]:
        """Start plus every intermediate tree; raises FlipError on a bad step."""
        out = [self.start]
        for s in self.steps:
            out.append(apply_flip(out[-1], s))
        return out

    def final(self) -> ConvexTree:
        return self.trees()[-1]


@dataclass(frozen=True)
class SequenceFailure:
    step: int  # 0-based; len(steps) means the endpoint check failed
    reason: str


def validate_sequence(
    seq: FlipSequence, target: ConvexTree, kind: FlipKind = FlipKind.GENERAL
) -> Optional[SequenceFailure]:
    current = seq.start
    for k, s in enumerate(seq.steps):
        if classify_flip(s).rank < kind.rank:
            return SequenceFailure(k, f"step is not a {kind.value} flip")
        try:
            current = apply_flip(current, s)
        except FlipError as err:
            return SequenceFailure(k, str(err))
    if current.edges != target.edges or current.n != target.n:
        return SequenceFailure(len(seq.steps), "final tree differs from target")
    return None


# ---------------------------------------------------------------------------
# canonical encoding and enumeration

def edge_bit_index(n: int) -> dict[Edge, int]:
    return {e: i for i, e in enumerate(iter_all_point_pairs(n))}


def encode_tree(t: ConvexTree, index: dict[Edge, int]) -> int:
    mask = 0
    for e in t.edges:
        mask |= 1 << index[e]
    return mask


def decode_tree(mask: int, n: int, rindex: list[Edge]) -> ConvexTree:
    edges = [rindex[i] for i in range(len(rindex)) if mask >> i & 1]
    return ConvexTree(n=n, edges=frozenset(edges))


ENUMERATION_LIMIT = 9


def enumerate_trees(n: int) -> Iterator[ConvexTree]:
    """All non-crossing spanning trees on n spine points, by backtracking."""
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"n={n} too large for enumeration (limit {ENUMERATION_LIMIT})")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    pairs = list(iter_all_point_pairs(n))
    need = n - 1

    def extend(idx: int, chosen: list[Edge], parent: list[int]) -> Iterator[ConvexTree]:
        if len(chosen) == need:
            yield ConvexTree(n=n, edges=frozenset(chosen))
            return
        if len(pairs) - idx < need - len(chosen):
            return
        for k in range(idx, len(pairs)):
            e = pairs[k]
            ra, rb = _find(parent, e[0]), _find(parent, e[1])
            if ra == rb:
                continue
            if any(crosses(e, f) for f in chosen):
                continue
            child = parent.copy()
            child[ra] = rb
            chosen.append(e)
            yield from extend(k + 1, chosen, child)
            chosen.pop()

    yield from extend(0, [], list(range(n + 1)))


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def random_tree(n: int, rng) -> ConvexTree:
    """Greedy pass over shuffled point pairs; hull edges guarantee completion."""
    pairs = list(iter_all_point_pairs(n))
    rng.shuffle(pairs)
    chosen: list[Edge] = []
    parent = list(range(n + 1))
    for e in pairs:
        if len(chosen) == n - 1:
            break
        ra, rb = _find(parent, e[0]), _find(parent, e[1])
        if ra == rb or any(crosses(e, f) for f in chosen):
            continue
        parent[ra] = rb
        chosen.append(e)
    if len(chosen) != n - 1:  # pragma: no cover
        raise TripwireError("greedy random tree failed to span")
    return ConvexTree(n=n, edges=frozenset(chosen))


# ---------------------------------------------------------------------------
# neighbors and BFS

def flip_neighbors(t: ConvexTree, kind: FlipKind = FlipKind.GENERAL) -> Iterator[tuple[FlipStep, ConvexTree]]:
    edges = t.edge_list()
    for r in edges:
        side, other = components_without_edge(t, r)
        rest = [e for e in edges if e != r]
        for i in sorted(side):
            for j in sorted(other):
                a = make_edge(i, j)
                if a == r:
                    continue
                step = FlipStep(remove=r, add=a)
                if classify_flip(step).rank < kind.rank:
                    continue
                if any(crosses(a, e) for e in rest):
                    continue
                yield step, ConvexTree(n=t.n, edges=(t.edges - {r}) | {a})


class BfsBudgetExceeded(RuntimeError):
    pass


def bfs_distance(
    a: ConvexTree,
    b: ConvexTree,
    kind: FlipKind = FlipKind.GENERAL,
    budget: int = 5_000_000,
) -> tuple[int, FlipSequence]:
    """Exact flip distance with a witness sequence, bidirectional BFS."""
    if a.n != b.n:
        raise ValueError(f"point counts differ: {a.n} vs {b.n}")
    index = edge_bit_index(a.n)
    rindex = list(iter_all_point_pairs(a.n))
    ma, mb = encode_tree(a, index), encode_tree(b, index)
    if ma == mb:
        return 0, FlipSequence(start=a, steps=())
    # parent maps: mask -> previous mask on its own side
    pa: dict[int, Optional[int]] = {ma: None}
    pb: dict[int, Optional[int]] = {mb: None}
    fa, fb = {ma}, {mb}

    def expand(front: set[int], parents: dict[int, Optional[int]]) -> set[int]:
        new: set[int] = set()
        for mask in sorted(front):
            t = decode_tree(mask, a.n, rindex)
            for _, nt in flip_neighbors(t, kind):
                nm = encode_tree(nt, index)
                if nm not in parents:
                    parents[nm] = mask
                    new.add(nm)
        return new

    def path_to_root(parents: dict[int, Optional[int]], mask: int) -> list[int]:
        out = [mask]
        while parents[out[-1]] is not None:
            out.append(parents[out[-1]])
        return out

    while fa and fb:
        if len(pa) + len(pb) > budget:
            raise BfsBudgetExceeded(f"visited more than {budget} trees")
        if len(fa) <= len(fb):
            fa = expand(fa, pa)
            meet = fa & set(pb)
        else:
            fb = expand(fb, pb)
            meet = fb & set(pa)
        if meet:
            # several meet nodes can coexist at different combined depths;
            # the shortest total wins, mask value breaks ties
            m = min(meet, key=lambda x: (len(path_to_root(pa, x)) + len(path_to_root(pb, x)), x))
            left = path_to_root(pa, m)[::-1]  # ma .. m
            right = path_to_root(pb, m)  # m .. mb
            masks = left + right[1:]
            steps = []
            for prev, cur in zip(masks, masks[1:]):
                gone = prev & ~cur
                got = cur & ~prev
                steps.append(
                    FlipStep(remove=rindex[gone.bit_length() - 1], add=rindex[got.bit_length() - 1])
                )
            seq = FlipSequence(start=a, steps=tuple(steps))
            return len(steps), seq
    raise TripwireError("flip graph disconnected")  # pragma: no cover


# ---------------------------------------------------------------------------
# diameter via dihedral orbit representatives

DIAMETER_LIMIT = 8


def _dihedral_point_maps(n: int) -> list[dict[int, int]]:
    maps = []
    for k in range(n):
        maps.append({i: (i - 1 + k) % n + 1 for i in range(1, n + 1)})
        maps.append({i: ((n - i) + k) % n + 1 for i in range(1, n + 1)})
    return maps


def flip_graph_diameter(
    n: int, kind: FlipKind = FlipKind.GENERAL
) -> tuple[int, tuple[ConvexTree, ConvexTree]]:
    """Exact diameter by BFS from one representative per symmetry orbit.

    Rotations and reflections of the point set preserve trees, flips and
    flip kinds, so eccentricity is constant on orbits.
    """
    if n > DIAMETER_LIMIT:
        raise ValueError(f"n={n} too large for diameter (limit {DIAMETER_LIMIT})")
    index = edge_bit_index(n)
    rindex = list(iter_all_point_pairs(n))
    trees = list(enumerate_trees(n))
    masks = [encode_tree(t, index) for t in trees]
    pos = {m: i for i, m in enumerate(masks)}
    adj: list[list[int]] = []
    for t in trees:
        adj.append([pos[encode_tree(nt, index)] for _, nt in flip_neighbors(t, kind)])
    maps = _dihedral_point_maps(n)

    def orbit_min(i: int) -> int:
        best = masks[i]
        for pm in maps:
            m = 0
            for e in trees[i].edges:
                m |= 1 << index[make_edge(pm[e[0]], pm[e[1]])]
            if m < best:
                best = m
        return best

    reps = [i for i, m in enumerate(masks) if orbit_min(i) == m]
    diameter = -1
    extremal = (0, 0)
    for r in reps:
        dist = [-1] * len(trees)
        dist[r] = 0
        frontier = [r]
        far = r
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
                        far = w
            frontier = nxt
        ecc = dist[far]
        if min(dist) < 0:  # pragma: no cover
            raise TripwireError("flip graph disconnected")
        if ecc > diameter:
            diameter = ecc
            extremal = (r, far)
    return diameter, (trees[extremal[0]], trees[extremal[1]])


# ---------------------------------------------------------------------------
# constructive sequences

def hull_edge(g: int) -> Edge:
    return (g, g + 1)


def _checked(steps: list[FlipStep], current: ConvexTree, step: FlipStep, phase: str) -> ConvexTree:
    try:
        nxt = apply_flip(current, step)
    except FlipError as err:
        raise TripwireError(f"{phase} step {len(steps)} ({step.remove}->{step.add}) invalid: {err}") from err
    steps.append(step)
    return nxt


def _verified_members(p: TreePair, s: AcyclicSet) -> list[int]:
    h = build_conflict_graph(p)
    members = set(s.members)
    if not members <= set(h.vertices):
        raise ValueError(f"set {sorted(members - set(h.vertices))} outside near-near gaps")
    order = topological_order(h, members)
    if isinstance(order, DirectedCycle):
        raise ValueError(f"set is not acyclic: cycle {order.vertices}")
    return order


def sequence_from_acyclic_set(p: TreePair, s: AcyclicSet) -> FlipSequence:
    """Park non-set tops on hull edges, flip the set directly, lift the rest."""
    order = _verified_members(p, s)
    members = set(order)
    parked: list[int] = []
    steps: list[FlipStep] = []
    current = p.top

    phase1 = [
        (g, e) for g, (e, ep) in sorted(p.pairs.items())
        if g not in members and e != ep
    ]
    for g, e in sorted(phase1, key=lambda item: -edge_length(item[1])):
        parked.append(g)
        if e != hull_edge(g):
            current = _checked(steps, current, FlipStep(e, hull_edge(g)), "park")

    for g in order:
        e, ep = p.pairs[g]
        current = _checked(steps, current, FlipStep(e, ep), "direct")

    lifts = [(g, p.pairs[g][1]) for g in parked]
    for g, ep in sorted(lifts, key=lambda item: edge_length(item[1])):
        if ep != hull_edge(g):
            current = _checked(steps, current, FlipStep(hull_edge(g), ep), "lift")

    if current.edges != p.bottom.edges:
        raise TripwireError("sequence did not reach the bottom tree")
    return FlipSequence(start=p.top, steps=tuple(steps))


def _rotation_park(steps: list[FlipStep], current: ConvexTree, e: Edge, g: int) -> ConvexTree:
    """Move edge e to hull_edge(g) using one rotation (near) or two (wide)."""
    target = hull_edge(g)
    if e == target:
        return current
    if set(e) & set(target):
        return _checked(steps, current, FlipStep(e, target), "rot-park")
    mid = make_edge(g, e[1])
    current = _checked(steps, current, FlipStep(e, mid), "rot-park")
    return _checked(steps, current, FlipStep(mid, target), "rot-park")


def _rotation_lift(steps: list[FlipStep], current: ConvexTree, g: int, ep: Edge) -> ConvexTree:
    """Inverse of _rotation_park: hull edge of g out to ep."""
    source = hull_edge(g)
    if ep == source:
        return current
    if set(ep) & set(source):
        return _checked(steps, current, FlipStep(source, ep), "rot-lift")
    mid = make_edge(g, ep[1])
    current = _checked(steps, current, FlipStep(source, mid), "rot-lift")
    return _checked(steps, current, FlipStep(mid, ep), "rot-lift")


def _crossing_block_steps(subs: list[int], pairs: dict[int, tuple[Edge, Edge]]) -> list[FlipStep]:
    """Rotation chain clearing a blown crossing group in len(subs)+1 steps."""
    first = subs[0]
    tops = {q: pairs[q][0] for q in subs}
    bottoms = {q: pairs[q][1] for q in subs}
    if near_anchor(tops[first], first) == first:
        # tops anchored on left gap endpoints, fanning right
        b = max(tops[first])
        c = min(bottoms[first])
        aux = make_edge(c, b)
        out = [FlipStep(tops[first], aux)]
        out += [FlipStep(tops[q], make_edge(c, q)) for q in subs[1:]]
        out.append(FlipStep(aux, make_edge(c, subs[-1] + 1)))
    else:
        # mirror image: tops anchored on right gap endpoints, fanning left
        c = min(tops[first])
        b = max(bottoms[first])
        aux = make_edge(c, b)
        out = [FlipStep(tops[subs[-1]], aux)]
        out += [FlipStep(tops[q], make_edge(q + 1, b)) for q in reversed(subs[:-1])]
        out.append(FlipStep(aux, make_edge(subs[0], b)))
    return out


def rotation_sequence_from_acyclic_set(blown: "BlowupResult", s: AcyclicSet) -> FlipSequence:
    """All-rotation sequence across a blowup, driven by a base acyclic set."""
    base = blown.base
    bp = blown.pair
    order = _verified_members(base, s)
    members = set(order)
    labels = {g: classify_gap(base, g) for g in blown.groups}
    steps: list[FlipStep] = []
    current = bp.top
    parked: list[tuple[int, Edge]] = []  # (blown gap, blown bottom target)

    park_jobs: list[tuple[int, Edge]] = []
    for g in sorted(base.pairs):
        if g in members:
            continue
        if g in blown.groups:
            for q in blown.groups[g]:
                park_jobs.append((q, bp.pairs[q][0]))
        else:
            q = blown.point_map[g]
            e, ep = bp.pairs[q]
            if e != ep:
                park_jobs.append((q, e))
    for q, e in sorted(park_jobs, key=lambda item: -edge_length(item[1])):
        current = _rotation_park(steps, current, e, q)
        parked.append((q, bp.pairs[q][1]))

    for g in order:
        subs = blown.groups[g]
        label = labels[g]
        if label is GapLabel.CROSSING:
            for step in _crossing_block_steps(subs, bp.pairs):
                current = _checked(steps, current, step, "rot-cross")
        else:
            jobs = [(q, *bp.pairs[q]) for q in subs]
            reverse = label is GapLabel.BELOW  # below: longest top first
            jobs.sort(key=lambda item: edge_length(item[1]), reverse=reverse)
            for q, e, ep in jobs:
                current = _checked(steps, current, FlipStep(e, ep), "rot-direct")

    for q, ep in sorted(parked, key=lambda item: edge_length(item[1])):
        current = _rotation_lift(steps, current, q, ep)

    if current.edges != bp.bottom.edges:
        raise TripwireError("rotation sequence did not reach the bottom tree")
    return FlipSequence(start=bp.top, steps=tuple(steps))


def rotation_sequence_blowup_crossing(beta: int) -> FlipSequence:
    """The beta+2 rotation chain for a blown-up single crossing pair."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    from treeflip.blowup import blow_up, crossing_pair_base

    blown = blow_up(crossing_pair_base(), {2: beta})
    subs = blown.groups[2]
    steps = _crossing_block_steps(subs, blown.pair.pairs)
    seq = FlipSequence(start=blown.pair.top, steps=tuple(steps))
    if seq.final().edges != blown.pair.bottom.edges:  # pragma: no cover
        raise TripwireError("crossing chain missed its target")
    return seq
