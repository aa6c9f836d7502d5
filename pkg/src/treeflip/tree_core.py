"""Non-crossing spanning trees on convex point sets, in linear representation.

Points are labelled 1..n from left to right on a horizontal line (the spine).
An edge is an ordered pair (i, j) with i < j, drawn as a semicircle; two
edges cross exactly when their endpoints interleave as a < c < b < d.  The
gap g (for g in 1..n-1) is the open interval between points g and g+1.

Every non-crossing spanning tree induces a bijection between gaps and edges:
each gap is assigned the shortest edge covering it.  Ties cannot occur for a
valid tree (two same-length edges covering a common gap would cross), so a
tie is treated as data corruption and raises ``TripwireError``.

The class of an edge records how it relates to its assigned gap: it shares
both endpoints (Short), exactly one (Near), or none (Wide).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional

Edge = tuple[int, int]


class TripwireError(RuntimeError):
    """Internal invariant violation: the input data structure is corrupt."""


def make_edge(i: int, j: int) -> Edge:
    if i == j:
        raise ValueError(f"degenerate edge ({i}, {j})")
    return (i, j) if i < j else (j, i)


def edge_length(e: Edge) -> int:
    return e[1] - e[0]


def covers_point(e: Edge, k: int) -> bool:
    return e[0] <= k <= e[1]


def covers_gap(e: Edge, g: int) -> bool:
    """Edge covers the open interval between points g and g+1."""
    return e[0] <= g and g + 1 <= e[1]


def covers_edge(e: Edge, f: Edge) -> bool:
    """e covers f iff e covers both endpoints of f."""
    return e[0] <= f[0] and f[1] <= e[1]


def crosses(e: Edge, f: Edge) -> bool:
    a, b = e
    c, d = f
    return (a < c < b < d) or (c < a < d < b)


@dataclass(frozen=True)
class ConvexTree:
    """Edge set on points 1..n; validity is checked by :func:`validate_tree`."""

    n: int
    edges: frozenset[Edge]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "ConvexTree":
        if n < 2:
            raise ValueError(f"need at least 2 points, got n={n}")
        normalized = []
        for i, j in edges:
            e = make_edge(i, j)
            if not (1 <= e[0] and e[1] <= n):
                raise ValueError(f"edge {e} out of range for n={n}")
            normalized.append(e)
        es = frozenset(normalized)
        if len(es) != len(normalized):
            raise ValueError("duplicate edges")
        return cls(n=n, edges=es)

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, e: Edge) -> bool:
        return make_edge(*e) in self.edges

    def gaps(self) -> range:
        return range(1, self.n)


@dataclass(frozen=True)
class Violation:
    kind: str  # "edge_count" | "crossing" | "disconnected"
    detail: str
    witness: tuple


def validate_tree(t: ConvexTree) -> Optional[Violation]:
    """Check spanning, acyclicity and planarity; return None when valid.

    Spanning tree on n points needs exactly n-1 edges plus connectivity;
    acyclicity then follows, so only count, connectivity and pairwise
    non-crossing are checked.
    """
    edges = t.edge_list()
    if len(edges) != t.n - 1:
        return Violation("edge_count", f"expected {t.n - 1} edges, got {len(edges)}", (len(edges),))
    for idx, e in enumerate(edges):
        for f in edges[idx + 1:]:
            if f[0] >= e[1]:
                break
            if crosses(e, f):
                return Violation("crossing", f"edges {e} and {f} cross", (e, f))
    parent = list(range(t.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            # n-1 edges with a cycle implies a disconnection elsewhere.
            return Violation("disconnected", f"edge {(i, j)} closes a cycle", ((i, j),))
        parent[ri] = rj
    roots = {find(v) for v in range(1, t.n + 1)}
    if len(roots) != 1:
        return Violation("disconnected", f"{len(roots)} components", tuple(sorted(roots)))
    return None


def assert_valid_tree(t: ConvexTree) -> None:
    v = validate_tree(t)
    if v is not None:
        raise ValueError(f"invalid tree: {v.kind}: {v.detail}")


class EdgeClass(Enum):
    SHORT = "short"
    NEAR = "near"
    WIDE = "wide"


def gap_edge_bijection(t: ConvexTree) -> dict[int, Edge]:
    """Assign each gap its shortest covering edge; bijective for valid trees.

    Raises TripwireError when a shortest cover is tied or the map fails to be
    injective -- both are impossible for a valid tree and indicate corruption.
    """
    assignment: dict[int, Edge] = {}
    used: dict[Edge, int] = {}
    for g in t.gaps():
        best: Optional[Edge] = None
        tied = False
        for e in t.edges:
            if covers_gap(e, g):
                if best is None or edge_length(e) < edge_length(best):
                    best = e
                    tied = False
                elif edge_length(e) == edge_length(best):
                    tied = True
        if best is None:
            raise ValueError(f"gap {g} has no covering edge; not a spanning tree")
        if tied:
            raise TripwireError(f"tie among shortest edges covering gap {g}")
        if best in used:
            raise TripwireError(f"edge {best} assigned to gaps {used[best]} and {g}")
        used[best] = g
        assignment[g] = best
    return assignment


def assigned_gap(t: ConvexTree, e: Edge) -> int:
    e = make_edge(*e)
    if e not in t.edges:
        raise ValueError(f"edge {e} not in tree")
    for g, f in gap_edge_bijection(t).items():
        if f == e:
            return g
    raise TripwireError(f"edge {e} owns no gap")  # pragma: no cover


def classify_edge(t: ConvexTree, e: Edge) -> EdgeClass:
    """Short/Near/Wide by shared endpoints between e and its assigned gap."""
    e = make_edge(*e)
    g = assigned_gap(t, e)
    shared = len({e[0], e[1]} & {g, g + 1})
    if shared == 2:
        return EdgeClass.SHORT
    if shared == 1:
        return EdgeClass.NEAR
    return EdgeClass.WIDE


def path_tree(n: int) -> ConvexTree:
    return ConvexTree.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star_tree(n: int, center: int = 1) -> ConvexTree:
    return ConvexTree.from_edges(n, [(center, j) for j in range(1, n + 1) if j != center])


def components_without_edge(t: ConvexTree, removed: Edge) -> tuple[frozenset[int], frozenset[int]]:
    """Vertex sets of the two components of t minus one edge."""
    removed = make_edge(*removed)
    adj: dict[int, list[int]] = {v: [] for v in range(1, t.n + 1)}
    for i, j in t.edges:
        if (i, j) != removed:
            adj[i].append(j)
            adj[j].append(i)
    seen = {removed[0]}
    stack = [removed[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    side = frozenset(seen)
    other = frozenset(range(1, t.n + 1)) - side
    return side, other


def iter_all_point_pairs(n: int) -> Iterator[Edge]:
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            yield (i, j)
