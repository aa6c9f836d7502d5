"""Iterated tree pair family whose conflict graphs force long flip sequences.

The family is built in levels. Level 1 is an 11-point pair with seven
near-near gaps whose double conflicts form a path. Every further level
prepends a five-point block on the left, inserts one point into the gap
behind the previous block, one just left of the anchor point x, and one
at the right end, then rewires four edge endpoints around the insertions.
Each level contributes seven fresh near-near gaps carrying the same
double-conflict path, plus one double conflict tying it to every older
level. Acyclic sets can take at most four gaps from one level and three
from each other, so the maximum stays at 3l+1 while the gap count grows
as 7l; the ratio tends to 3/7 and pushes the flip distance of the pair
towards 11/7 of the point count.

Vertices are handled as symbolic tokens until the final spine is known;
integer positions are read off the token list only at the end, so the
insertion rules stay visible in the code instead of being baked into
index arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .conflict import ConflictGraph, build_conflict_graph, max_acyclic_exact
from .pairing import TreePair, near_near_gaps, pair_trees
from .tree_core import ConvexTree, Edge, TripwireError, Violation, make_edge, validate_tree

Token = tuple
X: Token = ("x",)
Y: Token = ("y",)

# double conflicts inside one level, as consecutive pairs of this walk
LEVEL_PATH = (7, 2, 1, 3, 5, 4, 6)


def _vt(i: int, level: int) -> Token:
    return ("v", i, level)


def _base_state():
    spine = [_vt(i, 1) for i in range(1, 9)] + [X, Y, _vt(9, 1)]
    shorts = [(_vt(2, 1), _vt(3, 1)), (_vt(6, 1), _vt(7, 1)), (X, Y)]

    def v(i):
        return _vt(i, 1)

    near = {
        (1, 1): (v(1), v(5)),
        (2, 1): (v(2), v(4)),
        (3, 1): (v(2), v(5)),
        (4, 1): (v(5), X),
        (5, 1): (v(6), v(8)),
        (6, 1): (v(6), X),
        (7, 1): (X, v(9)),
    }
    tilde = {
        (1, 1): (v(1), v(3)),
        (2, 1): (v(3), Y),
        (3, 1): (v(4), v(7)),
        (4, 1): (v(5), v(7)),
        (5, 1): (v(4), v(8)),
        (6, 1): (v(8), Y),
        (7, 1): (v(3), v(9)),
    }
    gaps = {
        (1, 1): (v(1), v(2)),
        (2, 1): (v(3), v(4)),
        (3, 1): (v(4), v(5)),
        (4, 1): (v(5), v(6)),
        (5, 1): (v(7), v(8)),
        (6, 1): (v(8), X),
        (7, 1): (Y, v(9)),
    }
    return spine, shorts, near, tilde, gaps


def _extend(spine, shorts, near, tilde, gaps, level: int) -> None:
    prev = level - 1
    spine[:0] = [_vt(i, level) for i in range(1, 6)]
    v7 = _vt(7, level)
    spine.insert(spine.index(_vt(3, prev)) + 1, v7)
    v8 = _vt(8, level)
    spine.insert(spine.index(X), v8)
    v9 = _vt(9, level)
    spine.append(v9)

    # the two long edges ending at x now stop at the new point before it,
    # and the two long bottom edges starting behind the old block now
    # start at the point inserted behind it
    near[(4, prev)] = (near[(4, prev)][0], v8)
    near[(6, prev)] = (near[(6, prev)][0], v8)
    tilde[(2, prev)] = (v7, tilde[(2, prev)][1])
    tilde[(7, prev)] = (v7, tilde[(7, prev)][1])
    # both insertions split a tracked gap; the old gap keeps the half
    # its edges still cover
    gaps[(2, prev)] = (v7, gaps[(2, prev)][1])
    gaps[(6, prev)] = (gaps[(6, prev)][0], v8)

    def vl(i):
        return _vt(i, level)

    shorts.append((vl(2), vl(3)))
    v1p, v3p, v9p = _vt(1, prev), _vt(3, prev), _vt(9, prev)
    near.update({
        (1, level): (vl(1), vl(5)),
        (2, level): (vl(2), vl(4)),
        (3, level): (vl(2), vl(5)),
        (4, level): (vl(5), X),
        (5, level): (_vt(2, prev), v7),
        (6, level): (v1p, X),
        (7, level): (X, v9),
    })
    tilde.update({
        (1, level): (vl(1), vl(3)),
        (2, level): (vl(3), v9p),
        (3, level): (vl(4), v3p),
        (4, level): (vl(5), v3p),
        (5, level): (vl(4), v7),
        (6, level): (v8, Y),
        (7, level): (vl(3), v9),
    })
    gaps.update({
        (1, level): (vl(1), vl(2)),
        (2, level): (vl(3), vl(4)),
        (3, level): (vl(4), vl(5)),
        (4, level): (vl(5), v1p),
        (5, level): (v3p, v7),
        (6, level): (v8, X),
        (7, level): (v9p, v9),
    })


@dataclass(frozen=True)
class FamilyInstance:
    level: int
    pair: TreePair
    gap_index: dict[tuple[int, int], int]  # (i, j) -> spine gap of pair i at level j

    @property
    def n(self) -> int:
        return self.pair.n


def points_for_level(level: int) -> int:
    return 11 + 8 * (level - 1)


def build_family(level: int) -> FamilyInstance:
    """Construct the pair for the given level and its gap bookkeeping.

    The returned instance is internally checked: both trees validate, the
    tracked gaps are adjacent point pairs, and the pairing at each tracked
    gap is exactly the intended edge pair.
    """
    if level < 1:
        raise ValueError(f"level must be at least 1, got {level}")
    spine, shorts, near, tilde, gaps = _base_state()
    for lv in range(2, level + 1):
        _extend(spine, shorts, near, tilde, gaps, lv)

    pos = {tok: idx + 1 for idx, tok in enumerate(spine)}
    n = len(spine)
    if n != points_for_level(level):
        raise TripwireError(f"spine has {n} points, expected {points_for_level(level)}")

    def as_edge(tok_pair) -> Edge:
        return make_edge(pos[tok_pair[0]], pos[tok_pair[1]])

    top = ConvexTree.from_edges(n, [as_edge(e) for e in shorts] + [as_edge(e) for e in near.values()])
    bottom = ConvexTree.from_edges(n, [as_edge(e) for e in shorts] + [as_edge(e) for e in tilde.values()])
    pair = pair_trees(top, bottom)

    gap_index: dict[tuple[int, int], int] = {}
    for key, (left, right) in gaps.items():
        if pos[right] != pos[left] + 1:
            raise TripwireError(f"gap {key} endpoints {left} {right} are not adjacent")
        gap_index[key] = pos[left]

    for key, g in gap_index.items():
        want = (as_edge(near[key]), as_edge(tilde[key]))
        if pair.pairs.get(g) != want:
            raise TripwireError(
                f"gap {g} pairs {pair.pairs.get(g)}, construction says {want}"
            )
    return FamilyInstance(level, pair, gap_index)


def expected_doubles(fi: FamilyInstance) -> set[frozenset[int]]:
    """Double conflicts the construction promises.

    Within each level the seven gaps carry a double-conflict path; across
    levels the sixth gap of the newer level is in double conflict with the
    seventh gap of every older one.
    """
    out: set[frozenset[int]] = set()
    for j in range(1, fi.level + 1):
        walk = [fi.gap_index[(i, j)] for i in LEVEL_PATH]
        out.update(frozenset(p) for p in zip(walk, walk[1:]))
    for newer in range(2, fi.level + 1):
        for older in range(1, newer):
            out.add(frozenset((fi.gap_index[(6, newer)], fi.gap_index[(7, older)])))
    return out


@dataclass(frozen=True, eq=False)
class FamilyReport:
    level: int
    top_violation: Optional[Violation]
    bottom_violation: Optional[Violation]
    near_near_ok: bool
    missing_doubles: tuple[tuple[int, int], ...]
    unexpected_doubles: tuple[tuple[int, int], ...]
    extra_cross_level: tuple[tuple[int, int], ...]  # reported, not a failure
    single_arc_count: int

    @property
    def ok(self) -> bool:
        return (
            self.top_violation is None
            and self.bottom_violation is None
            and self.near_near_ok
            and not self.missing_doubles
            and not self.unexpected_doubles
        )


def verify_family(fi: FamilyInstance) -> FamilyReport:
    """Recheck the promised structure of an instance from scratch.

    Validates both trees, compares the near-near gap set against the
    tracked gaps, and diffs the conflict graph's double arcs against
    expected_doubles. Unexpected doubles between tracked gaps of two
    different levels are reported separately and do not fail the check,
    since only the listed doubles are promised; anything else unexpected,
    or anything missing, does fail.
    """
    vt = validate_tree(fi.pair.top)
    vb = validate_tree(fi.pair.bottom)
    expected = expected_doubles(fi)
    if vt is not None or vb is not None:
        missing = tuple(sorted(tuple(sorted(d)) for d in expected))
        return FamilyReport(fi.level, vt, vb, False, missing, (), (), 0)

    tracked = sorted(fi.gap_index.values())
    nn_ok = (
        len(fi.gap_index) == 7 * fi.level
        and len(set(tracked)) == len(tracked)
        and near_near_gaps(fi.pair) == tracked
    )

    h = build_conflict_graph(fi.pair)
    actual = h.double_arcs()
    level_of = {g: key[1] for key, g in fi.gap_index.items()}
    missing = sorted(tuple(sorted(d)) for d in expected - actual)
    cross: list[tuple[int, int]] = []
    unexpected: list[tuple[int, int]] = []
    for d in actual - expected:
        a, b = sorted(d)
        if a in level_of and b in level_of and level_of[a] != level_of[b]:
            cross.append((a, b))
        else:
            unexpected.append((a, b))
    singles = sum(1 for (a, b) in h.arcs if (b, a) not in h.arcs)
    return FamilyReport(
        fi.level, None, None, nn_ok,
        tuple(missing), tuple(sorted(unexpected)), tuple(sorted(cross)), singles,
    )


def family_conflict_graph(fi: FamilyInstance) -> ConflictGraph:
    return build_conflict_graph(fi.pair)


def family_ac(fi: FamilyInstance, budget: int = 40) -> tuple[int, int]:
    """Conflict graph size and exact maximum acyclic set size.

    Raises if the measured values disagree with the closed forms 7l and
    3l+1; the budget caps the exact solver as usual.
    """
    h = build_conflict_graph(fi.pair)
    best = max_acyclic_exact(h, budget=budget)
    got = (len(h.vertices), len(best))
    want = (7 * fi.level, 3 * fi.level + 1)
    if got != want:
        raise TripwireError(f"level {fi.level} measures {got}, closed form says {want}")
    return got


def family_ratio(level: int) -> Fraction:
    """Flip-distance rate 2 - (3l+1)/(7l) achieved by the level-l pair."""
    if level < 1:
        raise ValueError(f"level must be at least 1, got {level}")
    return Fraction(2) - Fraction(3 * level + 1, 7 * level)
