"""Shared reference trees used across the test suite.

LEVEL1_TOP / LEVEL1_BOTTOM (n = 11)
-----------------------------------
A hand-built pair of non-crossing spanning trees whose conflict graph is a
path of double arcs on 7 vertices.  Spine layout:

    1  2  3  4  5  6  7  8  9  10 11

Top tree: shorts (2,3), (6,7), (9,10) plus near edges
    (1,5) (2,4) (2,5) (5,9) (6,8) (6,9) (9,11)
Bottom tree: same shorts plus near edges
    (1,3) (3,10) (4,7) (5,7) (4,8) (8,10) (3,11)

Gap -> edge tables (shortest covering edge, worked by hand):

    gap   top edge   bottom edge      both-near?
     1     (1,5)      (1,3)           yes
     2     (2,3)      (2,3)           short/short
     3     (2,4)      (3,10)          yes
     4     (2,5)      (4,7)           yes
     5     (5,9)      (5,7)           yes
     6     (6,7)      (6,7)           short/short
     7     (6,8)      (4,8)           yes
     8     (6,9)      (8,10)          yes
     9     (9,10)     (9,10)          short/short
    10     (9,11)     (3,11)          yes

The seven gaps where both assigned edges are near: 1, 3, 4, 5, 7, 8, 10.
"""

from treeflip.tree_core import ConvexTree

LEVEL1_N = 11

LEVEL1_TOP_EDGES = [
    (2, 3), (6, 7), (9, 10),
    (1, 5), (2, 4), (2, 5), (5, 9), (6, 8), (6, 9), (9, 11),
]

LEVEL1_BOTTOM_EDGES = [
    (2, 3), (6, 7), (9, 10),
    (1, 3), (3, 10), (4, 7), (5, 7), (4, 8), (8, 10), (3, 11),
]

LEVEL1_TOP_BIJECTION = {
    1: (1, 5), 2: (2, 3), 3: (2, 4), 4: (2, 5), 5: (5, 9),
    6: (6, 7), 7: (6, 8), 8: (6, 9), 9: (9, 10), 10: (9, 11),
}

LEVEL1_BOTTOM_BIJECTION = {
    1: (1, 3), 2: (2, 3), 3: (3, 10), 4: (4, 7), 5: (5, 7),
    6: (6, 7), 7: (4, 8), 8: (8, 10), 9: (9, 10), 10: (3, 11),
}

LEVEL1_NEAR_NEAR_GAPS = [1, 3, 4, 5, 7, 8, 10]


def level1_top() -> ConvexTree:
    return ConvexTree.from_edges(LEVEL1_N, LEVEL1_TOP_EDGES)


def level1_bottom() -> ConvexTree:
    return ConvexTree.from_edges(LEVEL1_N, LEVEL1_BOTTOM_EDGES)
