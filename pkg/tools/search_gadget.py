"""Search for variable-gadget group templates.

A degree-1 gadget occupies 9 gaps on 10 points: six near-near gaps (roles
tB, fC, tA, fB, tC, fA), two connection slots and one plain short gap.
Exactly one slot is "armed" per group (the clause the group serves will
attach there); the other slot and the plain short are plain hull gaps.

Conflict contract for the six roles:

  * doubles exactly on the path tB-fC-tA-fB-tC-fA,
  * every other arc compliant: source above or target below,
  * {tB,tA,tC} and {fB,fA,fC} induce acyclic subgraphs,
  * labels: tB,fB below; tA,fA above; tC,fC crossing.

Armed slot (p, p+1), "up" orientation (the clause pair adds a long top and
a length-3 bottom (p-2, w) at the inserted point w):

  * gaps (p-2, p-1) and (p-1, p) are the two other short gaps, so the
    length-3 bottom cannot steal their bottom assignment (hulls win),
  * the pointer role (fB when the slot serves plain occurrences, tB when
    negated) sits at h <= p-3 with T=(h, p-1|p) and B=(h, b2 >= p+1);
    those two edges carry both halves of the clause-gap double,
  * those pinned shapes make the pointer below-class and leave the
    crossing role of the opposite half as its only possible double
    partner, so the pointer must be a path endpoint and its neighbor that
    crossing role (the witness).  FSLOT keeps the canonical order above;
    TSLOT reorders to tA-fC-tB-fA-tC-fB so fB sits at the end next to tC.
    The witness may carry a slot-spanning bottom: the clause gap then has
    one extra arc onto it, compensated through the witness-pointer-clause
    double path,
  * no top covers or leaves p; tops arriving at p-1 or p from h <= p-3
    belong to the pointer or to above roles only (their arc into the new
    clause gap is compliant),
  * no bottom arrives at p-1/p from <= p-3, none leaves p-1 or p, none
    equals (p-1, p+1); bottoms covering p belong to the pointer, the
    witness or below roles (the clause gap's arc onto them is compliant),
  * some top leaves p+1 (keeps the spine connected after the hull rewire).

The "down" orientation is the left-right mirror of the tree swap of the
matching up template: mirroring swaps the A and B role classes back, so
both orientations of one slot share a single search.
"""

import argparse
import itertools
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from treeflip.conflict import DirectedCycle, build_conflict_graph, topological_order
from treeflip.pairing import GapLabel, classify_gap, near_near_gaps, pair_trees
from treeflip.tree_core import ConvexTree, gap_edge_bijection, validate_tree

ROLES = ("tB", "fC", "tA", "fB", "tC", "fA")
UP_PATH = ROLES
DOWN_PATH = ("tA", "fC", "tB", "fA", "tC", "fB")
LABEL = {"tB": "B", "fB": "B", "tA": "A", "fA": "A", "tC": "C", "fC": "C"}
SWAP_BA = {"tB": "tA", "tA": "tB", "fB": "fA", "fA": "fB", "tC": "tC", "fC": "fC"}

N = 10


def crosses(e, f):
    a, b = e
    c, d = f
    return a < c < b < d or c < a < d < b


def covers_edge(e, f):
    return e[0] <= f[0] and f[1] <= e[1]


def covers_gap(e, g):
    return e[0] <= g and g + 1 <= e[1]


def arcs_between(gi, ti, bi, gj, tj, bj):
    ij = (
        crosses(ti, bj)
        or (covers_edge(bj, ti) and covers_gap(ti, gj))
        or (covers_edge(ti, bj) and covers_gap(bj, gi))
    )
    ji = (
        crosses(tj, bi)
        or (covers_edge(bi, tj) and covers_gap(tj, gi))
        or (covers_edge(tj, bi) and covers_gap(bi, gj))
    )
    return ij, ji


WITNESS = {"fB": "tC", "tB": "fC"}


class ArmedRules:
    """Shape bans at an armed slot (p, p+1).

    ptr carries both halves of the clause-gap double.  witness is the
    crossing role path-adjacent to ptr; its slot-spanning bottom receives
    the one exceptional arc from the clause gap, compensated through the
    witness-ptr-clause double path.
    """

    def __init__(self, p, ptr_role):
        self.p = p
        self.ptr = ptr_role
        self.witness = WITNESS[ptr_role]

    def top_ok(self, role, e):
        p = self.p
        t1, t2 = e
        if t1 < p < t2 or t1 == p:
            return False
        if t2 in (p - 1, p) and t1 <= p - 3:
            return role == self.ptr or LABEL[role] == "A"
        return True

    def bottom_ok(self, role, e):
        p = self.p
        b1, b2 = e
        if b2 in (p - 1, p) and b1 <= p - 3:
            return False
        if b1 in (p - 1, p):
            return False
        if e == (p - 1, p + 1):
            return False
        if b1 < p < b2:
            return role in (self.ptr, self.witness) or LABEL[role] == "B"
        return True


def role_candidates(role, g, rules, n=N):
    out = []
    lab = LABEL[role]

    def keep(t, b):
        for r in rules:
            if not r.top_ok(role, t) or not r.bottom_ok(role, b):
                return
        out.append((t, b))

    ptr_rules = [r for r in rules if r.ptr == role]
    if ptr_rules:
        r = ptr_rules[0]
        p = r.p
        if g <= p - 3:
            for t2 in (p - 1, p):
                for b2 in range(p + 1, n + 1):
                    keep((g, t2), (g, b2))
        return out

    if lab == "B":
        for t2 in range(g + 2, n + 1):
            for b2 in range(t2 + 1, n + 1):
                keep((g, t2), (g, b2))
        for t1 in range(2, g):
            for b1 in range(1, t1):
                keep((t1, g + 1), (b1, g + 1))
    elif lab == "A":
        for b2 in range(g + 2, n + 1):
            for t2 in range(b2 + 1, n + 1):
                keep((g, t2), (g, b2))
        for b1 in range(2, g):
            for t1 in range(1, b1):
                keep((t1, g + 1), (b1, g + 1))
    else:
        for l in range(1, g):
            for r_ in range(g + 2, n + 1):
                keep((g, r_), (l, g + 1))
                keep((l, g + 1), (g, r_))
    return out


def check_pair(path_pairs, role_i, gi, ci, role_j, gj, cj):
    ti, bi = ci
    tj, bj = cj
    if ti == tj or bi == bj or crosses(ti, tj) or crosses(bi, bj):
        return False
    ij, ji = arcs_between(gi, ti, bi, gj, tj, bj)
    if frozenset((role_i, role_j)) in path_pairs:
        return ij and ji
    if ij and ji:
        return False
    if ij and LABEL[role_i] != "A" and LABEL[role_j] != "B":
        return False
    if ji and LABEL[role_j] != "A" and LABEL[role_i] != "B":
        return False
    return True


def verify_template(sol, path, n=N):
    pos = {r: g for g, r in sol["roles"].items()}
    role_gaps = sorted(pos[r] for r in ROLES)
    hull_gaps = sorted(set(range(1, n)) - set(role_gaps))
    hulls = [(g, g + 1) for g in hull_gaps]
    tops = hulls + [tuple(sol["tops"][r]) for r in ROLES]
    bottoms = hulls + [tuple(sol["bottoms"][r]) for r in ROLES]
    if len(set(tops)) != n - 1 or len(set(bottoms)) != n - 1:
        return "duplicate edges"
    top = ConvexTree.from_edges(n, tops)
    bottom = ConvexTree.from_edges(n, bottoms)
    for t in (top, bottom):
        if validate_tree(t) is not None:
            return "invalid tree"
    try:
        bt = gap_edge_bijection(top)
        bb = gap_edge_bijection(bottom)
    except Exception as exc:  # non-injective cover map
        return f"bijection failure: {exc}"
    for r in ROLES:
        if bt[pos[r]] != tuple(sol["tops"][r]):
            return f"{r}: top bijection mismatch"
        if bb[pos[r]] != tuple(sol["bottoms"][r]):
            return f"{r}: bottom bijection mismatch"
    pair = pair_trees(top, bottom)
    if near_near_gaps(pair) != role_gaps:
        return "near-near set mismatch"
    want = {"B": GapLabel.BELOW, "A": GapLabel.ABOVE, "C": GapLabel.CROSSING}
    for r in ROLES:
        if classify_gap(pair, pos[r]) is not want[LABEL[r]]:
            return f"{r}: label mismatch"
    h = build_conflict_graph(pair)
    want_doubles = {frozenset((pos[a], pos[b])) for a, b in zip(path, path[1:])}
    if h.double_arcs() != want_doubles:
        return "double set mismatch"
    lab_of = {pos[r]: LABEL[r] for r in ROLES}
    extras = 0
    for (a, b) in h.arcs:
        if frozenset((a, b)) in want_doubles:
            continue
        extras += 1
        if lab_of[a] != "A" and lab_of[b] != "B":
            return f"non-compliant arc {a}->{b}"
    for s in (("tB", "tA", "tC"), ("fB", "fA", "fC")):
        if isinstance(topological_order(h, {pos[r] for r in s}), DirectedCycle):
            return "t/f set cyclic"
    sol["extras"] = extras
    return None


def anchored_right(sol, p):
    """Some top must leave p+1 so the attachment rewire keeps the spine
    connected."""
    return any(tuple(t)[0] == p + 1 for t in sol["tops"].values())


def try_arrangement(pos, p, rules, path_pairs, path, collect, want_all, limit):
    cand = {}
    for role in ROLES:
        cand[role] = role_candidates(role, pos[role], rules)
        if not cand[role]:
            return False
    order = sorted(ROLES, key=lambda r: len(cand[r]))

    def rec(idx, chosen):
        if limit and len(collect) >= limit:
            return True
        if idx == len(order):
            sol = {
                "roles": {pos[r]: r for r in ROLES},
                "tops": {r: chosen[r][0] for r in ROLES},
                "bottoms": {r: chosen[r][1] for r in ROLES},
                "slot": p,
            }
            if not anchored_right(sol, p):
                return False
            if verify_template(sol, path) is None:
                collect.append(sol)
                return not want_all
            return False
        role = order[idx]
        for c in cand[role]:
            ok = True
            for r2, c2 in chosen.items():
                if not check_pair(path_pairs, role, pos[role], c, r2, pos[r2], c2):
                    ok = False
                    break
            if ok:
                chosen[role] = c
                if rec(idx + 1, chosen):
                    return True
                del chosen[role]
        return False

    return rec(0, {})


def search(ptr_role, path, want_all=False, limit=None, verbose=False):
    path_pairs = {frozenset(e) for e in zip(path, path[1:])}
    collect = []
    for p in range(4, N - 1):  # slot gap (p, p+1); shorts at p-2, p-1
        role_gaps = [g for g in range(1, N) if g not in (p - 2, p - 1, p)]
        others = [r for r in ROLES if r != ptr_role]
        for h in [g for g in role_gaps if g <= p - 3]:
            rest = [g for g in role_gaps if g != h]
            for perm in itertools.permutations(others):
                pos = dict(zip(perm, rest))
                pos[ptr_role] = h
                done = try_arrangement(
                    pos, p, [ArmedRules(p, ptr_role)], path_pairs, path,
                    collect, want_all, limit,
                )
                if done or (collect and not want_all):
                    return collect
        if verbose:
            print(f"  p={p}: cumulative {len(collect)}", file=sys.stderr)
    return collect


def mirror_edge(e, n=N):
    return (n + 1 - e[1], n + 1 - e[0])


def to_down(sol, n=N):
    """Mirror the spine and swap the trees: up template -> down template."""
    roles = {n - g: SWAP_BA[r] for g, r in sol["roles"].items()}
    tops = {SWAP_BA[r]: mirror_edge(tuple(e)) for r, e in sol["bottoms"].items()}
    bottoms = {SWAP_BA[r]: mirror_edge(tuple(e)) for r, e in sol["tops"].items()}
    return {"roles": roles, "tops": tops, "bottoms": bottoms, "slot": n - sol["slot"]}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--armed", default="TSLOT", choices=["TSLOT", "FSLOT"])
    ap.add_argument("--variant", default="up", choices=["up", "down"])
    ap.add_argument("--all", action="store_true")
    ap.add_argument("--limit", type=int, default=None)
    ap.add_argument("--emit", default=None)
    args = ap.parse_args()

    # TSLOT arms fB (terminal in the reordered path); FSLOT arms tB
    # (terminal in the canonical path).  Down templates reuse the same
    # search and are transformed afterwards.
    ptr = "fB" if args.armed == "TSLOT" else "tB"
    path = DOWN_PATH if args.armed == "TSLOT" else UP_PATH
    sols = search(ptr, path, want_all=args.all, limit=args.limit, verbose=True)
    out = []
    for s in sols:
        extras = s.pop("extras", None)
        t = to_down(s) if args.variant == "down" else s
        t["armed"] = args.armed
        t["variant"] = args.variant
        t["extras"] = extras
        out.append(t)
        print(json.dumps(t, default=list))
    if args.emit and out:
        with open(args.emit, "w") as fh:
            for t in out:
                fh.write(json.dumps(t, default=list) + "\n")
    print(f"total solutions: {len(out)}", file=sys.stderr)


if __name__ == "__main__":
    main()
