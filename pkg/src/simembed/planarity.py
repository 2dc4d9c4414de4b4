"""Exact planarity checking of straight-line drawings and a small-instance
simultaneous-embedding search oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .geom import Point, Relation, Segment, cross3, segment_relation
from .model import Drawing, Instance, validate_instance

Edge = tuple[int, int]


class PlanarityError(ValueError):
    pass


class UndrawnVertex(PlanarityError):
    pass


class CoincidentPoints(PlanarityError):
    pass


class Strategy(Enum):
    Naive = "naive"
    Sweep = "sweep"


@dataclass
class CrossingReport:
    crossings: list = field(default_factory=list)  # (edge, edge, Relation)
    vertex_on_edge: list = field(default_factory=list)  # (vertex, edge)

    @property
    def planar(self) -> bool:
        return not self.crossings and not self.vertex_on_edge


_BAD = (Relation.ProperCrossing, Relation.Touching, Relation.Overlapping)


def _point_on_closed_edge(p: Point, a: Point, b: Point) -> bool:
    if cross3(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def _int_coords(d: Drawing, vertices) -> dict:
    """Clear all denominators at once: exact, but with int-only arithmetic
    in the pairwise tests afterwards."""
    from math import lcm
    dens = [q for v in vertices for q in
            (d.pos[v].x.denominator, d.pos[v].y.denominator)]
    scale = lcm(*dens) if dens else 1
    return {v: (d.pos[v].x.numerator * (scale // d.pos[v].x.denominator),
                d.pos[v].y.numerator * (scale // d.pos[v].y.denominator))
            for v in vertices}


def _cross_int(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_closed_int(p, a, b) -> bool:
    return (_cross_int(a, b, p) == 0
            and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _bad_int(a, b, c, d) -> bool:
    """True iff the closed segments ab and cd meet in anything more than a
    single shared endpoint; mirrors segment_relation's violation classes."""
    d1 = _cross_int(c, d, a)
    d2 = _cross_int(c, d, b)
    d3 = _cross_int(a, b, c)
    d4 = _cross_int(a, b, d)
    if d1 == d2 == 0:  # collinear
        if a[0] != b[0] or c[0] != d[0]:
            lo1, hi1 = min(a[0], b[0]), max(a[0], b[0])
            lo2, hi2 = min(c[0], d[0]), max(c[0], d[0])
        else:
            lo1, hi1 = min(a[1], b[1]), max(a[1], b[1])
            lo2, hi2 = min(c[1], d[1]), max(c[1], d[1])
        if hi1 < lo2 or hi2 < lo1:
            return False
        return max(lo1, lo2) != min(hi1, hi2)  # a positive overlap is bad
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) \
            and d1 and d2 and d3 and d4:
        return True  # proper crossing
    contact = None
    for p, dd, (q, r) in ((a, d1, (c, d)), (b, d2, (c, d)),
                          (c, d3, (a, b)), (d, d4, (a, b))):
        if dd == 0 and _on_closed_int(p, q, r):
            contact = p
            break
    if contact is None:
        return False
    shared = (contact in (a, b)) and (contact in (c, d))
    return not shared


def _edge_pairs_naive(edges):
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            yield i, j


def _edge_pairs_sweep(edges, d):
    # sweep over x: only pairs whose closed x-intervals overlap can meet
    def span(e):
        a, b = d.pos[e[0]], d.pos[e[1]]
        return (min(a.x, b.x), max(a.x, b.x))

    order = sorted(range(len(edges)), key=lambda i: span(edges[i]))
    active: list[int] = []
    for i in order:
        lo, hi = span(edges[i])
        active = [j for j in active if span(edges[j])[1] >= lo]
        for j in active:
            yield (i, j) if i < j else (j, i)
        active.append(i)


def check_drawing(edges: Sequence[Edge], d: Drawing,
                  strategy: Strategy = Strategy.Naive) -> CrossingReport:
    """Report every violating edge pair and every vertex on a foreign edge.

    SharedEndpointOnly contacts are allowed; ProperCrossing, Touching and
    Overlapping are violations, as is any vertex in the closed interior of
    a non-incident edge.
    """
    for u, v in edges:
        if u not in d.pos or v not in d.pos:
            raise UndrawnVertex(f"edge ({u},{v}) has an undrawn endpoint")
        if d.pos[u] == d.pos[v]:
            raise CoincidentPoints(f"edge ({u},{v}) has coincident endpoints")

    rep = CrossingReport()
    pairs = (_edge_pairs_naive(edges) if strategy is Strategy.Naive
             else _edge_pairs_sweep(edges, d))
    ic = _int_coords(d, sorted(d.pos))
    hits = set()
    for i, j in pairs:
        if (i, j) in hits:
            continue
        e, f = edges[i], edges[j]
        if _bad_int(ic[e[0]], ic[e[1]], ic[f[0]], ic[f[1]]):
            hits.add((i, j))
    rep.crossings = [(edges[i], edges[j],
                      segment_relation(Segment(d.pos[edges[i][0]], d.pos[edges[i][1]]),
                                       Segment(d.pos[edges[j][0]], d.pos[edges[j][1]])))
                     for i, j in sorted(hits)]
    for v in sorted(d.pos):
        for e in edges:
            if v in e:
                continue
            if _on_closed_int(ic[v], ic[e[0]], ic[e[1]]):
                rep.vertex_on_edge.append((v, e))
    return rep


def check_simultaneous(i: Instance, d: Drawing,
                       strategy: Strategy = Strategy.Naive):
    """Check tree and path independently on the shared placement."""
    rep = validate_instance(i)
    if not rep.valid:
        raise PlanarityError("invalid instance: " + "; ".join(rep.violations))
    missing = set(range(i.tree.n)) - set(d.pos)
    if missing:
        raise UndrawnVertex(f"vertices not drawn: {sorted(missing)}")
    return (check_drawing(i.tree.edges(), d, strategy),
            check_drawing(i.path.edges(), d, strategy))


class SearchStatus(Enum):
    Found = "found"
    ProvedNone = "proved-none"
    BudgetExceeded = "budget-exceeded"


@dataclass
class SearchResult:
    status: SearchStatus
    drawing: Optional[Drawing] = None
    nodes: int = 0


def _bfs_order(tree) -> list[int]:
    kids: dict[int, list[int]] = {v: [] for v in range(tree.n)}
    for v in range(tree.n):
        p = tree.parent[v]
        if p is not None:
            kids[p].append(v)
    order, queue = [], [tree.root]
    while queue:
        v = queue.pop(0)
        order.append(v)
        queue.extend(kids[v])
    return order


def search_embedding(i: Instance, candidate_points: Sequence[Point],
                     budget: int = 10**7) -> SearchResult:
    """Exhaustive backtracking over vertex-to-point assignments.

    Vertices are placed in tree-BFS order; a partial placement is pruned
    as soon as either graph shows a violation among its completed edges.
    Deterministic: candidates tried in lexicographic order, so the first
    drawing found is the least one under that exploration order.
    """
    rep = validate_instance(i)
    if not rep.valid:
        raise PlanarityError("invalid instance: " + "; ".join(rep.violations))
    n = i.tree.n
    pts = sorted(set(candidate_points), key=Point.sortkey)
    if len(pts) < n:
        return SearchResult(SearchStatus.ProvedNone)

    order = _bfs_order(i.tree)
    rank = {v: k for k, v in enumerate(order)}
    tree_edges = [tuple(sorted((u, v), key=rank.get)) for u, v in i.tree.edges()]
    path_edges = [tuple(sorted((u, v), key=rank.get)) for u, v in i.path.edges()]
    # edges grouped by the later-placed endpoint, per graph
    closing: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(n)}
    for g, es in enumerate((tree_edges, path_edges)):
        for u, v in es:
            closing[v].append((g, u, v))

    # symmetry reduction: first vertex pinned to the least candidate;
    # second kept weakly above it when the candidate set is mirror-symmetric
    # about that horizontal axis (otherwise the cut would lose completeness)
    y0 = pts[0].y
    mirrored = {Point(p.x, 2 * y0 - p.y) for p in pts} == set(pts)

    pos: dict[int, Point] = {}
    used: set[Point] = set()
    nodes = 0
    done_edges: list[list[tuple[int, int]]] = [[], []]  # per graph

    def ok(v: Point, placed_v: int) -> bool:
        # check the newly completed edges against prior ones (and against
        # each other), plus vertex-on-edge both ways
        fresh: list[list[tuple[int, int]]] = [[], []]
        for g, a, b in closing[placed_v]:
            pa, pb = pos[a], v
            for (u, w) in done_edges[g] + fresh[g]:
                pu = pos[u] if u != placed_v else v
                pw = pos[w] if w != placed_v else v
                rel = segment_relation(Segment(pa, pb), Segment(pu, pw))
                if rel in _BAD:
                    return False
            fresh[g].append((a, b))
        # vertex-on-edge: new point vs all done edges; new edges vs all points
        for g in (0, 1):
            for (u, w) in done_edges[g]:
                if placed_v not in (u, w) and _point_on_closed_edge(v, pos[u], pos[w]):
                    return False
        for g, a, b in closing[placed_v]:
            for w, pw in pos.items():
                if w not in (a, placed_v) and _point_on_closed_edge(pw, pos[a], v):
                    return False
        return True

    def rec(k: int) -> Optional[SearchResult]:
        nonlocal nodes
        if k == n:
            d = Drawing(dict(pos))
            tr, pr = check_simultaneous(i, d)
            assert tr.planar and pr.planar
            return SearchResult(SearchStatus.Found, d, nodes)
        v = order[k]
        for p in pts:
            if p in used:
                continue
            if k == 0 and p != pts[0]:
                break
            if k == 1 and mirrored and p.y < y0:
                continue
            nodes += 1
            if nodes > budget:
                return SearchResult(SearchStatus.BudgetExceeded, None, nodes)
            if not ok(p, v):
                continue
            pos[v] = p
            used.add(p)
            for g, a, b in closing[v]:
                done_edges[g].append((a, b))
            res = rec(k + 1)
            for g, a, b in closing[v]:
                done_edges[g].pop()
            used.discard(p)
            del pos[v]
            if res is not None:
                return res
        return None

    res = rec(0)
    if res is None:
        return SearchResult(SearchStatus.ProvedNone, None, nodes)
    return res
