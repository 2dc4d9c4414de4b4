"""Exact rational 2D geometry kernel.

Every predicate works on exact rationals (``fractions.Fraction``); no
floating point ever enters a sign computation.  All values are immutable
and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]


def scalar(value: ScalarLike) -> Fraction:
    """Coerce to an exact rational. Floats are rejected on purpose."""
    if isinstance(value, float):
        raise TypeError("floating point is not allowed in exact geometry")
    return Fraction(value)


class GeometryError(ValueError):
    pass


class DegenerateSegment(GeometryError):
    pass


class DegenerateTriangle(GeometryError):
    pass


class SharedPoint(GeometryError):
    pass


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __init__(self, x: ScalarLike, y: ScalarLike):
        object.__setattr__(self, "x", scalar(x))
        object.__setattr__(self, "y", scalar(y))

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def cross(self, other: "Point") -> Fraction:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Point") -> Fraction:
        return self.x * other.x + self.y * other.y

    def sortkey(self):
        return (self.x, self.y)

    def __repr__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise DegenerateSegment(f"zero-length segment at {self.a}")


@dataclass(frozen=True)
class Line:
    """A*x + B*y = C with integer coefficients, gcd 1, leading (A,B) positive."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __init__(self, A: ScalarLike, B: ScalarLike, C: ScalarLike):
        a, b, c = scalar(A), scalar(B), scalar(C)
        if a == 0 and b == 0:
            raise GeometryError("degenerate line: A = B = 0")
        # clear denominators, reduce, fix sign
        m = a.denominator * b.denominator * c.denominator
        ia, ib, ic = int(a * m), int(b * m), int(c * m)
        g = gcd(gcd(abs(ia), abs(ib)), abs(ic)) or 1
        ia, ib, ic = ia // g, ib // g, ic // g
        lead = ia if ia != 0 else ib
        if lead < 0:
            ia, ib, ic = -ia, -ib, -ic
        object.__setattr__(self, "A", Fraction(ia))
        object.__setattr__(self, "B", Fraction(ib))
        object.__setattr__(self, "C", Fraction(ic))

    @staticmethod
    def through(p: Point, q: Point) -> "Line":
        if p == q:
            raise GeometryError("two distinct points required")
        return Line(q.y - p.y, p.x - q.x, (q.y - p.y) * p.x + (p.x - q.x) * p.y)

    def side(self, p: Point) -> int:
        """Sign of A*x + B*y - C: +1 / -1 strictly off the line, 0 on it."""
        v = self.A * p.x + self.B * p.y - self.C
        return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Wedge:
    """Region of directions at ``apex`` from ray_lo counterclockwise to ray_hi.

    ray_lo must be strictly clockwise of ray_hi and the opening must be
    convex (angle < pi), i.e. cross(ray_lo, ray_hi) > 0.
    """

    apex: Point
    ray_lo: Point
    ray_hi: Point

    def __post_init__(self):
        zero = Point(0, 0)
        if self.ray_lo == zero or self.ray_hi == zero:
            raise GeometryError("wedge rays must be nonzero")
        if self.ray_lo.cross(self.ray_hi) <= 0:
            raise GeometryError("ray_lo must be strictly clockwise of ray_hi (angle < pi)")

    def contains(self, p: Point, strict: bool = True) -> bool:
        d = p - self.apex
        lo = self.ray_lo.cross(d)
        hi = d.cross(self.ray_hi)
        if strict:
            return lo > 0 and hi > 0
        return lo >= 0 and hi >= 0


class Orientation(Enum):
    CCW = 1
    COLLINEAR = 0
    CW = -1


class Relation(Enum):
    Disjoint = "disjoint"
    SharedEndpointOnly = "shared-endpoint"
    ProperCrossing = "proper-crossing"
    Touching = "touching"
    Overlapping = "overlapping"


class Position(Enum):
    Inside = "inside"
    Boundary = "boundary"
    Outside = "outside"


def cross3(p: Point, q: Point, r: Point) -> Fraction:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orient(p: Point, q: Point, r: Point) -> Orientation:
    c = cross3(p, q, r)
    if c > 0:
        return Orientation.CCW
    if c < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def _on_closed_segment(p: Point, s: Segment) -> bool:
    # collinear + between the endpoints (inclusive)
    if cross3(s.a, s.b, p) != 0:
        return False
    return (min(s.a.x, s.b.x) <= p.x <= max(s.a.x, s.b.x)
            and min(s.a.y, s.b.y) <= p.y <= max(s.a.y, s.b.y))


def segment_relation(s1: Segment, s2: Segment) -> Relation:
    """Classify how two segments meet, exactly.

    ProperCrossing: interiors meet in one point.  Touching: an endpoint of
    one lies on the closed other without being a shared endpoint.
    Overlapping: collinear with a common sub-segment of positive length.
    """
    a, b, c, d = s1.a, s1.b, s2.a, s2.b
    o1 = cross3(a, b, c)
    o2 = cross3(a, b, d)
    o3 = cross3(c, d, a)
    o4 = cross3(c, d, b)

    if o1 == 0 and o2 == 0:
        # collinear: compare 1D intervals along the dominant axis
        if a.x != b.x:
            key = lambda p: p.x
        else:
            key = lambda p: p.y
        lo1, hi1 = sorted((key(a), key(b)))
        lo2, hi2 = sorted((key(c), key(d)))
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return Relation.Disjoint
        if lo < hi:
            return Relation.Overlapping
        # single contact point; it is an endpoint of both segments
        return Relation.SharedEndpointOnly

    if (o1 > 0) != (o2 > 0) and o1 != 0 and o2 != 0 \
            and (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0:
        return Relation.ProperCrossing

    shared = ({a, b} & {c, d})
    contacts = []
    for p, s in ((c, s1), (d, s1), (a, s2), (b, s2)):
        if _on_closed_segment(p, s):
            contacts.append(p)
    if not contacts:
        return Relation.Disjoint
    if shared and all(p in shared for p in contacts):
        return Relation.SharedEndpointOnly
    return Relation.Touching


def point_in_triangle(p: Point, t: tuple[Point, Point, Point]) -> Position:
    u, v, w = t
    area = cross3(u, v, w)
    if area == 0:
        raise DegenerateTriangle("collinear triangle vertices")
    if area < 0:
        u, v, w = u, w, v
    s1 = cross3(u, v, p)
    s2 = cross3(v, w, p)
    s3 = cross3(w, u, p)
    if s1 > 0 and s2 > 0 and s3 > 0:
        return Position.Inside
    if s1 < 0 or s2 < 0 or s3 < 0:
        return Position.Outside
    return Position.Boundary


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Extreme points in CCW order, starting at the lexicographic minimum.

    Collinear boundary points are excluded; duplicates tolerated.
    """
    pts = sorted(set(points), key=Point.sortkey)
    if not pts:
        raise GeometryError("convex_hull of empty set")
    if len(pts) == 1:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross3(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2 and len(pts) >= 2:
        # all collinear: keep only the two extremes
        hull = [pts[0], pts[-1]]
    return hull


def point_in_convex_polygon(p: Point, hull: Sequence[Point]) -> Position:
    """Position of p relative to a CCW hull (also handles point/segment hulls)."""
    if len(hull) == 1:
        return Position.Boundary if p == hull[0] else Position.Outside
    if len(hull) == 2:
        return (Position.Boundary
                if _on_closed_segment(p, Segment(hull[0], hull[1]))
                else Position.Outside)
    on_edge = False
    for i in range(len(hull)):
        c = cross3(hull[i], hull[(i + 1) % len(hull)], p)
        if c < 0:
            return Position.Outside
        if c == 0:
            on_edge = True
    return Position.Boundary if on_edge else Position.Inside


def _hulls_intersect(h1: Sequence[Point], h2: Sequence[Point]) -> bool:
    # closed convex sets: boundary contact counts as intersecting
    for p in h1:
        if point_in_convex_polygon(p, h2) is not Position.Outside:
            return True
    for p in h2:
        if point_in_convex_polygon(p, h1) is not Position.Outside:
            return True
    if len(h1) >= 2 and len(h2) >= 2:
        e1 = [Segment(h1[i], h1[(i + 1) % len(h1)]) for i in range(len(h1))] \
            if len(h1) > 2 else [Segment(h1[0], h1[1])]
        e2 = [Segment(h2[i], h2[(i + 1) % len(h2)]) for i in range(len(h2))] \
            if len(h2) > 2 else [Segment(h2[0], h2[1])]
        for s in e1:
            for t in e2:
                if segment_relation(s, t) is not Relation.Disjoint:
                    return True
    return False


def _closest_point_on_segment(p: Point, s: Segment) -> Point:
    d = s.b - s.a
    t = (p - s.a).dot(d) / d.dot(d)
    if t <= 0:
        return s.a
    if t >= 1:
        return s.b
    return Point(s.a.x + t * d.x, s.a.y + t * d.y)


def _features(hull: Sequence[Point]) -> list[Segment]:
    if len(hull) == 1:
        return []
    if len(hull) == 2:
        return [Segment(hull[0], hull[1])]
    return [Segment(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]


def linear_separator(set_a: Sequence[Point], set_b: Sequence[Point]) -> Optional[Line]:
    """A line with set_a strictly on one side and set_b strictly on the other.

    Decided exactly via convex-hull disjointness; a line touching either
    hull does not count as separating.  Returns None when no separator
    exists.
    """
    if not set_a or not set_b:
        raise GeometryError("both sets must be nonempty")
    if set(set_a) & set(set_b):
        raise SharedPoint("point sets intersect")
    ha = convex_hull(set_a)
    hb = convex_hull(set_b)
    if _hulls_intersect(ha, hb):
        return None

    # disjoint closed convex sets: take the closest pair of points between
    # the hulls (vertex-vertex or vertex-edge) and separate perpendicular
    # to it through the midpoint
    best = None
    for p in ha:
        for feat in _features(hb) or [Segment(hb[0], hb[0] + Point(1, 0))]:
            q = _closest_point_on_segment(p, feat) if len(hb) > 1 else hb[0]
            d2 = (p - q).dot(p - q)
            if best is None or d2 < best[0]:
                best = (d2, p, q)
    for q in hb:
        for feat in _features(ha) or [Segment(ha[0], ha[0] + Point(1, 0))]:
            p = _closest_point_on_segment(q, feat) if len(ha) > 1 else ha[0]
            d2 = (p - q).dot(p - q)
            if best is None or d2 < best[0]:
                best = (d2, p, q)
    _, p, q = best
    mid = Point((p.x + q.x) / 2, (p.y + q.y) / 2)
    n = q - p  # normal direction
    line = Line(n.x, n.y, n.x * mid.x + n.y * mid.y)

    # soundness re-check: strict separation of every input point
    sa = {line.side(pt) for pt in set_a}
    sb = {line.side(pt) for pt in set_b}
    assert len(sa) == 1 and len(sb) == 1 and sa != sb and 0 not in sa | sb
    return line
