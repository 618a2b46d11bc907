"""Exact geometric primitives on simple polygons.

Every coordinate is a :class:`fractions.Fraction`. Polygons are stored
counterclockwise and the perimeter is parametrised by ``u = edge + t`` with
``t`` in ``[0, 1)``; walking the perimeter means increasing ``u``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

# Perimeter traversal sense. Fragment order, extremal "first/last" and the
# left/right tangent labels are all defined relative to this constant.
PERIMETER_ORIENTATION = "ccw"


class GeometryError(ValueError):
    pass


class TooFewVertices(GeometryError):
    pass


class DuplicateConsecutiveVertex(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    def __init__(self, i: int, j: int):
        super().__init__(f"edges {i} and {j} intersect")
        self.edges = (i, j)


class PointOutsidePolygon(GeometryError):
    pass


def to_scalar(value) -> Fraction:
    """Parse a coordinate exactly. Floats are refused to avoid silent rounding."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact number: {value!r}") from exc
    raise TypeError(f"expected str, int or Fraction, got {type(value).__name__}")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(to_scalar(x), to_scalar(y))

    def __sub__(self, other):  # type: ignore[override]
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, s) -> "Point":
        return Point(self.x * s, self.y * s)


def cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


class Turn(enum.Enum):
    LEFT = 1
    RIGHT = -1
    COLLINEAR = 0


def orient(a, b, c) -> Turn:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if v > 0:
        return Turn.LEFT
    if v < 0:
        return Turn.RIGHT
    return Turn.COLLINEAR


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def on_segment(p, a, b) -> bool:
    """True iff ``p`` lies on the closed segment ``ab``."""
    if orient(a, b, p) is not Turn.COLLINEAR:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a, b, c, d) -> bool:
    """Closed segment intersection test, degenerate contacts included."""
    d1 = _sign(cross(b - a, c - a))
    d2 = _sign(cross(b - a, d - a))
    d3 = _sign(cross(d - c, a - c))
    d4 = _sign(cross(d - c, b - c))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return ((d1 == 0 and on_segment(c, a, b)) or (d2 == 0 and on_segment(d, a, b))
            or (d3 == 0 and on_segment(a, c, d)) or (d4 == 0 and on_segment(b, c, d)))


def signed_area(points: Sequence[Point]) -> Fraction:
    s = Fraction(0)
    n = len(points)
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        s += p.x * q.y - p.y * q.x
    return s / 2


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


def _lcm_denominators(values: Iterable[Fraction]) -> int:
    m = 1
    for v in values:
        m = math.lcm(m, v.denominator)
    return m


class SimplePolygon:
    """A validated simple polygon, vertices in counterclockwise order.

    Build through :func:`validate_polygon`; the constructor trusts its input.
    """

    __slots__ = ("vertices", "n", "reversed_input", "__dict__")

    def __init__(self, vertices: Sequence[Point], reversed_input: bool = False):
        self.vertices: tuple[Point, ...] = tuple(vertices)
        self.n = len(self.vertices)
        self.reversed_input = reversed_input

    def __repr__(self):
        pts = ", ".join(f"({p.x}, {p.y})" for p in self.vertices)
        return f"SimplePolygon([{pts}])"

    def __eq__(self, other):
        return isinstance(other, SimplePolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def orientation(self) -> str:
        return "ccw"

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.n]

    def edges(self):
        for i in range(self.n):
            yield self.edge(i)

    @cached_property
    def area(self) -> Fraction:
        return signed_area(self.vertices)

    @cached_property
    def scale(self) -> int:
        """Common denominator of all vertex coordinates."""
        return _lcm_denominators(c for p in self.vertices for c in p)

    @cached_property
    def int_vertices(self) -> tuple[tuple[int, int], ...]:
        s = self.scale
        return tuple((int(p.x * s), int(p.y * s)) for p in self.vertices)

    def point_at(self, u) -> Point:
        """Position of perimeter coordinate ``u`` (taken modulo ``n``)."""
        u = Fraction(u) % self.n
        i = int(u)
        t = u - i
        a, b = self.edge(i)
        return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))

    def boundary_point(self, p: Point) -> "BoundaryPoint":
        """Perimeter location of a point on the boundary."""
        for i in range(self.n):
            a, b = self.edge(i)
            if on_segment(p, a, b):
                if p == b:
                    continue
                den = b - a
                t = (p.x - a.x) / den.x if den.x != 0 else (p.y - a.y) / den.y
                return BoundaryPoint(i, t)
        raise PointOutsidePolygon(f"{p} is not on the boundary")


def validate_polygon(points: Sequence) -> SimplePolygon:
    """Check simplicity and return the polygon in counterclockwise order."""
    pts = [p if isinstance(p, Point) else Point.of(*p) for p in points]
    n = len(pts)
    if n < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {n}")
    for i in range(n):
        if pts[i] == pts[(i + 1) % n]:
            raise DuplicateConsecutiveVertex(f"vertex {i} repeats")
    for k in range(n):
        prev, v, nxt = pts[k - 1], pts[k], pts[(k + 1) % n]
        # adjacent edges may only share their common vertex
        if orient(prev, v, nxt) is Turn.COLLINEAR and dot(prev - v, nxt - v) > 0:
            raise SelfIntersecting((k - 1) % n, k)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = pts[j], pts[(j + 1) % n]
            if segments_intersect(a, b, c, d):
                raise SelfIntersecting(i, j)
    area = signed_area(pts)
    if area == 0:
        raise SelfIntersecting(0, n - 1)
    if area < 0:
        return SimplePolygon([pts[0]] + pts[:0:-1], reversed_input=True)
    return SimplePolygon(pts)


class BoundaryPoint(NamedTuple):
    """A perimeter position: ``param`` in ``[0, 1)`` along edge ``edge_index``."""

    edge_index: int
    param: Fraction

    @classmethod
    def canonical(cls, edge_index: int, param, n: int) -> "BoundaryPoint":
        param = Fraction(param)
        if param == 1:
            return cls((edge_index + 1) % n, Fraction(0))
        if not 0 <= param < 1:
            raise ValueError("param must lie in [0, 1]")
        return cls(edge_index % n, param)

    @classmethod
    def from_u(cls, u, n: int) -> "BoundaryPoint":
        u = Fraction(u) % n
        i = int(u)
        return cls(i, u - i)

    @property
    def u(self) -> Fraction:
        return self.edge_index + self.param

    def position(self, polygon: SimplePolygon) -> Point:
        return polygon.point_at(self.u)


def boundary_between(a: BoundaryPoint, b: BoundaryPoint, c: BoundaryPoint) -> bool:
    """Is ``b`` on the closed perimeter arc running from ``a`` forward to ``c``?"""
    ua, ub, uc = a.u, b.u, c.u
    if ua <= uc:
        return ua <= ub <= uc
    return ub >= ua or ub <= uc


@dataclass(frozen=True)
class Arc:
    """Closed perimeter arc from ``start`` forward to ``end`` (coordinates ``u``).

    ``kind`` is ``"arc"``, ``"full"`` (whole perimeter, walked from
    ``start``) or ``"empty"``.
    """

    start: Fraction
    end: Fraction
    kind: str = "arc"

    @classmethod
    def full(cls, anchor=Fraction(0)) -> "Arc":
        return cls(Fraction(anchor), Fraction(anchor), "full")

    @classmethod
    def empty(cls) -> "Arc":
        return cls(Fraction(0), Fraction(0), "empty")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def is_full(self) -> bool:
        return self.kind == "full"

    def contains(self, u) -> bool:
        if self.kind == "empty":
            return False
        if self.kind == "full":
            return True
        s, e = self.start, self.end
        if s <= e:
            return s <= u <= e
        return u >= s or u <= e

    def complement(self) -> "Arc":
        """Closure of the rest of the perimeter; shares both endpoints."""
        if self.kind == "full":
            return Arc.empty()
        if self.kind == "empty":
            return Arc.full()
        if self.start == self.end:
            return Arc.full(self.start)
        return Arc(self.end, self.start)

    def pieces(self, n: int) -> list[tuple[Fraction, Fraction]]:
        """Non-wrapping closed coordinate ranges inside ``[0, n]`` covering the arc."""
        if self.kind == "empty":
            return []
        if self.kind == "full":
            return [(Fraction(0), Fraction(n))]
        s, e = self.start, self.end
        if s <= e:
            return [(s, e)]
        return [(s, Fraction(n)), (Fraction(0), e)]


def locate(polygon: SimplePolygon, p: Point) -> Location:
    """Exact point location by winding number."""
    s = polygon.scale
    m = math.lcm(p.x.denominator, p.y.denominator)
    X = int(p.x * s * m)
    Y = int(p.y * s * m)
    return locate_int(polygon.int_vertices, X, Y, m)


def locate_int(verts, X: int, Y: int, W: int) -> Location:
    """Locate the homogeneous point ``(X/W, Y/W)``, ``W > 0``, in an integer ring."""
    wn = 0
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        ayW = ay * W
        byW = by * W
        cr = (bx - ax) * (Y - ayW) - (by - ay) * (X - ax * W)
        if cr == 0:
            axW = ax * W
            bxW = bx * W
            if (min(axW, bxW) <= X <= max(axW, bxW)
                    and min(ayW, byW) <= Y <= max(ayW, byW)):
                return Location.BOUNDARY
        if ayW <= Y:
            if byW > Y and cr > 0:
                wn += 1
        elif byW <= Y and cr < 0:
            wn -= 1
    return Location.INTERIOR if wn != 0 else Location.EXTERIOR


def centroid(points: Sequence[Point]) -> Point:
    k = len(points)
    return Point(sum((p.x for p in points), Fraction(0)) / k,
                 sum((p.y for p in points), Fraction(0)) / k)
