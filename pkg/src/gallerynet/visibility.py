"""Visibility queries inside a simple polygon.

Visibility is closed: a segment may graze reflex vertices or run along
boundary edges. All answers are exact.
"""

from __future__ import annotations

import enum
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import _kernel
from .clipping import fan_triangles, residue_after, triangulate
from .geometry import (
    Arc,
    Location,
    Point,
    PointOutsidePolygon,
    SimplePolygon,
    cross,
    dot,
    locate,
    locate_int,
)


def _require_inside(polygon: SimplePolygon, p: Point) -> Location:
    loc = locate(polygon, p)
    if loc is Location.EXTERIOR:
        raise PointOutsidePolygon(f"({p.x}, {p.y}) lies outside the polygon")
    return loc


def sees(polygon: SimplePolygon, g: Point, q: Point) -> bool:
    """Does the closed segment ``gq`` lie in the closed polygon?"""
    _require_inside(polygon, g)
    _require_inside(polygon, q)
    if g == q:
        return True
    verts, (G, Q), _ = _kernel.frame(polygon, (g, q))
    gx, gy = G
    verts = [(x - gx, y - gy) for x, y in verts]
    return _segment_clear(verts, (Q[0] - gx, Q[1] - gy))


def _segment_clear(verts, d) -> bool:
    dx, dy = d
    dd = dx * dx + dy * dy
    n = len(verts)
    breaks = {Fraction(0), Fraction(1)}
    segs = []
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        den = dx * ey - dy * ex
        if den != 0:
            tn = ax * dy - ay * dx
            sn = ax * ey - ay * ex
            if den < 0:
                den, tn, sn = -den, -tn, -sn
            if 0 <= tn <= den and 0 < sn < den:
                breaks.add(Fraction(sn, den))
        elif ax * dy - ay * dx == 0:
            sa = ax * dx + ay * dy
            sb = bx * dx + by * dy
            lo, hi = (sa, sb) if sa <= sb else (sb, sa)
            if hi <= 0 or lo >= dd:
                continue
            s0 = Fraction(max(lo, 0), dd)
            s1 = Fraction(min(hi, dd), dd)
            segs.append((s0, s1))
            breaks.add(s0)
            breaks.add(s1)
    bs = sorted(breaks)
    for j in range(len(bs) - 1):
        a, b = bs[j], bs[j + 1]
        if any(s0 <= a and b <= s1 for s0, s1 in segs):
            continue
        mid = (a + b) / 2
        if locate_int(verts, dx * mid.numerator, dy * mid.numerator,
                      mid.denominator) is Location.EXTERIOR:
            return False
    return True


@dataclass
class BoundaryView:
    """The part of the boundary a point sees.

    ``intervals`` are disjoint closed perimeter ranges inside ``[0, n]``,
    sorted; the point ``u = 0`` is also listed as ``(0, 0)`` whenever an
    interval reaches ``n``. ``elements`` keep the angular order around the
    source and are what tangent classification works from.
    """

    polygon: SimplePolygon
    source: Point
    where: Location
    elements: list
    intervals: list[tuple[Fraction, Fraction]]

    def sees_u(self, u) -> bool:
        u = Fraction(u) % self.polygon.n
        i = bisect_right(self.intervals, (u, _INF)) - 1
        return i >= 0 and self.intervals[i][1] >= u

    def sees_arc(self, arc: Arc) -> bool:
        for s, e in arc.pieces(self.polygon.n):
            i = bisect_right(self.intervals, (e, _INF)) - 1
            if i >= 0 and self.intervals[i][1] >= s:
                return True
        return False

    def site_ranges(self, site_us: Sequence[Fraction]) -> list[tuple[int, int]]:
        """Index ranges ``[lo, hi]`` (inclusive) of sorted site coordinates seen."""
        out = []
        for lo, hi in self.intervals:
            a = bisect_left(site_us, lo)
            b = bisect_right(site_us, hi) - 1
            if a <= b:
                out.append((a, b))
        return out


class _Inf:
    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return True

    def __le__(self, other):
        return isinstance(other, _Inf)

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return isinstance(other, _Inf)

    def __hash__(self):
        return 0


_INF = _Inf()


def visible_boundary(polygon: SimplePolygon, x: Point) -> BoundaryView:
    """Angular sweep around ``x``: every boundary point ``x`` sees."""
    _require_inside(polygon, x)
    verts, (X,), _ = _kernel.frame(polygon, (x,))
    verts = [(vx - X[0], vy - X[1]) for vx, vy in verts]
    v = _kernel.view(verts)
    n = polygon.n
    raw = []
    for el in v.elements:
        lo, hi = el.lo, el.hi
        if lo == n:
            lo = hi = Fraction(0)
        raw.append((lo, hi))
    raw.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    intervals = [(a, b) for a, b in merged]
    if intervals and intervals[-1][1] == n and intervals[0][0] != 0:
        intervals.insert(0, (Fraction(0), Fraction(0)))
    return BoundaryView(polygon, x, v.where, v.elements, intervals)


@dataclass(frozen=True)
class VisibilityRegion:
    """Points seen from ``source``, as a (possibly collinear-vertex) polygon."""

    polygon: SimplePolygon
    source: Point

    def triangles(self) -> list[tuple[Point, Point, Point]]:
        verts = self.polygon.vertices
        if self.source in verts:
            return fan_triangles(verts, verts.index(self.source))
        return triangulate(verts)


def visibility_region(polygon: SimplePolygon, g: Union[Point, "BoundaryView"]) -> VisibilityRegion:
    """Region seen from a boundary (or interior) point via the angular sweep."""
    view = g if isinstance(g, BoundaryView) else visible_boundary(polygon, g)
    src = view.source
    els = view.elements
    chain: list[Point] = []
    if view.where is Location.BOUNDARY:
        start = next((i for i, e in enumerate(els) if e.gap_before), 0)
        els = els[start:] + els[:start]
        chain.append(src)
    for el in els:
        if not el.sector:
            continue
        chain.append(polygon.point_at(el.a_u))
        chain.append(polygon.point_at(el.b_u))
    pts: list[Point] = []
    for p in chain:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    # drop straight-through vertices, except the source which the fan needs
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if b != src and cross(b - a, c - b) == 0 and dot(b - a, c - b) > 0:
                del pts[i]
                changed = True
                break
    return VisibilityRegion(SimplePolygon(pts), src)


def weakly_sees(polygon: SimplePolygon, g: Point, arc: Arc) -> bool:
    """Does ``g`` see at least one point of the closed perimeter arc?"""
    if arc.is_empty:
        return False
    return visible_boundary(polygon, g).sees_arc(arc)


class Tangent(enum.Enum):
    NONE = "none"
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"


@dataclass(frozen=True)
class TangentLabel:
    tangent: Tangent
    owns: bool

    @property
    def has_tangent(self) -> bool:
        return self.tangent is not Tangent.NONE


def _split_parts(view: BoundaryView, arcs: Sequence[Arc]):
    """Cut every angular element at fragment boundaries.

    Yields ``(fid, a_u, b_u, elem, first, last)`` in sweep order; ``first``
    and ``last`` flag the pieces carrying the element's own endpoints.
    """
    n = view.polygon.n
    pieces = []
    for fid, arc in enumerate(arcs):
        for s, e in arc.pieces(n):
            pieces.append((s, e, fid))
    pieces.sort(key=lambda p: (p[0], p[1]))
    # a true partition has sorted ends too; overlapping arcs fall back to a scan
    ends = [p[1] for p in pieces]
    tiled = all(a <= b for a, b in zip(ends, ends[1:]))
    at_zero = [p[2] for p in pieces if p[0] == 0]
    for el in view.elements:
        lo, hi = el.lo, el.hi
        if lo == n:
            lo = hi = Fraction(0)
        hits = []
        for k in range(bisect_left(ends, lo) if tiled else 0, len(pieces)):
            s, e, fid = pieces[k]
            if s > hi:
                break
            if e < lo:
                continue
            hits.append((max(s, lo), min(e, hi), fid))
        if hi == n:
            hits.extend((Fraction(n), Fraction(n), fid) for fid in at_zero)
        ascending = el.a_u <= el.b_u
        hits.sort(key=lambda h: (h[0], h[1]), reverse=not ascending)
        # collapse duplicates produced by the 0/n seam
        seen = set()
        uniq = []
        for h in hits:
            if h not in seen:
                seen.add(h)
                uniq.append(h)
        for k, (a, b, fid) in enumerate(uniq):
            if not ascending:
                a, b = b, a
            yield fid, a, b, el, k == 0, k == len(uniq) - 1


def classify_fragments(polygon: SimplePolygon, x: Point, arcs: Sequence[Arc],
                       view: Optional[BoundaryView] = None) -> list[tuple[int, TangentLabel]]:
    """Fragments seen from ``x`` with their tangent/ownership labels.

    ``arcs`` must partition the perimeter in perimeter order (neighbours
    share endpoints). A left tangent means the fragment is entered, sweeping
    in perimeter order, by a jump from a farther point to a nearer one; a
    right tangent means it is left by a jump from near to far.
    """
    if view is None:
        view = visible_boundary(polygon, x)
    n = polygon.n
    parts = list(_split_parts(view, arcs))
    if not parts:
        return []
    left = set()
    right = set()
    m = len(parts)
    for k in range(m):
        fp, _, pb, pel, _, plast = parts[k - 1]
        fq, qa, _, qel, qfirst, _ = parts[k]
        if not (plast and qfirst) or pel is qel:
            continue  # split inside one element: continuous
        if qel.gap_before or (pb % n) == (qa % n):
            continue
        # a jump along one ray; the tangent belongs to the near side
        if pel.sb < qel.sa:
            right.add(fp)
        elif qel.sa < pel.sb:
            left.add(fq)
    seen = sorted({p[0] for p in parts})
    owns = _ownership(polygon, x, parts, len(seen))
    out = []
    for fid in seen:
        if fid in left and fid in right:
            t = Tangent.BOTH
        elif fid in left:
            t = Tangent.LEFT
        elif fid in right:
            t = Tangent.RIGHT
        else:
            t = Tangent.NONE
        out.append((fid, TangentLabel(t, fid in owns)))
    return out


def _ownership(polygon, x, parts, nseen) -> set:
    """Fragments whose visible part spans an angle of at least pi around ``x``.

    The span of a set of directions is ``2*pi`` minus the largest angular
    gap between them, so a fragment owns ``x`` iff no gap exceeds ``pi``.
    """
    if nseen == 1:
        return {parts[0][0]}
    dirs: dict[int, set] = {}
    for fid, a, b, *_ in parts:
        for u in (a, b):
            d = polygon.point_at(u) - x
            if d.x or d.y:
                dirs.setdefault(fid, set()).add(_direction(d))
    owned = set()
    for fid, ds in dirs.items():
        ds = sorted(ds, key=_kernel._angle_key)
        if len(ds) < 2:
            continue
        if all(cross(ds[i], ds[(i + 1) % len(ds)]) >= 0 for i in range(len(ds))):
            owned.add(fid)
    return owned


def _direction(d: Point) -> tuple:
    """Canonical primitive direction of a rational vector."""
    m = math.lcm(d.x.denominator, d.y.denominator)
    x, y = int(d.x * m), int(d.y * m)
    g = math.gcd(x, y)
    return (x // g, y // g)


class _WholePolygon:
    def __repr__(self):
        return "WholePolygon"


WholePolygon = _WholePolygon()


class _Covered:
    def __repr__(self):
        return "Covered"

    def __bool__(self):
        return False


Covered = _Covered()


@dataclass(frozen=True)
class Witness:
    point: Point
    seen_fragments: Optional[tuple] = field(default=None)


Target = Union[_WholePolygon, Sequence[Point]]


def uncovered_witness(polygon: SimplePolygon, target: Target,
                      regions: Sequence[VisibilityRegion]):
    """Either :data:`Covered` or a :class:`Witness` no region contains."""
    if target is WholePolygon:
        pieces = residue_after(triangulate(polygon.vertices),
                               [r.triangles() for r in regions])
        if not pieces:
            return Covered
        best = None
        for piece in pieces:
            for tri in fan_triangles(piece, 0):
                key = tuple(sorted(tri))
                if best is None or key < best:
                    best = key
        a, b, c = best
        return Witness(Point((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3))
    for p in target:
        # exact test against the sources: region polygons omit zero-width spokes
        if not any(sees(polygon, r.source, p) for r in regions):
            return Witness(p)
    return Covered
