"""Exact triangulation and convex-piece subtraction.

The verifier needs ``P minus the union of visibility regions``. Regions are
broken into triangles and subtracted one at a time from a list of convex
pieces; a convex piece minus a triangle is at most three convex pieces, one
per triangle side. Zero-area leftovers are dropped: the residue of a closed
polygon minus closed regions is open in the polygon, so it is empty exactly
when it has no area.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .geometry import Point, signed_area

Tri = tuple[Point, Point, Point]


class TriangulationError(RuntimeError):
    pass


def _turn(a, b, c) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _in_closed_triangle(p, a, b, c) -> bool:
    return _turn(a, b, p) >= 0 and _turn(b, c, p) >= 0 and _turn(c, a, p) >= 0


def triangulate(vertices: Sequence[Point]) -> list[Tri]:
    """Ear clipping for a counterclockwise simple polygon.

    Straight-through vertices are dropped first, so every triangle has
    positive area; the triangles' union is the polygon.
    """
    idx = list(range(len(vertices)))
    pts = vertices
    out: list[Tri] = []

    def prune():
        changed = True
        while changed and len(idx) > 3:
            changed = False
            for k in range(len(idx)):
                a, b, c = pts[idx[k - 1]], pts[idx[k]], pts[idx[(k + 1) % len(idx)]]
                if _turn(a, b, c) == 0:
                    del idx[k]
                    changed = True
                    break

    prune()
    while len(idx) > 3:
        m = len(idx)
        clipped = False
        for k in range(m):
            ia, ib, ic = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = pts[ia], pts[ib], pts[ic]
            if _turn(a, b, c) <= 0:
                continue
            if any(_in_closed_triangle(pts[j], a, b, c)
                   for j in idx if j not in (ia, ib, ic)):
                continue
            out.append((a, b, c))
            del idx[k]
            clipped = True
            break
        if not clipped:
            raise TriangulationError("no ear found; polygon is not simple")
        prune()
    a, b, c = (pts[i] for i in idx)
    if _turn(a, b, c) > 0:
        out.append((a, b, c))
    elif _turn(a, b, c) < 0:
        raise TriangulationError("clockwise remainder")
    return out


def fan_triangles(vertices: Sequence[Point], apex: int) -> list[Tri]:
    """Fan from ``vertices[apex]``; valid for polygons star-shaped from the apex.

    Degenerate (zero-area) fan triangles are skipped.
    """
    m = len(vertices)
    o = vertices[apex]
    out = []
    for k in range(1, m - 1):
        b = vertices[(apex + k) % m]
        c = vertices[(apex + k + 1) % m]
        if _turn(o, b, c) > 0:
            out.append((o, b, c))
    return out


def clip_halfplane(poly: Sequence[Point], a: Point, b: Point, keep_left: bool) -> list[Point]:
    """Convex polygon intersected with the closed half-plane left (or right) of ``ab``."""
    out: list[Point] = []
    m = len(poly)
    if m == 0:
        return out
    sgn = 1 if keep_left else -1
    vals = [sgn * _turn(a, b, p) for p in poly]
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        vp, vq = vals[i], vals[(i + 1) % m]
        if vp >= 0:
            out.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            out.append(Point(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)))
    return _clean(out)


def _clean(poly: list[Point]) -> list[Point]:
    pts: list[Point] = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            if _turn(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                del pts[i]
                changed = True
                break
    return pts if len(pts) >= 3 else []


def _bbox(poly):
    xs = [p.x for p in poly]
    ys = [p.y for p in poly]
    return min(xs), min(ys), max(xs), max(ys)


def subtract_triangle(piece: list[Point], tri: Tri) -> list[list[Point]]:
    """Convex ``piece`` minus closed triangle, as positive-area convex pieces."""
    a, b, c = tri
    inter = piece
    for p, q in ((a, b), (b, c), (c, a)):
        inter = clip_halfplane(inter, p, q, True)
        if not inter:
            return [piece]
    out = []
    rest = piece
    for p, q in ((a, b), (b, c), (c, a)):
        outside = clip_halfplane(rest, p, q, False)
        if outside:
            out.append(outside)
        rest = clip_halfplane(rest, p, q, True)
        if not rest:
            break
    return out


def residue_after(pieces: Sequence[Sequence[Point]],
                  regions: Sequence[Sequence[Tri]]) -> list[list[Point]]:
    """Subtract every triangle of every region, in input order."""
    work = [list(p) for p in pieces]
    boxes = [_bbox(p) for p in work]
    for tris in regions:
        for tri in tris:
            tb = _bbox(tri)
            nxt, nboxes = [], []
            for piece, pb in zip(work, boxes):
                if pb[2] <= tb[0] or tb[2] <= pb[0] or pb[3] <= tb[1] or tb[3] <= pb[1]:
                    nxt.append(piece)
                    nboxes.append(pb)
                    continue
                for q in subtract_triangle(piece, tri):
                    nxt.append(q)
                    nboxes.append(_bbox(q) if q is not piece else pb)
            work, boxes = nxt, nboxes
            if not work:
                return []
    return work


def polygon_area(poly: Sequence[Point]) -> Fraction:
    return signed_area(poly)


__all__ = [
    "TriangulationError",
    "triangulate",
    "fan_triangles",
    "clip_halfplane",
    "subtract_triangle",
    "residue_after",
    "polygon_area",
]
