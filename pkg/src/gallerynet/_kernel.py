"""Integer-frame visibility kernel.

Callers translate the polygon so the query point sits at the origin and scale
everything to integers; from then on every predicate is exact integer
arithmetic. Rationals appear only in the (few) values handed back.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cmp_to_key

from .geometry import Location, SimplePolygon, locate_int


def frame(polygon: SimplePolygon, points) -> tuple[list[tuple[int, int]], list[tuple[int, int]], int]:
    """Scale polygon and ``points`` to a common integer grid.

    Returns the integer vertices, the integer points and the extra factor
    applied on top of ``polygon.scale``.
    """
    m = 1
    for p in points:
        m = math.lcm(m, p.x.denominator, p.y.denominator)
    s = polygon.scale * m
    verts = [(x * m, y * m) for x, y in polygon.int_vertices]
    ipts = [(int(p.x * s), int(p.y * s)) for p in points]
    return verts, ipts, m


def _half(d) -> int:
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    c = a[0] * b[1] - a[1] * b[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


_angle_key = cmp_to_key(_angle_cmp)


def same_direction(a, b) -> bool:
    return a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[0] + a[1] * b[1] > 0


def in_open_wedge(u, w, r) -> bool:
    """Is direction ``r`` strictly inside the counterclockwise sweep from ``u`` to ``w``?"""
    c = u[0] * w[1] - u[1] * w[0]
    cur = u[0] * r[1] - u[1] * r[0]
    crw = r[0] * w[1] - r[1] * w[0]
    if c > 0:
        return cur > 0 and crw > 0
    if c < 0:
        cwr = -crw
        cru = -cur
        return not (cwr >= 0 and cru >= 0)
    if u[0] * w[0] + u[1] * w[1] < 0:
        return cur > 0
    return not same_direction(u, r)


class Elem:
    """One visible boundary piece in angular order around the query point.

    ``a_u``/``b_u`` are the perimeter coordinates of the piece's first and
    last point in sweep order, ``lo``/``hi`` the same sorted. ``da``/``db``
    are the directions (integer vectors) of those points and ``sa``/``sb``
    their distances measured in units of the direction vectors.
    """

    __slots__ = ("a_u", "b_u", "lo", "hi", "da", "db", "sa", "sb", "sector", "gap_before")

    def __init__(self, a_u, b_u, da, db, sa, sb, sector):
        self.a_u = a_u
        self.b_u = b_u
        if a_u <= b_u:
            self.lo, self.hi = a_u, b_u
        else:
            self.lo, self.hi = b_u, a_u
        self.da = da
        self.db = db
        self.sa = sa
        self.sb = sb
        self.sector = sector
        self.gap_before = False

    def __repr__(self):
        return f"Elem({self.a_u}->{self.b_u}, sector={self.sector}, gap={self.gap_before})"


def _u(i: int, t: Fraction, n: int) -> Fraction:
    if t == 1:
        return Fraction(i + 1) if i + 1 < n else Fraction(n)
    return i + t


def _norm_u(u: Fraction, n: int) -> Fraction:
    return Fraction(0) if u == n else u


class View:
    """Result of :func:`view`: angular elements plus query classification."""

    __slots__ = ("elements", "where", "n")

    def __init__(self, elements, where, n):
        self.elements = elements
        self.where = where
        self.n = n


def view(verts: list[tuple[int, int]]) -> View:
    """Visible boundary of the origin inside the integer polygon ``verts``.

    The origin must lie in the closed polygon.
    """
    n = len(verts)
    at_vertex = -1
    on_edge = -1
    for i in range(n):
        if verts[i][0] == 0 and verts[i][1] == 0:
            at_vertex = i
            break
    if at_vertex < 0:
        for i in range(n):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % n]
            if ax * by - ay * bx == 0 and ax * bx + ay * by < 0:
                on_edge = i
                break
    if at_vertex >= 0:
        wedge = (verts[(at_vertex + 1) % n], verts[at_vertex - 1])
        where = Location.BOUNDARY
    elif on_edge >= 0:
        wedge = (verts[(on_edge + 1) % n], verts[on_edge])
        where = Location.BOUNDARY
    else:
        wedge = None
        where = Location.INTERIOR

    dirs = sorted((v for v in verts if v != (0, 0)), key=_angle_key)
    uniq = []
    for d in dirs:
        if not uniq or not same_direction(uniq[-1], d):
            uniq.append(d)
    if len(uniq) > 1 and same_direction(uniq[0], uniq[-1]):
        uniq.pop()
    dirs = uniq
    D = len(dirs)

    edges = []
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        edges.append((ax, ay, bx - ax, by - ay))

    # sectors: first edge hit strictly inside each open angular interval
    sectors = []
    for k in range(D):
        da = dirs[k]
        db = dirs[(k + 1) % D]
        c = da[0] * db[1] - da[1] * db[0]
        if D > 1 and c > 0:
            r = (da[0] + db[0], da[1] + db[1])
        else:
            r = (-da[1], da[0])
        if wedge is not None and not in_open_wedge(wedge[0], wedge[1], r):
            sectors.append(None)
            continue
        rx, ry = r
        best = -1
        bsn = bden = 0
        for i, (ax, ay, ex, ey) in enumerate(edges):
            den = rx * ey - ry * ex
            if den == 0:
                continue
            tn = ax * ry - ay * rx
            sn = ax * ey - ay * ex
            if den < 0:
                den, tn, sn = -den, -tn, -sn
            if tn < 0 or tn > den or sn <= 0:
                continue
            if best < 0 or sn * bden < bsn * den:
                best, bsn, bden = i, sn, den
        if best < 0:
            sectors.append(None)
            continue
        ax, ay, ex, ey = edges[best]
        ends = []
        for d in (da, db):
            den = d[0] * ey - d[1] * ex
            tn = ax * d[1] - ay * d[0]
            sn = ax * ey - ay * ex
            ends.append((Fraction(tn, den), Fraction(sn, den)))
        (ta, sa), (tb, sb) = ends
        el = Elem(_u(best, ta, n), _u(best, tb, n), da, db, sa, sb, True)
        sectors.append(el)

    # critical rays: everything visible exactly along a vertex direction
    rays = []
    for k in range(D):
        rays.append(_ray(verts, edges, dirs[k], n))

    elements: list[Elem] = []
    gap = False
    for k in range(D):
        prev = sectors[k - 1]
        nxt = sectors[k]
        if prev is None:
            gap = True
        if prev is not None and nxt is not None:
            ascending = prev.sb <= nxt.sa
        else:
            ascending = prev is None
        for s0, s1, u0, u1 in sorted(rays[k], key=lambda e: e[0], reverse=not ascending):
            if not ascending:
                s0, s1, u0, u1 = s1, s0, u1, u0
            if u0 == u1:
                nu = _norm_u(u0, n)
                if prev is not None and _norm_u(prev.b_u, n) == nu:
                    continue
                if nxt is not None and _norm_u(nxt.a_u, n) == nu:
                    continue
            el = Elem(u0, u1, dirs[k], dirs[k], s0, s1, False)
            el.gap_before = gap
            gap = False
            elements.append(el)
        if nxt is not None:
            nxt.gap_before = gap
            gap = False
            elements.append(nxt)
    if gap and elements:
        elements[0].gap_before = True
    return View(elements, where, n)


def _ray(verts, edges, d, n):
    """Boundary points visible along ray ``d`` from the origin.

    Returns ``(s_start, s_end, u_start, u_end)`` tuples with ``s`` in units
    of ``d``; points have ``s_start == s_end``.
    """
    dx, dy = d
    dd = dx * dx + dy * dy
    hits = []  # (s0, s1, i, t0, t1)
    for i, (ax, ay, ex, ey) in enumerate(edges):
        den = dx * ey - dy * ex
        if den != 0:
            tn = ax * dy - ay * dx
            sn = ax * ey - ay * ex
            if den < 0:
                den, tn, sn = -den, -tn, -sn
            # sn == 0 is the origin itself; the edges through it cover it
            if 0 <= tn <= den and sn > 0:
                s = Fraction(sn, den)
                t = Fraction(tn, den)
                hits.append((s, s, i, t, t))
        elif ax * dy - ay * dx == 0:
            sa = ax * dx + ay * dy
            sb = (ax + ex) * dx + (ay + ey) * dy
            if max(sa, sb) <= 0:
                continue
            # param along edge as function of s: t = (s*dd - sa)/(sb - sa)
            lo, hi = (sa, sb) if sa <= sb else (sb, sa)
            lo = max(lo, 0)
            s0 = Fraction(lo, dd)
            s1 = Fraction(hi, dd)
            t0 = Fraction(lo - sa, sb - sa)
            t1 = Fraction(hi - sa, sb - sa)
            hits.append((s0, s1, i, t0, t1))
    if not hits:
        return []
    breaks = sorted({h[0] for h in hits} | {h[1] for h in hits} | {Fraction(0)})
    segs = [(h[0], h[1]) for h in hits if h[0] != h[1]]
    stop = breaks[0]
    for j in range(len(breaks) - 1):
        a, b = breaks[j], breaks[j + 1]
        covered = any(s0 <= a and b <= s1 for s0, s1 in segs)
        if not covered:
            mid = (a + b) / 2
            loc = locate_int(verts, dx * mid.numerator, dy * mid.numerator, mid.denominator)
            if loc is Location.EXTERIOR:
                break
        stop = b
    out = []
    for s0, s1, i, t0, t1 in hits:
        if s0 > stop:
            continue
        if s1 > stop:
            # clip the collinear run at the stopping point
            t1 = t0 + (t1 - t0) * (stop - s0) / (s1 - s0)
            s1 = stop
        out.append((s0, s1, _u(i, t0, n), _u(i, t1, n)))
    return out
