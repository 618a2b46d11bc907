"""Guard sites, doubling weights and equal-weight perimeter fragmentation.

Weights live on a cumulative axis: site ``j`` (sites sorted by perimeter
position) occupies ``[S_{j-1}, S_j)`` where ``S`` are prefix sums of
``2**z``. A fragment is a half-open interval of that axis. Its geometric
extent runs from the site holding its lower end to the site holding its upper
end, so neighbouring fragments share an endpoint site and a heavy site may
belong to several fragments.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Optional, Sequence

from .geometry import Arc, BoundaryPoint, Point, SimplePolygon


class QuadraticFallback(Exception):
    """The hierarchy is degenerate at this epsilon; use the quadratic net."""

    def __init__(self, params: "NetParams"):
        super().__init__(f"1/epsilon = {params.inverse} <= 16: use the quadratic net")
        self.params = params


class RootHasNoComplement(ValueError):
    pass


@dataclass(frozen=True)
class GuardSite:
    id: int
    location: BoundaryPoint
    point: Point


class SiteSet:
    """Candidate guard sites on a polygon, ordered by perimeter position.

    Site ids are their rank in perimeter order, so ``sites[i].id == i``.
    """

    def __init__(self, polygon: SimplePolygon, locations: Sequence[BoundaryPoint]):
        n = polygon.n
        uniq = sorted({BoundaryPoint.canonical(b.edge_index, b.param, n) for b in locations},
                      key=lambda b: b.u)
        self.polygon = polygon
        self.sites = tuple(GuardSite(i, b, polygon.point_at(b.u)) for i, b in enumerate(uniq))
        self.us = [s.location.u for s in self.sites]
        self._visibility = None

    @classmethod
    def vertices(cls, polygon: SimplePolygon, per_edge: int = 0) -> "SiteSet":
        """All vertices, plus ``per_edge`` evenly spaced points inside each edge."""
        locs = []
        for i in range(polygon.n):
            for k in range(per_edge + 1):
                locs.append(BoundaryPoint(i, Fraction(k, per_edge + 1)))
        return cls(polygon, locs)

    @classmethod
    def from_points(cls, polygon: SimplePolygon, points: Sequence[Point]) -> "SiteSet":
        return cls(polygon, [polygon.boundary_point(p) for p in points])

    def __len__(self):
        return len(self.sites)

    def __eq__(self, other):
        return (isinstance(other, SiteSet) and self.polygon == other.polygon
                and self.us == other.us)

    __hash__ = None

    def __iter__(self):
        return iter(self.sites)

    def __getitem__(self, i):
        return self.sites[i]

    def contains_vertices(self) -> bool:
        us = set(self.us)
        return all(Fraction(i) in us for i in range(self.polygon.n))

    def arc(self, first: int, last: int) -> Arc:
        return Arc(self.us[first], self.us[last])

    def rank(self, u) -> int:
        """Site id at perimeter coordinate ``u`` (which must be a site)."""
        u = Fraction(u) % self.polygon.n
        k = bisect_left(self.us, u)
        if k == len(self.us) or self.us[k] != u:
            raise KeyError(f"no site at u={u}")
        return k

    def rank_pieces(self, arc: Arc) -> list[tuple[int, int]]:
        """Closed ranges of extended ranks covering ``arc``.

        Extended rank ``N = len(sites)`` stands for site 0 seen as ``u = n``,
        so the stretch of perimeter between the last site and vertex 0 is
        representable. Requires site 0 at ``u = 0``; arc ends must be sites.
        """
        N = len(self.us)
        if arc.is_empty:
            return []
        if arc.is_full:
            return [(0, N)]
        s, e = self.rank(arc.start), self.rank(arc.end)
        if self.us[s] <= self.us[e]:
            return [(s, e)]
        return [(s, N), (0, e)]

    def indices_on(self, arc: Arc) -> list[int]:
        """Site ids on a closed arc, in order along the arc."""
        N = len(self.us)
        if arc.is_empty:
            return []
        if arc.is_full:
            start = bisect_left(self.us, Fraction(arc.start) % self.polygon.n) % N
            return [(start + j) % N for j in range(N)]
        out = []
        for s, e in arc.pieces(self.polygon.n):
            out.extend(range(bisect_left(self.us, s), bisect_right(self.us, e)))
        return out

    @property
    def visibility(self):
        """Lazily built per-site weak visibility table (see :mod:`gallerynet.nets`)."""
        if self._visibility is None:
            from .nets import SiteVisibility
            self._visibility = SiteVisibility.build(self)
        return self._visibility


class WeightState:
    """Per-site doubling exponents with exact cumulative sums."""

    def __init__(self, count: int, exponents: Optional[Sequence[int]] = None):
        if exponents is None:
            exponents = [0] * count
        if len(exponents) != count or any(z < 0 for z in exponents):
            raise ValueError("need one non-negative exponent per site")
        self.exponents = list(exponents)
        self.prefix = list(accumulate(1 << z for z in self.exponents))

    @classmethod
    def uniform(cls, count: int) -> "WeightState":
        return cls(count)

    def copy(self) -> "WeightState":
        return WeightState(len(self.exponents), self.exponents)

    def __len__(self):
        return len(self.exponents)

    @property
    def total(self) -> int:
        return self.prefix[-1] if self.prefix else 0

    def weight(self, j: int) -> int:
        return 1 << self.exponents[j]

    def range_weight(self, lo: int, hi: int) -> int:
        """Total weight of sites ``lo..hi`` inclusive."""
        return self.prefix[hi] - (self.prefix[lo - 1] if lo > 0 else 0)

    def double(self, ids) -> None:
        ids = sorted(set(ids))
        if not ids:
            return
        for j in ids:
            self.exponents[j] += 1
        start = ids[0]
        run = self.prefix[start - 1] if start > 0 else 0
        for j in range(start, len(self.exponents)):
            run += 1 << self.exponents[j]
            self.prefix[j] = run

    def site_at(self, c) -> int:
        """Site whose weight interval ``[S_{j-1}, S_j)`` holds position ``c``; ``W`` wraps to 0."""
        j = bisect_right(self.prefix, c)
        return j % len(self.prefix)

    def log2_total_bound_ok(self, k: int, cprime: int) -> bool:
        """Exact check of ``total <= |G| * 2**(3k / (4c'))``."""
        g = len(self.exponents)
        # total**(4c') <= g**(4c') * 2**(3k)
        e = 4 * cprime
        return self.total ** e <= (g ** e) << (3 * k)


@dataclass(frozen=True)
class Fragment:
    id: int
    level: int
    lo: Fraction
    hi: Fraction
    first_site: int
    last_site: int
    extent: Arc
    parent: Optional[int] = None
    children: tuple[int, ...] = ()

    @property
    def weight(self) -> Fraction:
        return self.hi - self.lo


def _fragment_span(sites: SiteSet, w: WeightState, lo: Fraction, hi: Fraction):
    first = w.site_at(lo)
    if hi - lo >= w.total:
        return first, first, Arc.full(sites.us[first])
    last = w.site_at(hi)
    return first, last, sites.arc(first, last)


def split_interval(sites: SiteSet, w: WeightState, lo: Fraction, hi: Fraction, m: int,
                   level: int, first_id: int, parent: Optional[int]) -> list[Fragment]:
    step = (hi - lo) / m
    out = []
    for k in range(m):
        a = lo + k * step
        b = hi if k == m - 1 else lo + (k + 1) * step
        first, last, extent = _fragment_span(sites, w, a, b)
        out.append(Fragment(first_id + k, level, a, b, first, last, extent, parent))
    return out


def equal_weight_fragments(sites: SiteSet, w: WeightState, m: int) -> list[Fragment]:
    """``m`` consecutive fragments of weight ``W/m`` each, in perimeter order."""
    if m < 1:
        raise ValueError("m must be positive")
    if w.total <= 0:
        raise ValueError("total weight must be positive")
    return split_interval(sites, w, Fraction(0), Fraction(w.total), m, 1, 0, None)


def fragment_members(w: WeightState, frag: Fragment) -> list[int]:
    """Sites carrying a positive share of the fragment's weight."""
    out = []
    j = bisect_right(w.prefix, frag.lo)
    while j < len(w.prefix):
        start = w.prefix[j - 1] if j > 0 else 0
        if start >= frag.hi:
            break
        out.append(j)
        j += 1
    return out


def ceil_loglog(inv: int) -> int:
    """Least ``t >= 0`` with ``2**(2**t) >= inv``; exact integer search."""
    t = 0
    while (1 << (1 << t)) < inv:
        t += 1
    return t


@dataclass(frozen=True)
class NetParams:
    epsilon: Fraction
    t: int
    alpha: Fraction
    b: tuple[int, ...]
    f: tuple[int, ...]
    t_unclamped: int
    quadratic_fallback: bool

    @property
    def inverse(self) -> int:
        return int(1 / self.epsilon)

    def f_closed_form(self, i: int) -> Fraction:
        t = self.t
        if i == 0:
            return Fraction(1)
        return 4 * t * Fraction(2) ** (2 ** t - 2 ** (t - i) - t + i + 1) * self.alpha

    def pair_bound(self) -> int:
        """``4 * sum C(b_i + 1, 2) f_{i-1}``: extremal guards over sibling pairs."""
        return 4 * sum(math.comb(bi + 1, 2) * self.f[i] for i, bi in enumerate(self.b))

    def size_bound(self) -> int:
        """Pair bound plus every fragment endpoint."""
        return self.pair_bound() + sum(self.f[1:])

    def asymptotic_bound(self) -> Fraction:
        """``128 t alpha 2**(2**t)``; only claimed for ``t >= 6``."""
        return 128 * self.t * self.alpha * 2 ** (2 ** self.t)


def net_params(epsilon) -> NetParams:
    """Depth, fragmentation factors and fragment counts for the hierarchical net.

    ``1/epsilon`` must be an integer. ``quadratic_fallback`` is set when
    ``1/epsilon <= 16``; the caller decides whether to honour it.
    """
    eps = Fraction(epsilon)
    if eps <= 0 or eps.numerator != 1:
        raise ValueError("1/epsilon must be a positive integer")
    inv = eps.denominator
    t_raw = ceil_loglog(inv)
    t = max(t_raw, 1)
    # alpha = ceil(D * inv / 2^(2^t)) / D with D = 4t * 2^(2^(t-1) + 1 - t)
    D = 4 * t * (1 << (2 ** (t - 1) + 1 - t))
    c = -(-(D * inv) // (1 << (2 ** t)))
    alpha = Fraction(c, D)
    b = [2 * c] + [1 << (2 ** (t - i) + 1) for i in range(2, t + 1)]
    f = [1]
    for bi in b:
        f.append(f[-1] * bi)
    params = NetParams(eps, t, alpha, tuple(b), tuple(f), t_raw, inv <= 16)
    if Fraction(f[t], 4 * t) < inv:
        raise AssertionError("fragment count too small for epsilon")
    for i in range(1, t + 1):
        if params.f_closed_form(i) != f[i]:
            raise AssertionError(f"closed form mismatch at level {i}")
    if t >= 6:
        for i, bi in enumerate(b, start=1):
            if bi > 1 << (2 ** (t - i) + 1):
                raise AssertionError(f"b_{i} exceeds its large-t ceiling")
    return params


@dataclass
class FragmentTree:
    params: NetParams
    nodes: list[Fragment] = field(default_factory=list)

    @property
    def root(self) -> Fragment:
        return self.nodes[0]

    def level(self, i: int) -> list[Fragment]:
        return [f for f in self.nodes if f.level == i]

    def children(self, fid: int) -> list[Fragment]:
        return [self.nodes[c] for c in self.nodes[fid].children]

    def internal_nodes(self) -> list[Fragment]:
        return [f for f in self.nodes if f.children]


def build_hierarchy(sites: SiteSet, w: WeightState, params: NetParams) -> FragmentTree:
    """Root = whole perimeter; level ``i`` splits each level ``i-1`` fragment into ``b_i``."""
    W = Fraction(w.total)
    root = Fragment(0, 0, Fraction(0), W, 0, 0, Arc.full(sites.us[0]))
    levels = [[root]]
    next_id = 1
    for i, bi in enumerate(params.b, start=1):
        cur = []
        for parent in levels[-1]:
            cur.extend(split_interval(sites, w, parent.lo, parent.hi, bi, i, next_id + len(cur),
                                      parent.id))
        next_id += len(cur)
        levels.append(cur)
    nodes = [f for lvl in levels for f in lvl]
    kids: dict[int, list[int]] = {}
    for f in nodes:
        if f.parent is not None:
            kids.setdefault(f.parent, []).append(f.id)
    nodes = [Fragment(f.id, f.level, f.lo, f.hi, f.first_site, f.last_site, f.extent,
                      f.parent, tuple(kids.get(f.id, ()))) for f in nodes]
    return FragmentTree(params, nodes)


def complement_fragment(tree: FragmentTree, fid: int) -> Arc:
    """The dummy sibling of ``fid``: the perimeter outside its parent."""
    frag = tree.nodes[fid]
    if frag.parent is None:
        raise RootHasNoComplement("the root fragment has no parent")
    return tree.nodes[frag.parent].extent.complement()
