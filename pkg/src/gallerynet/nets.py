"""Epsilon-nets over perimeter guard sites.

Every net is built from one primitive: for two perimeter arcs, the first and
last site of each arc that weakly sees the other. Weak visibility between a
site and an arc is answered from a per-site table of visible perimeter
ranges in slot coordinates, so a pair query is a handful of vectorised
integer comparisons.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .fragmentation import (
    FragmentTree,
    QuadraticFallback,
    SiteSet,
    WeightState,
    build_hierarchy,
    complement_fragment,
    equal_weight_fragments,
    net_params,
)
from .geometry import Arc
from .visibility import BoundaryView, visible_boundary


@dataclass
class SiteVisibility:
    """Visible perimeter of every site, in slot coordinates.

    Slot ``2k`` is site ``k`` (extended rank, so ``2N`` is site 0 again at
    ``u = n``) and slot ``2k+1`` the open stretch between sites ``k`` and
    ``k+1``; a visible piece lying strictly between two sites is kept.
    Ranges are stored CSR-style: those of site ``i`` occupy
    ``L[ptr[i]:ptr[i+1]]`` / ``R[ptr[i]:ptr[i+1]]``.
    """

    ptr: np.ndarray
    L: np.ndarray
    R: np.ndarray

    @classmethod
    def build(cls, sites: SiteSet) -> "SiteVisibility":
        ext = sites.us + [Fraction(sites.polygon.n)]
        ptr = [0]
        L, R = [], []
        for s in sites:
            for lo, hi in visible_boundary(sites.polygon, s.point).intervals:
                a = bisect_left(ext, lo)
                b = bisect_right(ext, hi) - 1
                L.append(2 * a if ext[a] == lo else 2 * a - 1)
                R.append(2 * b if ext[b] == hi else 2 * b + 1)
            ptr.append(len(L))
        return cls(np.asarray(ptr, dtype=np.int64), np.asarray(L, dtype=np.int64),
                   np.asarray(R, dtype=np.int64))

    def seers(self, sites_lo: int, sites_hi: int, target: list[tuple[int, int]]) -> np.ndarray:
        """Ids in ``sites_lo..sites_hi`` that see some point of the rank ranges ``target``."""
        a, b = self.ptr[sites_lo], self.ptr[sites_hi + 1]
        if a == b or not target:
            return np.empty(0, dtype=np.int64)
        L, R = self.L[a:b], self.R[a:b]
        hit = np.zeros(b - a, dtype=bool)
        for t0, t1 in target:
            hit |= (L <= 2 * t1) & (R >= 2 * t0)
        owner = np.searchsorted(self.ptr, np.arange(a, b)[hit], side="right") - 1
        return np.unique(owner)


def ranks_seen(view: BoundaryView, sites: SiteSet) -> list[int]:
    """Ids of the sites a point sees, given that point's boundary view."""
    out = []
    for lo, hi in view.intervals:
        out.extend(range(bisect_left(sites.us, lo), bisect_right(sites.us, hi)))
    return sorted(set(out))


@dataclass
class GuardSet:
    """Site ids (sorted, unique) plus which construction step produced each."""

    sites: SiteSet
    ids: tuple[int, ...] = ()
    provenance: dict = field(default_factory=dict)
    raw_count: Optional[int] = None

    @classmethod
    def collect(cls, sites: SiteSet, contributions, endpoints=()) -> "GuardSet":
        prov: dict[int, list] = {}
        for src, ids in contributions:
            for i in ids:
                prov.setdefault(int(i), []).append(src)
        raw = len(prov)
        for i in endpoints:
            prov.setdefault(int(i), []).append("endpoint")
        return cls(sites, tuple(sorted(prov)), prov, raw)

    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __contains__(self, i):
        return i in set(self.ids)

    @property
    def points(self):
        return [self.sites[i].point for i in self.ids]

    @property
    def augmented_count(self) -> int:
        return len(self.ids)


def _one_side(sites: SiteSet, A: Arc, B: Arc) -> list[int]:
    vis = sites.visibility
    N = len(sites)
    target = sites.rank_pieces(B)
    hits = []
    for lo, hi in sites.rank_pieces(A):
        hits.append(vis.seers(lo, min(hi, N - 1), target))
        if hi == N:
            hits.append(vis.seers(0, 0, target))
    seeing = set(int(i) for h in hits for i in h)
    if not seeing:
        return []
    order = [i for i in sites.indices_on(A) if i in seeing]
    return [order[0], order[-1]]


def extremal_guards(sites: SiteSet, A: Arc, B: Arc) -> GuardSet:
    """First and last sites of ``A`` weakly seeing ``B``, and vice versa."""
    ids = _one_side(sites, A, B) + _one_side(sites, B, A)
    return GuardSet.collect(sites, [((A, B), ids)])


def _pair_ids(sites, A, B):
    return _one_side(sites, A, B) + _one_side(sites, B, A)


def quadratic_size_bound(m: int) -> int:
    return 4 * math.comb(m, 2) + m


def build_quadratic_net(sites: SiteSet, w: WeightState, epsilon,
                        m: Optional[int] = None) -> GuardSet:
    """Extremal guards over all pairs of ``4/epsilon`` equal-weight fragments."""
    if m is None:
        inv = 4 / Fraction(epsilon)
        if inv.denominator != 1:
            raise ValueError("4/epsilon must be an integer")
        m = int(inv)
    frags = equal_weight_fragments(sites, w, m)
    contrib = []
    for i in range(m):
        for j in range(i + 1, m):
            contrib.append(((frags[i].id, frags[j].id),
                            _pair_ids(sites, frags[i].extent, frags[j].extent)))
    ends = {f.first_site for f in frags} | {f.last_site for f in frags}
    return GuardSet.collect(sites, contrib, ends)


def build_hierarchical_net(sites: SiteSet, w: WeightState, epsilon,
                           force: bool = False) -> GuardSet:
    """Extremal guards over sibling pairs of the fragment hierarchy.

    Each internal node's children are paired with each other and, below the
    root, with the perimeter outside the node. Raises
    :class:`QuadraticFallback` for ``1/epsilon <= 16`` unless ``force``.
    """
    params = net_params(epsilon)
    if params.quadratic_fallback and not force:
        raise QuadraticFallback(params)
    tree = build_hierarchy(sites, w, params)
    return _hierarchical_from_tree(sites, tree)


def _hierarchical_from_tree(sites: SiteSet, tree: FragmentTree) -> GuardSet:
    contrib = []
    ends = set()
    for node in tree.internal_nodes():
        kids = tree.children(node.id)
        for a in range(len(kids)):
            for b in range(a + 1, len(kids)):
                contrib.append(((kids[a].id, kids[b].id),
                                _pair_ids(sites, kids[a].extent, kids[b].extent)))
        if node.parent is not None:
            outside = complement_fragment(tree, kids[0].id)
            if not outside.is_empty:
                for k in kids:
                    contrib.append(((k.id, "outside"), _pair_ids(sites, k.extent, outside)))
        for k in kids:
            ends.add(k.first_site)
            ends.add(k.last_site)
    return GuardSet.collect(sites, contrib, ends)


def random_comparator_net(sites: SiteSet, w: WeightState, epsilon, seed: int = 0,
                          constant: float = 1.0) -> GuardSet:
    """Weighted independent samples, ``constant * (1/eps) * ln(1/eps)`` of them."""
    if constant <= 0:
        raise ValueError("constant must be positive")
    inv = 1 / Fraction(epsilon)
    size = max(1, math.ceil(constant * float(inv) * math.log(float(inv))))
    z = np.asarray(w.exponents, dtype=np.float64)
    p = np.exp2(z - z.max())
    p /= p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(sites), size=size, p=p)
    return GuardSet.collect(sites, [("sample", draws.tolist())])


@dataclass
class NodeView:
    """What a point sees of one internal node's children."""

    node: int
    children_seen: list[int]
    without_tangent: int


@dataclass
class HierarchyProfile:
    seen_per_level: dict[int, list[int]]
    nodes: list[NodeView]

    def branching(self, level: int, tree: FragmentTree) -> list[int]:
        """Level-``level`` fragments with at least two children seen."""
        return [v.node for v in self.nodes
                if tree.nodes[v.node].level == level and len(v.children_seen) >= 2]


def hierarchy_profile(tree: FragmentTree, view: BoundaryView) -> HierarchyProfile:
    """Seen fragments per level, and per seen internal node its seen children.

    Children are classified against the partition formed by the siblings
    plus the perimeter outside their parent; that outside arc is never
    reported as a seen child.
    """
    from .visibility import classify_fragments

    polygon, x = view.polygon, view.source
    per_level = {}
    for i in range(1, tree.params.t + 1):
        frags = tree.level(i)
        labels = classify_fragments(polygon, x, [f.extent for f in frags], view)
        per_level[i] = [frags[k].id for k, _ in labels]
    seen_nodes = {0} | {fid for ids in per_level.values() for fid in ids}
    nodes = []
    for fid in sorted(seen_nodes):
        node = tree.nodes[fid]
        if not node.children:
            continue
        kids = tree.children(fid)
        arcs = [k.extent for k in kids]
        if node.parent is not None:
            outside = node.extent.complement()
            if not outside.is_empty:
                arcs.append(outside)
        labels = classify_fragments(polygon, x, arcs, view)
        kid_labels = [(kids[k].id, lab) for k, lab in labels if k < len(kids)]
        nodes.append(NodeView(fid, [k for k, _ in kid_labels],
                              sum(1 for _, lab in kid_labels if not lab.has_tangent)))
    return HierarchyProfile(per_level, nodes)
