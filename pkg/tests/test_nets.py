import math
import random
from fractions import Fraction

import numpy as np
import pytest

from gallerynet.fragmentation import (
    QuadraticFallback,
    SiteSet,
    WeightState,
    build_hierarchy,
    equal_weight_fragments,
    net_params,
)
from gallerynet.geometry import Arc, Point
from gallerynet.instances import comb, fixture_polygons, random_convex, square
from gallerynet.io import parse_instance
from gallerynet.nets import (
    build_hierarchical_net,
    build_quadratic_net,
    extremal_guards,
    quadratic_size_bound,
    random_comparator_net,
    ranks_seen,
)
from gallerynet.visibility import classify_fragments, sees, visible_boundary, weakly_sees
from oracles import random_point_in

F = Fraction


def brute_extremal(sites, A, B):
    """Scan every site of each arc with the arc-visibility predicate."""
    out = set()
    for X, Y in ((A, B), (B, A)):
        hit = [i for i in sites.indices_on(X) if weakly_sees(sites.polygon, sites[i].point, Y)]
        if hit:
            out |= {hit[0], hit[-1]}
    return out


def prong_arc(poly, j):
    """Right wall, tip and left wall of prong ``j`` of a comb."""
    i = [(v.x, v.y) for v in poly.vertices].index((2 * j + 1, poly.vertices[2].y))
    return Arc(F(i - 1), F(i + 2))


def sample_views(poly, count, seed):
    rng = random.Random(seed)
    verts = [(v.x, v.y) for v in poly.vertices]
    return [visible_boundary(poly, Point(*random_point_in(verts, rng))) for _ in range(count)]


class TestExtremalGuards:
    def test_convex_opposite_edges(self):
        sites = SiteSet.vertices(square(), 3)
        g = extremal_guards(sites, Arc(F(0), F(1)), Arc(F(2), F(3)))
        assert g.ids == (0, 4, 8, 12)

    def test_shared_endpoint(self):
        sites = SiteSet.vertices(square(), 3)
        g = extremal_guards(sites, Arc(F(0), F(1)), Arc(F(1), F(2)))
        assert 4 in g and g.ids == (0, 4, 8)

    def test_mutually_invisible_is_empty(self):
        poly = comb(3)
        # the two tips of outer prongs cannot see each other
        tip0 = prong_arc(poly, 0)
        tip2 = prong_arc(poly, 2)
        inner0 = Arc(tip0.start + F(1, 2), tip0.end - F(1, 2))
        inner2 = Arc(tip2.start + F(1, 2), tip2.end - F(1, 2))
        s0 = SiteSet.from_points(poly, [poly.point_at(u) for u in
                                        (inner0.start, inner0.end, inner2.start, inner2.end)])
        assert len(extremal_guards(s0, inner0, inner2)) == 0

    def test_comb_prongs_only_mouths(self):
        poly = comb(3)
        sites = SiteSet.vertices(poly, 3)
        A, B = prong_arc(poly, 1), prong_arc(poly, 2)
        g = extremal_guards(sites, A, B)
        assert set(g.ids) == brute_extremal(sites, A, B)
        assert g.ids and all(p.y <= 1 for p in g.points)

    def test_matches_brute_force_on_random_arcs(self, rng):
        poly = comb(3)
        sites = SiteSet.vertices(poly, 2)
        N = len(sites)
        for _ in range(40):
            a, b, c, d = sorted(rng.sample(range(N), 4))
            A, B = sites.arc(a, b), sites.arc(c, d)
            assert set(extremal_guards(sites, A, B).ids) == brute_extremal(sites, A, B)
            # wrapping second arc
            B2 = sites.arc(d, a) if d != a else B
            A2 = sites.arc(b, c)
            assert set(extremal_guards(sites, A2, B2).ids) == brute_extremal(sites, A2, B2)

    def test_sees_piece_between_sites(self):
        # a window onto the middle of a long edge with no site in view
        poly = comb(2, height=6)
        sites = SiteSet.vertices(poly, 0)
        A = Arc(F(0), F(1))           # bottom edge
        far = [i for i, s in enumerate(sites) if s.point == Point(0, 6)][0]
        B = sites.arc(far, far)
        assert set(extremal_guards(sites, A, B).ids) == brute_extremal(sites, A, B)

    def test_at_most_four(self, rng):
        poly = fixture_polygons(5, seed=3)[4][1]
        sites = SiteSet.vertices(poly, 1)
        for _ in range(30):
            a, b, c, d = sorted(rng.sample(range(len(sites)), 4))
            assert len(extremal_guards(sites, sites.arc(a, b), sites.arc(c, d))) <= 4


class TestQuadraticNet:
    def test_bound_formula(self):
        assert [quadratic_size_bound(m) for m in (1, 2, 8, 16)] == [1, 6, 120, 496]

    def test_m_two(self):
        poly = comb(3)
        sites = SiteSet.vertices(poly, 1)
        net = build_quadratic_net(sites, WeightState.uniform(len(sites)), F(1, 2), m=2)
        assert len(net) <= 6

    def test_convex_eighth(self):
        poly = random_convex(np.random.default_rng(4), 12)
        sites = SiteSet.vertices(poly)
        w = WeightState.uniform(len(sites))
        net = build_quadratic_net(sites, w, F(1, 2))
        frags = equal_weight_fragments(sites, w, 8)
        ends = {f.first_site for f in frags} | {f.last_site for f in frags}
        assert ends <= set(net.ids)
        assert len(net) <= quadratic_size_bound(8)

    def test_provenance_and_raw(self):
        sites = SiteSet.vertices(comb(3), 1)
        net = build_quadratic_net(sites, WeightState.uniform(len(sites)), F(1, 4))
        assert net.raw_count <= len(net)
        assert set(net.provenance) == set(net.ids)
        assert len(set(net.ids)) == len(net.ids)

    def test_rejects_non_integer_m(self):
        sites = SiteSet.vertices(square())
        with pytest.raises(ValueError):
            build_quadratic_net(sites, WeightState.uniform(4), F(3, 8))

    def test_comb5_heavy_sets_hit(self):
        poly = comb(5)
        sites = SiteSet.vertices(poly)
        w = WeightState.uniform(len(sites))
        net = set(build_quadratic_net(sites, w, F(1, 4)).ids)
        missed = 0
        for v in sample_views(poly, 1000, 11):
            seen = ranks_seen(v, sites)
            if len(seen) * 4 >= w.total and not net.intersection(seen):
                missed += 1
        assert missed == 0


@pytest.fixture(scope="module")
def uniform1024(fixtures_dir):
    return parse_instance(fixtures_dir / "uniform1024.json").instance.sites


@pytest.fixture(scope="module")
def cases():
    out = []
    for name, poly in fixture_polygons(6, seed=1):
        sites = SiteSet.vertices(poly, 3)
        out.append((poly, sites, sample_views(poly, 120, sum(map(ord, name)))))
    return out


class TestHierarchicalNet:
    def test_sixteen_bound(self, uniform1024):
        assert len(uniform1024) == 1024
        p = net_params(F(1, 16))
        assert p.pair_bound() == 3392 and p.size_bound() == 3552
        net = build_hierarchical_net(uniform1024, WeightState.uniform(1024), F(1, 16), force=True)
        assert net.raw_count <= p.pair_bound() and len(net) <= 3552

    def test_fallback_raised(self, uniform1024):
        with pytest.raises(QuadraticFallback):
            build_hierarchical_net(uniform1024, WeightState.uniform(1024), F(1, 16))

    def test_depth_one_equals_quadratic(self, uniform1024):
        w = WeightState(1024, [k % 4 for k in range(1024)])
        h = build_hierarchical_net(uniform1024, w, F(1, 4), force=True)
        q = build_quadratic_net(uniform1024, w, F(1, 4), m=net_params(F(1, 4)).b[0])
        assert h.ids == q.ids

    @pytest.mark.parametrize("inv", [4, 16, 64])
    def test_convex_covers(self, inv):
        poly = random_convex(np.random.default_rng(inv), 10)
        sites = SiteSet.vertices(poly, 3)
        net = build_hierarchical_net(sites, WeightState.uniform(len(sites)), F(1, inv), force=True)
        assert len(net) >= 1
        g = net.points[0]
        rng = random.Random(1)
        verts = [(v.x, v.y) for v in poly.vertices]
        for _ in range(50):
            assert sees(poly, g, Point(*random_point_in(verts, rng)))


class TestRandomNet:
    def test_epsilon_one_clamps(self):
        sites = SiteSet.vertices(square(), 2)
        net = random_comparator_net(sites, WeightState.uniform(len(sites)), F(1), seed=3)
        assert len(net) == 1

    def test_deterministic(self):
        sites = SiteSet.vertices(square(), 5)
        w = WeightState.uniform(len(sites))
        a = random_comparator_net(sites, w, F(1, 8), seed=9)
        b = random_comparator_net(sites, w, F(1, 8), seed=9)
        assert a.ids == b.ids

    def test_rejects_bad_constant(self):
        sites = SiteSet.vertices(square())
        with pytest.raises(ValueError):
            random_comparator_net(sites, WeightState.uniform(4), F(1, 4), constant=0)

    def test_skewed_frequency(self):
        # 100 sites, one with 2^13 of 8291 total: about 0.988 of the weight
        sites = SiteSet.vertices(square(), 24)
        z = [0] * 100
        z[37] = 13
        w = WeightState(100, z)
        p = F(2 ** 13, w.total)
        trials = 1000
        hits = sum(37 in random_comparator_net(sites, w, F(1), seed=s) for s in range(trials))
        # three-sigma binomial window
        sd = math.sqrt(trials * float(p) * (1 - float(p)))
        assert abs(hits - trials * float(p)) <= 3 * sd + 1


class TestSampledProperties:
    """Fragment-count properties for points the nets miss."""

    @pytest.mark.parametrize("inv", [4, 8, 16])
    def test_quadratic_net_missed_points(self, cases, inv):
        eps = F(1, inv)
        for poly, sites, views in cases:
            N = len(sites)
            z = [0] * N
            z[N // 2] = 8
            for w in (WeightState.uniform(N), WeightState(N, z)):
                net = set(build_quadratic_net(sites, w, eps).ids)
                arcs = [f.extent for f in equal_weight_fragments(sites, w, 4 * inv)]
                for v in views:
                    seen = ranks_seen(v, sites)
                    if net.intersection(seen):
                        continue
                    assert sum(w.weight(i) for i in seen) < eps * w.total
                    labels = classify_fragments(poly, v.source, arcs, v)
                    assert len(labels) <= 4
                    assert sum(1 for _, lab in labels if not lab.has_tangent) <= 1

    def test_hierarchy_net_is_epsilon_net(self, cases):
        eps = F(1, 16)
        for poly, sites, views in cases:
            N = len(sites)
            w = WeightState(N, [(3 * k) % 5 for k in range(N)])
            tree = build_hierarchy(sites, w, net_params(eps))
            assert tree.params.t == 2
            net = set(build_hierarchical_net(sites, w, eps, force=True).ids)
            for v in views:
                seen = ranks_seen(v, sites)
                if not net.intersection(seen):
                    assert sum(w.weight(i) for i in seen) < eps * w.total
