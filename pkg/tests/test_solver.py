import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gallerynet.fragmentation import SiteSet, WeightState
from gallerynet.geometry import Location, Point, locate, validate_polygon
from gallerynet.instances import comb, comb_tips, l_polygon, random_convex, random_star, square
from gallerynet.solver import (
    Infeasible,
    Instance,
    LimitExceeded,
    NoSiteSeesWitness,
    SolveState,
    bg_solve,
    brute_force_opt,
    discretize_targets,
    double_weights,
    greedy_cover,
    phase_budget,
    replay,
    verify,
)
from gallerynet.nets import quadratic_size_bound
from gallerynet.visibility import Covered, Witness, sees

P = Point


def budget_oracle(c, g):
    """Smallest K with 2^K >= (g/c)^(4c), found by counting up; at least 1."""
    target = Fraction(g, c) ** (4 * c)
    K = 0
    while 2 ** K < target:
        K += 1
    return max(K, 1)


def vertex_instance(poly, target=None, strategy="auto"):
    inst = Instance(poly, SiteSet.vertices(poly), strategy=strategy)
    if target is not None:
        inst.target = tuple(target)
    return inst


@pytest.fixture(scope="module")
def comb12_run():
    inst = Instance(comb(12), SiteSet.vertices(comb(12), 1))
    return inst, bg_solve(inst)


class TestPhaseBudget:
    @pytest.mark.parametrize("c, g, want", [(1, 16, 16), (4, 4, 1), (2, 64, 40), (1, 1, 1),
                                            (3, 2, 1), (1, 17, 17)])
    def test_examples(self, c, g, want):
        assert phase_budget(c, g) == want

    @given(st.integers(1, 8), st.integers(1, 300))
    def test_matches_counting(self, c, g):
        assert phase_budget(c, g) == budget_oracle(c, g)

    @given(st.integers(1, 6), st.integers(1, 200))
    def test_close_to_float_formula(self, c, g):
        approx = 4 * c * math.log2(g / c)
        assert abs(phase_budget(c, g) - max(math.ceil(approx), 1)) <= 1

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            phase_budget(0, 5)


class TestDoubleWeights:
    def test_convex_doubles_total(self):
        poly = random_convex(np.random.default_rng(2), 9)
        sites = SiteSet.vertices(poly, 1)
        st_ = SolveState(1, WeightState.uniform(len(sites)))
        before = st_.weights.total
        c = poly.vertices
        centroid = P(sum(v.x for v in c) / len(c), sum(v.y for v in c) / len(c))
        ids = double_weights(st_, Witness(centroid), sites)
        assert ids == list(range(len(sites)))
        assert st_.weights.total == 2 * before and st_.k == 1
        assert st_.transcript == [(1, centroid, tuple(ids))]

    def test_single_seer(self):
        poly = comb(3)
        H = poly.vertices[2].y
        sites = SiteSet.from_points(poly, [P(0, H), P(2, H), P(4, H)])
        st_ = SolveState(1, WeightState.uniform(3))
        ids = double_weights(st_, Witness(P(Fraction(5, 2), H - 1)), sites)
        assert ids == [1] and st_.weights.exponents == [0, 1, 0]

    def test_comb_prong_matches_scan(self):
        poly = comb(4)
        sites = SiteSet.vertices(poly, 2)
        p = P(Fraction(9, 2), poly.vertices[2].y - Fraction(1, 3))
        st_ = SolveState(2, WeightState.uniform(len(sites)))
        ids = double_weights(st_, Witness(p), sites)
        assert ids == [s.id for s in sites if sees(poly, s.point, p)]

    def test_nobody_sees(self):
        poly = comb(3)
        H = poly.vertices[2].y
        sites = SiteSet.from_points(poly, [P(0, H)])
        st_ = SolveState(1, WeightState.uniform(1))
        with pytest.raises(NoSiteSeesWitness) as exc:
            double_weights(st_, Witness(P(Fraction(9, 2), H - 1)), sites)
        assert isinstance(exc.value, Infeasible) and st_.k == 0


class TestBgSolve:
    def test_convex_first_phase(self):
        inst = vertex_instance(random_convex(np.random.default_rng(7), 10))
        res = bg_solve(inst)
        assert res.stats.final_cprime == 1 and len(res.stats.phases) == 1
        assert verify(inst, res.guards.ids) is Covered

    def test_comb_four(self):
        inst = vertex_instance(comb(4))
        res = bg_solve(inst)
        assert len(res.guards) >= 4
        assert verify(inst, res.guards.ids) is Covered
        for ph in res.stats.phases:
            assert ph.iterations <= ph.budget
        assert res.stats.final_cprime <= 8

    def test_star_centroid(self):
        poly = random_star(np.random.default_rng(3), 12)
        inst = vertex_instance(poly, [P(0, 0)])
        res = bg_solve(inst)
        assert len(res.guards) >= 1 and verify(inst, res.guards.ids) is Covered

    @pytest.mark.parametrize("strategy", ["quadratic", "hierarchical", "random"])
    def test_strategies_cover(self, strategy):
        inst = vertex_instance(comb(3), strategy=strategy)
        res = bg_solve(inst)
        assert verify(inst, res.guards.ids) is Covered
        if strategy == "quadratic":
            c = res.stats.final_cprime
            assert len(res.guards) <= quadratic_size_bound(8 * c)

    def test_deterministic(self):
        a = bg_solve(vertex_instance(comb(3)))
        b = bg_solve(vertex_instance(comb(3)))
        assert a.guards.ids == b.guards.ids and a.state.transcript == b.state.transcript

    def test_replay(self):
        inst = Instance(comb(4), SiteSet.vertices(comb(4), 1), strategy="random")
        res = bg_solve(inst)
        assert len(res.stats.phases) >= 2 and res.state.k > 0
        w = replay(res.state.transcript, len(inst.sites), res.stats.final_cprime)
        assert w.exponents == res.state.weights.exponents

    def test_weight_bound_every_phase(self, comb12_run):
        # an unseen witness has seeing weight below W/(2c'), so each doubling
        # grows W by at most 1 + 1/(2c') and the exponent-form bound holds
        inst, res = comb12_run
        g = len(inst.sites)
        assert res.stats.phases[0].iterations == res.stats.phases[0].budget
        for cp in {t[0] for t in res.state.transcript}:
            w = WeightState.uniform(g)
            k = 0
            for c_, point, ids in res.state.transcript:
                if c_ == cp:
                    seen = sum(w.weight(i) for i in ids)
                    assert 2 * cp * seen < w.total
                    w.double(ids)
                    k += 1
                    assert w.log2_total_bound_ok(k, cp)

    def test_restart_doubles_guess(self, comb12_run):
        inst, res = comb12_run
        assert [p.cprime for p in res.stats.phases] == [1, 2]
        assert verify(inst, res.guards.ids) is Covered

    def test_rejects_missing_vertices(self):
        poly = square()
        with pytest.raises(ValueError):
            Instance(poly, SiteSet.from_points(poly, [P(0, 0)]))

    def test_rejects_unknown_strategy(self):
        with pytest.raises(ValueError):
            Instance(square(), SiteSet.vertices(square()), strategy="magic")


class TestBaselines:
    def test_greedy_one_site(self):
        inst = vertex_instance(square(), [P(Fraction(1, 3), Fraction(1, 2)), P(Fraction(1, 2), Fraction(1, 5))])
        assert greedy_cover(inst) == [0]

    def test_greedy_disjoint_tips(self):
        inst = vertex_instance(comb(4), comb_tips(4))
        ids = greedy_cover(inst)
        assert len(ids) == 4
        assert verify(inst, ids) is Covered

    def test_brute_convex(self):
        poly = random_convex(np.random.default_rng(5), 8)
        inst = vertex_instance(poly, discretize_targets(poly, 3).points)
        assert brute_force_opt(inst) == [0]

    def test_brute_comb_tips(self):
        inst = vertex_instance(comb(3), comb_tips(3))
        ids = brute_force_opt(inst)
        assert len(ids) == 3 and verify(inst, ids) is Covered

    def test_brute_empty_target(self):
        assert brute_force_opt(vertex_instance(comb(3), [])) == []
        assert greedy_cover(vertex_instance(comb(3), [])) == []

    def test_limit(self):
        inst = vertex_instance(comb(7), comb_tips(7))
        with pytest.raises(LimitExceeded):
            brute_force_opt(inst, limit=24)

    def test_greedy_within_log_factor(self):
        poly = l_polygon()
        inst = vertex_instance(poly, discretize_targets(poly, 4).points)
        g, o = greedy_cover(inst), brute_force_opt(inst)
        assert len(o) <= len(g) <= (math.log(len(inst.target)) + 1) * len(o)


class TestDiscretize:
    def test_triangle(self):
        tri = validate_polygon([(0, 0), (3, 0), (0, 3)])
        assert discretize_targets(tri, 1).points == (P(1, 1),)

    def test_square(self):
        d = discretize_targets(square(), 1)
        assert len(d) == 2 and d.guarantee is False

    def test_l_density_four(self):
        poly = l_polygon()
        pts = discretize_targets(poly, 4).points
        assert len(pts) == 16
        assert all(locate(poly, p) is not Location.EXTERIOR for p in pts)

    def test_bad_density(self):
        with pytest.raises(ValueError):
            discretize_targets(square(), 0)
