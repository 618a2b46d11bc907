"""Weight-doubling guard selection, plus greedy and exhaustive baselines."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .clipping import triangulate
from .fragmentation import QuadraticFallback, SiteSet, WeightState, net_params
from .geometry import Point, SimplePolygon
from .nets import (
    GuardSet,
    build_hierarchical_net,
    build_quadratic_net,
    random_comparator_net,
    ranks_seen,
)
from .visibility import (
    Covered,
    VisibilityRegion,
    Witness,
    WholePolygon,
    uncovered_witness,
    visibility_region,
    visible_boundary,
)

STRATEGIES = ("auto", "quadratic", "hierarchical", "random")


class Infeasible(RuntimeError):
    """Some target point is seen by no candidate site."""

    def __init__(self, point: Point):
        super().__init__(f"no candidate sees ({point.x}, {point.y})")
        self.point = point


class NoSiteSeesWitness(Infeasible):
    pass


class LimitExceeded(ValueError):
    pass


@dataclass
class Instance:
    polygon: SimplePolygon
    sites: SiteSet
    target: Union[object, Sequence[Point]] = WholePolygon
    strategy: str = "auto"
    seed: int = 0
    random_constant: float = 1.0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not self.sites.contains_vertices():
            raise ValueError("every polygon vertex must be a candidate site")

    @property
    def finite_target(self) -> bool:
        return self.target is not WholePolygon


def phase_budget(cprime: int, g_count: int) -> int:
    """``ceil(4 c' log2(|G| / c'))``, at least 1, in exact integer arithmetic."""
    if cprime < 1 or g_count < 1:
        raise ValueError("cprime and g_count must be positive")
    # least K with 2**K >= (g/c')**(4c'), i.e. c'**(4c') << K >= g**(4c')
    e = 4 * cprime
    num, den = g_count ** e, cprime ** e
    if num <= den:
        return 1
    K = max((num // den).bit_length() - 1, 0)
    while den << K < num:
        K += 1
    return max(K, 1)


@dataclass
class SolveState:
    cprime: int
    weights: WeightState
    k: int = 0
    transcript: list = field(default_factory=list)

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 2 * self.cprime)


@dataclass
class PhaseStats:
    cprime: int
    budget: int
    iterations: int
    net_sizes: list[int] = field(default_factory=list)


@dataclass
class SolveStats:
    final_cprime: int
    phases: list[PhaseStats]
    strategy: str

    @property
    def iterations(self) -> list[int]:
        return [p.iterations for p in self.phases]


@dataclass
class SolveResult:
    guards: GuardSet
    stats: SolveStats
    state: SolveState


class _Regions:
    """Visibility regions per site, computed on first use."""

    def __init__(self, sites: SiteSet):
        self.sites = sites
        self._cache: dict[int, VisibilityRegion] = {}

    def __getitem__(self, i: int) -> VisibilityRegion:
        r = self._cache.get(i)
        if r is None:
            r = visibility_region(self.sites.polygon, self.sites[i].point)
            self._cache[i] = r
        return r

    def of(self, ids) -> list[VisibilityRegion]:
        return [self[i] for i in ids]


def seeing_sites(sites: SiteSet, p: Point) -> list[int]:
    return ranks_seen(visible_boundary(sites.polygon, p), sites)


def double_weights(state: SolveState, witness: Witness, sites: SiteSet) -> list[int]:
    """Double every site that sees the witness; returns their ids."""
    ids = seeing_sites(sites, witness.point)
    if not ids:
        raise NoSiteSeesWitness(witness.point)
    state.weights.double(ids)
    state.k += 1
    state.transcript.append((state.cprime, witness.point, tuple(ids)))
    return ids


def build_net(inst: Instance, w: WeightState, epsilon, strategy: Optional[str] = None) -> GuardSet:
    strategy = strategy or inst.strategy
    if strategy == "auto":
        strategy = "quadratic" if net_params(epsilon).quadratic_fallback else "hierarchical"
    if strategy == "quadratic":
        return build_quadratic_net(inst.sites, w, epsilon)
    if strategy == "hierarchical":
        return build_hierarchical_net(inst.sites, w, epsilon, force=True)
    return random_comparator_net(inst.sites, w, epsilon, inst.seed, inst.random_constant)


def verify(inst: Instance, ids, regions: Optional[_Regions] = None):
    """``Covered`` or the verifier's first uncovered witness."""
    regions = regions or _Regions(inst.sites)
    return uncovered_witness(inst.polygon, inst.target, regions.of(ids))


def bg_solve(inst: Instance, start_cprime: int = 1, max_phases: int = 64) -> SolveResult:
    """Net, verify, double; restart with a doubled guess when the budget runs out."""
    g = len(inst.sites)
    regions = _Regions(inst.sites)
    state = SolveState(start_cprime, WeightState.uniform(g))
    phases = [PhaseStats(state.cprime, phase_budget(state.cprime, g), 0)]
    for _ in range(max_phases):
        while True:
            net = build_net(inst, state.weights, state.epsilon)
            phases[-1].net_sizes.append(len(net))
            res = uncovered_witness(inst.polygon, inst.target, regions.of(net.ids))
            if res is Covered:
                stats = SolveStats(state.cprime, phases, inst.strategy)
                return SolveResult(net, stats, state)
            if state.k >= phases[-1].budget:
                break
            double_weights(state, res, inst.sites)
            phases[-1].iterations = state.k
        # the guess was too small: double it and start over from uniform weights
        if not seeing_sites(inst.sites, res.point):
            raise NoSiteSeesWitness(res.point)
        state.cprime *= 2
        state.weights = WeightState.uniform(g)
        state.k = 0
        phases.append(PhaseStats(state.cprime, phase_budget(state.cprime, g), 0))
    raise RuntimeError("phase limit reached")


def replay(transcript, g_count: int, cprime: int) -> WeightState:
    """Weights after re-applying the doublings recorded for guess ``cprime``."""
    w = WeightState.uniform(g_count)
    for c, _, ids in transcript:
        if c == cprime:
            w.double(ids)
    return w


def coverage(inst: Instance) -> list[frozenset]:
    """For each finite target, the ids of the sites that see it."""
    if not inst.finite_target:
        raise ValueError("coverage needs a finite target")
    return [frozenset(seeing_sites(inst.sites, p)) for p in inst.target]


def greedy_cover(inst: Instance) -> list[int]:
    """Repeatedly take the site covering most uncovered targets (lowest id on ties)."""
    cov = coverage(inst)
    for p, c in zip(inst.target, cov):
        if not c:
            raise Infeasible(p)
    by_site: dict[int, set] = {}
    for t, c in enumerate(cov):
        for s in c:
            by_site.setdefault(s, set()).add(t)
    left = set(range(len(cov)))
    chosen = []
    while left:
        best = max(sorted(by_site), key=lambda s: len(by_site[s] & left))
        chosen.append(best)
        left -= by_site[best]
    return sorted(chosen)


def brute_force_opt(inst: Instance, limit: int = 24) -> list[int]:
    """A minimum-cardinality cover, first in lexicographic id order."""
    g = len(inst.sites)
    if g > limit:
        raise LimitExceeded(f"{g} sites exceeds the limit of {limit}")
    cov = coverage(inst)
    for p, c in zip(inst.target, cov):
        if not c:
            raise Infeasible(p)
    if not cov:
        return []
    masks = [0] * g
    for t, c in enumerate(cov):
        for s in c:
            masks[s] |= 1 << t
    full = (1 << len(cov)) - 1
    useful = [s for s in range(g) if masks[s]]
    for size in range(1, len(useful) + 1):
        for combo in itertools.combinations(useful, size):
            acc = 0
            for s in combo:
                acc |= masks[s]
            if acc == full:
                return list(combo)
    raise Infeasible(inst.target[0])  # unreachable: all sites together cover


@dataclass(frozen=True)
class Discretization:
    """Sample targets with no guarantee that covering them covers the polygon."""

    points: tuple[Point, ...]
    guarantee: bool = False

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _tri_key(tri):
    (a, b, c) = tri
    return abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))


def _split_longest(tri):
    a, b, c = tri

    def d2(p, q):
        return (p.x - q.x) ** 2 + (p.y - q.y) ** 2

    edges = [(d2(a, b), 0), (d2(b, c), 1), (d2(c, a), 2)]
    k = max(edges, key=lambda e: (e[0], -e[1]))[1]
    p, q, r = [(a, b, c), (b, c, a), (c, a, b)][k]
    m = Point((p.x + q.x) / 2, (p.y + q.y) / 2)
    return (p, m, r), (m, q, r)


def discretize_targets(polygon: SimplePolygon, density: int) -> Discretization:
    """``density`` points per triangle: centroids after repeated longest-edge splits."""
    if density < 1:
        raise ValueError("density must be at least 1")
    out: list[Point] = []
    seen = set()
    for tri in triangulate(polygon.vertices):
        parts = [tri]
        while len(parts) < density:
            k = max(range(len(parts)), key=lambda i: (_tri_key(parts[i]), -i))
            parts[k:k + 1] = _split_longest(parts[k])
        for a, b, c in parts:
            p = Point((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)
            if p not in seen:
                seen.add(p)
                out.append(p)
    return Discretization(tuple(out))


def log_ratio_bound(n_targets: int) -> float:
    return math.log(n_targets) + 1 if n_targets else 1.0


__all__ = [
    "Instance",
    "Infeasible",
    "NoSiteSeesWitness",
    "LimitExceeded",
    "QuadraticFallback",
    "SolveState",
    "SolveStats",
    "SolveResult",
    "phase_budget",
    "double_weights",
    "bg_solve",
    "replay",
    "verify",
    "greedy_cover",
    "brute_force_opt",
    "discretize_targets",
    "coverage",
]
