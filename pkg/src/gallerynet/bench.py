"""Benchmark sweep: net sizes against their ceilings, solver covers against OPT."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional, Sequence

from .fragmentation import SiteSet, WeightState, net_params
from .instances import fixture_polygons
from .nets import build_hierarchical_net, build_quadratic_net, quadratic_size_bound
from .solver import Instance, LimitExceeded, bg_solve, brute_force_opt, discretize_targets


@dataclass
class BenchRow:
    instance: str
    n: int
    sites: int
    epsilon: Fraction
    strategy: str
    net_size: int
    net_raw: int
    bound: int
    cover_size: int
    opt: Optional[int]
    ratio: Optional[Fraction]
    iterations: str
    final_cprime: int
    wall_time: Optional[float] = None


def default_instances(count: int = 6, seed: int = 0, density: int = 2):
    """Built-in fixtures with discretized finite targets so the oracle can run."""
    out = []
    for name, poly in fixture_polygons(count, seed, max_n=20):
        sites = SiteSet.vertices(poly)
        target = discretize_targets(poly, density).points
        out.append((name, Instance(poly, sites, target, "auto", seed)))
    return out


def bench_instance(name: str, inst: Instance, epsilons: Sequence[Fraction],
                   strategies: Sequence[str], oracle_limit: int = 20,
                   timing: bool = False) -> list[BenchRow]:
    rows = []
    w = WeightState.uniform(len(inst.sites))
    opt = None
    if inst.finite_target:
        try:
            opt = len(brute_force_opt(inst, oracle_limit))
        except LimitExceeded:
            opt = None
    for strategy in strategies:
        t0 = time.perf_counter()
        res = bg_solve(Instance(inst.polygon, inst.sites, inst.target, strategy, inst.seed))
        elapsed = time.perf_counter() - t0
        cover = len(res.guards)
        iters = ";".join(str(p.iterations) for p in res.stats.phases)
        for eps in epsilons:
            if strategy == "quadratic":
                net = build_quadratic_net(inst.sites, w, eps)
                bound = quadratic_size_bound(int(4 / eps))
            else:
                net = build_hierarchical_net(inst.sites, w, eps, force=True)
                bound = net_params(eps).size_bound()
            rows.append(BenchRow(
                name, inst.polygon.n, len(inst.sites), eps, strategy, len(net), net.raw_count,
                bound, cover, opt,
                Fraction(cover, opt) if opt else None,
                iters, res.stats.final_cprime, elapsed if timing else None))
    return rows


def run_bench(instances, epsilons, strategies=("quadratic", "hierarchical"),
              oracle_limit: int = 20, timing: bool = False, workers: int = 1) -> list[BenchRow]:
    """Rows come back in input order whatever order the workers finish in."""
    def job(item):
        name, inst = item
        return bench_instance(name, inst, epsilons, strategies, oracle_limit, timing)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(job, instances))
    else:
        chunks = [job(item) for item in instances]
    return [r for c in chunks for r in c]


def to_csv(rows: Sequence[BenchRow], timing: bool = False) -> str:
    names = [f.name for f in fields(BenchRow)]
    if not timing:
        names.remove("wall_time")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for r in rows:
        out = []
        for k in names:
            v = getattr(r, k)
            if v is None:
                out.append("")
            elif k == "wall_time":
                out.append(f"{v:.3f}")
            else:
                out.append(str(v))
        writer.writerow(out)
    return buf.getvalue()
