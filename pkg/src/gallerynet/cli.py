"""Command-line entry point: ``gallerynet <command> ...``.

Exit codes: 0 success, 1 infeasible instance or failed verification,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .bench import default_instances, run_bench, to_csv
from .fragmentation import WeightState, net_params
from .geometry import GeometryError
from .io import ParseError, ValidationError, _points, parse_instance
from .nets import (
    build_hierarchical_net,
    build_quadratic_net,
    quadratic_size_bound,
    random_comparator_net,
)
from .render import render_svg
from .solver import (
    Infeasible,
    Instance,
    LimitExceeded,
    bg_solve,
    brute_force_opt,
    discretize_targets,
    greedy_cover,
    verify,
)
from .visibility import Covered, WholePolygon, visibility_region

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}") from exc
    if v <= 0 or v.numerator != 1:
        raise argparse.ArgumentTypeError("epsilon must be 1/k for a positive integer k")
    return v


def _fraction_list(text: str) -> list[Fraction]:
    return [_fraction(t) for t in text.split(",") if t]


def _ids(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad guard id list: {text!r}") from exc


def _fmt_point(p) -> str:
    return f"({p.x}, {p.y})"


def _load(args):
    f = parse_instance(args.instance)
    inst = f.instance
    if getattr(args, "strategy", None):
        inst = Instance(inst.polygon, inst.sites, inst.target, args.strategy, inst.seed)
    if getattr(args, "seed", None) is not None:
        inst = Instance(inst.polygon, inst.sites, inst.target, inst.strategy, args.seed)
    target = getattr(args, "target", None)
    if target:
        if target == "polygon":
            inst.target = WholePolygon
        elif target.startswith("points:"):
            pts = tuple(_points(json.loads(Path(target[7:]).read_text()), "points"))
            inst.target = pts
        else:
            raise InputError("--target must be 'polygon' or 'points:<file>'")
    f.instance = inst
    return f


def _finite(inst: Instance, density):
    if inst.finite_target:
        return inst
    if density is None:
        raise InputError("this command needs a finite target; pass --density or points")
    pts = discretize_targets(inst.polygon, density).points
    return Instance(inst.polygon, inst.sites, pts, inst.strategy, inst.seed)


def cmd_validate(args, out):
    f = _load(args)
    p = f.instance.polygon
    print(f"valid: n={p.n} area={p.area} reversed_input={p.reversed_input}", file=out)
    print(f"sites: {len(f.instance.sites)}", file=out)
    return EXIT_OK


def cmd_net(args, out):
    f = _load(args)
    inst = f.instance
    eps = args.epsilon or f.epsilon or Fraction(1, 16)
    params = net_params(eps)
    w = WeightState.uniform(len(inst.sites))
    b = ",".join(map(str, params.b))
    fs = ",".join(map(str, params.f[1:]))
    print(f"epsilon={eps} t={params.t} alpha={params.alpha} b=({b}) f=({fs}) "
          f"quadratic_fallback={'yes' if params.quadratic_fallback else 'no'}", file=out)
    strategy = inst.strategy
    if strategy in ("auto", "quadratic"):
        m = 4 / eps
        if m.denominator == 1:
            net = build_quadratic_net(inst.sites, w, eps)
            print(f"quadratic: m={m} size={len(net)} raw={net.raw_count} "
                  f"bound={quadratic_size_bound(int(m))}", file=out)
    if strategy in ("auto", "hierarchical"):
        net = build_hierarchical_net(inst.sites, w, eps, force=True)
        print(f"hierarchical: size={len(net)} raw={net.raw_count} "
              f"pair_bound={params.pair_bound()} bound={params.size_bound()}", file=out)
    if strategy == "random":
        net = random_comparator_net(inst.sites, w, eps, inst.seed)
        print(f"random: size={len(net)}", file=out)
    return EXIT_OK


def cmd_solve(args, out):
    f = _load(args)
    res = bg_solve(f.instance, start_cprime=args.cprime or f.cprime or 1)
    inst = f.instance
    print(f"cover: {len(res.guards)}", file=out)
    for i in res.guards:
        print(f"  {i} {_fmt_point(inst.sites[i].point)}", file=out)
    print("Covered", file=out)
    print(f"final_cprime={res.stats.final_cprime}", file=out)
    for ph in res.stats.phases:
        sizes = ",".join(map(str, ph.net_sizes))
        print(f"phase cprime={ph.cprime} budget={ph.budget} iterations={ph.iterations} "
              f"net_sizes={sizes}", file=out)
    return EXIT_OK


def cmd_verify(args, out):
    f = _load(args)
    inst = f.instance
    bad = [i for i in args.guards if not 0 <= i < len(inst.sites)]
    if bad:
        raise InputError(f"unknown guard ids: {bad}")
    res = verify(inst, args.guards)
    if res is Covered:
        print("Covered", file=out)
        return EXIT_OK
    print(f"Witness {_fmt_point(res.point)}", file=out)
    return EXIT_INFEASIBLE


def cmd_opt(args, out):
    f = _load(args)
    inst = _finite(f.instance, args.density)
    ids = brute_force_opt(inst, args.limit)
    print(f"opt: {len(ids)} guards {ids}", file=out)
    return EXIT_OK


def cmd_greedy(args, out):
    f = _load(args)
    inst = _finite(f.instance, args.density)
    ids = greedy_cover(inst)
    print(f"greedy: {len(ids)} guards {ids}", file=out)
    return EXIT_OK


def cmd_render(args, out):
    f = _load(args)
    inst = f.instance
    ids = args.guards
    if ids is None:
        ids = list(bg_solve(inst).guards) if args.solve else []
    pts = [inst.sites[i].point for i in ids]
    regions = [visibility_region(inst.polygon, p) for p in pts]
    witness = None
    if ids or inst.finite_target:
        res = verify(inst, ids)
        witness = None if res is Covered else res.point
    render_svg(inst.polygon, pts, regions, witness, args.out)
    print(f"wrote {args.out}", file=out)
    return EXIT_OK


def cmd_bench(args, out):
    if args.instances:
        items = [(Path(p).stem, parse_instance(p).instance) for p in args.instances]
    else:
        items = default_instances(args.count, args.seed or 0)
    eps = args.epsilon or [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]
    rows = run_bench(items, eps, args.strategies.split(","), args.oracle_limit,
                     args.timing, args.workers)
    text = to_csv(rows, args.timing)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gallerynet",
                                 description="Perimeter-guard art gallery solver.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, strategy=False):
        p.add_argument("instance", help="instance JSON file")
        p.add_argument("--seed", type=int)
        p.add_argument("--target", help="'polygon' or 'points:<file>'")
        if strategy:
            p.add_argument("--strategy",
                           choices=["auto", "quadratic", "hierarchical", "random"])

    p = sub.add_parser("validate", help="check the polygon and sites")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("net", help="build nets at one epsilon and report sizes")
    common(p, True)
    p.add_argument("--epsilon", type=_fraction)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("solve", help="run the weight-doubling solver")
    common(p, True)
    p.add_argument("--cprime", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check whether given sites guard the target")
    common(p)
    p.add_argument("--guards", type=_ids, required=True, help="comma-separated site ids")
    p.set_defaults(func=cmd_verify)

    for name, fn, text in (("opt", cmd_opt, "exhaustive minimum cover"),
                           ("greedy", cmd_greedy, "greedy set-cover baseline")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--density", type=int, help="discretize a polygon target")
        if name == "opt":
            p.add_argument("--limit", type=int, default=24)
        p.set_defaults(func=fn)

    p = sub.add_parser("render", help="write an SVG picture")
    common(p, True)
    p.add_argument("--guards", type=_ids)
    p.add_argument("--solve", action="store_true", help="render the solver's cover")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="sweep instances and epsilons, emit CSV")
    p.add_argument("instances", nargs="*")
    p.add_argument("--epsilon", type=_fraction_list)
    p.add_argument("--strategies", default="quadratic,hierarchical")
    p.add_argument("--count", type=int, default=6, help="built-in fixtures when no files")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="accepted for symmetry; unused")
    p.add_argument("--oracle-limit", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add a wall_time column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return ap


def run_command(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=err)
        return EXIT_INFEASIBLE
    except (ParseError, ValidationError, GeometryError, InputError, LimitExceeded,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
