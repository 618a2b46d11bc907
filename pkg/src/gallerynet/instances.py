"""Polygon families used by tests, benchmarks and the CLI fixtures."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .geometry import GeometryError, Point, SimplePolygon, validate_polygon


def square(size=1) -> SimplePolygon:
    return validate_polygon([(0, 0), (size, 0), (size, size), (0, size)])


def l_polygon() -> SimplePolygon:
    return validate_polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


def comb(k: int, height: int | None = None) -> SimplePolygon:
    """``k`` unit-wide prongs on a unit-high base; ``4k`` vertices.

    Prong ``j`` spans ``x in [2j, 2j+1]``. Prongs are tall enough that no
    point at a prong tip can see into any other prong.
    """
    if k < 1:
        raise ValueError("need at least one prong")
    H = height if height is not None else 4 * k + 4
    pts = [(0, 0), (2 * k - 1, 0)]
    for j in range(k - 1, -1, -1):
        pts += [(2 * j + 1, H), (2 * j, H)]
        if j > 0:
            pts += [(2 * j, 1), (2 * j - 1, 1)]
    return validate_polygon(pts)


def comb_tips(k: int, height: int | None = None) -> list[Point]:
    """Midpoints of the prong tops."""
    H = height if height is not None else 4 * k + 4
    return [Point(Fraction(4 * j + 1, 2), Fraction(H)) for j in range(k)]


def staircase(steps: int) -> SimplePolygon:
    """Monotone staircase: ``steps`` unit steps between two axis-parallel walls."""
    pts = [(0, 0), (steps, 0)]
    for s in range(steps, 0, -1):
        pts += [(s, steps - s + 1), (s - 1, steps - s + 1)]
    pts = pts[:-1] + [(0, steps)]
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    return validate_polygon(out)


def random_convex(rng: np.random.Generator, n: int, scale: int = 1000) -> SimplePolygon:
    """Convex hull of random lattice points, trimmed to at most ``n`` vertices."""
    while True:
        pts = {tuple(int(v) for v in rng.integers(0, scale, 2)) for _ in range(4 * n)}
        hull = _hull(sorted(pts))
        if len(hull) < 3:
            continue
        if len(hull) > n:
            step = len(hull) / n
            hull = [hull[int(i * step)] for i in range(n)]
        try:
            return validate_polygon(hull)
        except GeometryError:
            continue


def _hull(pts):
    def cr(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cr(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cr(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def random_l(rng: np.random.Generator, scale: int = 20) -> SimplePolygon:
    W, H = (int(v) for v in rng.integers(3, scale, 2))
    a = int(rng.integers(1, W))
    b = int(rng.integers(1, H))
    return validate_polygon([(0, 0), (W, 0), (W, b), (a, b), (a, H), (0, H)])


def random_star(rng: np.random.Generator, n: int, scale: int = 1000) -> SimplePolygon:
    """Star-shaped about the origin: sorted distinct angles, random radii."""
    while True:
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        rad = rng.uniform(0.3, 1.0, n) * scale
        pts = [(int(round(r * math.cos(a))), int(round(r * math.sin(a))))
               for a, r in zip(ang, rad)]
        try:
            return validate_polygon(pts)
        except GeometryError:
            continue


def fixture_polygons(count: int = 20, seed: int = 0, max_n: int = 30) -> list[tuple[str, SimplePolygon]]:
    """A deterministic mix of convex, L, comb, staircase and star polygons."""
    rng = np.random.default_rng(seed)
    out = []
    kinds = ["convex", "l", "comb", "staircase", "star"]
    for i in range(count):
        kind = kinds[i % len(kinds)]
        if kind == "convex":
            p = random_convex(rng, int(rng.integers(3, 13)))
        elif kind == "l":
            p = random_l(rng)
        elif kind == "comb":
            p = comb(int(rng.integers(2, max_n // 4 + 1)))
        elif kind == "staircase":
            p = staircase(int(rng.integers(2, (max_n - 2) // 2 + 1)))
        else:
            p = random_star(rng, int(rng.integers(6, max_n + 1)))
        assert p.n <= max_n
        out.append((f"{kind}{i}", p))
    return out
