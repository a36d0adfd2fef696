"""Instance generators.

Two structured families (the nested ring-of-slits construction and its
greedy-adversarial variant) plus seeded random families with controlled
hole fatness, hole diameter, axis-alignment, or segment holes. Generation
is deterministic: identical recipes produce bit-identical instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domain import PolygonalDomain, SegmentDomain, Domain, validate
from .escape import greedy_escape, BoundaryArcPiece
from .geom import ConvexPolygon, Point, Segment, convex_distance, convex_hull, diameter, fatness

FAMILIES = (
    "nested",
    "greedy_hard",
    "fat",
    "segments",
    "axis_rects",
    "bounded_delta",
)


class GenerationError(RuntimeError):
    """Raised when rejection sampling cannot place the requested holes."""


@dataclass(frozen=True)
class InstanceRecipe:
    family: str
    seed: int = 0
    h: Optional[int] = None
    k: Optional[int] = None
    lam: Optional[float] = None
    delta: Optional[float] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def to_json(self) -> dict:
        out = {"family": self.family, "seed": self.seed}
        for key in ("h", "k", "lam", "delta", "epsilon"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "InstanceRecipe":
        return cls(**obj)

    def instance_id(self) -> str:
        bits = [self.family]
        for key in ("k", "h", "delta", "lam"):
            val = getattr(self, key)
            if val is not None:
                bits.append(f"{key}{val:g}")
        bits.append(f"s{self.seed}")
        return "-".join(bits)


@dataclass(frozen=True)
class NestedConstruction:
    """Regular k-gon of unit diameter with k^3 slit rectangles along the
    edges of k^2 inscribed midpoint polygons."""

    domain: PolygonalDomain
    k: int
    epsilon: float
    center: Point
    rings: tuple[ConvexPolygon, ...]  # Q_0 (outer) .. Q_{k^2}
    target: Point  # a vertex of the outer polygon

    @property
    def ring_edge_lengths(self) -> list[float]:
        out = []
        for q in self.rings:
            v = q.vertices
            out.append(v[0].dist(v[1]))
        return out


def _regular_kgon_unit_diameter(k: int) -> list[Point]:
    # circumradius such that the largest vertex distance is exactly 1
    r = 1.0 / (2.0 * math.sin(math.pi * (k // 2) / k))
    return [
        Point(r * math.cos(2.0 * math.pi * i / k), r * math.sin(2.0 * math.pi * i / k))
        for i in range(k)
    ]


def _midpoint_polygon(poly: ConvexPolygon) -> ConvexPolygon:
    vs = poly.vertices
    n = len(vs)
    return ConvexPolygon(
        [
            Point((vs[i].x + vs[(i + 1) % n].x) / 2.0, (vs[i].y + vs[(i + 1) % n].y) / 2.0)
            for i in range(n)
        ]
    )


def _slit_rectangle(u: Point, v: Point, eps: float, width: float) -> ConvexPolygon:
    """Rectangle with symmetry axis uv, shortened by eps at both ends."""
    length = u.dist(v)
    dx, dy = (v.x - u.x) / length, (v.y - u.y) / length
    nx, ny = -dy, dx
    hw = width / 2.0
    lo, hi = eps, length - eps
    return ConvexPolygon(
        [
            Point(u.x + lo * dx + hw * nx, u.y + lo * dy + hw * ny),
            Point(u.x + lo * dx - hw * nx, u.y + lo * dy - hw * ny),
            Point(u.x + hi * dx - hw * nx, u.y + hi * dy - hw * ny),
            Point(u.x + hi * dx + hw * nx, u.y + hi * dy + hw * ny),
        ]
    )


def _slit_width(k: int, eps: float) -> float:
    # eps/2 keeps consecutive-ring slits disjoint only for k <= 6; beyond
    # that the corner clearance 2*eps*tan(pi/(2k)) is the binding limit.
    if k <= 6:
        return eps / 2.0
    return 0.9 * 2.0 * eps * math.tan(math.pi / (2.0 * k))


def nested_kgon(k: int, epsilon: Optional[float] = None) -> NestedConstruction:
    """The ring-of-slits lower-bound construction with h = k^3 holes.

    Edge lengths shrink by cos(pi/k) per ring. `epsilon` defaults to one
    hundredth of the smallest ring edge; an explicit value must keep the
    slits disjoint or a ValueError is raised.
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    outer = ConvexPolygon(_regular_kgon_unit_diameter(k))
    rings = [outer]
    for _ in range(k * k):
        rings.append(_midpoint_polygon(rings[-1]))
    min_edge = min(q.vertices[0].dist(q.vertices[1]) for q in rings)
    if epsilon is None:
        eps = min_edge / 100.0
    else:
        eps = float(epsilon)
        if not 0.0 < eps < min_edge / 8.0:
            raise ValueError(
                f"epsilon must lie in (0, {min_edge / 8.0:.3g}); got {eps:.3g}"
            )
    width = _slit_width(k, eps)
    holes = []
    for q in rings[1:]:
        vs = q.vertices
        for i in range(len(vs)):
            holes.append(_slit_rectangle(vs[i], vs[(i + 1) % len(vs)], eps, width))
    domain = PolygonalDomain(outer, holes)
    report = validate(domain)
    if not report.ok:
        raise ValueError(f"epsilon too large, holes intersect: {report.violations[0].message}")
    construction = NestedConstruction(
        domain=domain,
        k=k,
        epsilon=eps,
        center=Point(0.0, 0.0),
        rings=tuple(rings),
        target=outer.vertices[0],
    )
    return construction


def _rotate_about(p: Point, c: Point, cos_t: float, sin_t: float) -> Point:
    x, y = p.x - c.x, p.y - c.y
    return Point(c.x + x * cos_t - y * sin_t, c.y + x * sin_t + y * cos_t)


def _rotate_polygon(poly: ConvexPolygon, angle: float) -> ConvexPolygon:
    c = poly.centroid
    ct, st = math.cos(angle), math.sin(angle)
    return ConvexPolygon([_rotate_about(v, c, ct, st) for v in poly.vertices])


GREEDY_HARD_SWEEP = 1024


def greedy_hard_instance(k: int) -> tuple[PolygonalDomain, Point]:
    """Adversarial instance on which every greedy escape is long.

    Starts from the nested construction, adds three slit holes around a
    small equilateral triangle at the center, rotates every hole
    counterclockwise by a small angle (so greedy walks turn left), and
    keeps only the holes touched by a dense sweep of greedy directions.
    """
    base = nested_kgon(k)
    eps = base.epsilon
    s = base.center
    inner = base.rings[-1]
    # small equilateral triangle around the center, one vertex pointing up
    inradius = min(
        abs(nx * (s.x - a.x) + ny * (s.y - a.y))
        for (a, _), (nx, ny) in zip(inner.edges(), inner._inward_normals)
    )
    r_t = inradius / 2.0
    tri = [
        Point(
            r_t * math.cos(math.pi / 2.0 + 2.0 * math.pi * j / 3.0),
            r_t * math.sin(math.pi / 2.0 + 2.0 * math.pi * j / 3.0),
        )
        for j in range(3)
    ]
    width = _slit_width(k, eps)
    tri_holes = [
        _slit_rectangle(tri[j], tri[(j + 1) % 3], eps, width) for j in range(3)
    ]
    holes = list(base.domain.holes) + tri_holes

    angle = math.pi / (20.0 * k * k)
    for _ in range(40):
        rotated = [_rotate_polygon(hole, angle) for hole in holes]
        domain = PolygonalDomain(base.domain.outer, rotated)
        if validate(domain).ok:
            break
        angle /= 2.0
    else:
        raise GenerationError("could not find a rotation angle keeping holes disjoint")

    touched: set[int] = set()
    for j in range(GREEDY_HARD_SWEEP):
        theta = 2.0 * math.pi * j / GREEDY_HARD_SWEEP
        trace = greedy_escape(domain, s, (math.cos(theta), math.sin(theta)))
        for piece in trace.pieces:
            if isinstance(piece, BoundaryArcPiece):
                touched.add(piece.hole)
    kept = [domain.holes[i] for i in sorted(touched)]
    return PolygonalDomain(domain.outer, kept), s


# -- seeded random families ----------------------------------------------------

_UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
_PLACEMENT_GAP = 2e-3
_MAX_TRIES_PER_HOLE = 400


def _random_convex(rng: np.random.Generator, target_diam: float) -> ConvexPolygon:
    for _ in range(64):
        m = int(rng.integers(4, 10))
        ang = rng.uniform(0.0, 2.0 * math.pi, m)
        rad = rng.uniform(0.35, 1.0, m)
        pts = [Point(r * math.cos(a), r * math.sin(a)) for a, r in zip(ang, rad)]
        hull = convex_hull(pts)
        if len(hull) >= 3:
            poly = ConvexPolygon(hull)
            d, _ = diameter(poly)
            sc = target_diam / d
            c = poly.centroid
            return ConvexPolygon(
                [Point(c.x + (v.x - c.x) * sc, c.y + (v.y - c.y) * sc) for v in poly.vertices]
            )
    raise GenerationError("failed to draw a convex hole shape")


def _translate(poly: ConvexPolygon, cx: float, cy: float) -> ConvexPolygon:
    c = poly.centroid
    return ConvexPolygon(
        [Point(v.x - c.x + cx, v.y - c.y + cy) for v in poly.vertices]
    )


def _place_holes(
    rng: np.random.Generator,
    h: int,
    draw,
    outer: ConvexPolygon,
) -> list[ConvexPolygon]:
    placed: list[ConvexPolygon] = []
    boxes: list[tuple[float, float, float, float]] = []
    tries = 0
    budget = _MAX_TRIES_PER_HOLE * h
    while len(placed) < h:
        if tries > budget:
            raise GenerationError(
                f"placed only {len(placed)}/{h} holes in {budget} attempts; "
                "parameters too crowded"
            )
        tries += 1
        cand = draw()
        if not all(
            outer.strictly_contains(v, tol=_PLACEMENT_GAP) for v in cand.vertices
        ):
            continue
        x0, y0, x1, y1 = cand.bbox
        ok = True
        for (bx0, by0, bx1, by1), other in zip(boxes, placed):
            if (
                x0 <= bx1 + _PLACEMENT_GAP
                and bx0 <= x1 + _PLACEMENT_GAP
                and y0 <= by1 + _PLACEMENT_GAP
                and by0 <= y1 + _PLACEMENT_GAP
            ) and convex_distance(cand, other) <= _PLACEMENT_GAP:
                ok = False
                break
        if ok:
            placed.append(cand)
            boxes.append(cand.bbox)
    return placed


def _family_fat(rng: np.random.Generator, h: int, lam: float) -> PolygonalDomain:
    outer = ConvexPolygon(_UNIT_SQUARE)

    def draw():
        for _ in range(64):
            d = rng.uniform(0.05, 0.16)
            poly = _random_convex(rng, d)
            if fatness(poly).lam >= lam:
                return _translate(poly, rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9))
        raise GenerationError(f"cannot draw a hole with fatness >= {lam}")

    return PolygonalDomain(outer, _place_holes(rng, h, draw, outer))


def _family_bounded_delta(rng: np.random.Generator, h: int, delta: float) -> PolygonalDomain:
    outer = ConvexPolygon(_UNIT_SQUARE)
    diam = math.sqrt(2.0)

    def draw():
        d = rng.uniform(0.4, 1.0) * delta * diam
        poly = _random_convex(rng, d)
        return _translate(poly, rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))

    return PolygonalDomain(outer, _place_holes(rng, h, draw, outer))


def _family_axis_rects(rng: np.random.Generator, h: int) -> PolygonalDomain:
    outer = ConvexPolygon(_UNIT_SQUARE)

    def draw():
        w = rng.uniform(0.02, 0.12)
        hh = rng.uniform(0.02, 0.12)
        cx = rng.uniform(0.08, 0.92)
        cy = rng.uniform(0.08, 0.92)
        return ConvexPolygon(
            [
                (cx - w / 2, cy - hh / 2),
                (cx + w / 2, cy - hh / 2),
                (cx + w / 2, cy + hh / 2),
                (cx - w / 2, cy + hh / 2),
            ]
        )

    return PolygonalDomain(outer, _place_holes(rng, h, draw, outer))


def _family_segments(rng: np.random.Generator, h: int, delta: float) -> SegmentDomain:
    from .domain import _segment_distance

    outer = ConvexPolygon(_UNIT_SQUARE)
    diam = math.sqrt(2.0)
    placed: list[Segment] = []
    tries = 0
    budget = _MAX_TRIES_PER_HOLE * h
    while len(placed) < h:
        if tries > budget:
            raise GenerationError(
                f"placed only {len(placed)}/{h} segments in {budget} attempts"
            )
        tries += 1
        length = rng.uniform(0.4, 1.0) * delta * diam
        ang = rng.uniform(0.0, math.pi)
        cx = rng.uniform(0.05, 0.95)
        cy = rng.uniform(0.05, 0.95)
        dx, dy = length / 2.0 * math.cos(ang), length / 2.0 * math.sin(ang)
        a = Point(cx - dx, cy - dy)
        b = Point(cx + dx, cy + dy)
        seg = Segment(a, b)
        if not (
            outer.strictly_contains(a, tol=_PLACEMENT_GAP)
            and outer.strictly_contains(b, tol=_PLACEMENT_GAP)
        ):
            continue
        if all(_segment_distance(seg, o) > _PLACEMENT_GAP for o in placed):
            placed.append(seg)
    return SegmentDomain(outer, placed)


def random_family(recipe: InstanceRecipe) -> Domain:
    """Instantiate a recipe; the result always passes validation."""
    if recipe.family == "nested":
        if recipe.k is None:
            raise ValueError("nested family needs k")
        return nested_kgon(recipe.k, recipe.epsilon).domain
    if recipe.family == "greedy_hard":
        if recipe.k is None:
            raise ValueError("greedy_hard family needs k")
        return greedy_hard_instance(recipe.k)[0]
    rng = np.random.default_rng(recipe.seed)
    if recipe.h is None:
        raise ValueError(f"{recipe.family} family needs h")
    if recipe.family == "fat":
        return _family_fat(rng, recipe.h, recipe.lam if recipe.lam is not None else 0.5)
    if recipe.family == "bounded_delta":
        return _family_bounded_delta(
            rng, recipe.h, recipe.delta if recipe.delta is not None else 0.05
        )
    if recipe.family == "axis_rects":
        return _family_axis_rects(rng, recipe.h)
    if recipe.family == "segments":
        return _family_segments(
            rng, recipe.h, recipe.delta if recipe.delta is not None else 0.05
        )
    raise ValueError(f"unhandled family {recipe.family!r}")
