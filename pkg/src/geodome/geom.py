"""Planar convex-geometry primitives.

Value types (Point, Segment, Polyline, ConvexPolygon) are immutable.
Orientation and in-circle decisions are exact: a floating-point filter
settles the easy cases and borderline determinants fall back to rational
arithmetic over the (exact) binary values of the input doubles. Metric
quantities (lengths, widths, distances) are plain double precision with
a documented relative tolerance of REL_TOL.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

# Relative tolerance for all metric (length-valued) computations.
REL_TOL = 1e-9

_EPS = sys.float_info.epsilon / 2.0  # 2**-53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS


class Orientation(enum.Enum):
    CCW = 1
    COLLINEAR = 0
    CW = -1


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def _orient_exact(px, py, qx, qy, rx, ry) -> int:
    det = (Fraction(qx) - Fraction(px)) * (Fraction(ry) - Fraction(py)) - (
        Fraction(qy) - Fraction(py)
    ) * (Fraction(rx) - Fraction(px))
    return (det > 0) - (det < 0)


def orient_sign(px: float, py: float, qx: float, qy: float, rx: float, ry: float) -> int:
    """Sign of the signed area of triangle (p, q, r); exact decision."""
    detleft = (qx - px) * (ry - py)
    detright = (qy - py) * (rx - px)
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            return _sign(det)
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return _sign(det)
        detsum = -detleft - detright
    else:
        return _sign(det)
    if det >= _CCW_ERRBOUND * detsum or -det >= _CCW_ERRBOUND * detsum:
        return _sign(det)
    return _orient_exact(px, py, qx, qy, rx, ry)


def incircle_sign(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    """Sign of the in-circle determinant for CCW triangle (a, b, c) and query d.

    Positive iff d lies strictly inside the circumcircle. Exact decision
    (float filter with rational fallback).
    """
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    errbound = _ICC_ERRBOUND * permanent
    if det > errbound or -det > errbound:
        return _sign(det)

    fa, fb, fc, fd = (
        (Fraction(ax), Fraction(ay)),
        (Fraction(bx), Fraction(by)),
        (Fraction(cx), Fraction(cy)),
        (Fraction(dx), Fraction(dy)),
    )
    m = []
    for (fx, fy) in (fa, fb, fc):
        ex = fx - fd[0]
        ey = fy - fd[1]
        m.append((ex, ey, ex * ex + ey * ey))
    det_exact = (
        m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2])
        - m[0][1] * (m[1][0] * m[2][2] - m[2][0] * m[1][2])
        + m[0][2] * (m[1][0] * m[2][1] - m[2][0] * m[1][1])
    )
    return (det_exact > 0) - (det_exact < 0)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: ({self.x}, {self.y})")

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    def __lt__(self, other: "Point") -> bool:
        return (self.x, self.y) < (other.x, other.y)


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    """Orientation of the ordered triple (p, q, r); exact decision."""
    return Orientation(orient_sign(p.x, p.y, q.x, q.y, r.x, r.y))


def midpoint(p: Point, q: Point) -> Point:
    return Point((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment: endpoints coincide")

    @property
    def length(self) -> float:
        return self.a.dist(self.b)

    def direction(self) -> tuple[float, float]:
        d = self.length
        return ((self.b.x - self.a.x) / d, (self.b.y - self.a.y) / d)


class Polyline:
    """Ordered point sequence; the universal path representation."""

    __slots__ = ("points", "_length")

    def __init__(self, points: Iterable[Point]):
        pts = tuple(points)
        if not pts:
            raise ValueError("empty polyline")
        self.points = pts
        self._length: Optional[float] = None

    @property
    def length(self) -> float:
        if self._length is None:
            self._length = sum(
                a.dist(b) for a, b in zip(self.points, self.points[1:])
            )
        return self._length

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyline) and self.points == other.points

    def __repr__(self) -> str:
        return f"Polyline({len(self.points)} pts, length={self.length:.6g})"

    def concat(self, other: "Polyline") -> "Polyline":
        """Join two polylines; drops the duplicated junction point."""
        if self.points[-1] == other.points[0]:
            return Polyline(self.points + other.points[1:])
        return Polyline(self.points + other.points)

    def reversed(self) -> "Polyline":
        return Polyline(self.points[::-1])


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a.x, a.y
    dx, dy = b.x - ax, b.y - ay
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return p.dist(a)
    t = ((p.x - ax) * dx + (p.y - ay) * dy) / l2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (ax + t * dx), p.y - (ay + t * dy))


class ConvexPolygon:
    """Strictly convex polygon, canonicalized to CCW order.

    The constructor reorders the input into counterclockwise order starting
    at the lexicographically smallest vertex and rejects anything that is
    not strictly convex: fewer than three vertices, repeated vertices, or a
    collinear consecutive triple. Input may be given in either rotational
    order or as an unordered convex-position point set.
    """

    __slots__ = ("vertices", "__dict__")

    def __init__(self, vertices: Iterable[Point | tuple[float, float]]):
        vs = [v if isinstance(v, Point) else Point(v[0], v[1]) for v in vertices]
        if len(vs) < 3:
            raise ValueError("a convex polygon needs at least 3 vertices")
        if len({v.as_tuple() for v in vs}) != len(vs):
            raise ValueError("repeated vertices")
        cx = sum(v.x for v in vs) / len(vs)
        cy = sum(v.y for v in vs) / len(vs)
        vs.sort(key=lambda v: (math.atan2(v.y - cy, v.x - cx), (v.x - cx) ** 2 + (v.y - cy) ** 2))
        start = min(range(len(vs)), key=lambda i: (vs[i].x, vs[i].y))
        vs = vs[start:] + vs[:start]
        n = len(vs)
        for i in range(n):
            o = orient_sign(
                vs[i].x, vs[i].y,
                vs[(i + 1) % n].x, vs[(i + 1) % n].y,
                vs[(i + 2) % n].x, vs[(i + 2) % n].y,
            )
            if o <= 0:
                raise ValueError("input is not strictly convex")
        self.vertices = tuple(vs)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon({len(self.vertices)} vertices)"

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> Iterator[tuple[Point, Point]]:
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[i], vs[(i + 1) % len(vs)]

    @cached_property
    def vertex_array(self) -> np.ndarray:
        return np.array([(v.x, v.y) for v in self.vertices], dtype=np.float64)

    @cached_property
    def perimeter(self) -> float:
        return sum(a.dist(b) for a, b in self.edges())

    @cached_property
    def area(self) -> float:
        s = 0.0
        for a, b in self.edges():
            s += a.x * b.y - b.x * a.y
        return s / 2.0

    @cached_property
    def centroid(self) -> Point:
        sx = sy = 0.0
        for a, b in self.edges():
            w = a.x * b.y - b.x * a.y
            sx += (a.x + b.x) * w
            sy += (a.y + b.y) * w
        return Point(sx / (6.0 * self.area), sy / (6.0 * self.area))

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return (min(xs), min(ys), max(xs), max(ys))

    @cached_property
    def bbox_diagonal(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    @cached_property
    def _inward_normals(self) -> list[tuple[float, float]]:
        # Unit inward normals (left of each CCW edge).
        out = []
        for a, b in self.edges():
            dx, dy = b.x - a.x, b.y - a.y
            l = math.hypot(dx, dy)
            out.append((-dy / l, dx / l))
        return out

    @cached_property
    def _cumulative_params(self) -> list[float]:
        # Boundary arclength at each vertex, starting at vertices[0].
        acc = [0.0]
        for a, b in self.edges():
            acc.append(acc[-1] + a.dist(b))
        return acc

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        """Closed containment, with a metric slack of `tol` outward."""
        for (a, _), (nx, ny) in zip(self.edges(), self._inward_normals):
            if nx * (p.x - a.x) + ny * (p.y - a.y) < -tol:
                return False
        return True

    def strictly_contains(self, p: Point, tol: float = 0.0) -> bool:
        """Open containment: `p` at least `tol` inside every edge."""
        for (a, _), (nx, ny) in zip(self.edges(), self._inward_normals):
            if nx * (p.x - a.x) + ny * (p.y - a.y) <= tol:
                return False
        return True

    def boundary_distance(self, p: Point) -> float:
        return min(point_segment_distance(p, a, b) for a, b in self.edges())

    def interior_depth(self, p: Point) -> float:
        """Smallest signed distance to an edge line; positive inside."""
        return min(
            nx * (p.x - a.x) + ny * (p.y - a.y)
            for (a, _), (nx, ny) in zip(self.edges(), self._inward_normals)
        )

    def boundary_param(self, p: Point, tol: Optional[float] = None) -> float:
        """Arclength parameter of a boundary point, in [0, perimeter).

        Raises ValueError if `p` is farther than `tol` (default REL_TOL
        times the bounding-box diagonal) from the boundary.
        """
        if tol is None:
            tol = REL_TOL * self.bbox_diagonal
        best = None
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            d = point_segment_distance(p, a, b)
            if best is None or d < best[0]:
                ax, ay = a.x, a.y
                ex, ey = b.x - ax, b.y - ay
                l2 = ex * ex + ey * ey
                t = ((p.x - ax) * ex + (p.y - ay) * ey) / l2
                t = min(1.0, max(0.0, t))
                best = (d, i, t)
        if best is None or best[0] > tol:
            raise ValueError("point is not on the polygon boundary")
        _, i, t = best
        edge_len = vs[i].dist(vs[(i + 1) % n])
        tau = self._cumulative_params[i] + t * edge_len
        if tau >= self.perimeter:
            tau -= self.perimeter
        return tau

    def point_at_param(self, tau: float) -> Point:
        per = self.perimeter
        tau = tau % per
        cum = self._cumulative_params
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            if tau <= cum[i + 1] or i == n - 1:
                a, b = vs[i], vs[(i + 1) % n]
                seg = cum[i + 1] - cum[i]
                t = 0.0 if seg == 0 else (tau - cum[i]) / seg
                return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class FatnessReport:
    diameter: float
    width: float
    lam: float  # width / diameter
    diametral_pair: tuple[Point, Point]


def diameter(poly: ConvexPolygon) -> tuple[float, tuple[Point, Point]]:
    """Diameter of a convex polygon by rotating calipers.

    Returns (max vertex-pair distance, pair); among equally far pairs the
    lexicographically smallest pair wins.
    """
    vs = poly.vertices
    n = len(vs)

    def d2(i, j):
        return (vs[i].x - vs[j].x) ** 2 + (vs[i].y - vs[j].y) ** 2

    def area2(i, j, k):
        return (vs[j].x - vs[i].x) * (vs[k].y - vs[i].y) - (vs[j].y - vs[i].y) * (
            vs[k].x - vs[i].x
        )

    best = (-1.0, None)
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        while area2(i, ni, (j + 1) % n) > area2(i, ni, j):
            j = (j + 1) % n
        # (j+1) candidates cover parallel-edge ties
        for a, b in ((i, j), (ni, j), (i, (j + 1) % n), (ni, (j + 1) % n)):
            dd = d2(a, b)
            if dd > best[0]:
                best = (dd, tuple(sorted((vs[a], vs[b]))))
            elif dd == best[0]:
                pair = tuple(sorted((vs[a], vs[b])))
                if pair < best[1]:
                    best = (dd, pair)
    return math.sqrt(best[0]), best[1]


def width(poly: ConvexPolygon) -> float:
    """Minimum width over all slab directions (rotating calipers)."""
    vs = poly.vertices
    n = len(vs)

    def area2(i, j, k):
        return (vs[j].x - vs[i].x) * (vs[k].y - vs[i].y) - (vs[j].y - vs[i].y) * (
            vs[k].x - vs[i].x
        )

    best = math.inf
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        while area2(i, ni, (j + 1) % n) > area2(i, ni, j):
            j = (j + 1) % n
        h = area2(i, ni, j) / vs[i].dist(vs[ni])
        best = min(best, h)
    return best


def perimeter(poly: ConvexPolygon) -> float:
    return poly.perimeter


def fatness(poly: ConvexPolygon) -> FatnessReport:
    """Width-to-diameter report; lam is in (0, 1] for a convex polygon."""
    d, pair = diameter(poly)
    w = width(poly)
    return FatnessReport(diameter=d, width=w, lam=w / d, diametral_pair=pair)


def tangents_from_point(s: Point, poly: ConvexPolygon) -> tuple[Point, Point]:
    """Tangent vertices (ell, r) from an outside point.

    The polygon lies on the left of the ray s->ell and on the right of the
    ray s->r. When a tangent ray contains a whole edge, the vertex nearer
    to s is returned.
    """
    if poly.contains(s, tol=REL_TOL * poly.bbox_diagonal):
        raise ValueError("tangents undefined: point is inside or on the polygon")
    vs = poly.vertices
    n = len(vs)
    left = []
    right = []
    for i in range(n):
        v = vs[i]
        o_prev = orient_sign(s.x, s.y, v.x, v.y, vs[i - 1].x, vs[i - 1].y)
        o_next = orient_sign(s.x, s.y, v.x, v.y, vs[(i + 1) % n].x, vs[(i + 1) % n].y)
        if o_prev >= 0 and o_next >= 0:
            left.append(v)
        if o_prev <= 0 and o_next <= 0:
            right.append(v)
    if not left or not right:
        raise ValueError("tangent computation failed (degenerate input?)")
    ell = min(left, key=lambda v: s.dist(v))
    r = min(right, key=lambda v: s.dist(v))
    return ell, r


def boundary_arc(
    poly: ConvexPolygon, p: Point, q: Point, direction: Orientation
) -> Polyline:
    """Boundary polyline from p to q in the given rotational direction.

    p and q must lie on the boundary (within REL_TOL times the bbox
    diagonal). Intermediate vertices are included. p == q yields the
    single-point polyline of length zero.
    """
    if direction is Orientation.COLLINEAR:
        raise ValueError("direction must be CCW or CW")
    if direction is Orientation.CW:
        return boundary_arc(poly, q, p, Orientation.CCW).reversed()
    tol = REL_TOL * poly.bbox_diagonal
    tau_p = poly.boundary_param(p, tol)
    tau_q = poly.boundary_param(q, tol)
    if p.dist(q) <= tol:
        return Polyline([p])
    per = poly.perimeter
    if tau_q < tau_p:
        tau_q += per
    pts = [p]
    cum = poly._cumulative_params
    n = len(poly.vertices)
    for k in range(1, 2 * n + 1):
        base = cum[k % n] + (k // n) * per if k >= n else cum[k]
        # vertex parameters unrolled over two revolutions
        if base > tau_p + tol and base < tau_q - tol:
            pts.append(poly.vertices[k % n])
        if base >= tau_q - tol:
            break
    pts.append(q)
    return Polyline(pts)


def _clip_params(
    px: float, py: float, qx: float, qy: float, poly: ConvexPolygon
) -> Optional[tuple[float, float]]:
    """Parametric interval [t0, t1] of segment p+t(q-p) inside the closed polygon."""
    dx, dy = qx - px, qy - py
    t0, t1 = 0.0, 1.0
    for (a, _), (nx, ny) in zip(poly.edges(), poly._inward_normals):
        f0 = nx * (px - a.x) + ny * (py - a.y)
        den = nx * dx + ny * dy
        if den == 0.0:
            if f0 < 0.0:
                return None
            continue
        t = -f0 / den
        if den > 0.0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    return t0, t1


def segment_intersects_interior(seg: Segment, poly: ConvexPolygon) -> bool:
    """True iff the open segment meets the open interior of the polygon."""
    res = _clip_params(seg.a.x, seg.a.y, seg.b.x, seg.b.y, poly)
    if res is None:
        return False
    t0, t1 = res
    if (t1 - t0) * seg.length <= REL_TOL * poly.bbox_diagonal:
        return False
    tm = (t0 + t1) / 2.0
    mid = Point(
        seg.a.x + tm * (seg.b.x - seg.a.x), seg.a.y + tm * (seg.b.y - seg.a.y)
    )
    return poly.strictly_contains(mid)


def clip_segment(seg: Segment, poly: ConvexPolygon) -> Optional[Segment]:
    """Closed intersection of a segment with a convex polygon.

    Returns None when the intersection is empty or a single point.
    """
    res = _clip_params(seg.a.x, seg.a.y, seg.b.x, seg.b.y, poly)
    if res is None:
        return None
    t0, t1 = res
    if (t1 - t0) * seg.length <= REL_TOL * poly.bbox_diagonal:
        return None
    ax, ay = seg.a.x, seg.a.y
    dx, dy = seg.b.x - ax, seg.b.y - ay
    return Segment(Point(ax + t0 * dx, ay + t0 * dy), Point(ax + t1 * dx, ay + t1 * dy))


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Strict convex hull (no collinear boundary points), CCW order."""
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) < 3:
        return [Point(x, y) for x, y in pts]

    def half(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while (
                len(out) > 1
                and orient_sign(*out[-2], *out[-1], *p) <= 0
            ):
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return [Point(x, y) for x, y in hull]


def convex_polygons_intersect(a: ConvexPolygon, b: ConvexPolygon) -> bool:
    """Closed-set intersection test via separating axes."""
    for poly, other in ((a, b), (b, a)):
        for (p, _), (nx, ny) in zip(poly.edges(), poly._inward_normals):
            if all(
                nx * (v.x - p.x) + ny * (v.y - p.y) < 0.0 for v in other.vertices
            ):
                return False
    return True


def convex_distance(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Euclidean distance between two convex polygons (0 if they intersect)."""
    if convex_polygons_intersect(a, b):
        return 0.0
    best = math.inf
    for poly, other in ((a, b), (b, a)):
        for v in poly.vertices:
            for e0, e1 in other.edges():
                best = min(best, point_segment_distance(v, e0, e1))
    return best


def segments_properly_cross(p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    """True iff open segments p1p2 and p3p4 cross at a single interior point."""
    o1 = orient_sign(p1.x, p1.y, p2.x, p2.y, p3.x, p3.y)
    o2 = orient_sign(p1.x, p1.y, p2.x, p2.y, p4.x, p4.y)
    o3 = orient_sign(p3.x, p3.y, p4.x, p4.y, p1.x, p1.y)
    o4 = orient_sign(p3.x, p3.y, p4.x, p4.y, p2.x, p2.y)
    return o1 * o2 < 0 and o3 * o4 < 0


def as_array(points: Iterable[Point]) -> np.ndarray:
    return np.array([(p.x, p.y) for p in points], dtype=np.float64)
