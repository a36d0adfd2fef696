"""Constructive escape paths and detour routes.

Each routine builds an explicit polyline inside the domain together with a
fully evaluated upper-bound certificate for its length. The certificates
use explicit constants; asymptotic statements about them are exercised by
the test suite, not assumed here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .domain import Domain, PolygonalDomain, SegmentDomain, euclidean_diameter
from .geom import (
    REL_TOL,
    ConvexPolygon,
    Orientation,
    Point,
    Polyline,
    Segment,
    boundary_arc,
    diameter,
    fatness,
    tangents_from_point,
)

# 3 + 2*sqrt(h) <= GREEDY_SQRT_FACTOR * sqrt(h+1) for all h >= 0
GREEDY_SQRT_FACTOR = 4.0
# tight arc/chord constant 4*pi*sqrt(3)/9, and the rounded-up detour factor
ARC_CHORD_BOUND = 4.0 * math.pi * math.sqrt(3.0) / 9.0
SURROGATE_DETOUR_FACTOR = 2.42


class EscapeMethod(enum.Enum):
    GREEDY = "greedy"
    STRAIGHT_DETOUR = "straight"
    GRID = "grid"
    MONOTONE_SEGMENT = "segment"
    SURROGATE = "surrogate"
    STAIRCASE = "staircase"


@dataclass(frozen=True)
class RadialSegment:
    start: Point
    end: Point

    @property
    def length(self) -> float:
        return self.start.dist(self.end)


@dataclass(frozen=True)
class BoundaryArcPiece:
    hole: int
    arc: Polyline
    delta: float  # increase of the distance from the path origin over the arc

    @property
    def start(self) -> Point:
        return self.arc.points[0]

    @property
    def end(self) -> Point:
        return self.arc.points[-1]

    @property
    def length(self) -> float:
        return self.arc.length


GreedyPiece = Union[RadialSegment, BoundaryArcPiece]


@dataclass(frozen=True)
class GreedyTrace:
    path: Polyline
    pieces: tuple[GreedyPiece, ...]
    total_length: float
    radial_length: float
    arc_length: float

    @property
    def arc_count(self) -> int:
        return sum(1 for p in self.pieces if isinstance(p, BoundaryArcPiece))


@dataclass(frozen=True)
class EscapeResult:
    path: Polyline
    length: float
    method: EscapeMethod
    bound_certificate: float


def _unit(v: tuple[float, float]) -> tuple[float, float]:
    n = math.hypot(v[0], v[1])
    if not (n > 0.0 and math.isfinite(n)):
        raise ValueError("direction must be a nonzero finite vector")
    return (v[0] / n, v[1] / n)


def _ray_exit_param(outer: ConvexPolygon, o: Point, d: tuple[float, float]) -> float:
    """Parameter at which the ray o + t*d leaves the closed outer polygon."""
    t1 = math.inf
    for (a, _), (nx, ny) in zip(outer.edges(), outer._inward_normals):
        den = nx * d[0] + ny * d[1]
        if den < 0.0:
            t1 = min(t1, -(nx * (o.x - a.x) + ny * (o.y - a.y)) / den)
    return max(t1, 0.0)


def _pt_along(o: Point, d: tuple[float, float], t: float) -> Point:
    return Point(o.x + t * d[0], o.y + t * d[1])


def _mkpath(points: Sequence[Point]) -> Polyline:
    out: list[Point] = []
    for p in points:
        if not out or out[-1] != p:
            out.append(p)
    return Polyline(out)


def _check_start(domain: Domain, s: Point) -> None:
    tol = domain.boundary_tol
    if not domain.outer.contains(s, tol=tol):
        raise ValueError(f"start point outside the outer polygon: {s}")
    if domain.kernel.point_in_interior(s, tol=tol) != -1:
        raise ValueError(f"start point strictly inside a hole: {s}")


def _touching_hole(domain: PolygonalDomain, p: Point) -> int:
    tol = domain.boundary_tol
    for i, hole in enumerate(domain.holes):
        x0, y0, x1, y1 = hole.bbox
        if x0 - tol <= p.x <= x1 + tol and y0 - tol <= p.y <= y1 + tol:
            if hole.boundary_distance(p) <= tol:
                return i
    return -1


def default_escape_direction(domain: Domain, s: Point) -> tuple[float, float]:
    """Deterministic direction for escape runs: away from the touched hole's
    centroid when s sits on a hole boundary, else away from the outer
    centroid, falling back to +x."""
    if isinstance(domain, PolygonalDomain):
        k = _touching_hole(domain, s)
        if k >= 0:
            c = domain.holes[k].centroid
            if s.dist(c) > domain.boundary_tol:
                return _unit((s.x - c.x, s.y - c.y))
    c = domain.outer.centroid
    if s.dist(c) > domain.boundary_tol:
        return _unit((s.x - c.x, s.y - c.y))
    return (1.0, 0.0)


# -- greedy escape -------------------------------------------------------------


def _arc_between(
    poly: ConvexPolygon, p: Point, target: Point, other: Point
) -> tuple[Polyline, bool]:
    """Boundary arc from p to `target` in the rotational direction that does
    not pass through `other`; also reports whether the arc runs CCW."""
    tol = REL_TOL * poly.bbox_diagonal
    per = poly.perimeter
    tau_p = poly.boundary_param(p, tol)
    tau_t = poly.boundary_param(target, tol)
    tau_o = poly.boundary_param(other, tol)
    span_ccw = (tau_t - tau_p) % per
    off_other = (tau_o - tau_p) % per
    if off_other > tol and off_other < span_ccw - tol:
        return boundary_arc(poly, p, target, Orientation.CW), False
    return boundary_arc(poly, p, target, Orientation.CCW), True


def _monotone_from(s: Point, arc: Polyline, tol: float) -> bool:
    d = s.dist(arc.points[0])
    for q in arc.points[1:]:
        nd = s.dist(q)
        if nd < d - tol:
            return False
        d = nd
    return True


def greedy_escape(
    domain: PolygonalDomain, s: Point, u: tuple[float, float]
) -> GreedyTrace:
    """Escape path alternating rays from s with hole-boundary walks.

    From s, follow the ray in direction u; on hitting a hole, walk along its
    boundary toward the tangent point (as seen from s) whose arc keeps the
    distance from s non-decreasing, then continue outward along the tangent
    ray; stop on the outer boundary. When both boundary walks qualify the
    shorter one is taken, with a counterclockwise tie-break.
    """
    if isinstance(domain, SegmentDomain):
        raise ValueError("greedy escape expects polygonal holes")
    _check_start(domain, s)
    d = _unit(u)
    tol = domain.boundary_tol
    kernel = domain.kernel
    pieces: list[GreedyPiece] = []
    pos = s
    h = domain.hole_count
    for _ in range(2 * h + 4):
        t_exit = _ray_exit_param(domain.outer, pos, d)
        hit = kernel.first_ray_hit(pos, d, t_exit)
        if hit is None:
            end = _pt_along(pos, d, t_exit)
            if pos.dist(end) > 0.0:
                pieces.append(RadialSegment(pos, end))
            return _assemble_greedy(s, pieces)
        t_hit, k = hit
        p = _pt_along(pos, d, t_hit)
        if pos.dist(p) > 0.0:
            pieces.append(RadialSegment(pos, p))
        hole = domain.holes[k]
        if hole.boundary_distance(s) <= tol:
            raise ValueError(
                "start point lies on the boundary of a hole hit by the ray; "
                "choose a direction leaving the hole"
            )
        ell, r = tangents_from_point(s, hole)
        cand: list[tuple[float, int, Polyline]] = []
        for target, other in ((ell, r), (r, ell)):
            arc, is_ccw = _arc_between(hole, p, target, other)
            if _monotone_from(s, arc, tol):
                cand.append((arc.length, 0 if is_ccw else 1, arc))
        if not cand:
            raise RuntimeError(
                f"no monotone boundary walk at hole {k}; degenerate tangency"
            )
        cand.sort(key=lambda c: (c[0], c[1]))
        arc = cand[0][2]
        q = arc.points[-1]
        if arc.length > 0.0:
            pieces.append(
                BoundaryArcPiece(k, arc, delta=s.dist(q) - s.dist(p))
            )
        pos = q
        d = _unit((q.x - s.x, q.y - s.y))
    raise RuntimeError("greedy escape exceeded its step budget; degenerate input")


def _assemble_greedy(s: Point, pieces: Sequence[GreedyPiece]) -> GreedyTrace:
    pts: list[Point] = [s]
    radial = 0.0
    arc = 0.0
    for piece in pieces:
        if isinstance(piece, RadialSegment):
            pts.extend((piece.start, piece.end))
            radial += piece.length
        else:
            pts.extend(piece.arc.points)
            arc += piece.length
    path = _mkpath(pts)
    return GreedyTrace(
        path=path,
        pieces=tuple(pieces),
        total_length=radial + arc,
        radial_length=radial,
        arc_length=arc,
    )


def greedy_certificate(domain: PolygonalDomain) -> float:
    return GREEDY_SQRT_FACTOR * math.sqrt(domain.hole_count + 1) * euclidean_diameter(domain)


# -- chord detours -------------------------------------------------------------


def _shorter_arc(poly: ConvexPolygon, p: Point, q: Point) -> Polyline:
    ccw = boundary_arc(poly, p, q, Orientation.CCW)
    cw = boundary_arc(poly, p, q, Orientation.CW)
    return ccw if ccw.length <= cw.length else cw


def _ray_detour(
    domain: PolygonalDomain, o: Point, d: tuple[float, float], t_end: float
) -> tuple[list[Point], int]:
    """Points of the ray o..o+t_end*d with every hole crossing replaced by
    the shorter boundary arc; also returns the number of detours."""
    pts: list[Point] = [o]
    hits = domain.kernel.ray_penetrations(o, d, t_end)
    for t0, t1, k in hits:
        p = _pt_along(o, d, t0)
        q = _pt_along(o, d, t1)
        pts.append(p)
        pts.extend(_shorter_arc(domain.holes[k], p, q).points)
        pts.append(q)
    pts.append(_pt_along(o, d, t_end))
    return pts, len(hits)


def _segment_detour(domain: PolygonalDomain, s: Point, t: Point) -> tuple[Polyline, list[int]]:
    dx, dy = t.x - s.x, t.y - s.y
    hits = domain.kernel.ray_penetrations(s, (dx, dy), 1.0)
    pts: list[Point] = [s]
    crossed = []
    for t0, t1, k in hits:
        p = Point(s.x + t0 * dx, s.y + t0 * dy)
        q = Point(s.x + t1 * dx, s.y + t1 * dy)
        pts.append(p)
        pts.extend(_shorter_arc(domain.holes[k], p, q).points)
        pts.append(q)
        crossed.append(k)
    pts.append(t)
    return _mkpath(pts), crossed


def straight_detour_path(domain: PolygonalDomain, s: Point, t: Point) -> EscapeResult:
    """Segment st with every crossed hole replaced by its shorter boundary
    arc; certified by (1 + h*delta*pi) times the domain diameter."""
    _check_start(domain, s)
    _check_start(domain, t)
    path, _ = _segment_detour(domain, s, t)
    diam = euclidean_diameter(domain)
    cert = (1.0 + domain.hole_count * domain.delta * math.pi) * diam
    return EscapeResult(path, path.length, EscapeMethod.STRAIGHT_DETOUR, cert)


def fat_detour_path(domain: PolygonalDomain, s: Point, t: Point) -> EscapeResult:
    """Same route as straight_detour_path, certified through the boundary
    dilation of the crossed holes: each chord detour costs at most
    min(pi/lambda, 2*(1/lambda + 1)) times the chord."""
    _check_start(domain, s)
    _check_start(domain, t)
    path, crossed = _segment_detour(domain, s, t)
    worst = 0.0
    for k in crossed:
        lam = fatness(domain.holes[k]).lam
        worst = max(worst, dilation_bound(lam))
    cert = s.dist(t) * (1.0 + worst)
    return EscapeResult(path, path.length, EscapeMethod.STRAIGHT_DETOUR, cert)


def dilation_bound(lam: float) -> float:
    """Upper bound on the boundary dilation of a lam-fat convex body."""
    if not 0.0 < lam <= 1.0:
        raise ValueError("fatness must lie in (0, 1]")
    return min(math.pi / lam, 2.0 * (1.0 / lam + 1.0))


# -- pigeonhole grid escape ----------------------------------------------------


def _line_cross_counts(domain: PolygonalDomain, coords: Sequence[float], axis: int) -> list[int]:
    counts = []
    boxes = [h.bbox for h in domain.holes]
    for c in coords:
        n = 0
        for (x0, y0, x1, y1) in boxes:
            lo, hi = (y0, y1) if axis == 1 else (x0, x1)
            if lo < c < hi:
                n += 1
        counts.append(n)
    return counts


def _first_box_exit(
    path: Polyline, box: tuple[float, float, float, float]
) -> Optional[tuple[Point, int, int]]:
    """First point where the polyline leaves the closed box.

    Returns (exit point, side, index of the exiting segment); sides are
    0 bottom, 1 top, 2 left, 3 right.
    """
    xl, xr, yb, yt = box

    def inside(p: Point) -> bool:
        return xl <= p.x <= xr and yb <= p.y <= yt

    for i, (a, b) in enumerate(zip(path.points, path.points[1:])):
        if not inside(a) or inside(b):
            continue
        dx, dy = b.x - a.x, b.y - a.y
        t_exit = math.inf
        if dx < 0:
            t_exit = min(t_exit, (xl - a.x) / dx)
        elif dx > 0:
            t_exit = min(t_exit, (xr - a.x) / dx)
        if dy < 0:
            t_exit = min(t_exit, (yb - a.y) / dy)
        elif dy > 0:
            t_exit = min(t_exit, (yt - a.y) / dy)
        t_exit = max(0.0, min(1.0, t_exit))
        p = Point(a.x + t_exit * dx, a.y + t_exit * dy)
        scale = max(xr - xl, yt - yb)
        for side, (coord, ref) in enumerate(
            ((p.y, yb), (p.y, yt), (p.x, xl), (p.x, xr))
        ):
            if abs(coord - ref) <= 1e-9 * scale:
                return p, side, i
        return p, 3, i
    return None


def grid_escape(domain: PolygonalDomain, s: Point, u: Optional[tuple[float, float]] = None) -> EscapeResult:
    """Escape via a low-crossing axis-aligned line.

    Around s, horizontal and vertical lines are laid out at the measured
    maximum hole diameter spacing; in each of the four line families the one
    crossing the fewest hole interiors bounds a box B. A greedy run from s
    is truncated at the boundary of B, then the path follows the chosen line
    with shorter-boundary-arc detours to the outer boundary.
    """
    _check_start(domain, s)
    diam = euclidean_diameter(domain)
    if u is None:
        u = default_escape_direction(domain, s)
    h = domain.hole_count
    if h == 0:
        d = _unit(u)
        t = _ray_exit_param(domain.outer, s, d)
        path = _mkpath([s, _pt_along(s, d, t)])
        return EscapeResult(path, path.length, EscapeMethod.GRID, diam)
    spacing = max(domain.hole_diameters)
    ell = max(1, math.ceil(h ** 0.25))
    below = [s.y - i * spacing for i in range(1, ell + 1)]
    above = [s.y + i * spacing for i in range(1, ell + 1)]
    left = [s.x - i * spacing for i in range(1, ell + 1)]
    right = [s.x + i * spacing for i in range(1, ell + 1)]
    picks = []
    for coords, axis in ((below, 1), (above, 1), (left, 0), (right, 0)):
        counts = _line_cross_counts(domain, coords, axis)
        i = min(range(len(coords)), key=lambda k: (counts[k], k))
        picks.append(coords[i])
    yb, yt, xl, xr = picks
    box = (xl, xr, yb, yt)

    trace = greedy_escape(domain, s, u)
    cut = _first_box_exit(trace.path, box)
    diag_b = math.hypot(xr - xl, yt - yb)
    m = min(diag_b, diam)
    cert_greedy_part = (3.0 + 2.0 * math.sqrt(h)) * m
    if cut is None:
        cert = cert_greedy_part + diam
        return EscapeResult(trace.path, trace.total_length, EscapeMethod.GRID, cert)
    p, side, seg_idx = cut
    pts: list[Point] = list(trace.path.points[: seg_idx + 1])
    pts.append(p)
    axis_dir = (0.0, 1.0) if side >= 2 else (1.0, 0.0)
    t_pos = _ray_exit_param(domain.outer, p, axis_dir)
    t_neg = _ray_exit_param(domain.outer, p, (-axis_dir[0], -axis_dir[1]))
    d2 = axis_dir if t_pos <= t_neg else (-axis_dir[0], -axis_dir[1])
    t_end = min(t_pos, t_neg)
    tail, n_detours = _ray_detour(domain, p, d2, t_end)
    pts.extend(tail)
    path = _mkpath(pts)
    cert = cert_greedy_part + diam + n_detours * math.pi * spacing
    return EscapeResult(path, path.length, EscapeMethod.GRID, cert)


# -- monotone escape among segment holes ----------------------------------------


def diametral_segments(domain: PolygonalDomain) -> list[Segment]:
    """One diametral chord per hole, endpoints ordered lexicographically."""
    segs = []
    for hole in domain.holes:
        _, (a, b) = diameter(hole)
        segs.append(Segment(a, b))
    return segs


def _wedge_direction(seg: Segment) -> tuple[float, float]:
    a, b = seg.a, seg.b
    if (a.x, a.y) > (b.x, b.y):
        a, b = b, a
    return _unit((b.x - a.x, b.y - a.y))


def monotone_segment_escape(domain: Domain, s: Point) -> EscapeResult:
    """Monotone escape when every hole is a line segment.

    Segment directions are binned into wedges of aperture pi/ell over the
    right halfplane; the walk direction v is perpendicular to the axis of
    the least-populated wedge. On hitting a segment the path slides to the
    endpoint that keeps a nonnegative dot product with v, then resumes
    along v. The output is v-monotone by construction.
    """
    if isinstance(domain, PolygonalDomain):
        if domain.hole_count:
            raise ValueError("every hole must be a line segment")
        domain = SegmentDomain(domain.outer, ())
    _check_start(domain, s)
    diam = euclidean_diameter(domain)
    h = domain.hole_count
    if h == 0:
        v = (1.0, 0.0)
        t = _ray_exit_param(domain.outer, s, v)
        path = _mkpath([s, _pt_along(s, v, t)])
        return EscapeResult(path, path.length, EscapeMethod.MONOTONE_SEGMENT, diam)
    max_len = max(domain.hole_diameters)
    delta_rel = max_len / diam
    ell = max(1, math.ceil(math.sqrt(h * delta_rel)))
    bins = [0] * ell
    which = []
    for seg in domain.segments:
        dx, dy = _wedge_direction(seg)
        theta = math.atan2(dy, dx)  # in [-pi/2, pi/2]
        j = min(ell - 1, max(0, int((theta + math.pi / 2.0) / (math.pi / ell))))
        bins[j] += 1
        which.append(j)
    j_star = min(range(ell), key=lambda j: (bins[j], j))
    ang = -math.pi / 2.0 + (j_star + 0.5) * math.pi / ell
    w = (math.cos(ang), math.sin(ang))
    v = (-w[1], w[0])

    kernel = domain.kernel
    pts: list[Point] = [s]
    pos = s
    for _ in range(2 * h + 4):
        t_exit = _ray_exit_param(domain.outer, pos, v)
        hit = kernel.first_ray_hit(pos, v, t_exit)
        if hit is None:
            pts.append(_pt_along(pos, v, t_exit))
            break
        t_hit, k = hit
        p = _pt_along(pos, v, t_hit)
        pts.append(p)
        seg = domain.segments[k]
        da = v[0] * (seg.a.x - p.x) + v[1] * (seg.a.y - p.y)
        db = v[0] * (seg.b.x - p.x) + v[1] * (seg.b.y - p.y)
        e = seg.a if da >= db else seg.b
        pts.append(e)
        pos = e
    else:
        raise RuntimeError("monotone escape exceeded its step budget")
    path = _mkpath(pts)
    cert = bins[j_star] * max_len + diam / math.sin(math.pi / (2.0 * ell))
    return EscapeResult(path, path.length, EscapeMethod.MONOTONE_SEGMENT, cert)


# -- surrogate escape for general small holes ------------------------------------


def _polyline_params(pts: Sequence[Point]) -> list[float]:
    acc = [0.0]
    for a, b in zip(pts, pts[1:]):
        acc.append(acc[-1] + a.dist(b))
    return acc


def _point_at(pts: Sequence[Point], cum: Sequence[float], tau: float) -> Point:
    if tau <= 0.0:
        return pts[0]
    if tau >= cum[-1]:
        return pts[-1]
    for i in range(len(pts) - 1):
        if tau <= cum[i + 1]:
            seg = cum[i + 1] - cum[i]
            t = 0.0 if seg == 0.0 else (tau - cum[i]) / seg
            a, b = pts[i], pts[i + 1]
            return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    return pts[-1]


def _slice_pts(
    pts: Sequence[Point], cum: Sequence[float], t0: float, t1: float
) -> list[Point]:
    out = [_point_at(pts, cum, t0)]
    for i in range(1, len(pts) - 1):
        if t0 < cum[i] < t1:
            out.append(pts[i])
    out.append(_point_at(pts, cum, t1))
    return out


def _hole_intervals(
    path: Polyline, hole: ConvexPolygon, tol: float
) -> list[tuple[float, float]]:
    """Maximal arclength intervals where the path runs through the hole's
    open interior."""
    from .geom import _clip_params

    pts = path.points
    cum = _polyline_params(pts)
    raw: list[tuple[float, float]] = []
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        seg_len = cum[i + 1] - cum[i]
        if seg_len == 0.0:
            continue
        res = _clip_params(a.x, a.y, b.x, b.y, hole)
        if res is None:
            continue
        t0, t1 = res
        if (t1 - t0) * seg_len <= tol:
            continue
        tm = (t0 + t1) / 2.0
        mid = Point(a.x + tm * (b.x - a.x), a.y + tm * (b.y - a.y))
        if not hole.strictly_contains(mid):
            continue
        raw.append((cum[i] + t0 * seg_len, cum[i] + t1 * seg_len))
    raw.sort()
    merged: list[tuple[float, float]] = []
    for t0, t1 in raw:
        if merged and t0 <= merged[-1][1] + tol:
            merged[-1] = (merged[-1][0], max(merged[-1][1], t1))
        else:
            merged.append((t0, t1))
    return merged


def _arc_avoiding(
    poly: ConvexPolygon, p: Point, q: Point, avoid: Sequence[Point]
) -> Polyline:
    """Boundary arc p->q whose interior contains none of `avoid`, preferring
    the shorter one among qualifying directions."""
    tol = REL_TOL * poly.bbox_diagonal
    per = poly.perimeter
    tau_p = poly.boundary_param(p, tol)
    tau_q = poly.boundary_param(q, tol)
    cand = []
    for direction in (Orientation.CCW, Orientation.CW):
        if direction is Orientation.CCW:
            span = (tau_q - tau_p) % per
            start = tau_p
        else:
            span = (tau_p - tau_q) % per
            start = tau_q
        hits = sum(
            1
            for a in avoid
            if tol < (poly.boundary_param(a, tol) - start) % per < span - tol
        )
        arc = boundary_arc(poly, p, q, direction)
        cand.append((hits, arc.length, 0 if direction is Orientation.CCW else 1, arc))
    cand.sort(key=lambda c: c[:3])
    return cand[0][3]


def surrogate_escape(domain: PolygonalDomain, s: Point) -> EscapeResult:
    """Escape via diametral-chord surrogates.

    Each hole is replaced by a diametral chord; a monotone segment escape is
    run among the chords; every maximal subpath through a real hole interior
    is then replaced by the boundary arc on the side away from that hole's
    chord. The certificate is the rounded detour factor times the pre-detour
    length.
    """
    if isinstance(domain, SegmentDomain):
        raise ValueError("surrogate escape expects polygonal holes")
    _check_start(domain, s)
    if domain.hole_count == 0:
        res = monotone_segment_escape(SegmentDomain(domain.outer, ()), s)
        return EscapeResult(
            res.path, res.length, EscapeMethod.SURROGATE, res.bound_certificate
        )
    segs = diametral_segments(domain)
    seg_dom = SegmentDomain(domain.outer, segs)
    mono = monotone_segment_escape(seg_dom, s)
    pre_len = mono.length
    tol = domain.boundary_tol
    pts = mono.path.points
    cum = _polyline_params(pts)
    pieces: list[tuple[float, float, int]] = []
    for k, hole in enumerate(domain.holes):
        for t0, t1 in _hole_intervals(mono.path, hole, tol):
            pieces.append((t0, t1, k))
    pieces.sort()
    out: list[Point] = []
    cursor = 0.0
    for t0, t1, k in pieces:
        out.extend(_slice_pts(pts, cum, cursor, t0))
        p = _point_at(pts, cum, t0)
        q = _point_at(pts, cum, t1)
        seg = segs[k]
        arc = _arc_avoiding(domain.holes[k], p, q, (seg.a, seg.b))
        out.extend(arc.points)
        cursor = t1
    out.extend(_slice_pts(pts, cum, cursor, cum[-1]))
    path = _mkpath(out)
    cert = SURROGATE_DETOUR_FACTOR * pre_len
    return EscapeResult(path, path.length, EscapeMethod.SURROGATE, cert)


def arc_chord_ratio(poly: ConvexPolygon, p: Point, q: Point) -> float:
    """Length ratio of the counterclockwise boundary arc p->q to the chord pq."""
    if p == q:
        raise ValueError("arc/chord ratio undefined for coinciding points")
    arc = boundary_arc(poly, p, q, Orientation.CCW)
    return arc.length / p.dist(q)


# -- staircase escape for axis-aligned rectangle holes ---------------------------


def is_axis_rect(poly: ConvexPolygon) -> bool:
    if len(poly.vertices) != 4:
        return False
    v = poly.vertices
    return (
        v[0].x == v[3].x
        and v[1].x == v[2].x
        and v[0].y == v[1].y
        and v[2].y == v[3].y
    )


class _Frame:
    """Axis swap / reflections used to normalize the staircase instance."""

    def __init__(self, domain: PolygonalDomain, s: Point):
        x0, y0, x1, y1 = domain.outer.bbox
        self.x0, self.y0 = x0, y0
        a, b = x1 - x0, y1 - y0
        self.swap = b > a
        sa, sb = (b, a) if self.swap else (a, b)
        sx, sy = self.fwd_raw(s.x - x0, s.y - y0)
        self.flip_x = sx < sa / 2.0
        self.flip_y = sy < sb / 2.0
        self.a, self.b = sa, sb

    def fwd_raw(self, x: float, y: float) -> tuple[float, float]:
        return (y, x) if self.swap else (x, y)

    def fwd(self, p: Point) -> Point:
        x, y = self.fwd_raw(p.x - self.x0, p.y - self.y0)
        if self.flip_x:
            x = self.a - x
        if self.flip_y:
            y = self.b - y
        return Point(x, y)

    def inv(self, p: Point) -> Point:
        x, y = p.x, p.y
        if self.flip_x:
            x = self.a - x
        if self.flip_y:
            y = self.b - y
        if self.swap:
            x, y = y, x
        return Point(x + self.x0, y + self.y0)


def staircase_escape(domain: PolygonalDomain, s: Point) -> EscapeResult:
    """Axis-parallel staircase escape for axis-aligned rectangular holes.

    The instance is reflected/rotated so that s sits in the upper-right
    quadrant of the bounding box with the x-extent dominant; the path then
    alternates +x and +y moves on each hole contact. Its length never
    exceeds the domain diameter.
    """
    if isinstance(domain, SegmentDomain):
        raise ValueError("staircase escape expects polygonal holes")
    for k, hole in enumerate(domain.holes):
        if not is_axis_rect(hole):
            raise ValueError(f"hole {k} is not an axis-aligned rectangle")
    _check_start(domain, s)
    frame = _Frame(domain, s)
    outer_t = ConvexPolygon([frame.fwd(v) for v in domain.outer.vertices])
    holes_t = [
        ConvexPolygon([frame.fwd(v) for v in h.vertices]) for h in domain.holes
    ]
    dom_t = PolygonalDomain(outer_t, holes_t)
    kernel = dom_t.kernel
    pos = frame.fwd(s)
    d = (1.0, 0.0)
    pts = [pos]
    for _ in range(2 * domain.hole_count + 4):
        t_exit = _ray_exit_param(outer_t, pos, d)
        hit = kernel.first_ray_hit(pos, d, t_exit)
        if hit is None:
            pts.append(_pt_along(pos, d, t_exit))
            break
        t_hit, _k = hit
        pos = _pt_along(pos, d, t_hit)
        pts.append(pos)
        d = (0.0, 1.0) if d == (1.0, 0.0) else (1.0, 0.0)
    else:
        raise RuntimeError("staircase escape exceeded its step budget")
    path = _mkpath([frame.inv(p) for p in pts])
    diam = euclidean_diameter(domain)
    return EscapeResult(path, path.length, EscapeMethod.STAIRCASE, diam)


# -- diameter upper bound and the dispatcher -------------------------------------


def diameter_upper_bound(domain: PolygonalDomain, report=None) -> float:
    """Constructive upper bound for the worst sampled pair: a greedy escape
    from each witness point plus the shorter outer-boundary walk between the
    two escape endpoints. Always at least the sampled geodesic lower bound.
    """
    from .domain import distortion

    if report is None:
        report = distortion(domain)
    s1, s2 = report.witness_pair
    g1 = greedy_escape(domain, s1, default_escape_direction(domain, s1))
    g2 = greedy_escape(domain, s2, default_escape_direction(domain, s2))
    t1 = g1.path.points[-1]
    t2 = g2.path.points[-1]
    if t1 == t2:
        walk = 0.0
    else:
        walk = min(
            boundary_arc(domain.outer, t1, t2, Orientation.CCW).length,
            boundary_arc(domain.outer, t1, t2, Orientation.CW).length,
        )
    return g1.total_length + walk + g2.total_length


def _precertificates(domain: PolygonalDomain, s: Point) -> dict[EscapeMethod, float]:
    """Cheap a-priori certificates used by the auto dispatcher."""
    diam = euclidean_diameter(domain)
    h = domain.hole_count
    delta = domain.delta
    out = {
        EscapeMethod.GREEDY: greedy_certificate(domain),
        EscapeMethod.STRAIGHT_DETOUR: (1.0 + h * delta * math.pi) * diam,
    }
    if h:
        d_abs = max(domain.hole_diameters)
        ell = max(1, math.ceil(h ** 0.25))
        out[EscapeMethod.GRID] = (
            (3.0 + 2.0 * math.sqrt(h)) * min(2.0 * math.sqrt(2.0) * ell * d_abs, diam)
            + diam
            + math.ceil(h / ell) * math.pi * d_abs
        )
        ell_s = max(1, math.ceil(math.sqrt(h * delta)))
        out[EscapeMethod.SURROGATE] = SURROGATE_DETOUR_FACTOR * (
            (h // ell_s) * d_abs + diam / math.sin(math.pi / (2.0 * ell_s))
        )
        if all(is_axis_rect(hole) for hole in domain.holes):
            out[EscapeMethod.STAIRCASE] = diam
    else:
        out[EscapeMethod.GRID] = diam
    return out


_TIE_ORDER = [
    EscapeMethod.STAIRCASE,
    EscapeMethod.STRAIGHT_DETOUR,
    EscapeMethod.SURROGATE,
    EscapeMethod.GRID,
    EscapeMethod.GREEDY,
]


def escape(
    domain: Domain,
    s: Point,
    method: str | EscapeMethod = "auto",
    direction: Optional[tuple[float, float]] = None,
) -> EscapeResult:
    """Escape from s to the outer boundary by the named method, or by the
    method with the smallest a-priori certificate when method='auto'."""
    if isinstance(method, str):
        if method == "auto":
            method = None
        else:
            method = EscapeMethod(method)
    if isinstance(domain, SegmentDomain):
        if method not in (None, EscapeMethod.MONOTONE_SEGMENT):
            raise ValueError("segment-hole domains support only the monotone escape")
        return monotone_segment_escape(domain, s)
    if method is None:
        certs = _precertificates(domain, s)
        method = min(_TIE_ORDER, key=lambda m: (certs.get(m, math.inf), _TIE_ORDER.index(m)))
    if method is EscapeMethod.GREEDY:
        u = direction if direction is not None else default_escape_direction(domain, s)
        trace = greedy_escape(domain, s, u)
        return EscapeResult(
            trace.path, trace.total_length, EscapeMethod.GREEDY, greedy_certificate(domain)
        )
    if method is EscapeMethod.STRAIGHT_DETOUR:
        t = _nearest_outer_point(domain, s)
        return straight_detour_path(domain, s, t)
    if method is EscapeMethod.GRID:
        return grid_escape(domain, s, direction)
    if method is EscapeMethod.SURROGATE:
        return surrogate_escape(domain, s)
    if method is EscapeMethod.STAIRCASE:
        return staircase_escape(domain, s)
    if method is EscapeMethod.MONOTONE_SEGMENT:
        return monotone_segment_escape(domain, s)
    raise ValueError(f"unknown escape method: {method}")


def _nearest_outer_point(domain: Domain, s: Point) -> Point:
    best = None
    for a, b in domain.outer.edges():
        ax, ay = a.x, a.y
        ex, ey = b.x - ax, b.y - ay
        l2 = ex * ex + ey * ey
        t = ((s.x - ax) * ex + (s.y - ay) * ey) / l2
        t = min(1.0, max(0.0, t))
        p = Point(ax + t * ex, ay + t * ey)
        d = s.dist(p)
        if best is None or d < best[0]:
            best = (d, p)
    return best[1]
