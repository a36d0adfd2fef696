"""Polygonal domains: a convex outer polygon minus disjoint convex holes.

Also covers the degenerate variant whose holes are line segments, domain
validation (violations are data, not exceptions), the Euclidean diameter,
the diameter-distortion report, and the JSON interchange format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .geom import (
    REL_TOL,
    ConvexPolygon,
    Point,
    Segment,
    convex_distance,
    diameter,
    fatness,
    midpoint,
    point_segment_distance,
    segments_properly_cross,
)
from .kernel import HoleKernel, SegmentKernel


class PolygonalDomain:
    """Closure of (outer minus the union of open hole interiors)."""

    def __init__(
        self,
        outer: ConvexPolygon | Iterable,
        holes: Iterable[ConvexPolygon | Iterable] = (),
    ):
        self.outer = outer if isinstance(outer, ConvexPolygon) else ConvexPolygon(outer)
        self.holes = tuple(
            h if isinstance(h, ConvexPolygon) else ConvexPolygon(h) for h in holes
        )

    @property
    def hole_count(self) -> int:
        return len(self.holes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolygonalDomain)
            and self.outer == other.outer
            and self.holes == other.holes
        )

    def __repr__(self) -> str:
        return f"PolygonalDomain(outer={len(self.outer)} vertices, holes={self.hole_count})"

    @cached_property
    def boundary_tol(self) -> float:
        return REL_TOL * self.outer.bbox_diagonal

    @cached_property
    def kernel(self) -> HoleKernel:
        return HoleKernel(self.holes, self.outer.bbox_diagonal)

    @cached_property
    def hole_diameters(self) -> tuple[float, ...]:
        return tuple(diameter(h)[0] for h in self.holes)

    @cached_property
    def delta(self) -> float:
        """Largest hole diameter relative to the domain diameter."""
        if not self.holes:
            return 0.0
        return max(self.hole_diameters) / euclidean_diameter(self)

    def contains(self, p: Point, tol: Optional[float] = None) -> bool:
        """Membership in the closed domain, within the boundary tolerance."""
        t = self.boundary_tol if tol is None else tol
        if not self.outer.contains(p, tol=t):
            return False
        return self.kernel.point_in_interior(p, tol=t) == -1


class SegmentDomain:
    """Convex outer polygon with pairwise-disjoint line-segment holes."""

    def __init__(self, outer: ConvexPolygon | Iterable, segments: Iterable[Segment]):
        self.outer = outer if isinstance(outer, ConvexPolygon) else ConvexPolygon(outer)
        self.segments = tuple(segments)

    @property
    def holes(self) -> tuple[Segment, ...]:
        return self.segments

    @property
    def hole_count(self) -> int:
        return len(self.segments)

    def __repr__(self) -> str:
        return f"SegmentDomain(outer={len(self.outer)} vertices, segments={self.hole_count})"

    @cached_property
    def boundary_tol(self) -> float:
        return REL_TOL * self.outer.bbox_diagonal

    @cached_property
    def kernel(self) -> SegmentKernel:
        return SegmentKernel(self.segments, self.outer.bbox_diagonal)

    @cached_property
    def hole_diameters(self) -> tuple[float, ...]:
        return tuple(s.length for s in self.segments)

    @cached_property
    def delta(self) -> float:
        if not self.segments:
            return 0.0
        return max(self.hole_diameters) / euclidean_diameter(self)

    def contains(self, p: Point, tol: Optional[float] = None) -> bool:
        t = self.boundary_tol if tol is None else tol
        return self.outer.contains(p, tol=t)


Domain = Union[PolygonalDomain, SegmentDomain]


@dataclass(frozen=True)
class Violation:
    kind: str
    holes: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(v.message for v in self.violations)


def _segment_distance(s: Segment, t: Segment) -> float:
    if segments_properly_cross(s.a, s.b, t.a, t.b):
        return 0.0
    return min(
        point_segment_distance(s.a, t.a, t.b),
        point_segment_distance(s.b, t.a, t.b),
        point_segment_distance(t.a, s.a, s.b),
        point_segment_distance(t.b, s.a, s.b),
    )


def validate(domain: Domain) -> ValidationReport:
    """Check hole containment and pairwise disjointness.

    Violations are returned as data; an empty report means the domain is
    valid. Contact within the boundary tolerance counts as a violation.
    """
    tol = domain.boundary_tol
    out: list[Violation] = []
    if isinstance(domain, SegmentDomain):
        for i, seg in enumerate(domain.segments):
            if not all(
                domain.outer.strictly_contains(p, tol=tol) for p in (seg.a, seg.b)
            ):
                out.append(
                    Violation(
                        "hole-outside-outer", (i,), f"hole {i} not inside outer"
                    )
                )
        for i in range(len(domain.segments)):
            for j in range(i + 1, len(domain.segments)):
                if _segment_distance(domain.segments[i], domain.segments[j]) <= tol:
                    out.append(
                        Violation(
                            "holes-intersect",
                            (i, j),
                            f"holes {i} and {j} intersect or touch",
                        )
                    )
        return ValidationReport(tuple(out))

    for i, hole in enumerate(domain.holes):
        if not all(
            domain.outer.strictly_contains(v, tol=tol) for v in hole.vertices
        ):
            out.append(
                Violation("hole-outside-outer", (i,), f"hole {i} not inside outer")
            )
    holes = domain.holes
    boxes = [h.bbox for h in holes]
    for i in range(len(holes)):
        x0i, y0i, x1i, y1i = boxes[i]
        for j in range(i + 1, len(holes)):
            x0j, y0j, x1j, y1j = boxes[j]
            if x0j > x1i + tol or x0i > x1j + tol or y0j > y1i + tol or y0i > y1j + tol:
                continue
            if convex_distance(holes[i], holes[j]) <= tol:
                out.append(
                    Violation(
                        "holes-intersect",
                        (i, j),
                        f"holes {i} and {j} intersect or touch",
                    )
                )
    return ValidationReport(tuple(out))


def euclidean_diameter(domain: Domain) -> float:
    """diam of the closed domain; equals the outer polygon's diameter."""
    return diameter(domain.outer)[0]


@dataclass(frozen=True)
class SamplerConfig:
    """Candidate-point sampler for the distortion lower bound.

    The candidate set always contains all hole vertices (or segment
    endpoints) and all outer vertices; this config adds hole-edge midpoints,
    outer-boundary samples at `boundary_spacing_fraction * diam`, and any
    explicit extra points.
    """

    include_hole_edge_midpoints: bool = True
    boundary_spacing_fraction: Optional[float] = 1.0 / 64.0
    extra_points: tuple[Point, ...] = ()


@dataclass(frozen=True)
class DistortionReport:
    euclidean_diameter: float
    geodesic_diameter_lb: float
    rho_lb: float
    witness_pair: tuple[Point, Point]
    max_hole_diameter_ratio: float


def candidate_points(domain: Domain, sampler: SamplerConfig) -> list[Point]:
    """Deterministic candidate list: outer vertices, midpoints, boundary
    samples, then extras. Hole vertices are contributed by the visibility
    graph itself."""
    pts: list[Point] = list(domain.outer.vertices)
    if sampler.include_hole_edge_midpoints:
        if isinstance(domain, SegmentDomain):
            for seg in domain.segments:
                pts.append(midpoint(seg.a, seg.b))
        else:
            for hole in domain.holes:
                for a, b in hole.edges():
                    pts.append(midpoint(a, b))
    if sampler.boundary_spacing_fraction:
        spacing = sampler.boundary_spacing_fraction * euclidean_diameter(domain)
        per = domain.outer.perimeter
        count = max(1, math.ceil(per / spacing))
        for i in range(count):
            pts.append(domain.outer.point_at_param(per * i / count))
    pts.extend(sampler.extra_points)
    return pts


def distortion(
    domain: Domain, sampler: Optional[SamplerConfig] = None
) -> DistortionReport:
    """Certified lower bound on the diameter distortion.

    The geodesic diameter is evaluated exactly on a finite candidate set
    (all hole vertices, all outer vertices, plus sampler points), so the
    reported value is a true lower bound on the geodesic diameter and the
    ratio is a lower bound on the distortion.
    """
    from . import geodesic

    if sampler is None:
        sampler = SamplerConfig()
    diam = euclidean_diameter(domain)
    extras = candidate_points(domain, sampler)
    graph = geodesic.build_visibility_graph(domain, extras)
    dist = geodesic.all_pairs_lengths(graph)
    flat = np.argmax(dist)
    i, j = np.unravel_index(flat, dist.shape)
    lb = float(dist[i, j])
    if not math.isfinite(lb):
        raise RuntimeError("candidate set is disconnected; domain likely invalid")
    pair = tuple(sorted((graph.nodes[int(i)], graph.nodes[int(j)])))
    return DistortionReport(
        euclidean_diameter=diam,
        geodesic_diameter_lb=lb,
        rho_lb=lb / diam,
        witness_pair=pair,
        max_hole_diameter_ratio=domain.delta,
    )


# -- JSON interchange ---------------------------------------------------------


def domain_to_json(domain: Domain) -> dict:
    if isinstance(domain, SegmentDomain):
        holes = [
            [[s.a.x, s.a.y], [s.b.x, s.b.y]] for s in domain.segments
        ]
    else:
        holes = [[[v.x, v.y] for v in h.vertices] for h in domain.holes]
    return {
        "outer": [[v.x, v.y] for v in domain.outer.vertices],
        "holes": holes,
    }


def domain_from_json(obj: dict) -> Domain:
    if not isinstance(obj, dict) or "outer" not in obj:
        raise ValueError("domain document must be an object with an 'outer' key")
    outer = ConvexPolygon([Point(float(x), float(y)) for x, y in obj["outer"]])
    holes = obj.get("holes", [])
    n_seg = sum(1 for h in holes if len(h) == 2)
    if holes and n_seg == len(holes):
        segments = [
            Segment(Point(float(h[0][0]), float(h[0][1])), Point(float(h[1][0]), float(h[1][1])))
            for h in holes
        ]
        return SegmentDomain(outer, segments)
    if n_seg:
        raise ValueError("holes must be all polygons or all segments")
    return PolygonalDomain(
        outer, [ConvexPolygon([Point(float(x), float(y)) for x, y in h]) for h in holes]
    )


def load_domain(path: str) -> Domain:
    with open(path, "r", encoding="utf-8") as f:
        return domain_from_json(json.load(f))


def save_domain(domain: Domain, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(domain_to_json(domain), f, indent=1)
        f.write("\n")
