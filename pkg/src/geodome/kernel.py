"""Vectorized obstacle queries.

A HoleKernel packs all hole edges of a domain into flat numpy arrays so
that ray shooting and segment-blocking tests run as a handful of array
operations per hole instead of per-edge Python loops. Blocking is decided
by open-interior penetration: a segment or ray that merely grazes a hole
boundary (tangency, sliding along an edge, passing through a vertex) does
not block. The absolute penetration tolerance is PEN_REL times the domain
scale.

SegmentKernel provides the same interface for degenerate (line-segment)
holes, where blocking means a proper transversal crossing.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .geom import ConvexPolygon, Point, Segment

PEN_REL = 1e-12


class HoleKernel:
    """Flat-array view of a collection of convex polygonal holes."""

    def __init__(self, holes: Sequence[ConvexPolygon], scale: float):
        self.holes = tuple(holes)
        self.scale = scale
        self.pen_tol = PEN_REL * scale
        nh = len(self.holes)
        starts = [0]
        ax, ay, nx, ny = [], [], [], []
        bbox = np.empty((nh, 4), dtype=np.float64)
        for k, hole in enumerate(self.holes):
            vs = hole.vertices
            m = len(vs)
            for i in range(m):
                a, b = vs[i], vs[(i + 1) % m]
                dx, dy = b.x - a.x, b.y - a.y
                l = math.hypot(dx, dy)
                ax.append(a.x)
                ay.append(a.y)
                nx.append(-dy / l)
                ny.append(dx / l)
            starts.append(starts[-1] + m)
            x0, y0, x1, y1 = hole.bbox
            bbox[k] = (x0, y0, x1, y1)
        self._ax = np.array(ax)
        self._ay = np.array(ay)
        self._nx = np.array(nx)
        self._ny = np.array(ny)
        self._starts = np.array(starts, dtype=np.intp)
        self._bbox = bbox
        self._n_edges = np.diff(self._starts)

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    # -- single-ray queries ------------------------------------------------

    def _ray_intervals(
        self, ox: float, oy: float, dx: float, dy: float
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-hole parametric intervals (t0, t1) where the ray o + t*d is
        strictly inside the hole, plus a validity mask."""
        if self.n_holes == 0:
            z = np.empty(0)
            return z, z, np.empty(0, dtype=bool)
        f0 = self._nx * (ox - self._ax) + self._ny * (oy - self._ay)
        den = self._nx * dx + self._ny * dy
        par = np.abs(den) < 1e-300
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -f0 / den
        lo = np.where((den > 0) & ~par, t, -np.inf)
        hi = np.where((den < 0) & ~par, t, np.inf)
        # edge parallel to the ray and the ray not strictly inside it: no pass
        dead = par & (f0 <= self.pen_tol)
        t0 = np.maximum.reduceat(lo, self._starts[:-1])
        t1 = np.minimum.reduceat(hi, self._starts[:-1])
        alive = ~np.bitwise_or.reduceat(dead, self._starts[:-1])
        return t0, t1, alive

    def first_ray_hit(
        self, o: Point, d: tuple[float, float], t_max: float
    ) -> Optional[tuple[float, int]]:
        """Earliest parameter in (0, t_max) at which the ray enters a hole
        interior with real penetration; None if it reaches t_max first."""
        iv = self.ray_penetrations(o, d, t_max)
        return (iv[0][0], iv[0][2]) if iv else None

    def ray_penetrations(
        self, o: Point, d: tuple[float, float], t_max: float
    ) -> list[tuple[float, float, int]]:
        """All (t_enter, t_exit, hole) penetrations on (0, t_max), sorted."""
        if self.n_holes == 0:
            return []
        t0, t1, alive = self._ray_intervals(o.x, o.y, d[0], d[1])
        ent = np.maximum(t0, 0.0)
        ext = np.minimum(t1, t_max)
        speed = math.hypot(d[0], d[1])
        ok = alive & ((ext - ent) * speed > self.pen_tol)
        idx = np.nonzero(ok)[0]
        out = [(float(ent[k]), float(ext[k]), int(k)) for k in idx]
        out.sort()
        return out

    def point_in_interior(self, p: Point, tol: float = 0.0) -> int:
        """Index of the hole whose open interior contains p, else -1."""
        if self.n_holes == 0:
            return -1
        f = self._nx * (p.x - self._ax) + self._ny * (p.y - self._ay)
        depth = np.minimum.reduceat(f, self._starts[:-1])
        idx = np.nonzero(depth > tol)[0]
        return int(idx[0]) if idx.size else -1

    # -- batch segment queries ----------------------------------------------

    def segment_blocked(self, p: Point, q: Point) -> bool:
        px = np.array([p.x])
        py = np.array([p.y])
        qx = np.array([q.x])
        qy = np.array([q.y])
        return bool(self.blocked_mask(px, py, qx, qy)[0])

    def blocked_mask(
        self, px: np.ndarray, py: np.ndarray, qx: np.ndarray, qy: np.ndarray
    ) -> np.ndarray:
        """For each segment p_i -> q_i, whether it penetrates any hole interior."""
        n = px.shape[0]
        blocked = np.zeros(n, dtype=bool)
        if self.n_holes == 0 or n == 0:
            return blocked
        sx0 = np.minimum(px, qx)
        sx1 = np.maximum(px, qx)
        sy0 = np.minimum(py, qy)
        sy1 = np.maximum(py, qy)
        for k in range(self.n_holes):
            bx0, by0, bx1, by1 = self._bbox[k]
            cand = ~blocked & (sx1 >= bx0) & (sx0 <= bx1) & (sy1 >= by0) & (sy0 <= by1)
            idx = np.nonzero(cand)[0]
            if idx.size == 0:
                continue
            cpx, cpy = px[idx], py[idx]
            dx, dy = qx[idx] - cpx, qy[idx] - cpy
            t0 = np.zeros(idx.size)
            t1 = np.ones(idx.size)
            dead = np.zeros(idx.size, dtype=bool)
            for e in range(self._starts[k], self._starts[k + 1]):
                enx, eny, eax, eay = self._nx[e], self._ny[e], self._ax[e], self._ay[e]
                f0 = enx * (cpx - eax) + eny * (cpy - eay)
                den = enx * dx + eny * dy
                par = np.abs(den) < 1e-300
                with np.errstate(divide="ignore", invalid="ignore"):
                    t = -f0 / den
                np.maximum(t0, np.where((den > 0) & ~par, t, -np.inf), out=t0)
                np.minimum(t1, np.where((den < 0) & ~par, t, np.inf), out=t1)
                dead |= par & (f0 <= self.pen_tol)
            seg_len = np.hypot(dx, dy)
            blocked[idx] |= ~dead & ((t1 - t0) * seg_len > self.pen_tol)
        return blocked


class SegmentKernel:
    """Blocking queries against degenerate segment holes.

    A path is blocked only by a proper transversal crossing of a segment's
    open interior; touching an endpoint or sliding along a segment is free.
    """

    def __init__(self, segments: Sequence[Segment], scale: float):
        self.segments = tuple(segments)
        self.scale = scale
        self.pen_tol = PEN_REL * scale
        self._ax = np.array([s.a.x for s in self.segments])
        self._ay = np.array([s.a.y for s in self.segments])
        self._bx = np.array([s.b.x for s in self.segments])
        self._by = np.array([s.b.y for s in self.segments])

    @property
    def n_holes(self) -> int:
        return len(self.segments)

    def first_ray_hit(
        self, o: Point, d: tuple[float, float], t_max: float
    ) -> Optional[tuple[float, int]]:
        """Earliest proper crossing of the ray with a segment in (tol, t_max)."""
        if self.n_holes == 0:
            return None
        ex = self._bx - self._ax
        ey = self._by - self._ay
        denom = d[0] * ey - d[1] * ex
        wx = self._ax - o.x
        wy = self._ay - o.y
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (wx * ey - wy * ex) / denom
            u = (wx * d[1] - wy * d[0]) / denom
        seg_len = np.hypot(ex, ey)
        u_tol = self.pen_tol / np.maximum(seg_len, 1e-300)
        speed = math.hypot(d[0], d[1])
        t_tol = self.pen_tol / max(speed, 1e-300)
        ok = (
            (np.abs(denom) > 1e-300)
            & (t > t_tol)
            & (t < t_max)
            & (u > u_tol)
            & (u < 1.0 - u_tol)
        )
        idx = np.nonzero(ok)[0]
        if idx.size == 0:
            return None
        j = idx[np.argmin(t[idx])]
        return float(t[j]), int(j)

    def point_in_interior(self, p: Point, tol: float = 0.0) -> int:
        return -1

    def segment_blocked(self, p: Point, q: Point) -> bool:
        d = (q.x - p.x, q.y - p.y)
        return self.first_ray_hit(p, d, 1.0) is not None

    def blocked_mask(
        self, px: np.ndarray, py: np.ndarray, qx: np.ndarray, qy: np.ndarray
    ) -> np.ndarray:
        n = px.shape[0]
        blocked = np.zeros(n, dtype=bool)
        if self.n_holes == 0 or n == 0:
            return blocked
        ex = self._bx - self._ax
        ey = self._by - self._ay
        seg_len = np.hypot(ex, ey)
        u_tol = self.pen_tol / np.maximum(seg_len, 1e-300)
        for k in range(self.n_holes):
            dx, dy = qx - px, qy - py
            denom = dx * ey[k] - dy * ex[k]
            wx = self._ax[k] - px
            wy = self._ay[k] - py
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (wx * ey[k] - wy * ex[k]) / denom
                u = (wx * dy - wy * dx) / denom
            qlen = np.hypot(dx, dy)
            t_tol = self.pen_tol / np.maximum(qlen, 1e-300)
            blocked |= (
                (np.abs(denom) > 1e-300)
                & (t > t_tol)
                & (t < 1.0 - t_tol)
                & (u > u_tol[k])
                & (u < 1.0 - u_tol[k])
            )
        return blocked
