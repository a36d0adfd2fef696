"""Exact point-to-point geodesic distance via a visibility graph.

Inside a convex outer polygon with convex holes, shortest paths bend only
at hole vertices, so the visibility graph over hole vertices plus the two
query points carries an exact shortest path. A discretized grid oracle is
provided as an independent cross-check for tests.

Graph construction is the naive O(V^2 * E_h) pairwise visibility sweep
(V nodes, E_h total hole edges), vectorized per hole with bounding-box
prefiltering; fine for desk-scale instances (a few thousand nodes).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .domain import Domain, PolygonalDomain, SegmentDomain
from .geom import Point, Polyline

_PAIR_CHUNK = 400_000


class VisibilityGraph:
    """Weighted visibility graph over hole vertices plus registered points."""

    def __init__(
        self,
        nodes: Sequence[Point],
        hole_of_node: Sequence[int],
        edge_i: np.ndarray,
        edge_j: np.ndarray,
        edge_w: np.ndarray,
    ):
        self.nodes = tuple(nodes)
        self.hole_of_node = tuple(hole_of_node)  # -1 for registered extra points
        self._ei = edge_i
        self._ej = edge_j
        self._ew = edge_w

    def __repr__(self) -> str:
        return f"VisibilityGraph({len(self.nodes)} nodes, {self._ei.size} edges)"

    @property
    def n_edges(self) -> int:
        return int(self._ei.size)

    @cached_property
    def edges(self) -> tuple[tuple[int, int, float], ...]:
        return tuple(
            (int(i), int(j), float(w))
            for i, j, w in zip(self._ei, self._ej, self._ew)
        )

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in self.nodes]
        for i, j, w in zip(self._ei, self._ej, self._ew):
            adj[int(i)].append((int(j), float(w)))
            adj[int(j)].append((int(i), float(w)))
        for lst in adj:
            lst.sort()
        return adj

    @cached_property
    def matrix(self):
        n = len(self.nodes)
        return coo_matrix((self._ew, (self._ei, self._ej)), shape=(n, n)).tocsr()


@dataclass(frozen=True)
class GeodesicResult:
    length: float
    path: Polyline
    touched_holes: tuple[int, ...]


def _hole_vertices(domain: Domain) -> tuple[list[Point], list[int]]:
    pts: list[Point] = []
    owner: list[int] = []
    if isinstance(domain, SegmentDomain):
        for k, seg in enumerate(domain.segments):
            pts.extend((seg.a, seg.b))
            owner.extend((k, k))
    else:
        for k, hole in enumerate(domain.holes):
            pts.extend(hole.vertices)
            owner.extend([k] * len(hole.vertices))
    return pts, owner


def _check_point(domain: Domain, p: Point, what: str) -> None:
    tol = domain.boundary_tol
    if not domain.outer.contains(p, tol=tol):
        raise ValueError(f"{what} lies outside the outer polygon: {p}")
    if domain.kernel.point_in_interior(p, tol=tol) != -1:
        raise ValueError(f"{what} lies strictly inside a hole: {p}")


def build_visibility_graph(
    domain: Domain, extra_points: Sequence[Point] = ()
) -> VisibilityGraph:
    """Nodes are all hole vertices plus `extra_points`; an edge joins two
    nodes iff the open segment between them penetrates no hole interior."""
    for p in extra_points:
        _check_point(domain, p, "extra point")
    pts, owner = _hole_vertices(domain)
    pts.extend(extra_points)
    owner.extend([-1] * len(extra_points))
    n = len(pts)
    empty = np.empty(0)
    if n < 2:
        return VisibilityGraph(pts, owner, empty.astype(np.intp), empty.astype(np.intp), empty)
    xs = np.array([p.x for p in pts])
    ys = np.array([p.y for p in pts])
    kernel = domain.kernel
    ii = np.concatenate(
        [np.full(n - 1 - i, i, dtype=np.intp) for i in range(n - 1)]
    )
    jj = np.concatenate([np.arange(i + 1, n, dtype=np.intp) for i in range(n - 1)])
    keep_i, keep_j = [], []
    for lo in range(0, ii.size, _PAIR_CHUNK):
        hi = min(lo + _PAIR_CHUNK, ii.size)
        ci, cj = ii[lo:hi], jj[lo:hi]
        blocked = kernel.blocked_mask(xs[ci], ys[ci], xs[cj], ys[cj])
        keep_i.append(ci[~blocked])
        keep_j.append(cj[~blocked])
    ei = np.concatenate(keep_i)
    ej = np.concatenate(keep_j)
    ew = np.hypot(xs[ei] - xs[ej], ys[ei] - ys[ej])
    return VisibilityGraph(pts, owner, ei, ej, ew)


def all_pairs_lengths(graph: VisibilityGraph) -> np.ndarray:
    """Dense matrix of shortest-path lengths between all graph nodes."""
    return _sp_dijkstra(graph.matrix, directed=False)


def _dijkstra_lex_path(
    graph: VisibilityGraph, src: int, dst: int
) -> Optional[tuple[float, tuple[int, ...]]]:
    """Shortest path minimizing (length, node-index sequence); deterministic
    among exact length ties."""
    adj = graph.adjacency
    best: dict[int, tuple[float, tuple[int, ...]]] = {}
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (src,))]
    done: set[int] = set()
    while heap:
        d, path = heapq.heappop(heap)
        u = path[-1]
        if u in done:
            continue
        done.add(u)
        if u == dst:
            return d, path
        for v, w in adj[u]:
            if v in done:
                continue
            nd = d + w
            cur = best.get(v)
            if cur is None or nd < cur[0] or (nd == cur[0] and path + (v,) < cur[1]):
                best[v] = (nd, path + (v,))
                heapq.heappush(heap, (nd, path + (v,)))
    return None


def geod(domain: Domain, s: Point, t: Point) -> GeodesicResult:
    """Exact geodesic distance between two points of the domain."""
    _check_point(domain, s, "source")
    _check_point(domain, t, "target")
    if s == t:
        return GeodesicResult(0.0, Polyline([s]), ())
    if not domain.kernel.segment_blocked(s, t):
        return GeodesicResult(s.dist(t), Polyline([s, t]), ())
    graph = build_visibility_graph(domain, [s, t])
    src = len(graph.nodes) - 2
    dst = len(graph.nodes) - 1
    res = _dijkstra_lex_path(graph, src, dst)
    if res is None:
        raise RuntimeError("no path found; the domain is likely invalid")
    length, idx_path = res
    pts = [graph.nodes[i] for i in idx_path]
    touched = []
    for i in idx_path:
        h = graph.hole_of_node[i]
        if h >= 0 and (not touched or touched[-1] != h):
            touched.append(h)
    return GeodesicResult(length, Polyline(pts), tuple(touched))


# -- grid discretization oracle (for tests) -----------------------------------


def _inside_outer_mask(domain: Domain, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    inside = np.ones(xs.shape, dtype=bool)
    poly = domain.outer
    for (a, _), (nx, ny) in zip(poly.edges(), poly._inward_normals):
        inside &= nx * (xs - a.x) + ny * (ys - a.y) > 0
    return inside


def _inside_hole_mask(domain: Domain, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    hit = np.zeros(xs.shape, dtype=bool)
    if isinstance(domain, SegmentDomain):
        return hit
    for hole in domain.holes:
        x0, y0, x1, y1 = hole.bbox
        cand = (xs >= x0) & (xs <= x1) & (ys >= y0) & (ys <= y1) & ~hit
        idx = np.nonzero(cand)[0]
        if idx.size == 0:
            continue
        sub = np.ones(idx.size, dtype=bool)
        for (a, _), (nx, ny) in zip(hole.edges(), hole._inward_normals):
            sub &= nx * (xs[idx] - a.x) + ny * (ys[idx] - a.y) > 0
        hit[idx] |= sub
    return hit


def grid_oracle_geod(domain: Domain, s: Point, t: Point, resolution: int) -> float:
    """Shortest path in an 8-connected grid over cell centers inside the
    domain; an upper bound on geod(s, t) that tightens with resolution (up
    to the 8-connectivity metric factor of about 1.083). Test oracle only.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    _check_point(domain, s, "source")
    _check_point(domain, t, "target")
    if s == t:
        return 0.0
    x0, y0, x1, y1 = domain.outer.bbox
    cell = max(x1 - x0, y1 - y0) / resolution
    nx = int(math.ceil((x1 - x0) / cell))
    ny = int(math.ceil((y1 - y0) / cell))
    jj, ii = np.meshgrid(np.arange(ny), np.arange(nx), indexing="ij")
    xs = x0 + (ii.ravel() + 0.5) * cell
    ys = y0 + (jj.ravel() + 0.5) * cell
    valid = _inside_outer_mask(domain, xs, ys) & ~_inside_hole_mask(domain, xs, ys)
    n_valid = int(valid.sum())
    if n_valid == 0:
        raise RuntimeError("no grid cell lies inside the domain at this resolution")
    node_id = -np.ones(nx * ny, dtype=np.intp)
    node_id[valid] = np.arange(n_valid)
    vx, vy = xs[valid], ys[valid]
    kernel = domain.kernel

    rows, cols, data = [], [], []
    flat = np.arange(nx * ny).reshape(ny, nx)
    for di, dj, w in ((1, 0, 1.0), (0, 1, 1.0), (1, 1, math.sqrt(2)), (-1, 1, math.sqrt(2))):
        a = flat[max(0, -dj): ny - max(0, dj), max(0, -di): nx - max(0, di)].ravel()
        b = flat[max(0, dj): ny + min(0, dj), max(0, di): nx + min(0, di)].ravel()
        ok = valid[a] & valid[b]
        a, b = a[ok], b[ok]
        if a.size == 0:
            continue
        blocked = kernel.blocked_mask(xs[a], ys[a], xs[b], ys[b])
        a, b = a[~blocked], b[~blocked]
        rows.append(node_id[a])
        cols.append(node_id[b])
        data.append(np.full(a.size, w * cell))
    if rows:
        g = coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n_valid, n_valid),
        ).tocsr()
    else:
        g = coo_matrix((n_valid, n_valid)).tocsr()

    def snap(p: Point) -> tuple[int, float]:
        d2 = (vx - p.x) ** 2 + (vy - p.y) ** 2
        order = np.argsort(d2)[:64]
        for k in order:
            c = Point(float(vx[k]), float(vy[k]))
            if not kernel.segment_blocked(p, c):
                return int(k), p.dist(c)
        raise RuntimeError("endpoint cannot be snapped to the grid at this resolution")

    cs, ds = snap(s)
    ct, dt = snap(t)
    dist = _sp_dijkstra(g, directed=False, indices=cs)
    val = float(dist[ct])
    if not math.isfinite(val):
        raise RuntimeError("snapped endpoints are disconnected at this resolution")
    return val + ds + dt
