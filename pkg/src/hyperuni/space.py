"""Finite metric graphs, arcs on them, and h-short arc search.

A space is a connected graph with positive edge lengths; its metric is the
path metric, computed once at build time. Vertices carry string labels for
I/O, but every computational routine in the package addresses them by their
position in ``space.vertices``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

# Absolute/relative tolerance for comparing sums of edge lengths.
LENGTH_TOL = 1e-10

# Triangle inequality is checked on all triples up to this size, sampled above.
FULL_METRIC_CHECK_MAX = 200


class GraphError(ValueError):
    """Raised for malformed graphs (disconnected, bad lengths, duplicates)."""


def length_tol(scale: float) -> float:
    return LENGTH_TOL * max(1.0, abs(scale))


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    dist: np.ndarray
    neighbors: tuple[tuple[int, ...], ...] = field(repr=False)
    _edge_len: dict = field(repr=False)
    _index: dict = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def label(self, i: int) -> str:
        return self.vertices[i]

    def edge_length(self, u: int, v: int) -> float:
        return self._edge_len[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._edge_len

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    @property
    def max_edge_length(self) -> float:
        return max(e[2] for e in self.edges)

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1

    def adjacency(self, weights: Sequence[float] | None = None) -> csr_matrix:
        """Symmetric sparse adjacency, optionally with replacement edge weights."""
        if weights is None:
            weights = [e[2] for e in self.edges]
        rows = [e[0] for e in self.edges] + [e[1] for e in self.edges]
        cols = [e[1] for e in self.edges] + [e[0] for e in self.edges]
        data = list(weights) + list(weights)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


def all_pairs(space_or_adj, n: int | None = None) -> np.ndarray:
    """Dijkstra from every source; the result is symmetrized exactly."""
    adj = space_or_adj.adjacency() if isinstance(space_or_adj, FiniteMetricSpace) else space_or_adj
    d = shortest_path(adj, method="D", directed=False)
    return np.minimum(d, d.T)


def build_space(
    edge_list: Iterable[tuple[str, str, float]],
    vertices: Sequence[str] | None = None,
    check_metric: bool = True,
) -> FiniteMetricSpace:
    """Build a space from ``(u, v, length)`` triples.

    Vertex order is ``vertices`` when given, otherwise the sorted labels, so
    the distance matrix never depends on the order edges are listed in.
    """
    edge_list = [(str(u), str(v), float(w)) for u, v, w in edge_list]
    if vertices is None:
        labels = sorted({u for u, _, _ in edge_list} | {v for _, v, _ in edge_list})
    else:
        labels = [str(v) for v in vertices]
        if len(set(labels)) != len(labels):
            raise GraphError("duplicate vertex labels")
    index = {lab: i for i, lab in enumerate(labels)}
    if not labels:
        raise GraphError("empty graph")

    edges = []
    edge_len = {}
    for k, (u, v, w) in enumerate(edge_list):
        if u not in index or v not in index:
            missing = u if u not in index else v
            raise GraphError(f"edge {k}: unknown vertex {missing!r}")
        if not np.isfinite(w) or w <= 0:
            raise GraphError(f"edge {k} ({u}, {v}): length must be positive, got {w}")
        i, j = index[u], index[v]
        if i == j:
            raise GraphError(f"edge {k}: self-loop at {u!r}")
        if (i, j) in edge_len:
            raise GraphError(f"edge {k}: duplicate edge ({u}, {v})")
        edge_len[(i, j)] = edge_len[(j, i)] = w
        edges.append((i, j, w))

    n = len(labels)
    nbrs = [[] for _ in range(n)]
    for i, j, _ in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)

    rows = [e[0] for e in edges]
    cols = [e[1] for e in edges]
    adj = csr_matrix(([e[2] for e in edges], (rows, cols)), shape=(n, n))
    ncomp, comp = connected_components(adj, directed=False)
    if ncomp > 1:
        a = labels[int(np.flatnonzero(comp == comp[0])[0])]
        b = labels[int(np.flatnonzero(comp != comp[0])[0])]
        raise GraphError(f"graph is disconnected: {a!r} and {b!r} lie in different components")

    dist = all_pairs(adj)
    dist.setflags(write=False)
    space = FiniteMetricSpace(
        vertices=tuple(labels),
        edges=tuple(edges),
        dist=dist,
        neighbors=tuple(tuple(sorted(x)) for x in nbrs),
        _edge_len=edge_len,
        _index=index,
    )
    if check_metric:
        worst = metric_defect(dist)
        if worst > 1e-12 * max(1.0, space.diameter):
            raise GraphError(f"distance matrix violates the triangle inequality by {worst}")
    return space


def metric_defect(dist: np.ndarray, seed: int = 0, samples: int = 200_000) -> float:
    """Largest triangle-inequality violation, exhaustive for small matrices."""
    n = dist.shape[0]
    worst = float(np.abs(dist - dist.T).max())
    if n <= FULL_METRIC_CHECK_MAX:
        for k in range(n):
            excess = dist - (dist[:, k, None] + dist[None, k, :])
            worst = max(worst, float(excess.max()))
    else:
        rng = np.random.default_rng(seed)
        i, j, k = rng.integers(0, n, size=(3, samples))
        worst = max(worst, float((dist[i, j] - dist[i, k] - dist[k, j]).max()))
    return worst


@dataclass(frozen=True)
class PathArc:
    """A walk along edges with its prefix lengths (``cumulative[0] == 0``)."""

    vertices: tuple[int, ...]
    cumulative: tuple[float, ...]

    @classmethod
    def from_vertices(cls, space: FiniteMetricSpace, vertices: Sequence[int]) -> "PathArc":
        vertices = tuple(int(v) for v in vertices)
        if not vertices:
            raise ValueError("an arc needs at least one vertex")
        cum = [0.0]
        for a, b in zip(vertices, vertices[1:]):
            if not space.has_edge(a, b):
                raise ValueError(f"({space.label(a)}, {space.label(b)}) is not an edge")
            cum.append(cum[-1] + space.edge_length(a, b))
        return cls(vertices, tuple(cum))

    @property
    def length(self) -> float:
        return self.cumulative[-1]

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)

    def position(self, v: int) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise ValueError(f"vertex {v} is not on the arc") from None

    def slice(self, i: int, j: int) -> "PathArc":
        """Sub-arc between positions ``i`` and ``j`` (reversed when ``i > j``)."""
        if i <= j:
            verts = self.vertices[i : j + 1]
            base = self.cumulative[i]
            cum = tuple(c - base for c in self.cumulative[i : j + 1])
        else:
            verts = self.vertices[j : i + 1][::-1]
            top = self.cumulative[i]
            cum = tuple(top - c for c in self.cumulative[j : i + 1][::-1])
        return PathArc(verts, cum)

    def reversed(self) -> "PathArc":
        return self.slice(len(self) - 1, 0)

    def labels(self, space: FiniteMetricSpace) -> list[str]:
        return [space.label(v) for v in self.vertices]


def is_h_short(space: FiniteMetricSpace, arc: PathArc, h: float) -> bool:
    d = space.dist[arc.start, arc.end]
    return arc.length <= d + h + length_tol(d)


def shortest_arc(space: FiniteMetricSpace, x: int, y: int) -> PathArc:
    """The lexicographically smallest geodesic from ``x`` to ``y``."""
    D = space.dist
    path = [x]
    cur = x
    while cur != y:
        target = D[cur, y]
        for w in space.neighbors[cur]:
            if space.edge_length(cur, w) + D[w, y] <= target + length_tol(target):
                cur = w
                break
        else:  # pragma: no cover - unreachable for an exact metric
            raise RuntimeError("no geodesic continuation found")
        path.append(cur)
    return PathArc.from_vertices(space, path)


def h_short_arcs(
    space: FiniteMetricSpace,
    x: int,
    y: int,
    h: float,
    length_cap: float | None = None,
    max_count: int = 64,
) -> list[PathArc]:
    """Simple paths from ``x`` to ``y`` of length at most ``min(|x-y|+h, cap)``.

    Paths are enumerated best-first with the exact remaining distance as the
    heuristic, so completed paths come out in order of length. The result is
    sorted by (length, vertex sequence) and truncated to ``max_count``.
    """
    D = space.dist
    d = D[x, y]
    if length_cap is not None and length_cap < d - length_tol(d):
        raise ValueError("length_cap is smaller than the distance between the endpoints")
    if x == y:
        return [PathArc((x,), (0.0,))]
    bound = d + h if length_cap is None else min(d + h, length_cap)
    bound += length_tol(d)

    found: list[tuple[float, tuple[int, ...]]] = []
    heap = [(d, (x,), 0.0)]
    while heap:
        f, path, g = heapq.heappop(heap)
        if len(found) >= max_count and f > found[-1][0] + length_tol(d):
            break
        last = path[-1]
        if last == y:
            found.append((g, path))
            continue
        for w in space.neighbors[last]:
            if w in path:
                continue
            g2 = g + space.edge_length(last, w)
            f2 = g2 + D[w, y]
            if f2 <= bound:
                heapq.heappush(heap, (f2, path + (w,), g2))
    found.sort()
    return [PathArc.from_vertices(space, p) for _, p in found[:max_count]]


def subarc(arc: PathArc, u: int, v: int) -> PathArc:
    return arc.slice(arc.position(u), arc.position(v))


def arclength_index(arc: PathArc, t: float) -> int:
    """Position of the vertex whose prefix length is nearest ``t`` (ties: earlier)."""
    if t < -length_tol(arc.length) or t > arc.length + length_tol(arc.length):
        raise ValueError(f"arclength {t} outside [0, {arc.length}]")
    cum = np.asarray(arc.cumulative)
    return int(np.argmin(np.abs(cum - t)))


def point_at_arclength(arc: PathArc, t: float) -> int:
    return arc.vertices[arclength_index(arc, t)]


def last_index_within(arc: PathArc, t: float) -> int:
    """Last position whose prefix length does not exceed ``t``."""
    cum = np.asarray(arc.cumulative)
    k = int(np.searchsorted(cum, t + length_tol(arc.length), side="right")) - 1
    return max(k, 0)


def snap_by_distance(space: FiniteMetricSpace, arc: PathArc, anchor: int, t: float) -> tuple[int, float] | None:
    """Vertex standing in for the first point of ``arc`` at distance ``t`` from ``anchor``.

    Returns ``(position, slack)`` where ``slack`` bounds the metric distance
    between the chosen vertex and the true crossing point, or ``None`` if the
    arc never reaches distance ``t``.
    """
    da = space.dist[anchor, list(arc.vertices)]
    tol = length_tol(t)
    hits = np.flatnonzero(da >= t - tol)
    if hits.size == 0:
        return None
    k = int(hits[0])
    if k == 0 or abs(da[k] - t) <= tol:
        return k, 0.0
    edge = arc.cumulative[k] - arc.cumulative[k - 1]
    s = t - da[k - 1]
    if s <= edge / 2:
        return k - 1, float(s)
    return k, float(edge - s)


def distance_to_arc(space: FiniteMetricSpace, v: int, arc: PathArc) -> tuple[float, int]:
    """Distance from ``v`` to the arc and the nearest arc vertex (lowest index on ties)."""
    verts = np.asarray(arc.vertices)
    d = space.dist[v, verts]
    m = d.min()
    best = int(verts[d == m].min())
    return float(m), best


def neighborhood_contains(
    space: FiniteMetricSpace, outer: PathArc, inner: PathArc, radius: float
) -> tuple[bool, int, float]:
    """Whether every vertex of ``inner`` lies within ``radius`` of ``outer``.

    Also returns the inner vertex farthest from ``outer`` and its distance.
    """
    sub = space.dist[np.ix_(list(inner.vertices), list(outer.vertices))]
    gaps = sub.min(axis=1)
    k = int(np.argmax(gaps))
    worst = float(gaps[k])
    return worst <= radius + length_tol(radius), inner.vertices[k], worst
