"""Test spaces: paths, b-ary trees, grids, {p,q} tiling disks and jittered subdivisions."""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .busemann import BoundaryRay
from .space import FiniteMetricSpace, build_space, shortest_arc

KINDS = ("path", "bary_tree", "tessellation_disk", "grid", "jittered")
ALIASES = {"tree": "bary_tree", "tessellation": "tessellation_disk", "disk": "tessellation_disk"}


@dataclass(frozen=True, eq=False)
class GeneratedSpace:
    space: FiniteMetricSpace
    rays: dict[str, BoundaryRay]
    basepoint: int
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 10
    b: int = 2
    depth: int = 8
    p: int = 7
    q: int = 3
    layers: int = 3
    rows: int = 5
    cols: int = 5
    subdivide: int = 1
    jitter: float = 0.0
    seed: int = 0
    base: str = "path"

    def to_dict(self) -> dict:
        return asdict(self)


def _pack(edges, vertices, rays, basepoint, meta) -> GeneratedSpace:
    space = build_space(edges, vertices=vertices)
    idx = space.index
    ray_objs = {name: BoundaryRay(name, tuple(idx(v) for v in anchors)) for name, anchors in rays.items()}
    return GeneratedSpace(space, ray_objs, idx(basepoint), meta)


def path_graph(n: int) -> GeneratedSpace:
    """Vertices -n..n with unit edges; rays toward both ends, basepoint 0."""
    if n < 1:
        raise ValueError("path size must be at least 1")
    verts = [str(i) for i in range(-n, n + 1)]
    edges = [(str(i), str(i + 1), 1.0) for i in range(-n, n)]
    rays = {
        "plus": [str(i) for i in range(1, n + 1)],
        "minus": [str(-i) for i in range(1, n + 1)],
    }
    return _pack(edges, verts, rays, "0", {"kind": "path", "n": n})


def bary_tree(b: int, depth: int) -> GeneratedSpace:
    """Rooted b-ary tree; vertex labels spell the child digits from the root."""
    if not 2 <= b <= 10:
        raise ValueError("branching must be between 2 and 10")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    verts = ["root"]
    edges = []
    level = [""]
    for _ in range(depth):
        nxt = []
        for parent in level:
            for c in range(b):
                child = parent + str(c)
                edges.append((parent or "root", child, 1.0))
                nxt.append(child)
        verts.extend(nxt)
        level = nxt
    last = str(b - 1)
    rays = {
        "spineL": ["0" * k for k in range(1, depth + 1)],
        "spineR": [last * k for k in range(1, depth + 1)],
        "spineZ": ["".join("0" if i % 2 == 0 else last for i in range(k)) for k in range(1, depth + 1)],
    }
    return _pack(edges, verts, rays, "root", {"kind": "bary_tree", "b": b, "depth": depth})


def grid_graph(rows: int, cols: int) -> GeneratedSpace:
    if rows < 2 or cols < 2:
        raise ValueError("grid needs at least 2 rows and 2 columns")
    lab = lambda r, c: f"{r},{c}"  # noqa: E731
    verts = [lab(r, c) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((lab(r, c), lab(r, c + 1), 1.0))
            if r + 1 < rows:
                edges.append((lab(r, c), lab(r + 1, c), 1.0))
    rays = {
        "row": [lab(0, c) for c in range(1, cols)],
        "col": [lab(r, 0) for r in range(1, rows)],
    }
    return _pack(edges, verts, rays, lab(0, 0), {"kind": "grid", "rows": rows, "cols": cols})


def _reflect(z: complex, a: complex, b: complex) -> complex:
    """Reflect ``z`` in the hyperbolic geodesic through ``a`` and ``b`` (Poincare disk)."""
    # circle orthogonal to the unit circle: Re(c * conj(w)) = (1 + |w|^2) / 2 for w = a, b
    m = np.array([[a.real, a.imag], [b.real, b.imag]])
    rhs = np.array([(1 + abs(a) ** 2) / 2, (1 + abs(b) ** 2) / 2])
    det = np.linalg.det(m)
    if abs(det) < 1e-14:
        # geodesic through the origin: Euclidean line reflection
        u = (b - a) / abs(b - a)
        w = z - a
        return a + u * u * w.conjugate()
    cx, cy = np.linalg.solve(m, rhs)
    c = complex(cx, cy)
    r2 = abs(c) ** 2 - 1
    return c + r2 / (z - c).conjugate()


class _PointSet:
    def __init__(self, tol: float):
        self.tol = tol
        self.points: list[complex] = []

    def find_or_add(self, z: complex) -> tuple[int, bool]:
        if self.points:
            arr = np.asarray(self.points)
            k = int(np.argmin(np.abs(arr - z)))
            if abs(arr[k] - z) < self.tol:
                return k, False
        self.points.append(z)
        return len(self.points) - 1, True


def tessellation_disk(p: int, q: int, layers: int) -> GeneratedSpace:
    """Vertex/edge graph of the {p,q} tiling, central face plus ``layers`` face rings.

    Faces are grown by reflecting across edges; ring ``k`` holds the faces at
    edge-adjacency distance ``k`` from the central face. Edges have unit length.
    """
    if p < 3 or q < 3 or 1.0 / p + 1.0 / q >= 0.5:
        raise ValueError(f"{{{p},{q}}} is not a hyperbolic tiling (need 1/p + 1/q < 1/2)")
    if layers < 0:
        raise ValueError("layers must be non-negative")
    circum = math.acosh(1.0 / (math.tan(math.pi / p) * math.tan(math.pi / q)))
    r0 = math.tanh(circum / 2)
    first = tuple(cmath.rect(r0, 2 * math.pi * k / p) for k in range(p))

    centers = _PointSet(1e-7)
    centers.find_or_add(0j)
    faces = [first]
    ring_of = [0]
    frontier = [0]
    for ring in range(1, layers + 1):
        nxt = []
        for f in frontier:
            corners = faces[f]
            center = centers.points[f]
            for k in range(p):
                a, b = corners[k], corners[(k + 1) % p]
                new_center = _reflect(center, a, b)
                _, added = centers.find_or_add(new_center)
                if not added:
                    continue
                # reverse so the new face keeps a consistent orientation
                faces.append(tuple(_reflect(z, a, b) for z in corners)[::-1])
                ring_of.append(ring)
                nxt.append(len(faces) - 1)
        frontier = nxt

    verts = _PointSet(1e-7)
    edge_set = set()
    for corners in faces:
        ids = [verts.find_or_add(z)[0] for z in corners]
        for k in range(p):
            i, j = ids[k], ids[(k + 1) % p]
            edge_set.add((min(i, j), max(i, j)))
    labels = [f"v{i}" for i in range(len(verts.points))]
    edges = [(labels[i], labels[j], 1.0) for i, j in sorted(edge_set)]
    ring_sizes = [ring_of.count(k) for k in range(layers + 1)]
    meta = {
        "kind": "tessellation_disk",
        "p": p,
        "q": q,
        "layers": layers,
        "faces": len(faces),
        "ring_sizes": ring_sizes,
        "coordinates": [(z.real, z.imag) for z in verts.points],
    }
    space = build_space(edges, vertices=labels)
    o = 0
    rays = _radial_rays(space, o, verts.points, count=3)
    return GeneratedSpace(space, rays, o, meta)


def _radial_rays(space: FiniteMetricSpace, o: int, coords: list[complex], count: int) -> dict[str, BoundaryRay]:
    far = space.dist[o]
    outer = np.flatnonzero(far == far.max())
    base_angle = cmath.phase(coords[o])
    rays = {}
    for k in range(count):
        target_angle = base_angle + math.pi + 2 * math.pi * k / count
        gaps = [abs(cmath.phase(coords[v] * cmath.rect(1.0, -target_angle))) for v in outer]
        target = int(outer[int(np.argmin(gaps))])
        arc = shortest_arc(space, o, target)
        rays[f"spoke{k}"] = BoundaryRay(f"spoke{k}", arc.vertices[1:])
    return rays


def jittered(base: GeneratedSpace, subdivide: int, amplitude: float, seed: int = 0) -> GeneratedSpace:
    """Split every edge into ``subdivide`` pieces, then scale each piece by U[1-a, 1+a]."""
    if subdivide < 1:
        raise ValueError("subdivision count must be at least 1")
    space = base.space
    min_piece = min(w for _, _, w in space.edges) / subdivide
    if not 0 <= amplitude < min_piece / 4:
        raise ValueError(f"jitter amplitude {amplitude} must be below a quarter of the smallest edge ({min_piece / 4})")
    rng = np.random.default_rng(seed)
    lab = space.label
    verts = list(space.vertices)
    edges = []
    inner: dict[tuple[int, int], list[str]] = {}
    for i, j, w in space.edges:
        chain = [lab(i)] + [f"{lab(i)}~{lab(j)}.{k}" for k in range(1, subdivide)] + [lab(j)]
        verts.extend(chain[1:-1])
        inner[(i, j)] = chain[1:-1]
        inner[(j, i)] = chain[1:-1][::-1]
        factors = rng.uniform(1 - amplitude, 1 + amplitude, size=subdivide)
        for k in range(subdivide):
            edges.append((chain[k], chain[k + 1], w / subdivide * float(factors[k])))

    rays = {}
    for name, ray in base.rays.items():
        anchors = [lab(ray.anchors[0])]
        for a, b in zip(ray.anchors, ray.anchors[1:]):
            anchors.extend(inner.get((a, b), []))
            anchors.append(lab(b))
        rays[name] = anchors
    meta = dict(base.meta, subdivide=subdivide, jitter=amplitude, seed=seed)
    return _pack(edges, verts, rays, lab(base.basepoint), meta)


def generate(spec: GeneratorSpec) -> GeneratedSpace:
    """Build the space described by ``spec``; ``jittered`` wraps ``spec.base``."""
    kind = ALIASES.get(spec.kind, spec.kind)
    if kind == "jittered":
        kind = ALIASES.get(spec.base, spec.base)
        if kind == "jittered":
            raise ValueError("jittered needs a concrete base kind")
    if kind == "path":
        out = path_graph(spec.n)
    elif kind == "bary_tree":
        out = bary_tree(spec.b, spec.depth)
    elif kind == "tessellation_disk":
        out = tessellation_disk(spec.p, spec.q, spec.layers)
    elif kind == "grid":
        out = grid_graph(spec.rows, spec.cols)
    else:
        raise ValueError(f"unknown generator kind {spec.kind!r}; choose from {', '.join(KINDS)}")
    if spec.subdivide > 1 or spec.jitter > 0:
        out = jittered(out, spec.subdivide, spec.jitter, spec.seed)
    return out
