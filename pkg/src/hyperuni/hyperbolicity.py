"""Gromov products, four-point delta, slim triangles and the tripod/projection lemmas."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .space import (
    FiniteMetricSpace,
    PathArc,
    arclength_index,
    distance_to_arc,
    h_short_arcs,
    is_h_short,
    length_tol,
    snap_by_distance,
)

EXACT_DELTA_MAX = 200


def gromov_product(space: FiniteMetricSpace, x: int, y: int, p: int) -> float:
    D = space.dist
    return 0.5 * (D[x, p] + D[y, p] - D[x, y])


@dataclass(frozen=True)
class HyperbolicityEstimate:
    delta: float
    method: str
    quadruples_checked: int
    worst_quadruple: tuple[int, int, int, int] | None

    def to_dict(self, space: FiniteMetricSpace | None = None) -> dict:
        quad = self.worst_quadruple
        if quad is not None and space is not None:
            quad = [space.label(v) for v in quad]
        return {
            "delta": self.delta,
            "method": self.method,
            "quadruples_checked": self.quadruples_checked,
            "worst_quadruple": None if quad is None else list(quad),
        }


def _exact_delta(D: np.ndarray, block: int = 16):
    n = D.shape[0]
    best = 0.0
    best_quad = None
    for p in range(n):
        G = 0.5 * (D[:, p, None] + D[None, p, :] - D)
        for start in range(0, n, block):
            xs = slice(start, min(start + block, n))
            # maxmin[x, z] = max_y min(G[x, y], G[y, z])
            maxmin = np.minimum(G[xs, :, None], G[None, :, :]).max(axis=1)
            defect = maxmin - G[xs, :]
            k = int(np.argmax(defect))
            val = float(defect.flat[k])
            if val > best:
                xi, z = divmod(k, n)
                x = start + xi
                y = int(np.argmax(np.minimum(G[x, :], G[:, z])))
                best, best_quad = val, (x, y, z, p)
    return best, best_quad


def _sampled_delta(D: np.ndarray, budget: int, seed: int):
    n = D.shape[0]
    rng = np.random.default_rng(seed)
    x, y, z, p = rng.integers(0, n, size=(4, budget))
    gxy = 0.5 * (D[x, p] + D[y, p] - D[x, y])
    gyz = 0.5 * (D[y, p] + D[z, p] - D[y, z])
    gxz = 0.5 * (D[x, p] + D[z, p] - D[x, z])
    defect = np.minimum(gxy, gyz) - gxz
    k = int(np.argmax(defect))
    val = float(defect[k])
    if val <= 0:
        return 0.0, None
    return val, (int(x[k]), int(y[k]), int(z[k]), int(p[k]))


def delta_four_point(
    space: FiniteMetricSpace,
    method: str = "auto",
    sample_budget: int = 200_000,
    rng_seed: int = 0,
) -> HyperbolicityEstimate:
    """Smallest delta for which the four-point condition holds.

    ``exact`` scans all ordered quadruples (O(n^4)); ``sampled`` scans
    ``sample_budget`` seeded quadruples and is a lower bound; ``auto`` picks
    exact up to 200 vertices. Trees short-circuit to 0 in every mode.
    """
    if method not in ("auto", "exact", "sampled"):
        raise ValueError(f"unknown method {method!r}")
    n = space.n
    if space.is_tree():
        return HyperbolicityEstimate(0.0, "exact", 0, None)
    if method == "auto":
        method = "exact" if n <= EXACT_DELTA_MAX else "sampled"
    if method == "exact":
        delta, quad = _exact_delta(space.dist)
        checked = n**4
    else:
        delta, quad = _sampled_delta(space.dist, sample_budget, rng_seed)
        checked = sample_budget
    return HyperbolicityEstimate(max(delta, 0.0), method, checked, quad)


def rips_kappa(delta: float, h: float) -> float:
    return 3.0 * delta + 1.5 * h


@dataclass(frozen=True)
class ShortTriangle:
    """Sides ``alpha: y->z``, ``beta: x->z``, ``gamma: x->y``."""

    alpha: PathArc
    beta: PathArc
    gamma: PathArc
    h: float

    @property
    def corners(self) -> tuple[int, int, int]:
        return self.gamma.start, self.gamma.end, self.alpha.end

    def sides(self) -> dict[str, PathArc]:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


def short_triangle(
    space: FiniteMetricSpace, x: int, y: int, z: int, h: float, choice: tuple[int, int, int] = (0, 0, 0)
) -> ShortTriangle:
    """Triangle whose sides are taken from the h-short arc lists (index ``choice``)."""
    sides = []
    for (a, b), k in zip(((y, z), (x, z), (x, y)), choice):
        arcs = h_short_arcs(space, a, b, h)
        sides.append(arcs[min(k, len(arcs) - 1)])
    return ShortTriangle(*sides, h=h)


def validate_triangle(space: FiniteMetricSpace, tri: ShortTriangle) -> None:
    x, y, z = tri.corners
    ends = {
        "alpha": (y, z),
        "beta": (x, z),
        "gamma": (x, y),
    }
    for name, arc in tri.sides().items():
        if (arc.start, arc.end) != ends[name]:
            raise ValueError(f"side {name} does not join the expected corners")
        if not is_h_short(space, arc, tri.h):
            raise ValueError(f"side {name} is not {tri.h}-short")


@dataclass(frozen=True)
class SideCenter:
    """Split of one side into start leg, center and end leg."""

    start_split: int
    end_split: int
    start_leg: float
    end_leg: float
    center_length: float


def triangle_centers(space: FiniteMetricSpace, tri: ShortTriangle) -> dict[str, SideCenter]:
    validate_triangle(space, tri)
    x, y, z = tri.corners
    # side name -> (start corner, end corner, opposite corner)
    layout = {"alpha": (y, z, x), "beta": (x, z, y), "gamma": (x, y, z)}
    out = {}
    for name, arc in tri.sides().items():
        a, b, c = layout[name]
        lead = gromov_product(space, b, c, a)
        trail = gromov_product(space, a, c, b)
        slack = max(
            (arc.cumulative[k + 1] - arc.cumulative[k] for k in range(len(arc) - 1)), default=0.0
        ) / 2
        if lead > arc.length + slack + length_tol(arc.length) or trail > arc.length + slack + length_tol(arc.length):
            raise ValueError(f"Gromov product exceeds the length of side {name}")
        i = arclength_index(arc, min(lead, arc.length))
        j = arclength_index(arc, max(arc.length - trail, 0.0))
        out[name] = SideCenter(
            start_split=arc.vertices[i],
            end_split=arc.vertices[j],
            start_leg=lead,
            end_leg=trail,
            center_length=max(arc.length - lead - trail, 0.0),
        )
    return out


def slimness(space: FiniteMetricSpace, tri: ShortTriangle) -> tuple[float, tuple[str, int]]:
    """Largest distance from a side vertex to the union of the other two sides."""
    sides = tri.sides()
    worst, witness = 0.0, (next(iter(sides)), tri.gamma.start)
    for name, arc in sides.items():
        others = sorted({v for k, a in sides.items() if k != name for v in a.vertices})
        gaps = space.dist[np.ix_(list(arc.vertices), others)].min(axis=1)
        k = int(np.argmax(gaps))
        if gaps[k] > worst:
            worst, witness = float(gaps[k]), (name, arc.vertices[k])
    return worst, witness


def tripod_margins(
    space: FiniteMetricSpace, alpha1: PathArc, alpha2: PathArc, delta: float, h: float
) -> list[dict]:
    """Matched point pairs for the tripod estimate, one record per checked point.

    Each record holds the equal-distance gap ``dist(x1, x2)``, the
    equal-arclength gap ``dist(x1, x2')`` (``None`` when ``alpha2`` is too
    short) and the snap slack for each.
    """
    a = alpha1.start
    if alpha2.start != a:
        raise ValueError("arcs must share their first endpoint")
    b1, b2 = alpha1.end, alpha2.end
    limit = gromov_product(space, b1, b2, a)
    D = space.dist
    records = []
    for i, x1 in enumerate(alpha1.vertices):
        t = D[a, x1]
        if t > limit + length_tol(limit):
            continue
        snapped = snap_by_distance(space, alpha2, a, t)
        if snapped is None:
            continue
        k, slack = snapped
        rec = {"x1": x1, "x2": alpha2.vertices[k], "gap": float(D[x1, alpha2.vertices[k]]), "slack": slack}
        s = alpha1.cumulative[i]
        if s <= alpha2.length + length_tol(alpha2.length):
            k2 = arclength_index(alpha2, min(s, alpha2.length))
            rec["x2p"] = alpha2.vertices[k2]
            rec["gap_arclength"] = float(D[x1, alpha2.vertices[k2]])
            rec["slack_arclength"] = abs(alpha2.cumulative[k2] - s)
        else:
            rec["x2p"] = None
            rec["gap_arclength"] = None
            rec["slack_arclength"] = 0.0
        records.append(rec)
    return records


def tripod_check(
    space: FiniteMetricSpace, alpha1: PathArc, alpha2: PathArc, h: float, delta: float
) -> tuple[bool, float]:
    """Worst margin against ``4*delta + h`` and ``4*delta + 2*h`` (<= 0 passes)."""
    worst = -np.inf
    for rec in tripod_margins(space, alpha1, alpha2, delta, h):
        worst = max(worst, rec["gap"] - rec["slack"] - (4 * delta + h))
        if rec["gap_arclength"] is not None:
            worst = max(worst, rec["gap_arclength"] - rec["slack_arclength"] - (4 * delta + 2 * h))
    if worst == -np.inf:
        worst = 0.0
    return worst <= length_tol(delta), float(worst)


def projection_check(
    space: FiniteMetricSpace, gamma: PathArc, x1: int, x2: int, R: float, kappa: float, h: float
) -> bool | None:
    """Projection lemma on one configuration; ``None`` when its hypotheses fail."""
    d1, y1 = distance_to_arc(space, x1, gamma)
    d2, y2 = distance_to_arc(space, x2, gamma)
    if R <= 0 or d1 < R or d2 < R or space.dist[x1, x2] >= 2 * R - 4 * kappa - h:
        return None
    return bool(space.dist[y1, y2] <= 8 * kappa + 2 * h + length_tol(kappa))


def tail_positions(n: int) -> range:
    """Indices of the last quarter of ``n`` anchors (at least two)."""
    k = max(2, n // 4)
    return range(n - k, n)


def boundary_gromov_product(space: FiniteMetricSpace, ray1, ray2, o: int) -> tuple[float, float]:
    """Range of ``(u_i|v_i)_o`` over the tail of two anchor sequences."""
    a1, a2 = ray1.anchors, ray2.anchors
    if len(a1) < 8 or len(a2) < 8:
        raise ValueError("rays need at least 8 anchors")
    m = min(len(a1), len(a2))
    vals = [gromov_product(space, a1[i], a2[i], o) for i in tail_positions(m)]
    return float(min(vals)), float(max(vals))
