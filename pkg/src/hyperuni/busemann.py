"""Boundary rays and the Busemann fields they induce."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .hyperbolicity import gromov_product, tail_positions
from .space import FiniteMetricSpace, length_tol

MIN_ANCHORS = 8


class RayError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryRay:
    name: str
    anchors: tuple[int, ...]

    def labels(self, space: FiniteMetricSpace) -> list[str]:
        return [space.label(v) for v in self.anchors]


@dataclass(frozen=True)
class RayDiagnostics:
    valid: bool
    monotone: bool
    head_ceiling: float
    tail_floor: float
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "monotone": self.monotone,
            "head_ceiling": self.head_ceiling,
            "tail_floor": self.tail_floor,
            "reason": self.reason,
        }


def _pair_products(space, anchors, positions, o):
    return [gromov_product(space, anchors[i], anchors[j], o) for i, j in combinations(positions, 2)]


def validate_ray(space: FiniteMetricSpace, ray: BoundaryRay, o: int) -> RayDiagnostics:
    """Finite stand-in for the Gromov-sequence condition.

    Distances from ``o`` must increase strictly, and the smallest pairwise
    product among the last quarter of anchors must exceed the largest one
    among the first quarter.
    """
    a = ray.anchors
    if len(a) < MIN_ANCHORS:
        raise RayError(f"ray {ray.name!r} has {len(a)} anchors; at least {MIN_ANCHORS} required")
    d = space.dist[o, list(a)]
    monotone = bool(np.all(np.diff(d) > 0))
    k = max(2, len(a) // 4)
    head = _pair_products(space, a, range(k), o)
    tail = _pair_products(space, a, tail_positions(len(a)), o)
    head_ceiling, tail_floor = float(max(head)), float(min(tail))
    reason = ""
    if not monotone:
        reason = "distance from the basepoint is not strictly increasing"
    elif tail_floor <= head_ceiling:
        reason = "tail Gromov products do not exceed head products"
    return RayDiagnostics(not reason, monotone, head_ceiling, tail_floor, reason)


@dataclass(frozen=True, eq=False)
class BusemannField:
    """``values[x] = |u_N - x| - |u_N - o|`` for the last anchor ``u_N``."""

    space: FiniteMetricSpace
    values: np.ndarray
    omega: BoundaryRay
    basepoint: int
    anchor_error: float
    settled: np.ndarray

    def __call__(self, x: int) -> float:
        return float(self.values[x])

    def to_dict(self) -> dict:
        return {self.space.label(i): float(v) for i, v in enumerate(self.values)}


def _distance_difference(space, anchor, o):
    return space.dist[anchor] - space.dist[anchor, o]


def settled_region(space: FiniteMetricSpace, ray: BoundaryRay, o: int) -> np.ndarray:
    """Vertices no farther from ``o`` than the first tail anchor.

    Quantities read off the finite ray (field stability, tail products) are
    only meaningful for points well behind the anchors used.
    """
    first_tail = ray.anchors[tail_positions(len(ray.anchors))[0]]
    r = space.dist[o, first_tail]
    return np.flatnonzero(space.dist[o] <= r + length_tol(r))


def busemann_field(space: FiniteMetricSpace, ray: BoundaryRay, o: int, check: bool = True) -> BusemannField:
    if check:
        diag = validate_ray(space, ray, o)
        if not diag.valid:
            raise RayError(f"ray {ray.name!r} is invalid: {diag.reason}")
    last = _distance_difference(space, ray.anchors[-1], o)
    prev = _distance_difference(space, ray.anchors[-2], o)
    settled = settled_region(space, ray, o)
    err = float(np.abs(last[settled] - prev[settled]).max())
    values = last.copy()
    values.setflags(write=False)
    return BusemannField(space, values, ray, o, err, settled)


def gromov_product_b(field: BusemannField, x: int, y: int) -> float:
    return 0.5 * (field.values[x] + field.values[y] - field.space.dist[x, y])


def product_with_ray(space: FiniteMetricSpace, x: int, ray: BoundaryRay, p: int) -> float:
    """``(x|omega)_p`` approximated by the tail minimum of ``(x|u_i)_p``."""
    return float(min(gromov_product(space, x, ray.anchors[i], p) for i in tail_positions(len(ray.anchors))))


def check_eq_3_6(field: BusemannField, x: int, y: int, delta: float, tol_extra: float = 0.0) -> tuple[bool, float]:
    """Compare ``(x|y)_b`` with ``(x|y)_o - (x|omega)_o - (omega|y)_o``."""
    space, o, ray = field.space, field.basepoint, field.omega
    rhs = gromov_product(space, x, y, o) - product_with_ray(space, x, ray, o) - product_with_ray(space, y, ray, o)
    residual = abs(gromov_product_b(field, x, y) - rhs)
    bound = 10 * delta + field.anchor_error + tol_extra
    return residual <= bound + length_tol(bound), float(residual)


def lipschitz_excess(field: BusemannField) -> tuple[float, tuple[int, int]]:
    """Largest ``|b(x) - b(y)| - |x - y|`` over all pairs, with the pair."""
    b = field.values
    excess = np.abs(b[:, None] - b[None, :]) - field.space.dist
    k = int(np.argmax(excess))
    x, y = divmod(k, field.space.n)
    return float(excess[x, y]), (x, y)


def check_harnack(field: BusemannField, epsilon: float, delta: float) -> tuple[bool, float, tuple[int, int]]:
    """Two-sided Harnack bound on ``rho = exp(-epsilon*b)`` over all pairs.

    Returns the worst log-ratio margin ``|log rho(x)/rho(y)| - epsilon*|x-y| -
    10*epsilon*delta`` (<= 0 passes) and the pair attaining it.
    """
    excess, pair = lipschitz_excess(field)
    margin = epsilon * excess - 10 * epsilon * delta
    return margin <= length_tol(epsilon), float(margin), pair
