"""Conformal deformation by exp(-epsilon*b) and the explicit constant chain."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .busemann import BusemannField
from .space import PathArc, all_pairs

H_MAX = 1.0 / 13.0


class ConstantsError(ValueError):
    pass


def density(field: BusemannField, epsilon: float, x: int) -> float:
    return math.exp(-epsilon * field.values[x])


def _edge_integral(b_u: float, b_v: float, length: float, epsilon: float) -> float:
    # integral of exp(-epsilon*b) along the edge, b linear between endpoints;
    # evaluated from the lower endpoint so the value is orientation-free
    lo, hi = min(b_u, b_v), max(b_u, b_v)
    slope = epsilon * (hi - lo)
    top = math.exp(-epsilon * lo)
    if slope == 0.0:
        return length * top
    return length * top * (-math.expm1(-slope)) / slope


def deformed_edge_length(field: BusemannField, epsilon: float, u: int, v: int, length: float | None = None) -> float:
    if length is None:
        length = field.space.edge_length(u, v)
    return _edge_integral(float(field.values[u]), float(field.values[v]), length, epsilon)


@dataclass(frozen=True, eq=False)
class ConformalDeformation:
    field: BusemannField
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def space(self):
        return self.field.space

    @cached_property
    def edge_weights(self) -> tuple[float, ...]:
        b = self.field.values
        return tuple(_edge_integral(float(b[i]), float(b[j]), w, self.epsilon) for i, j, w in self.space.edges)

    @cached_property
    def _weight_of(self) -> dict:
        out = {}
        for (i, j, _), w in zip(self.space.edges, self.edge_weights):
            out[(i, j)] = out[(j, i)] = w
        return out

    @cached_property
    def dist(self) -> np.ndarray:
        d = all_pairs(self.space.adjacency(self.edge_weights))
        d.setflags(write=False)
        return d

    @cached_property
    def rho(self) -> np.ndarray:
        return np.exp(-self.epsilon * self.field.values)

    def weight(self, u: int, v: int) -> float:
        return self._weight_of[(u, v)]

    def cumulative(self, arc: PathArc) -> np.ndarray:
        steps = [self._weight_of[(a, b)] for a, b in zip(arc.vertices, arc.vertices[1:])]
        return np.concatenate(([0.0], np.cumsum(steps)))

    def edge_list(self) -> list[tuple[str, str, float]]:
        lab = self.space.label
        return [(lab(i), lab(j), w) for (i, j, _), w in zip(self.space.edges, self.edge_weights)]


def deformed_distance(deformation: ConformalDeformation, x: int, y: int) -> float:
    return float(deformation.dist[x, y])


def deformed_length(deformation: ConformalDeformation, arc: PathArc) -> float:
    return float(deformation.cumulative(arc)[-1])


def boundary_proxy_distance(deformation: ConformalDeformation, z: int, proxy_sets: Iterable[Iterable[int]]) -> float:
    verts = sorted({v for s in proxy_sets for v in s})
    if not verts:
        raise ValueError("proxy sets are empty")
    return float(deformation.dist[z, verts].min())


def proxy_distances(deformation: ConformalDeformation, proxy_sets: Iterable[Iterable[int]]) -> np.ndarray:
    verts = sorted({v for s in proxy_sets for v in s})
    if not verts:
        raise ValueError("proxy sets are empty")
    return deformation.dist[:, verts].min(axis=1)


@dataclass(frozen=True)
class ConstantsLedger:
    delta: float
    kappa: float
    h: float
    epsilon: float
    lam: float
    M: float
    C: float
    R: float
    r: float
    A: float
    L: float
    short_scale: float
    epsilon0: float
    K_gh: float
    A_uniform: float
    auto: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def _chain(delta: float, kappa: float, h: float, lam: float) -> dict:
    M = 6.0 * lam**2
    C = 1.0
    if not h < min(1.0, 1.0 / (1.0 + 2.0 * M)):
        raise ConstantsError(f"h={h} must be below min(1, 1/(1+2M)) = {min(1.0, 1.0 / (1.0 + 2.0 * M))} for M={M}")
    R = 1.0 + 4.0 * kappa + 4.0 * kappa * M + 2.0 * h
    r = R - 2.0 * kappa - 2.0 * h
    denom = 1.0 - h - 2.0 * h * M
    A = ((2.0 * R + 8.0 * kappa + 2.0 * h) * (2.0 + 8.0 * kappa * M - h) + (8.0 * kappa + 2.0 * h) * C) / denom
    L = 2.0 * M * (A + 1.0) + 1.0
    eps0 = 1.0 / (25.0 * lam**2 * L)
    return dict(M=M, C=C, R=R, r=r, A=A, L=L, epsilon0=eps0, K_gh=18.0 * lam**2)


def _harnack_lambda(epsilon: float, delta: float) -> float:
    return math.exp(10.0 * epsilon * delta)


def _admissible(epsilon: float, delta: float, kappa: float, h: float) -> bool:
    lam = _harnack_lambda(epsilon, delta)
    try:
        chain = _chain(delta, kappa, h, lam)
    except ConstantsError:
        return False
    return epsilon * 25.0 * lam**2 * chain["L"] <= 1.0


def _auto_epsilon(delta: float, kappa: float, h: float) -> float:
    lo, hi = 1e-30, 1.0
    if not _admissible(lo, delta, kappa, h):
        raise ConstantsError(
            f"no admissible epsilon in (0, 1] for delta={delta}, kappa={kappa}, h={h}: "
            "condition epsilon*25*lambda^2*L <= 1 fails even at 1e-30"
        )
    if _admissible(hi, delta, kappa, h):
        return hi
    # geometric bisection; the condition is monotone in epsilon
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if _admissible(mid, delta, kappa, h):
            lo = mid
        else:
            hi = mid
        if hi / lo - 1.0 < 1e-15:
            break
    return lo


def constants_ledger(delta: float, kappa: float, h: float, epsilon: float | None = None) -> ConstantsLedger:
    """Evaluate the constant chain for given delta, kappa and h.

    With ``epsilon`` given, lambda is the Harnack constant ``exp(10*epsilon*delta)``.
    Without it, the largest epsilon satisfying ``epsilon <= 1/(25*lambda(epsilon)^2*L(epsilon))``
    is found by bisection and used as the operating epsilon.
    """
    if h < 0 or delta < 0 or kappa < 0:
        raise ConstantsError("delta, kappa and h must be non-negative")
    if not h < H_MAX:
        raise ConstantsError(f"h={h} must be below 1/13")
    auto = epsilon is None
    if auto:
        if delta == 0:
            chain = _chain(delta, kappa, h, 1.0)
            epsilon = chain["epsilon0"]
        else:
            epsilon = _auto_epsilon(delta, kappa, h)
    elif not epsilon > 0:
        raise ConstantsError("epsilon must be positive")
    lam = _harnack_lambda(epsilon, delta)
    chain = _chain(delta, kappa, h, lam)
    A_uniform = max(chain["K_gh"], math.exp(epsilon * (26.0 * delta + 11.0 * h) + 1.0))
    return ConstantsLedger(
        delta=delta,
        kappa=kappa,
        h=h,
        epsilon=epsilon,
        lam=lam,
        short_scale=1.0 / (24.0 * lam**2 * epsilon),
        A_uniform=A_uniform,
        auto=auto,
        **chain,
    )
