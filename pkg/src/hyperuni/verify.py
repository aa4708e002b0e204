"""Numerical checks of every quantitative inequality behind the uniformization theorems.

Each check reduces to a single comparison ``empirical_worst <= theory_bound +
slack_used``. Quantities that do not have a natural additive form (ratios,
two-sided constants) are normalized so that this still holds; the witness
dictionary records where the worst case was found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .busemann import (
    BoundaryRay,
    BusemannField,
    RayError,
    busemann_field,
    check_eq_3_6,
    gromov_product_b,
    lipschitz_excess,
    product_with_ray,
)
from .hyperbolicity import (
    delta_four_point,
    gromov_product,
    rips_kappa,
    short_triangle,
    slimness,
    tail_positions,
    tripod_margins,
)
from .space import (
    FiniteMetricSpace,
    PathArc,
    arclength_index,
    h_short_arcs,
    last_index_within,
    length_tol,
    neighborhood_contains,
    shortest_arc,
)
from .uniformize import (
    H_MAX,
    ConformalDeformation,
    ConstantsError,
    ConstantsLedger,
    constants_ledger,
    proxy_distances,
)

EXHAUSTIVE_BELOW = 40
FLOAT_SLACK = 1e-9

CHECK_ORDER = (
    "rough_lipschitz",
    "harnack",
    "eq_3_6",
    "rips_slimness",
    "tripod",
    "lemma_3_1",
    "lemma_3_4_containment",
    "gehring_hayman",
    "lemma_4_1",
    "cone_lemma",
    "comparison",
    "comparison_center",
    "uniformity",
    "boundary_lower_bound",
    "unboundedness",
    "boundary_map",
)


class ConfigError(ValueError):
    pass


@dataclass
class CheckResult:
    name: str
    holds: bool | None
    theory_bound: float
    empirical_worst: float
    witness: dict
    slack_used: float
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "holds": "inconclusive" if self.holds is None else self.holds,
            "theory_bound": self.theory_bound,
            "empirical_worst": self.empirical_worst,
            "witness": self.witness,
            "slack_used": self.slack_used,
            "note": self.note,
        }


def make_result(name, empirical, bound, slack, witness, inconclusive=False, note="") -> CheckResult:
    slack = float(slack) + FLOAT_SLACK * max(1.0, abs(bound))
    holds = None if inconclusive else bool(empirical <= bound + slack)
    return CheckResult(name, holds, float(bound), float(empirical), witness, slack, note)


def _inconclusive(name, bound, note, witness=None) -> CheckResult:
    return CheckResult(name, None, float(bound), 0.0, witness or {}, 0.0, note)


def sample_pairs(n: int, budget: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n < EXHAUSTIVE_BELOW:
        return [(x, y) for x in range(n) for y in range(x + 1, n)]
    raw = rng.integers(0, n, size=(budget, 2))
    seen, out = set(), []
    for x, y in raw.tolist():
        if x != y and (x, y) not in seen:
            seen.add((x, y))
            out.append((x, y))
    return out


def sample_tuples(n: int, k: int, budget: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    return [tuple(t) for t in rng.integers(0, n, size=(budget, k)).tolist()]


def _labels(space: FiniteMetricSpace, verts) -> list[str]:
    return [space.label(int(v)) for v in verts]


def _pick(arcs: Sequence[PathArc], rng: np.random.Generator) -> PathArc:
    return arcs[int(rng.integers(len(arcs)))]


def _quasi_geodesics(space, x, y, h, max_count=8) -> list[PathArc]:
    """h-short arcs with length at most twice the distance (the family in the GH theorem)."""
    d = space.dist[x, y]
    return h_short_arcs(space, x, y, h, length_cap=2 * d + length_tol(d), max_count=max_count)


# --- Busemann-level checks -------------------------------------------------


def check_rough_lipschitz(field: BusemannField, delta: float) -> CheckResult:
    excess, (x, y) = lipschitz_excess(field)
    return make_result(
        "rough_lipschitz",
        excess,
        10 * delta,
        field.anchor_error,
        {"pair": _labels(field.space, (x, y))},
    )


def check_harnack(field: BusemannField, epsilon: float, delta: float) -> CheckResult:
    excess, (x, y) = lipschitz_excess(field)
    return make_result(
        "harnack",
        epsilon * excess,
        10 * epsilon * delta,
        0.0,
        {"pair": _labels(field.space, (x, y)), "quantity": "|log rho(x)/rho(y)| - epsilon*|x-y|"},
    )


def check_eq_3_6_pairs(field: BusemannField, delta: float, pairs) -> CheckResult:
    pairs = _settled_pairs(field, pairs)
    if not pairs:
        return _inconclusive("eq_3_6", 10 * delta, "no sampled pair lies in the settled region")
    worst, arg = -1.0, pairs[0]
    for x, y in pairs:
        _, res = check_eq_3_6(field, x, y, delta)
        if res > worst:
            worst, arg = res, (x, y)
    return make_result(
        "eq_3_6", worst, 10 * delta, field.anchor_error, {"pair": _labels(field.space, arg), "pairs": len(pairs)}
    )


# --- hyperbolicity-level checks ---------------------------------------------


def check_rips(space, delta, h, triples, rng) -> CheckResult:
    kappa = rips_kappa(delta, h)
    worst, wit = 0.0, {}
    for x, y, z in triples:
        choice = tuple(int(c) for c in rng.integers(0, 4, size=3))
        tri = short_triangle(space, x, y, z, h, choice)
        s, (side, v) = slimness(space, tri)
        if s > worst or not wit:
            worst, wit = s, {"corners": _labels(space, (x, y, z)), "side": side, "vertex": space.label(v)}
    return make_result("rips_slimness", worst, kappa, 0.0, dict(wit, triangles=len(triples)))


def check_tripod(space, delta, h, triples, rng) -> CheckResult:
    worst, slack, wit = 0.0, 0.0, {}
    for a, b1, b2 in triples:
        if a in (b1, b2):
            continue
        alpha1 = _pick(h_short_arcs(space, a, b1, h, max_count=4), rng)
        alpha2 = _pick(h_short_arcs(space, a, b2, h, max_count=4), rng)
        for rec in tripod_margins(space, alpha1, alpha2, delta, h):
            obs = rec["gap"]
            if rec["gap_arclength"] is not None:
                obs = max(obs, rec["gap_arclength"] - h)
            slack = max(slack, rec["slack"], rec["slack_arclength"])
            if obs > worst or not wit:
                worst, wit = obs, {"a": space.label(a), "b1": space.label(b1), "b2": space.label(b2), "x1": space.label(rec["x1"])}
    if not wit:
        return _inconclusive("tripod", 4 * delta + h, "no admissible tripod configuration sampled")
    return make_result("tripod", worst, 4 * delta + h, slack, wit)


# --- Gehring-Hayman chain -----------------------------------------------------


def _detours(space, x, y, waypoints) -> list[PathArc]:
    out = []
    for w in waypoints:
        if w in (x, y):
            continue
        first = shortest_arc(space, x, w).vertices
        second = shortest_arc(space, w, y).vertices[1:]
        verts = first + second
        if len(set(verts)) == len(verts):
            out.append(PathArc.from_vertices(space, verts))
    return out


def check_lemma_3_1(space, deformation: ConformalDeformation, ledger: ConstantsLedger, pairs, rng, waypoints=8) -> CheckResult:
    stretch = 6 * ledger.lam**2
    worst, wit, count = 0.0, {}, 0
    for x, y in pairs:
        d = space.dist[x, y]
        if d > ledger.short_scale:
            continue
        alpha = shortest_arc(space, x, y)
        la = float(deformation.cumulative(alpha)[-1])
        for gamma in _detours(space, x, y, rng.integers(0, space.n, size=waypoints).tolist()):
            if gamma.length < stretch * d:
                continue
            count += 1
            ratio = la / float(deformation.cumulative(gamma)[-1])
            if ratio > worst or not wit:
                worst, wit = ratio, {"pair": _labels(space, (x, y)), "detour": gamma.labels(space)}
    if not count:
        return _inconclusive("lemma_3_1", 1.0, "no arc with length >= 6*lambda^2*|x-y| found within budget")
    return make_result("lemma_3_1", worst, 1.0, 0.0, dict(wit, instances=count))


def _chord_arc_ok(space, gamma: PathArc, M: float, C: float, L: float) -> bool:
    verts = list(gamma.vertices)
    cum = np.asarray(gamma.cumulative)
    D = space.dist[np.ix_(verts, verts)]
    arc = np.abs(cum[:, None] - cum[None, :])
    mask = D <= L
    return bool(np.all(arc[mask] <= M * D[mask] + C + length_tol(L)))


def check_lemma_3_4(space, ledger: ConstantsLedger, h, pairs, rng, waypoints=4) -> CheckResult:
    M, C, L = ledger.M, ledger.C, ledger.L
    worst, wit, count = 0.0, {}, 0
    for x, y in pairs:
        alphas = h_short_arcs(space, x, y, h, max_count=8)
        candidates = alphas[:1] + _detours(space, x, y, rng.integers(0, space.n, size=waypoints).tolist())
        for gamma in candidates:
            if not _chord_arc_ok(space, gamma, M, C, L):
                continue
            count += 1
            for alpha in alphas:
                _, v, gap = neighborhood_contains(space, alpha, gamma, L)
                if gap > worst or not wit:
                    worst, wit = gap, {"pair": _labels(space, (x, y)), "vertex": space.label(v)}
    if not count:
        return _inconclusive("lemma_3_4_containment", L, "no curve satisfying the chord-arc hypothesis sampled")
    return make_result("lemma_3_4_containment", worst, L, 0.0, dict(wit, curves=count))


def check_gehring_hayman(space, deformation: ConformalDeformation, ledger: ConstantsLedger, h, pairs, max_arcs=8) -> CheckResult:
    worst, wit, families, nontrivial = 0.0, {}, 0, 0
    for x, y in pairs:
        arcs = _quasi_geodesics(space, x, y, h, max_arcs)
        families += 1
        if any(a.length > space.dist[x, y] + length_tol(space.dist[x, y]) for a in arcs):
            nontrivial += 1
        de = deformation.dist[x, y]
        for alpha in arcs:
            ratio = float(deformation.cumulative(alpha)[-1]) / de
            if ratio > worst or not wit:
                worst, wit = ratio, {"pair": _labels(space, (x, y)), "arc": alpha.labels(space)}
    wit = dict(wit, families=families, nontrivial_families=nontrivial)
    if deformation.epsilon > ledger.epsilon0 * (1 + 1e-12):
        within = worst <= ledger.K_gh
        return CheckResult(
            "gehring_hayman", None, ledger.K_gh, worst, wit, 0.0,
            f"epsilon above epsilon0; measured ratio {'within' if within else 'exceeds'} K",
        )
    return make_result("gehring_hayman", worst, ledger.K_gh, 0.0, wit)


# --- uniformization lemmas ----------------------------------------------------


def lemma_4_1_deficit(space: FiniteMetricSpace, gamma: PathArc, p: int) -> tuple[float, tuple[int, int]]:
    """Worst ``|u-z| - (|p-u| - |p-z|)`` over ``z`` before ``y_gamma`` and ``u`` before ``z``."""
    x, y = gamma.start, gamma.end
    limit = gamma.length - gromov_product(space, x, p, y)
    J = last_index_within(gamma, limit)
    V = list(gamma.vertices[: J + 1])
    Dv = space.dist[np.ix_(V, V)]
    dp = space.dist[p, V]
    deficit = Dv - dp[:, None] + dp[None, :]
    deficit = np.where(np.triu(np.ones_like(deficit, dtype=bool)), deficit, -np.inf)
    k = int(np.argmax(deficit))
    i, j = divmod(k, len(V))
    return float(deficit[i, j]), (V[i], V[j])


def check_lemma_4_1(space, delta, h, samples, rng) -> CheckResult:
    worst, wit = -np.inf, {}
    for x, y, p in samples:
        if x == y:
            continue
        gamma = _pick(h_short_arcs(space, x, y, h, max_count=4), rng)
        val, (u, z) = lemma_4_1_deficit(space, gamma, p)
        if val > worst:
            worst, wit = val, {"arc": gamma.labels(space), "p": space.label(p), "u": space.label(u), "z": space.label(z)}
    if not wit:
        return _inconclusive("lemma_4_1", 8 * delta + 8 * h, "no configuration sampled")
    return make_result("lemma_4_1", worst, 8 * delta + 8 * h, 0.0, wit)


def cone_deficit(field: BusemannField, gamma: PathArc) -> tuple[float, tuple[int, int]]:
    """Worst ``|u-z| - (b(u) - b(z))`` over ``z`` before ``y'`` and ``u`` before ``z``."""
    space = field.space
    x, y = gamma.start, gamma.end
    limit = gamma.length - product_with_ray(space, x, field.omega, y)
    J = last_index_within(gamma, limit)
    V = list(gamma.vertices[: J + 1])
    b = field.values[V]
    deficit = space.dist[np.ix_(V, V)] - b[:, None] + b[None, :]
    deficit = np.where(np.triu(np.ones_like(deficit, dtype=bool)), deficit, -np.inf)
    k = int(np.argmax(deficit))
    i, j = divmod(k, len(V))
    return float(deficit[i, j]), (V[i], V[j])


def _settled_pairs(field: BusemannField, pairs):
    # the tail proxy for (x|omega)_y is only faithful behind the ray tail
    settled = set(field.settled.tolist())
    return [(x, y) for x, y in pairs if x in settled and y in settled]


def check_cone(field: BusemannField, delta, h, pairs, rng) -> CheckResult:
    space = field.space
    pairs = _settled_pairs(field, pairs)
    worst, wit = -np.inf, {}
    for x, y in pairs:
        gamma = _pick(h_short_arcs(space, x, y, h, max_count=4), rng)
        val, (u, z) = cone_deficit(field, gamma)
        if val > worst:
            worst, wit = val, {"arc": gamma.labels(space), "u": space.label(u), "z": space.label(z)}
    if not wit:
        return _inconclusive("cone_lemma", 16 * delta + 10 * h, "no configuration sampled")
    return make_result("cone_lemma", worst, 16 * delta + 10 * h, field.anchor_error, wit)


def comparison_bounds(epsilon: float, delta: float, h: float, distance: float, center_slack: float = 0.0) -> tuple[float, float]:
    """Range ``(lo, hi)`` of ``l_eps(gamma) / (exp(-eps (x|y)_b) min(1/2, eps |x-y|))``.

    Constants follow the proof of the comparison lemma, with the center
    estimate ``|b(y') - (x|y)_b| <= 16 delta + 12 h + center_slack`` and the
    integral ``int_0^{|x-y|/2} e^{-eps t} dt >= (1 - e^{-1/4})/eps``.
    """
    e, s = epsilon, 16 * delta + 12 * h + center_slack
    if e * distance <= 0.5:
        hi = 2 * math.exp(10 * e * delta + 1 + e * s) / e
        lo = math.exp(-e * s - 10 * e * delta - 1) / e
    else:
        hi = 4 * math.exp(e * (16 * delta + 11 * h) + e * s) / e
        lo = 2 * (-math.expm1(-0.25)) * math.exp(-10 * e * delta - e * s) / e
    return lo, hi


def comparison_constant(epsilon, delta, h, center_slack=0.0) -> float:
    """Symmetric constant C with ``1/C <= ratio <= C`` in both distance regimes."""
    out = 0.0
    for dist in (0.0, 1.0 / epsilon):
        lo, hi = comparison_bounds(epsilon, delta, h, dist, center_slack)
        out = max(out, hi, 1.0 / lo)
    return out


def _target(field, epsilon, x, y):
    d = field.space.dist[x, y]
    return math.exp(-epsilon * gromov_product_b(field, x, y)) * min(0.5, epsilon * d)


def check_comparison(deformation: ConformalDeformation, delta, h, pairs) -> CheckResult:
    field, space, eps = deformation.field, deformation.space, deformation.epsilon
    worst, wit, corollary = 0.0, {}, 0.0
    for x, y in pairs:
        target = _target(field, eps, x, y)
        for gamma in _quasi_geodesics(space, x, y, h, 4):
            ratio = float(deformation.cumulative(gamma)[-1]) / target
            c = max(ratio, 1.0 / ratio)
            if c > worst or not wit:
                worst, wit = c, {"pair": _labels(space, (x, y)), "ratio": ratio}
        r = deformation.dist[x, y] / target
        corollary = max(corollary, r, 1.0 / r)
    if not wit:
        return _inconclusive("comparison", 0.0, "no pairs")
    bound = comparison_constant(eps, delta, h)
    slack = comparison_constant(eps, delta, h, field.anchor_error) - bound
    return make_result("comparison", worst, bound, slack, dict(wit, corollary_constant=corollary))


def check_comparison_center(field: BusemannField, h, delta, pairs) -> CheckResult:
    space = field.space
    pairs = _settled_pairs(field, pairs)
    worst, snap, wit = 0.0, 0.0, {}
    for x, y in pairs:
        for gamma in _quasi_geodesics(space, x, y, h, 4):
            t = gamma.length - min(product_with_ray(space, x, field.omega, y), gamma.length)
            k = arclength_index(gamma, max(t, 0.0))
            snap = max(snap, abs(gamma.cumulative[k] - t))
            gap = abs(field.values[gamma.vertices[k]] - gromov_product_b(field, x, y))
            if gap > worst or not wit:
                worst, wit = gap, {"pair": _labels(space, (x, y)), "y_prime": space.label(gamma.vertices[k])}
    if not wit:
        return _inconclusive("comparison_center", 16 * delta + 12 * h, "no pairs")
    return make_result("comparison_center", worst, 16 * delta + 12 * h, snap + field.anchor_error, wit)


# --- uniformity and the boundary ----------------------------------------------


def boundary_lower_bounds(deformation: ConformalDeformation, proxy_sets, delta) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex lower bound on the proxy boundary distance and a truncation flag.

    Far from every proxy (graph distance >= 1/eps) this is
    ``rho(x) / (eps * exp(10 eps delta + 1))``; closer in, only the first
    ``d`` units of any escaping curve are available and the bound is
    ``rho(x) exp(-10 eps delta) (1 - exp(-eps d)) / eps``.
    """
    eps = deformation.epsilon
    verts = sorted({v for s in proxy_sets for v in s})
    dmin = deformation.space.dist[:, verts].min(axis=1)
    reach = -np.expm1(-eps * dmin)
    truncated = reach < math.exp(-1.0)
    scale = deformation.rho * math.exp(-10 * eps * delta) / eps
    return scale * np.minimum(math.exp(-1.0), reach), truncated


def check_boundary_lower_bound(deformation: ConformalDeformation, proxy_sets, delta) -> CheckResult:
    space = deformation.space
    bpd = proxy_distances(deformation, proxy_sets)
    lower, truncated = boundary_lower_bounds(deformation, proxy_sets, delta)
    with np.errstate(divide="ignore", invalid="ignore"):
        score = np.where(lower <= 0, 0.0, lower / bpd)
    k = int(np.argmax(score))
    wit = {"vertex": space.label(k), "truncated_vertices": int(truncated.sum()), "vertices": space.n}
    note = "bound relaxed to finite depth near proxies" if truncated.any() else ""
    return make_result("boundary_lower_bound", float(score[k]), 1.0, 0.0, wit, note=note)


def check_uniformity(deformation: ConformalDeformation, ledger: ConstantsLedger, proxy_sets, delta, h, pairs) -> CheckResult:
    space, eps = deformation.space, deformation.epsilon
    A = ledger.A_uniform
    bpd = proxy_distances(deformation, proxy_sets)
    _, truncated = boundary_lower_bounds(deformation, proxy_sets, delta)
    rho = deformation.rho
    intrinsic = math.exp(eps * (16 * delta + 11 * h)) / eps
    qc_worst, cone_worst, fallbacks, failed = 0.0, 0.0, 0, None
    wit = {}
    for x, y in pairs:
        de = deformation.dist[x, y]
        for gamma in _quasi_geodesics(space, x, y, h, 4):
            cum = deformation.cumulative(gamma)
            qc = cum[-1] / de
            if qc > qc_worst:
                qc_worst = qc
                wit["quasiconvexity_pair"] = _labels(space, (x, y))
            sides = np.minimum(cum, cum[-1] - cum)
            verts = np.asarray(gamma.vertices)
            for side, z in zip(sides, verts):
                if side <= 0:
                    continue
                ratio = side / bpd[z] if bpd[z] > 0 else np.inf
                if ratio <= A:
                    if ratio > cone_worst:
                        cone_worst = ratio
                        wit["cone_vertex"] = space.label(int(z))
                    continue
                if truncated[z] and side <= intrinsic * rho[z] * (1 + FLOAT_SLACK):
                    fallbacks += 1
                    continue
                if failed is None or ratio > failed:
                    failed = ratio
                    wit["violation_vertex"] = space.label(int(z))
    wit.update(quasiconvexity=qc_worst, double_cone=cone_worst, truncation_fallbacks=fallbacks)
    empirical = max(qc_worst, cone_worst, failed or 0.0)
    note = f"{fallbacks} cone instances near truncated proxies checked against the intrinsic bound" if fallbacks else ""
    return make_result("uniformity", empirical, A, 0.0, wit, note=note)


def check_unboundedness(deformation: ConformalDeformation, ledger: ConstantsLedger, o: int, delta, h) -> CheckResult:
    space, eps = deformation.space, deformation.epsilon
    ray = deformation.field.omega
    tail = [ray.anchors[i] for i in tail_positions(len(ray.anchors))]
    factor = math.exp(-eps * (delta + h + 1)) / ledger.K_gh
    scores = []
    for u in tail:
        scores.append((factor * space.dist[o, u] / deformation.dist[o, u], u))
    seq = [deformation.dist[o, u] for u in ray.anchors]
    for k in range(len(seq) - 1):
        scores.append((seq[k] / seq[k + 1], ray.anchors[k + 1]))
    val, u = max(scores)
    return make_result(
        "unboundedness", val, 1.0, 0.0,
        {"anchor": space.label(u), "d_eps_last": float(seq[-1]), "quantity": "max(lower_bound/d_eps, d_eps(n)/d_eps(n+1))"},
    )


def cauchy_profile(deformation: ConformalDeformation, ray: BoundaryRay) -> list[float]:
    """``max_{m > n} d_eps(u_n, u_m)`` for ``n`` over the second half of the ray."""
    a = list(ray.anchors)
    D = deformation.dist
    return [float(D[a[n], a[n + 1 :]].max()) for n in range(len(a) // 2, len(a) - 1)]


def ray_separation(deformation: ConformalDeformation, ray1: BoundaryRay, ray2: BoundaryRay) -> float:
    m = min(len(ray1.anchors), len(ray2.anchors))
    return float(min(deformation.dist[ray1.anchors[i], ray2.anchors[i]] for i in tail_positions(m)))


def check_boundary_map(deformation: ConformalDeformation, ledger: ConstantsLedger, rays: dict[str, BoundaryRay], delta, h) -> CheckResult:
    field, eps = deformation.field, deformation.epsilon
    others = [r for name, r in sorted(rays.items()) if name != field.omega.name]
    if not others:
        raise ConfigError("boundary map check needs at least one ray besides omega")
    scores, wit = [], {}
    for ray in others:
        prof = cauchy_profile(deformation, ray)
        wit[f"cauchy_{ray.name}"] = prof[-1] if prof else 0.0
        for a, b in zip(prof, prof[1:]):
            if a > 0:
                scores.append((b / a, f"cauchy:{ray.name}"))
    space = deformation.space
    for i, r1 in enumerate(others):
        for r2 in others[i + 1 :]:
            m = min(len(r1.anchors), len(r2.anchors))
            for k in tail_positions(m):
                u, v = r1.anchors[k], r2.anchors[k]
                d = space.dist[u, v]
                lo, _ = comparison_bounds(eps, delta, h, d, field.anchor_error)
                lb = lo / ledger.K_gh * _target(field, eps, u, v)
                scores.append((lb / deformation.dist[u, v], f"separation:{r1.name}/{r2.name}"))
            wit[f"separation_{r1.name}_{r2.name}"] = ray_separation(deformation, r1, r2)
    if not scores:
        return _inconclusive("boundary_map", 1.0, "rays too short for a tail profile", wit)
    val, where = max(scores)
    wit["worst"] = where
    return make_result("boundary_map", val, 1.0, 0.0, wit)


# --- suite --------------------------------------------------------------------


@dataclass
class SuiteConfig:
    omega: str
    h: float = 1.0 / 14.0
    epsilon: float | None = None
    seed: int = 0
    pair_budget: int = 2000
    arc_budget: int = 200
    delta: float | None = None
    delta_samples: int = 200_000
    proxy_sets: list[list[int]] | None = None
    checks: tuple[str, ...] | None = None


@dataclass
class VerificationReport:
    space: dict
    delta: float
    delta_method: str
    kappa: float
    h: float
    epsilon: float
    ledger: ConstantsLedger
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.holds is False]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "delta": self.delta,
            "delta_method": self.delta_method,
            "kappa": self.kappa,
            "h": self.h,
            "epsilon": self.epsilon,
            "ledger": self.ledger.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
        }


def run_suite(space: FiniteMetricSpace, rays: dict[str, BoundaryRay], basepoint: int, config: SuiteConfig) -> VerificationReport:
    """Run every enabled check in a fixed order; deterministic given the seed."""
    enabled = tuple(config.checks) if config.checks else CHECK_ORDER
    unknown = set(enabled) - set(CHECK_ORDER)
    if unknown:
        raise ConfigError(f"unknown checks: {', '.join(sorted(unknown))}")
    if "gehring_hayman" in enabled and not config.h < H_MAX:
        raise ConfigError(f"h={config.h} must be below 1/13 for the Gehring-Hayman check")
    if len(rays) < 2:
        raise ConfigError("at least two rays are required")
    if config.omega not in rays:
        raise ConfigError(f"ray {config.omega!r} not found; available: {', '.join(sorted(rays))}")
    if config.h < 0:
        raise ConfigError("h must be non-negative")

    if config.delta is not None:
        delta, method = float(config.delta), "given"
    else:
        est = delta_four_point(space, "auto", config.delta_samples, config.seed)
        delta, method = est.delta, est.method
    kappa = rips_kappa(delta, config.h)
    try:
        ledger = constants_ledger(delta, kappa, config.h, config.epsilon)
        field = busemann_field(space, rays[config.omega], basepoint)
    except (ConstantsError, RayError) as exc:
        raise ConfigError(str(exc)) from exc
    deformation = ConformalDeformation(field, ledger.epsilon)
    if config.proxy_sets is not None:
        proxies = config.proxy_sets
    else:
        proxies = [[r.anchors[-1]] for name, r in sorted(rays.items()) if name != config.omega]
    if not proxies or not all(proxies):
        raise ConfigError("boundary proxy sets must be non-empty")

    n, h = space.n, config.h
    base = np.random.default_rng(config.seed)
    pairs = sample_pairs(n, config.pair_budget, base)
    small = pairs if len(pairs) <= config.arc_budget else [pairs[i] for i in sorted(base.choice(len(pairs), config.arc_budget, replace=False))]

    def rng(k):
        return np.random.default_rng([config.seed, k])

    table: dict[str, Callable[[], CheckResult]] = {
        "rough_lipschitz": lambda: check_rough_lipschitz(field, delta),
        "harnack": lambda: check_harnack(field, ledger.epsilon, delta),
        "eq_3_6": lambda: check_eq_3_6_pairs(field, delta, pairs),
        "rips_slimness": lambda: check_rips(space, delta, h, sample_tuples(n, 3, config.arc_budget, rng(3)), rng(103)),
        "tripod": lambda: check_tripod(space, delta, h, sample_tuples(n, 3, config.arc_budget, rng(4)), rng(104)),
        "lemma_3_1": lambda: check_lemma_3_1(space, deformation, ledger, small, rng(5)),
        "lemma_3_4_containment": lambda: check_lemma_3_4(space, ledger, h, small, rng(6)),
        "gehring_hayman": lambda: check_gehring_hayman(space, deformation, ledger, h, pairs),
        "lemma_4_1": lambda: check_lemma_4_1(space, delta, h, sample_tuples(n, 3, config.arc_budget, rng(8)), rng(108)),
        "cone_lemma": lambda: check_cone(field, delta, h, small, rng(9)),
        "comparison": lambda: check_comparison(deformation, delta, h, pairs),
        "comparison_center": lambda: check_comparison_center(field, h, delta, pairs),
        "uniformity": lambda: check_uniformity(deformation, ledger, proxies, delta, h, pairs),
        "boundary_lower_bound": lambda: check_boundary_lower_bound(deformation, proxies, delta),
        "unboundedness": lambda: check_unboundedness(deformation, ledger, basepoint, delta, h),
        "boundary_map": lambda: check_boundary_map(deformation, ledger, rays, delta, h),
    }
    results = [table[name]() for name in CHECK_ORDER if name in enabled]
    summary = {
        "vertices": n,
        "edges": len(space.edges),
        "diameter": space.diameter,
        "max_edge_length": space.max_edge_length,
        "basepoint": space.label(basepoint),
        "omega": config.omega,
        "rays": sorted(rays),
        "anchor_error": field.anchor_error,
        "pairs_sampled": len(pairs),
        "seed": config.seed,
    }
    return VerificationReport(summary, delta, method, kappa, h, ledger.epsilon, ledger, results)
