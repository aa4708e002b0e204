import math

import numpy as np
import pytest

from hyperuni.busemann import BoundaryRay, busemann_field
from hyperuni.generators import grid_graph, jittered, path_graph, tessellation_disk
from hyperuni.io import dumps
from hyperuni.space import build_space, shortest_arc
from hyperuni.uniformize import ConformalDeformation, constants_ledger
from hyperuni.verify import (
    CHECK_ORDER,
    CheckResult,
    ConfigError,
    SuiteConfig,
    check_boundary_lower_bound,
    check_boundary_map,
    check_comparison,
    check_gehring_hayman,
    check_lemma_3_1,
    comparison_bounds,
    comparison_constant,
    cone_deficit,
    lemma_4_1_deficit,
    make_result,
    run_suite,
    sample_pairs,
)
from oracles import exp_edge_integral, simple_paths


def _suite(g, omega, **kw):
    return run_suite(g.space, g.rays, g.basepoint, SuiteConfig(omega=omega, **kw))


@pytest.fixture(scope="module")
def path_report(path100):
    return _suite(path100, "plus")


@pytest.fixture(scope="module")
def tree_report(tree28):
    return _suite(tree28, "spineL")


def test_every_check_present_once(path_report):
    assert [c.name for c in path_report.checks] == list(CHECK_ORDER)


@pytest.mark.parametrize("report", ["path_report", "tree_report"])
def test_oracle_families_pass_with_zero_snap_slack(report, request):
    rep = request.getfixturevalue(report)
    assert not rep.failures
    for c in rep.checks:
        assert c.holds in (True, None), c.name
        # only the float tolerance is used: no snapping or anchor slack
        assert c.slack_used <= 1e-9 * max(1.0, abs(c.theory_bound)) + 1e-15, c.name


def test_tree_lemma_3_1_is_inconclusive(tree_report):
    c = tree_report.check("lemma_3_1")
    assert c.holds is None and c.to_dict()["holds"] == "inconclusive"


def test_slack_accounting_is_auditable(path_report, tree_report):
    for rep in (path_report, tree_report):
        for c in rep.checks:
            if c.holds is not None:
                assert c.holds == (c.empirical_worst <= c.theory_bound + c.slack_used)


def test_make_result():
    r = make_result("x", 1.0, 1.0, 0.0, {})
    assert isinstance(r, CheckResult) and r.holds
    assert not make_result("x", 1.1, 1.0, 0.05, {}).holds
    assert make_result("x", 5.0, 1.0, 0.0, {}, inconclusive=True).holds is None


def test_sample_pairs():
    rng = np.random.default_rng(0)
    assert len(sample_pairs(10, 5, rng)) == 45
    pairs = sample_pairs(100, 300, rng)
    assert len(pairs) == len(set(pairs)) and all(x != y for x, y in pairs)


def test_suite_is_deterministic(tree28):
    a = dumps(_suite(tree28, "spineR", seed=4).to_dict())
    b = dumps(_suite(tree28, "spineR", seed=4).to_dict())
    assert a == b


def test_config_errors(tree28):
    with pytest.raises(ConfigError, match="1/13"):
        _suite(tree28, "spineL", h=0.1)
    with pytest.raises(ConfigError, match="not found"):
        _suite(tree28, "nope")
    with pytest.raises(ConfigError, match="unknown checks"):
        _suite(tree28, "spineL", checks=("harnack", "bogus"))
    with pytest.raises(ConfigError, match="two rays"):
        run_suite(tree28.space, {"spineL": tree28.rays["spineL"]}, tree28.basepoint, SuiteConfig("spineL"))
    g = path_graph(3)
    with pytest.raises(ConfigError, match="at least 8"):
        _suite(g, "plus")


def test_check_subset_runs_in_canonical_order(tree28):
    rep = _suite(tree28, "spineL", checks=("cone_lemma", "harnack"))
    assert [c.name for c in rep.checks] == ["harnack", "cone_lemma"]


def test_large_h_rejected_even_without_gehring_hayman(tree28):
    # the constant chain itself needs h < 1/(1 + 2M) <= 1/13
    with pytest.raises(ConfigError, match="1/13"):
        _suite(tree28, "spineL", h=0.1, checks=("harnack",))


def test_comparison_example_on_path(path100):
    s = path100.space
    f = busemann_field(s, path100.rays["plus"], path100.basepoint)
    d = ConformalDeformation(f, 1.0)
    i = s.index
    res = check_comparison(d, 0.0, 1 / 14, [(i("0"), i("1"))])
    assert res.witness["ratio"] == pytest.approx((math.e - 1) / (math.e / 2), rel=1e-12)
    assert res.holds and res.theory_bound == comparison_constant(1.0, 0.0, 1 / 14)


def test_comparison_bounds_regimes():
    lo, hi = comparison_bounds(1.0, 0.0, 0.0, 0.25)
    assert (lo, hi) == pytest.approx((math.exp(-1), 2 * math.e))
    lo, hi = comparison_bounds(1.0, 0.0, 0.0, 3.0)
    assert (lo, hi) == pytest.approx((2 * (1 - math.exp(-0.25)), 4.0))


def test_lemma_4_1_tree_equality(tree28):
    s = tree28.space
    i = s.index
    arc = shortest_arc(s, i("00011"), i("01100"))
    val, (u, z) = lemma_4_1_deficit(s, arc, i("0001111"))
    assert val == 0.0


def test_cone_deficit_zero_on_ascending_path(path100):
    s = path100.space
    f = busemann_field(s, path100.rays["plus"], path100.basepoint)
    arc = shortest_arc(s, s.index("-40"), s.index("30"))
    val, _ = cone_deficit(f, arc)
    assert val == 0.0


def _square_with_tail(tail=12):
    edges = [("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1), ("a", "t1", 1)]
    edges += [(f"t{k}", f"t{k + 1}", 1) for k in range(1, tail)]
    s = build_space(edges)
    ray = BoundaryRay("tail", tuple(s.index(f"t{k}") for k in range(1, tail + 1)))
    return s, ray


def test_gehring_hayman_square_against_enumeration():
    s, ray = _square_with_tail()
    o = s.index("c")
    f = busemann_field(s, ray, o)
    eps = 0.2
    d = ConformalDeformation(f, eps)
    # large epsilon forces h = 0 in the constant chain; only K and epsilon0 are used here
    led = constants_ledger(1.0, 3.0, 0.0, eps)
    pairs = [(x, y) for x in range(s.n) for y in range(x + 1, s.n)]
    res = check_gehring_hayman(s, d, led, 1 / 14, pairs)
    adj = {v: [(w, s.edge_length(v, w)) for w in s.neighbors[v]] for v in range(s.n)}
    b = f.values

    def deformed(path):
        return sum(exp_edge_integral(b[u], b[v], eps) for u, v in zip(path, path[1:]))

    worst = 0.0
    for x, y in pairs:
        every = simple_paths(adj, x, y, s.n)
        de = min(deformed(p) for _, p in every)
        short = [p for length, p in every if length <= s.dist[x, y] + 1 / 14 + 1e-12]
        worst = max(worst, max(deformed(p) for p in short) / de)
    assert res.empirical_worst == pytest.approx(worst, rel=1e-12)
    assert res.holds is None  # epsilon 0.2 is above epsilon0 for delta = 1
    assert worst <= 18 * led.lam**2


def test_gehring_hayman_monotone_probe_on_path(path100):
    s = path100.space
    f = busemann_field(s, path100.rays["plus"], path100.basepoint)
    led = constants_ledger(0.0, 0.0, 1 / 14)
    pairs = sample_pairs(s.n, 300, np.random.default_rng(1))
    for eps in (led.epsilon0, 0.01, 0.1):
        res = check_gehring_hayman(s, ConformalDeformation(f, eps), led, 1 / 14, pairs)
        assert res.empirical_worst == pytest.approx(1.0, rel=1e-12)


def test_lemma_3_1_qualifying_instance():
    g = tessellation_disk(7, 3, 1)
    s = g.space
    f = busemann_field(s, g.rays["spoke0"], g.basepoint, check=False)
    led = constants_ledger(0.0, 0.0, 0.0, 1e-3)
    pairs = [(x, y) for x in range(s.n) for y in range(x + 1, s.n) if s.has_edge(x, y)]
    res = check_lemma_3_1(s, ConformalDeformation(f, 1e-3), led, pairs, np.random.default_rng(0))
    assert res.holds is True and res.witness["instances"] > 0


def test_boundary_lower_bound_proxy_vertex_not_failed(path100):
    s = path100.space
    f = busemann_field(s, path100.rays["plus"], path100.basepoint)
    d = ConformalDeformation(f, 0.05)
    res = check_boundary_lower_bound(d, [[s.index("-100")]], 0.0)
    assert res.holds and res.witness["truncated_vertices"] > 0


def test_boundary_map_requires_another_ray(path100):
    s = path100.space
    f = busemann_field(s, path100.rays["plus"], path100.basepoint)
    d = ConformalDeformation(f, 0.01)
    led = constants_ledger(0.0, 0.0, 1 / 14, 0.01)
    with pytest.raises(ConfigError):
        check_boundary_map(d, led, {"plus": path100.rays["plus"]}, 0.0, 1 / 14)
    res = check_boundary_map(d, led, path100.rays, 0.0, 1 / 14)
    assert res.holds
    # the tail of the minus ray is d_eps-Cauchy: e^{-eps n} - e^{-eps m} shrinks
    assert res.witness["cauchy_minus"] == pytest.approx(
        (math.exp(-0.01 * 99) - math.exp(-0.01 * 100)) / 0.01, rel=1e-9
    )


def test_jittered_grid_has_nontrivial_short_arc_families():
    g = jittered(grid_graph(6, 6), 2, 0.1, seed=0)
    rep = _suite(g, "row", checks=("gehring_hayman",))
    c = rep.check("gehring_hayman")
    assert c.witness["nontrivial_families"] > 0
    assert c.holds is True
