"""Acceptance criteria, one test each, with a PASS/FAIL line printed per criterion."""

import time

import numpy as np
import pytest

from hyperuni.busemann import busemann_field
from hyperuni.cli import main
from hyperuni.generators import bary_tree, generate, GeneratorSpec, grid_graph, jittered, path_graph, tessellation_disk
from hyperuni.hyperbolicity import _exact_delta, delta_four_point
from hyperuni.space import build_space, h_short_arcs, length_tol
from hyperuni.uniformize import ConformalDeformation, constants_ledger
from hyperuni.verify import SuiteConfig, run_suite
from oracles import exp_edge_integral, four_point_delta, tree_busemann_left_spine

SUITE_5 = (
    "harnack",
    "cone_lemma",
    "lemma_4_1",
    "gehring_hayman",
    "comparison",
    "uniformity",
    "boundary_lower_bound",
    "boundary_map",
)


@pytest.fixture
def report_line(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] {label}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return emit


def _path_oracle(xs, eps):
    lo = np.minimum(xs[:, None], xs[None, :])
    gap = np.abs(xs[:, None] - xs[None, :])
    return np.exp(eps * lo) * np.expm1(eps * gap) / eps


def test_criterion_1_path_oracle(report_line):
    start = time.perf_counter()
    g = path_graph(200)
    f = busemann_field(g.space, g.rays["plus"], g.basepoint)
    xs = np.array([float(v) for v in g.space.vertices])
    eps0 = constants_ledger(0.0, 0.0, 1 / 14).epsilon0
    worst = 0.0
    for eps in (0.05, eps0):
        d = ConformalDeformation(f, eps).dist
        want = _path_oracle(xs, eps)
        off = ~np.eye(len(xs), dtype=bool)
        worst = max(worst, float(np.max(np.abs(d[off] - want[off]) / want[off])))
        assert np.all(np.diag(d) == 0)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 10
    report_line("criterion 1 path oracle", ok, f"max rel err {worst:.2e}, {elapsed:.2f} s")
    assert ok


def _tree_lca_depth(depth, code):
    # labels are binary digit strings: code = int(label, 2), depth = len(label)
    d1, d2 = depth[:, None], depth[None, :]
    m = np.minimum(d1, d2)
    c1 = code[:, None] >> (d1 - m)
    c2 = code[None, :] >> (d2 - m)
    k = np.zeros_like(m)
    diff = c1 != c2
    while diff.any():
        k += diff
        c1 = np.where(diff, c1 >> 1, c1)
        c2 = np.where(diff, c2 >> 1, c2)
        diff = c1 != c2
    return m - k, c1


def test_criterion_2_tree_oracle(report_line):
    g = bary_tree(2, 10)
    s = g.space
    f = busemann_field(s, g.rays["spineL"], g.basepoint)
    want_b = np.array([tree_busemann_left_spine(v) for v in s.vertices], dtype=float)
    b_err = float(np.abs(f.values - want_b).max())

    eps = 0.05
    labels = ["" if v == "root" else v for v in s.vertices]
    depth = np.array([len(v) for v in labels])
    code = np.array([int(v, 2) if v else 0 for v in labels])
    # deformed length from the root, summed edge by edge with the quadrature oracle
    from_root = {"": 0.0}
    for v in sorted(labels, key=len)[1:]:
        parent = v[:-1]
        from_root[v] = from_root[parent] + exp_edge_integral(
            tree_busemann_left_spine(parent or "root"), tree_busemann_left_spine(v), eps
        )
    P = np.array([from_root[v] for v in labels])
    lca_depth, lca_code = _tree_lca_depth(depth, code)
    key = {(len(v), int(v, 2) if v else 0): from_root[v] for v in labels}
    P_lca = np.vectorize(lambda d, c: key[(int(d), int(c))])(lca_depth, lca_code)
    want = P[:, None] + P[None, :] - 2 * P_lca
    d = ConformalDeformation(f, eps).dist
    off = ~np.eye(s.n, dtype=bool)
    rel = float(np.max(np.abs(d[off] - want[off]) / want[off]))
    ok = b_err == 0.0 and rel <= 1e-12
    report_line("criterion 2 tree oracle", ok, f"busemann err {b_err}, max rel d_eps err {rel:.2e}")
    assert ok


def test_criterion_3_delta_exactness(report_line):
    trees = [bary_tree(2, 4).space, bary_tree(3, 3).space, path_graph(12).space]
    tree_ok = all(delta_four_point(t, "exact").delta == 0.0 == four_point_delta(t.dist) for t in trees)
    kernel_ok = _exact_delta(bary_tree(2, 6).space.dist)[0] == 0.0
    square = build_space([("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)])
    sq = delta_four_point(square, "exact").delta
    start = time.perf_counter()
    grid = grid_graph(10, 20).space
    est = delta_four_point(grid, "exact")
    elapsed = time.perf_counter() - start
    ok = tree_ok and kernel_ok and sq == 1.0 == four_point_delta(square.dist) and est.method == "exact" and elapsed < 60
    report_line("criterion 3 delta exactness", ok, f"trees 0, 4-cycle {sq}, exact on {grid.n} vertices {elapsed:.1f} s")
    assert ok


def test_criterion_4_constants_ledger(report_line):
    led = constants_ledger(0.0, 0.0, 0.0, epsilon=1.0)
    got = (led.lam, led.M, led.R, led.A, led.L, led.epsilon0, led.K_gh)
    ok = got == (1.0, 6.0, 1.0, 4.0, 61.0, 1.0 / 1525, 18.0)
    report_line("criterion 4 constants ledger", ok, f"lambda,M,R,A,L,eps0,K = {got}")
    assert ok


def _run(g, omega, **kw):
    return run_suite(g.space, g.rays, g.basepoint, SuiteConfig(omega=omega, h=1 / 14, **kw))


def test_criterion_5_oracle_families(report_line):
    start = time.perf_counter()
    details, ok = [], True
    for g, omega in ((path_graph(100), "plus"), (bary_tree(2, 8), "spineL")):
        rep = _run(g, omega)
        eps0 = rep.ledger.epsilon0
        ok &= rep.epsilon == eps0 and not rep.failures
        ok &= all(rep.check(name).holds is True for name in SUITE_5)
        details.append(f"{g.meta['kind']}: {len(rep.failures)} failures")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    report_line("criterion 5 inequality suite", ok, f"{'; '.join(details)}; {elapsed:.1f} s")
    assert ok


def test_criterion_6_tessellation_stress(report_line):
    start = time.perf_counter()
    g = tessellation_disk(7, 3, 4)
    rep = _run(g, "spoke0")
    gh, uni = rep.check("gehring_hayman"), rep.check("uniformity")
    elapsed = time.perf_counter() - start
    ok = (
        not rep.failures
        and gh.empirical_worst <= rep.ledger.K_gh
        and uni.empirical_worst <= rep.ledger.A_uniform
        and elapsed < 600
    )
    report_line(
        "criterion 6 tessellation stress",
        ok,
        f"{g.space.n} vertices, delta {rep.delta} ({rep.delta_method}), GH {gh.empirical_worst:.3f} <= {rep.ledger.K_gh:.3f}, "
        f"uniformity {uni.empirical_worst:.3f} <= {rep.ledger.A_uniform:.3f}, {elapsed:.1f} s",
    )
    assert ok


@pytest.fixture(scope="module")
def jittered_path():
    return jittered(path_graph(50), 4, 0.02, seed=0)


def test_criterion_7a_jittered_checks_pass(report_line, jittered_path):
    rep = _run(jittered_path, "plus")
    ok = not rep.failures and all(rep.check(name).holds is True for name in SUITE_5)
    slack = max(rep.check(name).slack_used for name in SUITE_5)
    report_line("criterion 7a jittered regime checks", ok, f"{len(rep.failures)} failures, max slack {slack:.2e}")
    assert ok


def test_criterion_7b_jittered_nontrivial_family(report_line, jittered_path):
    # every pair is scanned for an h-short family (length <= 2|x-y|) containing a non-shortest arc
    s = jittered_path.space
    h = 1 / 14
    found = None
    for x in range(s.n):
        for y in range(x + 1, s.n):
            d = s.dist[x, y]
            arcs = h_short_arcs(s, x, y, h, length_cap=2 * d + length_tol(d), max_count=2)
            if any(a.length > d + length_tol(d) for a in arcs):
                found = (s.label(x), s.label(y))
                break
        if found:
            break
    ok = found is not None
    detail = f"pair {found}" if ok else f"no pair among {s.n * (s.n - 1) // 2} has a non-shortest h-short arc (the space is a tree)"
    report_line("criterion 7b jittered non-trivial arc family", ok, detail)
    assert ok


def test_criterion_8_determinism(report_line, tmp_path):
    space = tmp_path / "space.json"
    assert main(["generate", "--kind", "tessellation", "--layers", "2", "-o", str(space)]) == 0
    outs = []
    for k in range(2):
        out = tmp_path / f"report{k}.json"
        main(["verify", "-i", str(space), "--ray", "spoke0", "--seed", "3", "-o", str(out)])
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1]
    report_line("criterion 8 determinism", ok, f"{len(outs[0])} bytes per report")
    assert ok


def test_criterion_9_epsilon_limit(report_line):
    details, ok = [], True
    for g, omega in ((path_graph(100), "plus"), (bary_tree(2, 8), "spineL")):
        f = busemann_field(g.space, g.rays[omega], g.basepoint)
        gap = float(np.abs(ConformalDeformation(f, 1e-8).dist - g.space.dist).max())
        ok &= gap <= 1e-5 * g.space.diameter
        details.append(f"{g.meta['kind']} {gap:.2e}")
    report_line("criterion 9 epsilon limit", ok, ", ".join(details))
    assert ok


def test_generator_spec_for_criterion_7_matches_direct_construction(jittered_path):
    spec = GeneratorSpec("jittered", base="path", n=50, subdivide=4, jitter=0.02, seed=0)
    assert (generate(spec).space.dist == jittered_path.space.dist).all()
