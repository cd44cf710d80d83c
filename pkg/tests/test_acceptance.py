"""The nine acceptance criteria, one test each, in order.

Run with `pytest tests/test_acceptance.py -v` to get one pass/fail line
per criterion.  Each test also prints a short summary (visible with -s).
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oddcycles.blowups import BlowupSpec, build_blowup, expected_good_count
from oddcycles.counting import Pattern, count_cycles, count_paths, for_each_copy
from oddcycles.graphs import Graph, validate_embedding
from oddcycles.measures import (
    EdgeMeasure,
    check_rooted_path_bound,
    check_vertex_bound,
    kkt_residual,
    objective,
    optimize,
    sample_beta_cycles,
    sample_objectives,
)
from oddcycles.pipeline import reduce
from oddcycles.tumor import (
    good_census,
    is_benign,
    is_stage1,
    is_stage2,
    separate,
    stage1,
    stage2,
    stage3,
)


# ---------------------------------------------------------------------------
# shared expensive artifacts
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def optima():
    """Optimizer runs for criteria 1-4: {m: (report, elapsed_seconds)}."""
    out = {}
    for m in (2, 3, 4):
        t0 = time.monotonic()
        out[m] = (optimize(m, clique_size=m + 3, starts=64, seed=0),
                  time.monotonic() - t0)
    return out


@pytest.fixture(scope="module")
def optimum_m5():
    t0 = time.monotonic()
    rep = optimize(5, clique_size=8, starts=32, seed=0)
    return rep, time.monotonic() - t0


@pytest.fixture(scope="session")
def corpus_runs(corpus500):
    """All three cleaning stages in test mode on every corpus instance.
    Test mode recounts good cycles around every rewrite and deletion, so
    simply completing without an invariant violation certifies criterion 6's
    per-step identities."""
    runs = []
    for tg, m, seed in corpus500:
        t1, a1 = stage1(tg, m, "test")
        t2, a2 = stage2(t1, m, "test")
        t3, a3 = stage3(t2, m, "test")
        runs.append((tg, m, seed, (t1, t2, t3), (a1, a2, a3)))
    return runs


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_criterion_1_optimizer_reproduces_known_values(optima):
    targets = {2: (2.0, 1e-6), 3: (2 / 9, 1e-4), 4: (2 / 64, 1e-4)}
    for m, (rep, elapsed) in optima.items():
        target, tol = targets[m]
        assert abs(rep.value - target) < tol, (m, rep.value)
        assert elapsed < 60, (m, elapsed)
        support = rep.measure.support(floor=1e-6)
        if m == 2:
            assert len(support) == 1
        else:
            # support is a single m-cycle with uniform mass
            assert len(support) == m
            deg = {}
            for u, v in support:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            assert len(deg) == m and all(d == 2 for d in deg.values())
            assert all(abs(rep.measure.mass[e] - 1 / m) < 1e-4 for e in support)
    print("CRITERION 1: PASS — optimizer hits 2.0, 2/9, 1/32 on uniform "
          "cycle supports within time budget")


def test_criterion_2_m5_envelope(optimum_m5):
    rep, elapsed = optimum_m5
    t0 = time.monotonic()
    vals = sample_objectives(5, 8, 10_000, seed=1)
    elapsed += time.monotonic() - t0
    upper = 2.6947 / 5 ** 4 + 1e-9
    assert float(vals.max()) <= upper
    assert rep.value <= upper
    assert rep.value >= 2 / 5 ** 4 - 1e-12
    assert elapsed < 120, elapsed
    print(f"CRITERION 2: PASS — m=5 best {rep.value:.7f} in "
          f"[0.0032, 0.00431152]; 10^4 samples max {vals.max():.7f}")


def test_criterion_3_kkt_certificates(optima):
    for m, (rep, _) in optima.items():
        assert rep.kkt.max_support_edge_residual < 1e-6, m
        assert rep.kkt.max_vertex_residual < 1e-6, m
    tri = EdgeMeasure(6, {(0, 1): 1 / 3, (0, 2): 1 / 3, (1, 2): 1 / 3})
    kkt = kkt_residual(tri, 3)
    assert math.isclose(kkt.lam, 2 / 3, abs_tol=1e-15)
    assert kkt.max_support_edge_residual < 1e-12
    assert kkt.max_vertex_residual < 1e-12
    print("CRITERION 3: PASS — KKT residuals < 1e-6 at optima; "
          "uniform triangle stationary to 1e-12 with lambda = 2/3")


def test_criterion_4_inequality_suites(optima, optimum_m5):
    rng = np.random.default_rng(42)
    k = 6
    E = k * (k - 1) // 2
    checked = 0
    for i in range(10_000):
        mu = EdgeMeasure.from_vector(k, rng.dirichlet(np.ones(E)))
        m = 3 + i % 3
        x = int(rng.integers(k))
        lhs, rhs, ok = check_rooted_path_bound(mu, m, x)
        assert ok, (i, m, x, lhs, rhs)
        checked += 1
    for m in (3, 4, 5):
        betas = sample_beta_cycles(m, 6, 10_000, seed=m)
        assert float(betas.max()) <= 1 / m ** m + 1e-12, m
    for rep in [r for r, _ in optima.values()] + [optimum_m5[0]]:
        if rep.m == 2:
            continue  # the bound's (m-1) exponent needs m >= 3
        for x in {v for e in rep.measure.support() for v in e}:
            val, ok = check_vertex_bound(rep.measure, rep.m, x)
            assert ok, (rep.m, x, val)
    print(f"CRITERION 4: PASS — rooted-path bound on {checked} random "
          "measures, beta(C_m) <= 1/m^m on 3x10^4 samples, vertex bound "
          "at all optima")


def test_criterion_5_construction_census():
    # closed form 2m * t^(m-1) * (t-1) for m >= 3
    for m in (3, 4, 5):
        for t in range(1, 6):
            spec = BlowupSpec(m, t)
            tg = build_blowup(spec)
            brute = good_census(tg, m).total
            assert brute == 2 * m * t ** (m - 1) * (t - 1)
            assert brute == expected_good_count(spec, m)
    assert expected_good_count(BlowupSpec(3, 3), 3) == 108
    # m = 2 (doubled edge): the count is 8(t-1)^2, brute-force verified
    for t in range(1, 6):
        tg = build_blowup(BlowupSpec(2, t))
        assert good_census(tg, 2).total == 8 * (t - 1) ** 2
    # skeleton variant packs (2m-1)-cycles; closed form verified by census
    for m in (3, 4, 5):
        for t in range(1, 6):
            spec = BlowupSpec(m, t, skeleton_edges=True)
            tg = build_blowup(spec)
            assert good_census(tg, m - 1).total == expected_good_count(spec, m - 1)
    # finite-n ratio: count / (2 n^m / m^(m-1)) == (t m / n)^m (t-1)/t, exactly
    for m in (3, 4, 5):
        for t in range(2, 6):
            spec = BlowupSpec(m, t)
            n = spec.n
            count = Fraction(expected_good_count(spec, m))
            ratio = count / (2 * Fraction(n) ** m / Fraction(m) ** (m - 1))
            formula = (Fraction(t * m, n)) ** m * Fraction(t - 1, t)
            assert abs(float(ratio - formula)) < 1e-12
    assert expected_good_count(BlowupSpec(5, 5), 5) == 25000
    print("CRITERION 5: PASS — censuses match closed forms for m in 2..5, "
          "t in 1..5; m=3,t=3 gives 108; ratio formula exact")


@pytest.mark.xfail(
    strict=True,
    reason="the doubled-edge construction (m=2) contains 8(t-1)^2 good "
    "5-cycles; the generic 2m*t^(m-1)*(t-1) expression matches only t <= 2",
)
def test_criterion_5_generic_formula_fails_for_m2():
    tg = build_blowup(BlowupSpec(2, 3))
    assert good_census(tg, 2).total == 2 * 2 * 3 * (3 - 1)


@pytest.mark.xfail(
    strict=True,
    reason="adding skeleton edges multiplies the packed (2m-1)-cycle count "
    "as m*t^(m-1) (+ a path-interior term at m=3), not as an additive m*t^m",
)
def test_criterion_5_additive_skeleton_formula_fails():
    m, t = 4, 3
    tg = build_blowup(BlowupSpec(m, t, skeleton_edges=True))
    base = 2 * m * t ** (m - 1) * (t - 1)
    assert good_census(tg, m - 1).total == base + m * t ** m


def test_criterion_6_rewrite_monotonicity_and_exact_losses(corpus_runs):
    rewrites = sum(len(a.rewrites) for _, _, _, _, audits in corpus_runs
                   for a in audits)
    deletions = sum(len(a.removed_edges) for _, _, _, _, audits in corpus_runs
                    for a in audits)
    # test mode recounts goods around every rewrite (monotonicity) and every
    # deletion batch (exact-loss identity); a violation raises and fails the
    # fixture, so reaching this point certifies all of them
    assert len(corpus_runs) == 500
    assert rewrites > 100 and deletions > 500, (rewrites, deletions)
    for tg, m, seed, (t1, t2, t3), audits in corpus_runs:
        lost = sum(a.good_through_removed for a in audits)
        assert good_census(t3, m).total >= good_census(tg, m).total - lost, seed
    print(f"CRITERION 6: PASS — {rewrites} rewrites all good-monotone, "
          f"{deletions} deletions exact-loss, 500 instances")


def test_criterion_7_stage_contracts(corpus_runs):
    seps = 0
    for tg, m, seed, (t1, t2, t3), _ in corpus_runs:
        assert is_stage1(t1), seed
        assert is_stage2(t2), seed
        assert is_benign(t3), seed
        assert len(t3.B) <= 3 * len(t2.B), seed
        for out in (t1, t2, t3):
            assert validate_embedding(out.graph, out.embedding).planar, seed
        ts, _ = separate(tg)
        assert len(ts.B) <= 6 * len(tg.B), seed
        assert validate_embedding(ts.graph, ts.embedding).planar, seed
        seps += 1
    print(f"CRITERION 7: PASS — stage predicates, |B'| bounds, and "
          f"planarity hold on all 500 instances ({seps} separations)")


def test_criterion_8_end_to_end_exactness(corpus_runs):
    nontrivial = 0
    for tg, m, seed, _, _ in corpus_runs:
        rep = reduce(tg.graph, tg.embedding, m, B=tg.B, mode="fast")
        assert rep.chain_ok, seed
        assert rep.ss_bound_ok and rep.bb_bound_ok, seed
        assert rep.total_cycles <= (
            rep.final_good.total + rep.audited_losses + rep.bad_after_partition
        ), seed
        if rep.measure is not None:
            nontrivial += 1
    print(f"CRITERION 8: PASS — chain accounting and both exact bound "
          f"inequalities hold on 500 instances ({nontrivial} with a "
          f"nonempty measure)")


def test_criterion_9_oracle_coherence():
    for n in range(3, 8):
        g = Graph.complete(n)
        for k in range(3, 8):
            expect = math.perm(n, k) // (2 * k) if n >= k else 0
            assert count_cycles(g, k) == expect
        for k in range(2, 8):
            expect = math.perm(n, k) // 2 if n >= k else 0
            assert count_paths(g, k) == expect
    g = Graph.complete(6)
    for pat in (Pattern("cycle", 5), Pattern("path", 4)):
        visits = []
        for_each_copy(g, pat, lambda c: visits.append(tuple(c)))
        assert len(visits) == len(set(visits))
        expected = (count_cycles if pat.kind == "cycle" else count_paths)(g, pat.k)
        assert len(visits) == expected
    print("CRITERION 9: PASS — counts match K_n closed forms (n <= 7) and "
          "visitor enumeration everywhere")
