import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddcycles.measures import (
    EdgeMeasure,
    beta,
    check_rooted_path_bound,
    check_vertex_bound,
    kkt_residual,
    known_bound,
    measure_from_dict,
    measure_to_dict,
    objective,
    optimize,
    sample_objectives,
    vertex_mass,
)


def uniform_triangle(k=6):
    return EdgeMeasure(k, {(0, 1): 1 / 3, (0, 2): 1 / 3, (1, 2): 1 / 3})


def test_measure_validation():
    with pytest.raises(ValueError):
        EdgeMeasure(3, {(0, 1): 0.5})  # mass != 1
    with pytest.raises(ValueError):
        EdgeMeasure(3, {(0, 1): 1.5, (1, 2): -0.5})
    with pytest.raises(ValueError):
        EdgeMeasure(3, {(0, 7): 1.0})  # off the clique


def test_vertex_mass_sums_to_two():
    mu = uniform_triangle()
    masses = vertex_mass(mu)
    assert math.isclose(sum(masses.values()), 2.0)
    assert math.isclose(masses[0], 2 / 3)


def test_beta_triangle():
    mu = uniform_triangle()
    # one triangle copy in the support, product of its edge masses
    assert math.isclose(beta(mu, "cycle", 3), (1 / 3) ** 3)


def test_objective_uniform_triangle():
    assert math.isclose(objective(uniform_triangle(), 3), 2 / 9)


def test_objective_point_mass():
    mu = EdgeMeasure(5, {(0, 1): 1.0})
    assert math.isclose(objective(mu, 2), 2.0)


def test_objective_uniform_c4():
    mu = EdgeMeasure(7, {(0, 1): 0.25, (1, 2): 0.25, (2, 3): 0.25, (0, 3): 0.25})
    assert math.isclose(objective(mu, 4), 1 / 32)


def test_objective_relabeling_invariance():
    mu = EdgeMeasure(6, {(0, 1): 0.5, (1, 2): 0.3, (3, 4): 0.2})
    perm = {0: 5, 1: 2, 2: 0, 3: 1, 4: 4, 5: 3}
    relabeled = EdgeMeasure(
        6, {tuple(sorted((perm[u], perm[v]))): p for (u, v), p in mu.mass.items()}
    )
    for m in (2, 3, 4):
        assert math.isclose(objective(mu, m), objective(relabeled, m))


def test_gradient_by_finite_differences():
    """Moving mass eps from edge j to edge i changes the objective by
    roughly eps*(D_i - D_j); recover D from the KKT residual identity
    residual_e = lambda*mu(e) - mu(e)*D_e on the support."""
    rng = np.random.default_rng(0)
    eps = 1e-7
    for m, k in [(2, 5), (3, 6), (4, 7)]:
        v = rng.dirichlet(np.ones(k * (k - 1) // 2))
        mu = EdgeMeasure.from_vector(k, v)
        kkt = kkt_residual(mu, m)
        edges = sorted(kkt.edge_residuals)
        res = np.array([kkt.edge_residuals[e] for e in edges])
        d = (kkt.lam * v - res) / v
        for i, j in [(0, 1), (2, len(v) - 1)]:
            w = v.copy()
            w[i] += eps
            w[j] -= eps
            num = (objective(EdgeMeasure.from_vector(k, w), m) - objective(mu, m)) / eps
            assert abs(num - (d[i] - d[j])) < 1e-4


def test_kkt_at_uniform_triangle_is_exact():
    rep = kkt_residual(uniform_triangle(), 3)
    assert math.isclose(rep.lam, 2 / 3, abs_tol=1e-15)
    assert rep.max_support_edge_residual < 1e-12
    assert rep.max_vertex_residual < 1e-12
    assert rep.off_support_ok


def test_rooted_path_bound_tight_case():
    # uniform triangle, m=2: both sides are 2/9
    lhs, rhs, ok = check_rooted_path_bound(uniform_triangle(), 2, 0)
    assert ok and math.isclose(lhs, rhs) and math.isclose(lhs, 2 / 9)


def test_vertex_bound_at_triangle():
    val, ok = check_vertex_bound(uniform_triangle(), 3, 0)
    assert ok and val >= 1.0


def test_known_bounds():
    assert known_bound(2) == (2.0, True)
    assert math.isclose(known_bound(3)[0], 2 / 9)
    assert math.isclose(known_bound(4)[0], 2 / 64)
    val, exact = known_bound(5)
    assert not exact and math.isclose(val, 2.6947 / 5 ** 4)


def test_optimize_m3_finds_triangle():
    rep = optimize(3, clique_size=6, starts=16, seed=1)
    assert abs(rep.value - 2 / 9) < 1e-6
    assert len(rep.measure.support()) == 3
    assert all(abs(p - 1 / 3) < 1e-4 for p in rep.measure.mass.values())


def test_optimize_m2_point_mass():
    rep = optimize(2, clique_size=5, starts=8, seed=0)
    assert abs(rep.value - 2.0) < 1e-9
    assert len(rep.measure.support()) == 1


def test_optimize_rejects_bad_args():
    with pytest.raises(ValueError):
        optimize(3, clique_size=1)
    with pytest.raises(ValueError):
        optimize(3, starts=0)


def test_optimize_deterministic():
    a = optimize(3, clique_size=5, starts=4, seed=9)
    b = optimize(3, clique_size=5, starts=4, seed=9)
    assert a.to_dict() == b.to_dict()


def test_sample_objectives_below_known_bound():
    vals = sample_objectives(3, 6, 2000, seed=3)
    assert vals.max() <= 2 / 9 + 1e-9


def test_measure_json_round_trip():
    mu = uniform_triangle()
    d = measure_to_dict(mu)
    mu2 = measure_from_dict(d)
    assert mu2.clique_size == 6 and mu2.mass == pytest.approx(mu.mass)


@given(st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_random_measures_respect_envelopes(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(3, 7))
    mu = EdgeMeasure.from_vector(k, rng.dirichlet(np.ones(k * (k - 1) // 2)))
    for m in (2, 3):
        bound, _ = known_bound(m)
        assert objective(mu, m) <= bound + 1e-9
    for x in range(k):
        _, _, ok = check_rooted_path_bound(mu, 3, x)
        assert ok
