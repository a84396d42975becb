import csv
import os
import math

import numpy as np
import pytest

from localkl import Grid, ParameterError, Window, estimate_params, kl_profile, shrink_covariance
from localkl.simulate import (
    AIJD_HEADER,
    BETA_X,
    DEFAULT_C_GRID,
    TIMING_HEADER,
    aijd,
    fourier_basis,
    integrated_jaccard,
    jaccard_distance,
    make_scenario,
    monte_carlo_run,
    replicate_seed,
    sample_scenario,
    simulation_grid,
    timing_benchmark,
    true_interval,
    true_params,
    write_timing_csv,
)


def test_basis_constant_term():
    t = np.linspace(0, math.pi, 7)
    np.testing.assert_allclose(fourier_basis(t)[:, 0], 1 / math.sqrt(math.pi), rtol=0, atol=1e-15)
    assert 1 / math.sqrt(math.pi) == pytest.approx(0.564190, abs=1e-6)


def test_basis_shape():
    assert fourier_basis(0.3).shape == (9,)
    assert fourier_basis(np.zeros(4)).shape == (4, 9)


def test_basis_orthonormal():
    t = np.linspace(0, math.pi, 10_001)
    phi = fourier_basis(t)
    gram = np.trapezoid(phi[:, :, None] * phi[:, None, :], t, axis=0)
    assert np.max(np.abs(gram - np.eye(9))) < 1e-3


def test_simulation_grid():
    g = simulation_grid(100)
    assert g.p == 100 and g.domain_length == math.pi
    assert g.points[1] == pytest.approx(math.pi / 100)


def test_true_params_structure():
    xa, ya = true_params(make_scenario("A"))
    np.testing.assert_array_equal(xa.cov, ya.cov)
    xb, yb = true_params(make_scenario("B"))
    np.testing.assert_array_equal(xb.mean, yb.mean)
    x0, y0 = true_params(make_scenario("B", tau2=0.0))
    np.testing.assert_array_equal(x0.cov, y0.cov)


def test_null_scenario_samples_agree():
    spec = make_scenario("A", beta_y=BETA_X, seed=1)
    dx, dy = sample_scenario(spec, 1000, 1000)
    se = np.sqrt(dx.rows.var(axis=0) / 1000 + dy.rows.var(axis=0) / 1000)
    assert np.all(np.abs(dx.rows.mean(axis=0) - dy.rows.mean(axis=0)) < 4 * se)


def test_sample_mean_converges():
    spec = make_scenario("A", seed=2)
    dx, _ = sample_scenario(spec, 10_000, 2)
    want = fourier_basis(spec.grid.points) @ np.array(BETA_X)
    assert np.max(np.abs(dx.rows.mean(axis=0) - want)) < 0.05


@pytest.mark.xfail(reason="sampling error of the largest entries exceeds 0.05 at this n; see the decisions log",
                   strict=False)
def test_sample_cov_converges():
    spec = make_scenario("B", seed=3)
    dx, _ = sample_scenario(spec, 20_000, 2)
    x, _ = true_params(spec)
    assert np.max(np.abs(estimate_params(dx).cov - x.cov)) < 0.05


def test_sample_cov_converges_standardised():
    # Wishart standard error of entry (i, j): sqrt((s_ii s_jj + s_ij^2) / n).
    spec = make_scenario("B", seed=3)
    n = 20_000
    dx, _ = sample_scenario(spec, n, 2)
    s = true_params(spec)[0].cov
    d = np.diag(s)
    se = np.sqrt((np.outer(d, d) + s**2) / n)
    assert np.max(np.abs(estimate_params(dx).cov - s) / se) < 5.0


def test_sampling_is_seeded():
    spec = make_scenario("C", p=30, seed=9)
    a = sample_scenario(spec, 5, 6)
    b = sample_scenario(spec, 5, 6)
    np.testing.assert_array_equal(a[0].rows, b[0].rows)
    np.testing.assert_array_equal(a[1].rows, b[1].rows)
    assert a[1].n == 6


def test_true_interval_b_contains_75():
    for c in (0.1, 0.2):
        assert true_interval(make_scenario("B"), c).contains_index(75)


def test_true_interval_null_is_leftmost():
    spec = make_scenario("B", beta_y=BETA_X, tau2=0.0)
    assert true_interval(spec, 0.1).start == 0


def test_scenario_a_profile_has_period_quarter_domain():
    # Sigma_X = Sigma_Y is stationary with period pi and the mean gap has period pi/4,
    # so the population profile repeats every 25 grid points.
    x, y = true_params(make_scenario("A"))
    prof = kl_profile(shrink_covariance(x, 0.9), shrink_covariance(y, 0.9), 0.1)
    v = np.asarray(prof.values)
    np.testing.assert_allclose(v[:-25], v[25:], rtol=1e-6)


def test_jaccard():
    g = Grid.indices(30)
    a = Window(g, 1, 10)
    assert jaccard_distance(a, a) == 0.0
    assert jaccard_distance(a, Window(g, 11, 5)) == 1.0
    assert jaccard_distance(a, Window(g, 6, 10)) == pytest.approx(2 / 3)


def test_integrated_jaccard_needs_uniform_grid():
    g = Grid.indices(10)
    w = [Window(g, 0, 2)] * 3
    with pytest.raises(ParameterError):
        integrated_jaccard(w, w, [0.1, 0.2, 0.5])
    with pytest.raises(ParameterError):
        integrated_jaccard(w[:1], w[:1], [0.1])


def test_aijd_perfect_and_disjoint():
    spec = make_scenario("B", p=40)
    cs = [0.1, 0.15, 0.2]
    truth = [true_interval(spec, c) for c in cs]
    lookup = dict(zip(cs, truth))

    def oracle(x, y, c):
        return lookup[float(c)]

    def far(x, y, c):
        w = lookup[float(c)]
        start = 0 if w.start >= w.size else spec.p - w.size
        return Window(spec.grid, start, w.size)

    assert aijd(spec, 20, 20, cs, seed=0, truth=truth, estimator=oracle) == 0.0
    assert aijd(spec, 20, 20, cs, seed=0, truth=truth, estimator=far) == 1.0


def test_monte_carlo_single_replicate_matches_aijd():
    rep = monte_carlo_run(["B"], [30], [40], 1, seed=4)
    spec = make_scenario("B", p=40)
    want = aijd(spec, 30, 30, DEFAULT_C_GRID, seed=replicate_seed(4, "B", 30, 40, 0))
    assert rep.values("B", 30, 40) == [want]


def test_monte_carlo_csv(tmp_path):
    rep = monte_carlo_run(["A", "C"], [20], [30], 2, seed=1)
    path = tmp_path / "aijd.csv"
    rep.to_csv(path)
    rows = list(csv.reader(open(path)))
    assert tuple(rows[0]) == AIJD_HEADER
    assert len(rows) == 5


def test_timing_rows(tmp_path):
    spec = make_scenario("A")
    rows = timing_benchmark(spec, 30, 60, [0.1, 1.0], repeats=1)
    assert [r[:4] for r in rows] == [("A", 30, 60, 0.1), ("A", 30, 60, 1.0)]
    path = tmp_path / "t.csv"
    write_timing_csv(rows, path)
    assert tuple(next(csv.reader(open(path)))) == TIMING_HEADER


def test_bad_scenario():
    with pytest.raises(ParameterError):
        make_scenario("D")


@pytest.mark.skipif(not os.environ.get("LOCALKL_SLOW"), reason="about 16 minutes on one core; set LOCALKL_SLOW=1")
def test_aijd_grows_with_p():
    rep = monte_carlo_run("ABC", [250], [50, 500], 50, seed=0)
    worse = [s for s in "ABC" if rep.median(s, 250, 500) >= rep.median(s, 250, 50)]
    # "almost all scenarios": allow one exception
    assert len(worse) >= 2
