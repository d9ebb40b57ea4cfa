import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from kdesampling import kde
from kdesampling.kde import BandwidthGrid, KdeError, KdeModel
from oracles import naive_density


@pytest.mark.parametrize("n, s, expected", [(32, 2.0, 1.0), (1, 3.0, 3.0), (243, 1.5, 0.5)])
def test_scott_exact_cases(n, s, expected):
    assert kde.scott_bandwidth(n, s) == expected


@given(n=st.integers(1, 10_000), s=st.floats(0.01, 100), c=st.floats(0.01, 100))
def test_scott_scaling_and_monotonicity(n, s, c):
    assert math.isclose(kde.scott_bandwidth(n, c * s), c * kde.scott_bandwidth(n, s), rel_tol=1e-14)
    assert kde.scott_bandwidth(n + 1, s) <= kde.scott_bandwidth(n, s)


def test_fit_uses_population_std():
    x = np.array([-1.0, 1.0] * 16)  # population std 1
    model = kde.fit(np.column_stack([2 * x, x]))
    assert model.bandwidths[0] == pytest.approx(1.0, abs=1e-15)
    assert model.bandwidths[1] == pytest.approx(0.5, abs=1e-15)


def test_fit_constant_feature_zero_bandwidth():
    pts = np.column_stack([np.arange(5.0), np.full(5, 3.0)])
    model = kde.fit(pts)
    assert model.bandwidths[1] == 0.0
    with pytest.raises(KdeError, match="zero bandwidth"):
        kde.density_at(model, [1.0, 3.0])


def test_fit_override_and_empty(rng):
    model = kde.fit(rng.normal(size=(9, 2)), bandwidth_override=[0.5, 0.5])
    assert model.bandwidths.tolist() == [0.5, 0.5]
    with pytest.raises(KdeError):
        kde.fit(np.empty((0, 2)))


def test_density_single_point_peak():
    model = KdeModel(np.array([[0.0]]), np.array([1.0]))
    assert kde.density_at(model, [0.0]) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-14)


def test_density_two_points():
    model = KdeModel(np.array([[-1.0], [1.0]]), np.array([1.0]))
    expected = naive_density([[-1.0], [1.0]], [1.0], [0.0])
    assert expected == pytest.approx(0.241971, abs=1e-6)
    assert kde.density_at(model, [0.0]) == pytest.approx(expected, rel=1e-14)


@given(a=st.floats(0.1, 5), x=st.floats(-10, 10), h=st.floats(0.1, 3))
def test_density_symmetry(a, x, h):
    model = KdeModel(np.array([[-a], [a]]), np.array([h]))
    assert kde.density_at(model, [x]) == pytest.approx(kde.density_at(model, [-x]), rel=1e-12, abs=1e-300)


def test_density_matches_naive_loops():
    rng = np.random.default_rng(99)
    for _ in range(100):
        n, d = rng.integers(1, 21), rng.integers(1, 5)
        pts = rng.normal(size=(n, d))
        h = rng.uniform(0.2, 2.0, size=d)
        x = rng.normal(size=d)
        got = kde.density_at(KdeModel(pts, h), x)
        want = naive_density(pts, h, x)
        assert abs(got - want) <= 1e-12 * want


@given(x=st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=20))
def test_density_non_negative(x):
    model = KdeModel(np.array([[0.0], [3.0]]), np.array([0.7]))
    assert np.all(kde.density(model, np.array(x)) >= 0)


def test_density_integrates_to_one(rng):
    pts = rng.normal(size=40)
    model = kde.fit(pts)
    h = model.bandwidths[0]
    grid = np.linspace(pts.min() - 10 * h, pts.max() + 10 * h, 10_001)
    area = np.trapezoid(kde.density(model, grid), grid)
    assert area == pytest.approx(1.0, abs=1e-3)


def test_sample_zero_bandwidth_copies(rng):
    pts = rng.normal(size=(4, 3))
    out = kde.sample(KdeModel(pts, np.zeros(3)), 50, rng)
    originals = {tuple(p) for p in pts}
    assert all(tuple(r) in originals for r in out)


def test_sample_empty(rng):
    out = kde.sample(KdeModel(np.ones((3, 2)), np.ones(2)), 0, rng)
    assert out.shape == (0, 2)


def test_sample_moments():
    model = KdeModel(np.array([[0.0]]), np.array([1.0]))
    out = kde.sample(model, 20_000, np.random.default_rng(4))
    assert abs(out.mean()) < 0.05
    assert abs(out.var() - 1.0) < 0.1


def test_sample_deterministic():
    model = KdeModel(np.random.default_rng(0).normal(size=(10, 2)), np.array([0.3, 0.4]))
    a = kde.sample(model, 100, np.random.default_rng(8))
    b = kde.sample(model, 100, np.random.default_rng(8))
    assert a.tobytes() == b.tobytes()


def test_sample_matches_mixture_cdf():
    model = kde.fit(np.random.default_rng(21).normal(size=300))
    draws = kde.sample(model, 20_000, np.random.default_rng(22))[:, 0]
    result = stats.kstest(draws, lambda x: kde.mixture_cdf(model, x))
    assert result.pvalue > 0.01


def test_mise_identical_function_is_zero(rng):
    model = kde.fit(rng.normal(size=(30, 2)))
    assert kde.sample_mise(model, lambda x: kde.density_at(model, x), model.training_points) == 0.0


def test_mise_constant_offset(rng):
    model = kde.fit(rng.normal(size=25))
    delta = 0.125
    value = kde.sample_mise(model, lambda x: kde.density_at(model, x) + delta, model.training_points)
    assert value == pytest.approx(delta**2, rel=1e-12)


def test_mise_rejects_non_finite(rng):
    model = kde.fit(rng.normal(size=5))
    with pytest.raises(KdeError, match="non-finite"):
        kde.sample_mise(model, lambda x: float("nan"), model.training_points)


def test_mise_decreases_with_n():
    def normal_pdf(x):
        return stats.norm.pdf(x[0])

    values = {}
    for n in (200, 2000):
        draws = np.random.default_rng(1000 + n).normal(size=n)
        model = kde.fit(draws)
        values[n] = kde.sample_mise(model, normal_pdf, draws)
    assert 0 < values[2000] < values[200]
    assert all(math.isfinite(v) for v in values.values())


def test_select_bandwidth_oracle_matches_exhaustive():
    pts = np.random.default_rng(5).normal(size=(150, 1))
    grid = BandwidthGrid((0.25, 1.0, 4.0))

    def truth(x):
        return stats.norm.pdf(x[0])

    chosen = kde.select_bandwidth(pts, grid, "oracle-mise", true_density=truth)
    base = kde.scott_bandwidths(pts)
    scores = [kde.sample_mise(KdeModel(pts, m * base), truth, pts) for m in grid.candidates]
    best = grid.candidates[int(np.argmin(scores))]
    np.testing.assert_array_equal(chosen, best * base)


def test_select_bandwidth_single_candidate(rng):
    pts = rng.normal(size=(20, 2))
    chosen = kde.select_bandwidth(pts, BandwidthGrid((2.0,)), "loo")
    np.testing.assert_array_equal(chosen, 2.0 * kde.scott_bandwidths(pts))


def test_select_bandwidth_loo_matches_exhaustive(rng):
    pts = rng.normal(size=(40, 3))
    grid = BandwidthGrid((0.3, 0.6, 1.0, 1.5, 3.0))
    base = kde.scott_bandwidths(pts)

    def loo(h):
        total = 0.0
        for i in range(len(pts)):
            rest = np.delete(pts, i, axis=0)
            total += math.log(naive_density(rest, h, pts[i]))
        return total

    scores = [loo(m * base) for m in grid.candidates]
    chosen = kde.select_bandwidth(pts, grid, "loo")
    np.testing.assert_allclose(chosen, grid.candidates[int(np.argmax(scores))] * base)


def test_ties_go_to_smallest_multiplier():
    assert kde.first_argmax([1.0, 3.0, 3.0, 2.0]) == 1
    assert kde.first_argmax([5.0, 5.0]) == 0
    assert kde.first_argmax([-math.inf, -math.inf, -1.0]) == 2


def test_select_bandwidth_errors():
    with pytest.raises(KdeError, match="LOO requires >= 2 points"):
        kde.select_bandwidth(np.array([[1.0]]), BandwidthGrid((1.0,)), "loo")
    with pytest.raises(KdeError, match="true_density"):
        kde.select_bandwidth(np.ones((3, 1)), BandwidthGrid((1.0,)), "oracle-mise")


@pytest.mark.parametrize("bad", [(), (1.0, 1.0), (2.0, 1.0), (0.0, 1.0)])
def test_grid_validation(bad):
    with pytest.raises(KdeError):
        BandwidthGrid(bad)
