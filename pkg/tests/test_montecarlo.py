import math
from fractions import Fraction

import numpy as np
import pytest

from gcmoments.combinatorics import MomentSequence
from gcmoments.embedded import EmbeddedSpec, cumulants_embedded, moment_X_embedded, moment_Y_embedded
from gcmoments.growth import GrowthSpec, cumulants_X, moment_X
from gcmoments.montecarlo import (
    SimConfig,
    batch_rng,
    compare,
    embedded_paths,
    estimate_cumulants,
    gc_paths_recursion,
    gc_paths_sum,
    jump_times,
    simulate_embedded,
    simulate_gc,
    simulate_gc_batch,
)

GRID = [0.5 * k for k in range(1, 11)]


def beta21(rng, shape):
    # density 2z on [0, 1]
    return np.sqrt(rng.random(shape))


BETA21 = MomentSequence([Fraction(2, q + 2) for q in range(5)], unit_interval=True)


# paths


def test_no_jumps_means_pure_growth():
    times = np.full((3, 0), np.inf)
    cuts = np.empty((3, 0))
    for f in (gc_paths_sum, gc_paths_recursion):
        assert np.array_equal(f(times, cuts, GRID), np.tile(GRID, (3, 1)))


def test_single_jump_by_hand():
    times = np.array([[1.0, np.inf]])
    cuts = np.array([[0.25, 0.9]])
    expected = [[0.5, 0.25, 0.75]]
    for f in (gc_paths_sum, gc_paths_recursion):
        assert np.allclose(f(times, cuts, [0.5, 1.0, 1.5]), expected, rtol=0, atol=1e-15)


def test_jump_times_shape_and_order():
    t = jump_times(batch_rng(1, 0), 2.0, 5.0, 2000)
    finite = np.isfinite(t)
    assert np.all(t[finite] <= 5.0)
    # finite times form an increasing prefix of each row
    assert np.all(finite[:, :-1] >= finite[:, 1:])
    gaps = np.diff(np.where(finite, t, 0.0), axis=1)
    assert np.all(gaps[finite[:, 1:]] > 0)
    # counts are Poisson(10)
    counts = finite.sum(axis=1)
    assert abs(counts.mean() - 10.0) < 4 * math.sqrt(10.0 / 2000)


def test_sum_and_recursion_agree_pathwise():
    cfg = SimConfig(2.0, GRID, 10_000, seed=99)
    a = simulate_gc_batch(cfg, 0, 10_000, "sum")
    b = simulate_gc_batch(cfg, 0, 10_000, "recursion")
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.all(a >= 0) and np.all(a <= np.asarray(GRID) + 1e-12)


def test_embedded_paths_envelope():
    y, x, t = embedded_paths(batch_rng(5, 0), 2.0, 12, 10_000)
    assert np.all(x >= 0) and np.all(x <= t)
    assert np.allclose(x + y, t, rtol=0, atol=1e-12)
    assert np.all(np.diff(t, axis=1) > 0)


# reproducibility


def test_seed_determinism_and_threads():
    base = SimConfig(2.0, GRID, 20_000, seed=3, n=4, threads=1)
    a = simulate_gc(base)
    b = simulate_gc(SimConfig(2.0, GRID, 20_000, seed=3, n=4, threads=8))
    c = simulate_gc(SimConfig(2.0, GRID, 20_000, seed=4, n=4, threads=1))
    assert np.array_equal(a.cumulants, b.cumulants) and np.array_equal(a.cumulant_se, b.cumulant_se)
    assert not np.array_equal(a.moments, c.moments)


def test_embedded_thread_independence():
    mk = lambda th: simulate_embedded(SimConfig(2.0, list(range(1, 6)), 5_000, seed=11, threads=th))  # noqa: E731
    a, b = mk(1), mk(4)
    assert np.array_equal(a.X.moments, b.X.moments) and np.array_equal(a.Y.cumulant_se, b.Y.cumulant_se)


# estimator


def test_constant_samples():
    v = np.full((1000, 2), 1.5)
    ps = np.stack([np.array([(v[i::10] ** j).sum(axis=0) for j in range(1, 5)]) for i in range(10)])
    mu, mu_se, k, k_se = estimate_cumulants(ps, [100] * 10)
    assert np.allclose(k[:, 0], 1.5) and np.allclose(k[:, 1:], 0, atol=1e-12)
    assert np.allclose(mu_se, 0, atol=1e-12)


def test_gaussian_synthetic():
    rng = np.random.default_rng(2)
    v = rng.standard_normal((200_000, 1))
    batches = np.split(v, 100)
    ps = np.stack([np.array([(b**j).sum(axis=0) for j in range(1, 5)]) for b in batches])
    mu, mu_se, k, k_se = estimate_cumulants(ps, [len(b) for b in batches])
    assert np.all(np.abs(k[0] - [0, 1, 0, 0]) <= 4 * k_se[0])
    assert np.isclose(k[0, 1], mu[0, 1] - mu[0, 0] ** 2, rtol=1e-12)


def test_estimator_needs_two_samples():
    with pytest.raises(ValueError):
        estimate_cumulants(np.ones((1, 2, 1)), [1])


def test_fewer_samples_than_batches_warns():
    with pytest.warns(RuntimeWarning):
        est = simulate_gc(SimConfig(2.0, [1.0], 50, seed=1, n=2))
    assert est.batches == 50 and est.samples == 50


# compare


def test_compare_reports():
    kappa = cumulants_X(GrowthSpec(2), 2)[1]
    values = [kappa(t) for t in GRID]
    same = compare(kappa, GRID, values, [0.01] * len(GRID))
    assert same.passed and same.max_abs_z == 0
    off = compare(values, GRID, [1.1 * v for v in values], [1e-3] * len(GRID))
    assert not off.passed
    with pytest.raises(ValueError):
        compare(values, GRID[:-1], values, [1.0] * len(GRID))
    with pytest.raises(ValueError):
        compare(values[:-1], GRID, values, [1.0] * len(GRID))


def test_compare_zero_stderr():
    rep = compare([1.0, 2.0], [1, 2], [1.0, 2.5], [0.0, 0.0])
    assert rep.rows[0].passed and not rep.rows[1].passed


# statistics against the analytic engine


def test_gc_mean_at_three():
    est = simulate_gc(SimConfig(2.0, [3.0], 1_000_000, seed=2024, n=1))
    exact = moment_X(GrowthSpec(2), 1)(3.0)
    assert abs(est.moments[0, 0] - exact) <= 4 * est.moment_se[0, 0]


def test_gc_cumulants_small_run():
    est = simulate_gc(SimConfig(2.0, GRID, 200_000, seed=17, n=4))
    for j, k in enumerate(cumulants_X(GrowthSpec(2), 4)):
        assert compare(k, GRID, est.cumulants[:, j], est.cumulant_se[:, j]).passed


def test_embedded_small_run():
    ms = list(range(1, 11))
    est = simulate_embedded(SimConfig(2.0, ms, 200_000, seed=23, n=2))
    for chain, e in (("Y", est.Y), ("X", est.X)):
        exact = [cumulants_embedded(EmbeddedSpec(2, m), 2, chain).cumulants for m in ms]
        for j in range(2):
            assert compare([k[j] for k in exact], ms, e.cumulants[:, j], e.cumulant_se[:, j]).passed
    mean_y1 = est.Y.moments[0, 0]
    assert abs(mean_y1 - 0.25) <= 4 * est.Y.moment_se[0, 0]


def test_embedded_second_moment_at_five():
    est = simulate_embedded(SimConfig(2.0, [5], 1_000_000, seed=8, n=2))
    exact = (2 - 4 / 2**5 + 2 / 3**5) / 4
    assert abs(est.X.moments[0, 1] - exact) <= 4 * est.X.moment_se[0, 1]


def test_general_cutoff_continuous_time():
    grid = [1.0, 2.5, 4.0]
    est = simulate_gc(SimConfig(1.5, grid, 200_000, seed=31, n=2, cutoff=beta21))
    for j in range(2):
        exact = moment_X(GrowthSpec(Fraction(3, 2), cutoff=BETA21), j + 1)
        assert compare(exact, grid, est.moments[:, j], est.moment_se[:, j]).passed


def test_general_cutoff_embedded():
    ms = [1, 2, 4, 7]
    est = simulate_embedded(SimConfig(1.5, ms, 200_000, seed=37, n=2, cutoff=beta21))
    for j in range(2):
        y = [moment_Y_embedded(EmbeddedSpec(Fraction(3, 2), m, BETA21), j + 1) for m in ms]
        x = [moment_X_embedded(EmbeddedSpec(Fraction(3, 2), m, BETA21), j + 1) for m in ms]
        assert compare(y, ms, est.Y.moments[:, j], est.Y.moment_se[:, j]).passed
        assert compare(x, ms, est.X.moments[:, j], est.X.moment_se[:, j]).passed


def test_standard_error_scales_like_clt():
    se = []
    for n in (10_000, 100_000, 1_000_000):
        est = simulate_gc(SimConfig(2.0, [2.0], n, seed=41, n=2))
        se.append(est.cumulant_se[0, 1] * math.sqrt(n))
    for a, b in zip(se, se[1:]):
        assert 0.8 <= b / a <= 1.25


# configuration errors


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lam=0.0),
        dict(samples=0),
        dict(grid=[]),
        dict(grid=[2.0, 1.0]),
        dict(n=0),
        dict(method="euler"),
        dict(seed=-1),
    ],
)
def test_invalid_config(kwargs):
    base = dict(lam=2.0, grid=[1.0], samples=10)
    base.update(kwargs)
    with pytest.raises(ValueError):
        SimConfig(**base)


def test_embedded_grid_must_be_indices():
    with pytest.raises(ValueError):
        simulate_embedded(SimConfig(2.0, [0.5, 1.0], 100))
    with pytest.raises(ValueError):
        simulate_embedded(SimConfig(2.0, [0, 1], 100))
