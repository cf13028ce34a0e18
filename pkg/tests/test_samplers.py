import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.components.samplers import (
    blev,
    iboss,
    leverage_probabilities,
    levunw,
    lowcon,
    scale_to_cube,
    select,
    slev,
    theta_box,
    unif,
)
from src.entity.artifact_entity import Box
from src.exception import ConfigError, ConstantColumn, InfeasibleDesign


@pytest.fixture
def X(rng):
    return rng.standard_normal((300, 3)) + 1.0


def test_scale_to_cube(X):
    scaled, spec = scale_to_cube(X)
    assert_array_equal(scaled.min(axis=0), -np.ones(3))
    assert_array_equal(scaled.max(axis=0), np.ones(3))
    assert_allclose(spec.inverse(scaled), X, atol=1e-12)


def test_scale_constant_column(X):
    X = X.copy()
    X[:, 1] = 4.0
    with pytest.raises(ConstantColumn):
        scale_to_cube(X)


def test_theta_box(X):
    scaled, _ = scale_to_cube(X)
    cube = theta_box(scaled, 0.0)
    assert_array_equal(cube.lower, -np.ones(3))
    assert_array_equal(cube.upper, np.ones(3))
    trimmed = theta_box(scaled, 5.0)
    assert_allclose(trimmed.lower, np.percentile(scaled, 5.0, axis=0))
    assert_allclose(trimmed.upper, np.percentile(scaled, 95.0, axis=0))
    with pytest.raises(ConfigError):
        theta_box(scaled, 50.0)


def test_lowcon_selection(X):
    selection = lowcon(X, 12, theta=1.0, rng=np.random.default_rng(0))
    assert selection.r == 12
    assert len(set(selection.indices.tolist())) == 12
    assert selection.weights is None
    diagnostics = selection.diagnostics
    scaled, _ = scale_to_cube(X)
    assert_allclose(diagnostics.perturbation, scaled[selection.indices] - diagnostics.design.points)
    assert_allclose(diagnostics.nn_distances, np.linalg.norm(diagnostics.perturbation, axis=1))
    assert diagnostics.mean_nn_distance == pytest.approx(diagnostics.nn_distances.mean())
    assert np.isfinite(diagnostics.kappa_sub)


def test_lowcon_is_deterministic(X):
    a = lowcon(X, 10, rng=np.random.default_rng(4))
    b = lowcon(X, 10, rng=np.random.default_rng(4))
    assert_array_equal(a.indices, b.indices)


def test_lowcon_whole_sample(rng):
    X = rng.standard_normal((15, 2))
    selection = lowcon(X, 15, theta=0.0, rng=rng)
    assert_array_equal(np.sort(selection.indices), np.arange(15))


def test_lowcon_with_duplicates(rng):
    X = rng.standard_normal((6, 2))
    selection = lowcon(X, 10, theta=0.0, rng=rng, allow_duplicates=True)
    assert selection.r == 10
    assert set(selection.indices.tolist()) <= set(range(6))


def test_lowcon_needs_more_rows_than_columns(X):
    with pytest.raises(InfeasibleDesign):
        lowcon(X, 3, rng=np.random.default_rng(0))


def test_unif(X, rng):
    selection = unif(X, 50, rng)
    assert len(np.unique(selection.indices)) == 50
    assert selection.indices.min() >= 0 and selection.indices.max() < 300
    with pytest.raises(ConfigError):
        unif(X, 301, rng)


@pytest.mark.parametrize("alpha", [1.0, 0.9, 0.5])
def test_leverage_probabilities_sum_to_one(X, alpha):
    pi = leverage_probabilities(X, alpha)
    assert pi.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(pi > 0)


def test_blev_weights(X):
    selection = blev(X, 40, np.random.default_rng(1))
    pi = leverage_probabilities(X)
    assert_allclose(selection.weights, 1.0 / (40 * pi[selection.indices]))


def test_slev_weights(X):
    selection = slev(X, 40, np.random.default_rng(1), alpha=0.9)
    pi = leverage_probabilities(X, 0.9)
    assert_allclose(selection.weights, 1.0 / (40 * pi[selection.indices]))


def test_levunw_draws_the_blev_rows(X):
    a = blev(X, 40, np.random.default_rng(9))
    b = levunw(X, 40, np.random.default_rng(9))
    assert_array_equal(a.indices, b.indices)
    assert b.weights is None


def test_iboss_extremes():
    X = np.column_stack([np.arange(20.0), np.arange(20.0)[::-1] + 0.5])
    assert iboss(X, 4).indices.tolist() == [0, 19, 18, 1]
    # remainder comes from the first column, smallest first
    assert iboss(X, 5).indices.tolist() == [0, 19, 18, 1, 2]
    assert iboss(X, 6).indices.tolist() == [0, 19, 18, 1, 2, 17]


def test_iboss_too_small(X):
    with pytest.raises(ConfigError):
        iboss(X, 5)


def test_select_dispatch(X):
    for method in ("UNIF", "BLEV", "SLEV", "LEVUNW", "IBOSS", "LOWCON"):
        selection = select(method, X, 12, np.random.default_rng(0))
        assert selection.method == method
        assert selection.r == 12
    with pytest.raises(ConfigError):
        select("KMEANS", X, 12, np.random.default_rng(0))


@pytest.mark.parametrize("theta", [0.0, 5.0])
def test_lowcon_ignores_per_column_affine_maps(X, theta):
    scale = np.array([3.0, 0.01, 250.0])
    shift = np.array([-7.0, 2.0, 1e3])
    for seed in range(10):
        raw = lowcon(X, 12, theta=theta, rng=np.random.default_rng(seed))
        moved = lowcon(X * scale + shift, 12, theta=theta, rng=np.random.default_rng(seed))
        assert_array_equal(raw.indices, moved.indices)


def test_theta_box_on_an_even_grid():
    box = theta_box(np.linspace(-1.0, 1.0, 101).reshape(-1, 1), 1.0)
    assert_allclose(box.lower, [-0.98], atol=1e-12)
    assert_allclose(box.upper, [0.98], atol=1e-12)


def assert_frequencies(counts, expected, draws):
    # binomial count per row; a stray row past 3 sd is allowed, none past 4
    sd = np.sqrt(draws * expected * (1 - expected))
    z = np.abs(counts - draws * expected) / sd
    assert np.all(z < 4)
    assert np.sum(z > 3) <= 2


def test_unif_inclusion_frequency():
    X = np.random.default_rng(1).standard_normal((20, 2))
    rng = np.random.default_rng(2)
    draws = 10_000
    counts = np.zeros(20)
    for _ in range(draws):
        counts[unif(X, 5, rng).indices] += 1
    assert_frequencies(counts, np.full(20, 5 / 20), draws)


def test_blev_draw_frequency():
    X = np.random.default_rng(3).standard_normal((20, 3)) + 1.0
    pi = leverage_probabilities(X)
    pi = pi / pi.sum()
    rng = np.random.default_rng(4)
    counts = np.zeros(20)
    for _ in range(1000):
        counts += np.bincount(blev(X, 10, rng).indices, minlength=20)
    assert_frequencies(counts, pi, 10_000)
