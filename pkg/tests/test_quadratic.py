import numpy as np
import pytest

from collneg import quadratic
from collneg.quadratic import (
    QuadraticModel,
    expand_features,
    fit,
    load_model,
    predict,
    predict_clipped,
    save_model,
    theta_length,
)


def test_theta_lengths():
    assert [theta_length(b) for b in range(5, 11)] == [21, 28, 36, 45, 55, 66]


def test_expand_two_feature_ordering():
    a, b = 0.3, 0.7
    assert np.allclose(expand_features(np.array([a, b])), [1, a, b, a * a, a * b, b * b])


def test_expand_zero_vector():
    out = expand_features(np.zeros(5))
    assert out[0] == 1.0
    assert np.all(out[1:] == 0.0)


def test_expand_lengths_and_first_square():
    for b in range(5, 11):
        x = np.arange(1.0, b + 1.0)
        out = expand_features(x)
        assert out.shape == (theta_length(b),)
        assert out[b + 1] == x[0] ** 2  # first quadratic entry is x1^2


def test_fit_recovers_exact_coefficients(rng):
    b = 5
    theta_true = rng.standard_normal(theta_length(b))
    x = rng.random((500, b))
    y = expand_features(x) @ theta_true
    model = fit(x, y, b)
    assert np.max(np.abs(model.theta - theta_true)) < 1e-6


def test_fit_residual_gradient_is_stationary(rng):
    b = 5
    x = rng.random((800, b))
    y = rng.random(800)
    model = fit(x, y, b)
    design = expand_features(x)
    grad = design.T @ (design @ model.theta - y)
    assert np.max(np.abs(grad)) / len(y) < 1e-6


def test_fit_row_permutation_invariance(rng):
    b = 5
    x = rng.random((600, b))
    y = rng.random(600)
    perm = rng.permutation(600)
    probe = rng.random((50, b))
    p1 = predict(fit(x, y, b), probe)
    p2 = predict(fit(x[perm], y[perm], b), probe)
    assert np.max(np.abs(p1 - p2)) < 1e-8


def test_fit_requires_enough_rows(rng):
    x = rng.random((41, 5))  # needs 2 * 21 rows
    with pytest.raises(ValueError):
        fit(x, np.zeros(41), 5)


def test_fit_rank_deficient_data_survives_via_ridge():
    x = np.tile(np.full(5, 0.3), (100, 1))
    model = fit(x, np.full(100, 0.5), 5)
    assert np.all(np.isfinite(model.theta))
    assert predict(model, np.full(5, 0.3)) == pytest.approx(0.5, abs=1e-6)


def test_predict_trivial_models():
    b = 5
    zero = QuadraticModel(b=b, theta=np.zeros(theta_length(b)))
    x = np.random.default_rng(0).random((10, b))
    assert np.all(predict(zero, x) == 0.0)
    const = np.zeros(theta_length(b))
    const[0] = 0.42
    assert np.allclose(predict(QuadraticModel(b=b, theta=const), x), 0.42)


def test_predict_dimension_mismatch():
    model = QuadraticModel(b=5, theta=np.zeros(theta_length(5)))
    with pytest.raises(ValueError):
        predict(model, np.zeros(6))


def test_predict_clipped_range():
    b = 5
    theta = np.zeros(theta_length(b))
    theta[0] = -3.0
    model = QuadraticModel(b=b, theta=theta)
    assert predict_clipped(model, np.zeros(b)) == 0.0
    theta2 = theta.copy()
    theta2[0] = 7.0
    assert predict_clipped(QuadraticModel(b=b, theta=theta2), np.zeros(b)) == 1.0


def test_model_length_validation():
    with pytest.raises(ValueError):
        QuadraticModel(b=5, theta=np.zeros(20))


def test_save_load_round_trip(tmp_path, rng):
    model = QuadraticModel(b=6, theta=rng.standard_normal(theta_length(6)))
    path = tmp_path / "model.txt"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.b == 6
    assert np.array_equal(loaded.theta, model.theta)


def test_load_infers_b_without_header(tmp_path):
    path = tmp_path / "bare.txt"
    path.write_text("\n".join(str(float(i)) for i in range(theta_length(7))) + "\n")
    assert load_model(path).b == 7
