import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgrt.classifier import (
    RbfModel,
    WIDTH_FLOOR,
    Prediction,
    activations,
    fit_centers,
    fit_output_weights,
    fit_widths,
    predict,
    train,
)
from emgrt.errors import NumericError, ParameterError
from emgrt.projection import ScatterMatrix
from emgrt.synthdata import oracle_predict


def random_model(rng, m=14, p=8, v=9):
    return RbfModel(
        centers=rng.normal(0.0, 2.0, (m, p)),
        widths=rng.uniform(0.5, 3.0, m),
        weights=rng.normal(0.0, 1.0, (v, m)),
        bias=rng.normal(0.0, 1.0, v),
    )


def blobs(rng, n_classes=9, per_class=30, p=8, spread=0.05, sep=4.0):
    centers = rng.normal(0.0, sep, (n_classes, p))
    X = np.vstack([centers[k] + rng.normal(0.0, spread, (per_class, p)) for k in range(n_classes)])
    y = np.repeat(np.arange(n_classes), per_class)
    return ScatterMatrix(X, y, n_classes), centers


class TestActivations:
    def test_unit_at_center(self):
        rng = np.random.default_rng(0)
        model = random_model(rng)
        psi = activations(model.centers[3], model)
        assert psi[3] == 1.0
        assert ((psi > 0) & (psi <= 1)).all()

    def test_unit_distance_value(self):
        model = RbfModel(
            centers=np.array([[0.0, 0.0]]), widths=np.array([2.0]),
            weights=np.ones((1, 1)), bias=np.zeros(1),
        )
        psi = activations(np.array([2.0, 0.0]), model)  # distance == width
        assert psi[0] == pytest.approx(math.exp(-0.5), abs=1e-15)

    def test_far_input_vanishes(self):
        rng = np.random.default_rng(1)
        model = random_model(rng)
        psi = activations(np.full(8, 1e3), model)
        assert (psi < 1e-10).all()

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(2)
        with pytest.raises(ParameterError):
            activations(np.zeros(5), random_model(rng, p=8))

    def test_rotation_invariance(self):
        rng = np.random.default_rng(3)
        model = random_model(rng, m=6, p=5)
        for _ in range(100):
            Q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
            s = rng.normal(0.0, 2.0, 5)
            rotated = RbfModel(
                centers=model.centers @ Q.T, widths=model.widths,
                weights=model.weights, bias=model.bias,
            )
            np.testing.assert_allclose(activations(Q @ s, rotated), activations(s, model), atol=1e-9)


class TestPredict:
    def test_single_node_at_center(self):
        model = RbfModel(
            centers=np.array([[1.0, 2.0]]), widths=np.array([1.0]),
            weights=np.array([[2.0]]), bias=np.zeros(1),
        )
        pred = predict(model, np.array([1.0, 2.0]))
        assert pred.scores[0] == 2.0
        assert pred.decided_class == 0

    def test_tie_break_lowest_index(self):
        rng = np.random.default_rng(4)
        model = RbfModel(
            centers=rng.normal(size=(3, 2)), widths=np.ones(3),
            weights=np.zeros((4, 3)), bias=np.zeros(4),
        )
        pred = predict(model, rng.normal(size=2))
        np.testing.assert_array_equal(pred.scores, np.zeros(4))
        assert pred.decided_class == 0

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            model = random_model(rng)
            s = rng.normal(0.0, 2.0, 8)
            pred = predict(model, s)
            ref_scores, ref_class = oracle_predict(s, model.centers, model.widths, model.weights, model.bias)
            rel = np.abs(pred.scores - ref_scores) / np.maximum(np.abs(ref_scores), 1e-300)
            assert rel.max() < 1e-12
            assert pred.decided_class == ref_class

    @settings(max_examples=120, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        shift=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        scale=st.floats(min_value=1e-6, max_value=1e6, allow_nan=False),
    )
    def test_argmax_invariance(self, seed, shift, scale):
        rng = np.random.default_rng(seed)
        scores = rng.normal(0.0, 3.0, 9)
        base = int(np.argmax(scores))
        assert int(np.argmax(scores + shift)) == base
        assert int(np.argmax(scores * scale)) == base

    def test_prediction_enforces_argmax(self):
        with pytest.raises(ParameterError):
            Prediction(scores=np.array([0.0, 1.0]), decided_class=0)


class TestFitCenters:
    def test_exact_recovery_when_k_equals_points(self):
        rng = np.random.default_rng(6)
        pts = rng.normal(0.0, 3.0, (5, 2))
        centers = fit_centers(pts, 5, seed=0)
        found = {tuple(np.round(c, 12)) for c in centers}
        expected = {tuple(np.round(p, 12)) for p in pts}
        assert found == expected

    def test_two_blobs(self):
        rng = np.random.default_rng(7)
        means = np.array([[0.0, 0.0], [5.0, 5.0]])
        X = np.vstack([means[0] + rng.normal(0.0, 0.05, (100, 2)), means[1] + rng.normal(0.0, 0.05, (100, 2))])
        centers = fit_centers(X, 2, seed=1)
        d = np.linalg.norm(centers[:, None, :] - means[None, :, :], axis=2)
        assert d.min(axis=0).max() < 0.1

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        X = rng.normal(0.0, 1.0, (200, 4))
        np.testing.assert_array_equal(fit_centers(X, 7, seed=3), fit_centers(X, 7, seed=3))

    def test_too_many_centers_rejected(self):
        with pytest.raises(ParameterError):
            fit_centers(np.zeros((3, 2)), 4, seed=0)


class TestFitWidths:
    def test_collinear(self):
        sigma = fit_widths(np.array([[0.0], [1.0], [2.0]]))
        np.testing.assert_allclose(sigma, [1.5, 1.0, 1.5])

    def test_two_centers(self):
        sigma = fit_widths(np.array([[0.0, 0.0], [3.0, 4.0]]))
        np.testing.assert_allclose(sigma, [5.0, 5.0])

    def test_coincident_floored(self):
        sigma = fit_widths(np.zeros((4, 3)))
        np.testing.assert_array_equal(sigma, np.full(4, WIDTH_FLOOR))

    def test_single_center_uses_data_diameter(self):
        data = np.array([[0.0, 0.0], [6.0, 8.0], [1.0, 1.0]])
        sigma = fit_widths(np.array([[2.0, 2.0]]), data)
        np.testing.assert_allclose(sigma, [10.0])


class TestFitOutputWeights:
    def test_interpolation_at_centers(self):
        rng = np.random.default_rng(9)
        pts = rng.normal(0.0, 2.0, (6, 3))
        scatter = ScatterMatrix(pts, np.array([0, 1, 2, 0, 1, 2]), 3)
        widths = fit_widths(pts)
        W, b = fit_output_weights(scatter, pts, widths, ridge=1e-10)
        model = RbfModel(centers=pts, widths=widths, weights=W, bias=b)
        targets = np.zeros((6, 3))
        targets[np.arange(6), scatter.labels] = 1.0
        scores = np.array([predict(model, p).scores for p in pts])
        assert np.abs(scores - targets).max() < 1e-6

    def test_huge_ridge_gives_priors(self):
        rng = np.random.default_rng(10)
        scatter = ScatterMatrix(rng.normal(0.0, 1.0, (40, 4)), rng.integers(0, 3, 40), 3)
        centers = fit_centers(scatter, 5, seed=0)
        widths = fit_widths(centers, scatter)
        W, b = fit_output_weights(scatter, centers, widths, ridge=1e12)
        priors = np.bincount(scatter.labels, minlength=3) / 40
        assert np.abs(W).max() < 1e-9
        np.testing.assert_allclose(b, priors, atol=1e-9)

    def test_matches_normal_equation_oracle(self):
        rng = np.random.default_rng(11)
        scatter = ScatterMatrix(rng.normal(0.0, 1.0, (20, 3)), rng.integers(0, 3, 20), 3)
        centers = fit_centers(scatter, 4, seed=2)
        widths = fit_widths(centers, scatter)
        ridge = 1e-4
        W, b = fit_output_weights(scatter, centers, widths, ridge=ridge)
        # direct solve of the same normal equations
        diff = scatter.projected[:, None, :] - centers[None, :, :]
        phi = np.exp(-(diff**2).sum(axis=2) / (2.0 * widths**2))
        phi_b = np.hstack([phi, np.ones((20, 1))])
        targets = np.zeros((20, 3))
        targets[np.arange(20), scatter.labels] = 1.0
        penalty = np.diag(np.append(np.ones(4), 0.0))
        beta = np.linalg.solve(phi_b.T @ phi_b + ridge * penalty, phi_b.T @ targets)
        np.testing.assert_allclose(W, beta[:-1].T, atol=1e-9)
        np.testing.assert_allclose(b, beta[-1], atol=1e-9)

    def test_singular_without_ridge(self):
        rng = np.random.default_rng(12)
        pts = rng.normal(0.0, 2.0, (5, 2))
        scatter = ScatterMatrix(pts, np.array([0, 1, 0, 1, 0]), 2)
        widths = fit_widths(pts)
        with pytest.raises(NumericError):
            fit_output_weights(scatter, pts, widths, ridge=0.0)

    def test_no_bias_mode(self):
        rng = np.random.default_rng(13)
        scatter = ScatterMatrix(rng.normal(0.0, 1.0, (30, 3)), rng.integers(0, 2, 30), 2)
        centers = fit_centers(scatter, 4, seed=0)
        widths = fit_widths(centers, scatter)
        _, b = fit_output_weights(scatter, centers, widths, include_bias=False)
        np.testing.assert_array_equal(b, np.zeros(2))


class TestTrain:
    def test_nine_tight_clusters(self):
        rng = np.random.default_rng(14)
        scatter, _ = blobs(rng)
        model = train(scatter, n_centers=14, seed=0)
        correct = sum(predict(model, x).decided_class == y for x, y in zip(scatter.projected, scatter.labels))
        assert correct / scatter.n_samples >= 0.99

    def test_reference_shapes(self):
        rng = np.random.default_rng(15)
        scatter, _ = blobs(rng)
        model = train(scatter, n_centers=14, seed=0)
        assert model.centers.shape == (14, 8)
        assert model.widths.shape == (14,)
        assert model.weights.shape == (9, 14)

    def test_single_class_always_wins(self):
        rng = np.random.default_rng(16)
        X = rng.normal(0.0, 1.0, (25, 3))
        scatter = ScatterMatrix(X, np.zeros(25, dtype=int), 1)
        model = train(scatter, n_centers=4, seed=0)
        for _ in range(20):
            assert predict(model, rng.normal(0.0, 2.0, 3)).decided_class == 0

    def test_deterministic(self):
        rng = np.random.default_rng(17)
        scatter, _ = blobs(rng, n_classes=3, per_class=20, p=4)
        m1 = train(scatter, n_centers=5, seed=9)
        m2 = train(scatter, n_centers=5, seed=9)
        np.testing.assert_array_equal(m1.centers, m2.centers)
        np.testing.assert_array_equal(m1.weights, m2.weights)
        np.testing.assert_array_equal(m1.bias, m2.bias)
