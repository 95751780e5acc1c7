"""Linear SVM tests: separability, the sign rule, XOR ceiling, shrinkage."""

import numpy as np
import pytest

from docstruct.classifiers import LinearSvmModel, train_linear_svm

from .oracles import best_linear_accuracy_2d


def separable_1d(n=200, seed=0):
    rng = np.random.default_rng(seed)
    X = np.concatenate([rng.normal(-1.0, 0.2, n // 2),
                        rng.normal(1.0, 0.2, n // 2)]).reshape(-1, 1)
    y = np.array([0] * (n // 2) + [1] * (n // 2))
    return X, y


def test_separable_data_fit_perfectly():
    X, y = separable_1d()
    model = train_linear_svm(X, y, epochs=50, lr=0.05, l2=1e-3, seed=0)
    assert np.array_equal(model.predict(X), y)


def test_sign_rule():
    model = LinearSvmModel(weights=np.array([1.0]), bias=0.0,
                           regularization=0.0)
    assert model.predict(np.array([[3.0]]))[0] == 1
    assert model.predict(np.array([[-3.0]]))[0] == 0


def test_xor_accuracy_capped_by_best_separator():
    corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    labels = np.array([0, 1, 1, 0])
    # duplicating corners leaves per-point accuracy unchanged, so the
    # oracle only needs the 4 distinct points
    ceiling = best_linear_accuracy_2d(corners.tolist(), labels.tolist())
    assert ceiling == 0.75     # XOR admits no good linear separator
    X = np.repeat(corners, 50, axis=0)
    y = np.repeat(labels, 50)
    model = train_linear_svm(X, y, epochs=100, lr=0.05, l2=1e-3, seed=0)
    accuracy = float(np.mean(model.predict(X) == y))
    assert accuracy <= ceiling


def test_single_class_rejected():
    X = np.ones((5, 2))
    with pytest.raises(ValueError, match="single class"):
        train_linear_svm(X, np.zeros(5, dtype=int))


def test_deterministic_per_seed():
    X, y = separable_1d(seed=5)
    a = train_linear_svm(X, y, epochs=20, seed=42)
    b = train_linear_svm(X, y, epochs=20, seed=42)
    np.testing.assert_array_equal(a.weights, b.weights)
    assert a.bias == b.bias


def test_stronger_regularization_never_grows_weights():
    X, y = separable_1d(seed=2)
    norms = []
    for l2 in (1e-3, 1e-2, 1e-1):
        model = train_linear_svm(X, y, epochs=200, lr=0.05, l2=l2, seed=0)
        norms.append(float(np.linalg.norm(model.weights)))
    assert norms[0] >= norms[1] >= norms[2]


def test_json_round_trip():
    X, y = separable_1d(seed=3)
    model = train_linear_svm(X, y, epochs=10, seed=1)
    revived = LinearSvmModel.from_json(model.to_json())
    np.testing.assert_array_equal(revived.weights, model.weights)
    assert revived.bias == model.bias
    assert np.array_equal(revived.predict(X), model.predict(X))
