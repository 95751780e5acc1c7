"""Binary linear SVM trained by stochastic subgradient descent.

Minimizes L2-regularized hinge loss

    (l2 / 2) * ||w||^2 + mean_i max(0, 1 - t_i (w.x_i + b))

with labels t in {-1, +1} mapped from {0, 1}.  The bias is not
regularized.  Updates are per-sample in a seeded shuffled order, so
training is deterministic per seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .io import MODEL_FORMAT_VERSION, array_from_json, array_to_json, check_header


@dataclass
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    regularization: float

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Sign rule: positive margin means class 1."""
        return (self.decision_function(X) > 0).astype(np.int64)

    def to_json(self) -> str:
        return json.dumps({
            "version": MODEL_FORMAT_VERSION,
            "kind": "linear_svm",
            "weights": array_to_json(self.weights),
            "bias": self.bias,
            "regularization": self.regularization,
        })

    @classmethod
    def from_json(cls, payload: str) -> "LinearSvmModel":
        data = json.loads(payload)
        check_header(data, "linear_svm")
        return cls(weights=array_from_json(data["weights"]),
                   bias=float(data["bias"]),
                   regularization=float(data["regularization"]))


def train_linear_svm(X: np.ndarray, y: np.ndarray, epochs: int = 100,
                     lr: float = 0.01, l2: float = 1e-3,
                     seed: int = 0) -> LinearSvmModel:
    """Fit the hinge-loss separator on labels in {0, 1}."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y) or len(X) == 0:
        raise ValueError("X must be a nonempty 2-D array matching y")
    present = set(np.unique(y).tolist())
    if not present <= {0, 1}:
        raise ValueError(f"labels must be 0/1, got {sorted(present)}")
    if len(present) < 2:
        raise ValueError("training data contains a single class")

    t = np.where(y == 1, 1.0, -1.0)
    n, dim = X.shape
    w = np.zeros(dim)
    b = 0.0
    rng = np.random.default_rng(seed)
    for _ in range(epochs):
        for i in rng.permutation(n):
            margin = t[i] * (X[i] @ w + b)
            if margin < 1.0:
                w += lr * (t[i] * X[i] - l2 * w)
                b += lr * t[i]
            else:
                w -= lr * l2 * w
    return LinearSvmModel(weights=w, bias=b, regularization=l2)
