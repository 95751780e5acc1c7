"""Multinomial naive Bayes over nonnegative count/weight features.

Class priors come from label frequencies; per-class feature likelihoods
are multinomial estimates with additive smoothing.  Prediction picks the
class maximizing prior times likelihood, computed in log space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .io import MODEL_FORMAT_VERSION, array_from_json, array_to_json, check_header


@dataclass
class NaiveBayesModel:
    classes: np.ndarray
    class_log_priors: np.ndarray          # (C,)
    feature_log_likelihoods: np.ndarray   # (C, D)
    smoothing: float

    def log_joint(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return self.class_log_priors + X @ self.feature_log_likelihoods.T

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Posterior over classes, rows summing to 1."""
        joint = self.log_joint(X)
        joint -= joint.max(axis=1, keepdims=True)
        probs = np.exp(joint)
        return probs / probs.sum(axis=1, keepdims=True)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes[np.argmax(self.log_joint(X), axis=1)]

    def to_json(self) -> str:
        return json.dumps({
            "version": MODEL_FORMAT_VERSION,
            "kind": "naive_bayes",
            "classes": self.classes.tolist(),
            "class_log_priors": array_to_json(self.class_log_priors),
            "feature_log_likelihoods": array_to_json(self.feature_log_likelihoods),
            "smoothing": self.smoothing,
        })

    @classmethod
    def from_json(cls, payload: str) -> "NaiveBayesModel":
        data = json.loads(payload)
        check_header(data, "naive_bayes")
        return cls(
            classes=np.asarray(data["classes"], dtype=np.int64),
            class_log_priors=array_from_json(data["class_log_priors"]),
            feature_log_likelihoods=array_from_json(data["feature_log_likelihoods"]),
            smoothing=float(data["smoothing"]),
        )


def train_naive_bayes(X: np.ndarray, y: np.ndarray,
                      smoothing: float = 1.0) -> NaiveBayesModel:
    """Estimate priors and smoothed multinomial likelihoods from counts."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y) or len(X) == 0:
        raise ValueError("X must be a nonempty 2-D array matching y")
    if smoothing <= 0:
        raise ValueError(f"smoothing must be > 0, got {smoothing}")
    if np.any(X < 0):
        where = np.argwhere(X < 0)[0]
        raise ValueError(f"negative feature value at row {where[0]}, "
                         f"column {where[1]}")
    classes = np.unique(y)
    dim = X.shape[1]
    priors = np.empty(len(classes))
    likelihoods = np.empty((len(classes), dim))
    for ci, label in enumerate(classes):
        members = X[y == label]
        priors[ci] = len(members) / len(y)
        sums = members.sum(axis=0) + smoothing
        likelihoods[ci] = np.log(sums / sums.sum())
    return NaiveBayesModel(
        classes=classes,
        class_log_priors=np.log(priors),
        feature_log_likelihoods=likelihoods,
        smoothing=smoothing,
    )
