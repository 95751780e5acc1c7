"""CART decision tree with the squared-fraction purity criterion.

Node purity is scored as G = sum_i p_i^2 over class fractions, so G is
1 for a pure node and 1/k for a uniform k-class node; splits maximize
the size-weighted purity of the two children.  Ties are broken toward
the lowest feature index, then the lowest threshold, which makes
training fully deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .io import MODEL_FORMAT_VERSION, check_header

_SUM_TOL = 1e-12


def gini_index(class_fractions: tuple[float, float]) -> float:
    """Purity of a two-class split: p1**2 + p2**2.

    The fractions must be nonnegative and sum to 1 (within 1e-12).  For
    any such pair the value lies in [0.5, 1.0]: 0.5 at an even split and
    1.0 at a pure node.
    """
    p1, p2 = class_fractions
    if p1 < 0 or p2 < 0:
        raise ValueError(f"class fractions must be nonnegative: ({p1}, {p2})")
    if abs((p1 + p2) - 1.0) > _SUM_TOL:
        raise ValueError(f"class fractions must sum to 1: ({p1}, {p2})")
    value = p1 * p1 + p2 * p2
    assert 0.5 - _SUM_TOL <= value <= 1.0 + _SUM_TOL
    return value


def _purity(counts: np.ndarray) -> float:
    """sum of squared class fractions for arbitrary class counts."""
    n = counts.sum()
    if n == 0:
        return 1.0
    fractions = counts / n
    return float(np.dot(fractions, fractions))


@dataclass
class TreeNode:
    counts: np.ndarray                   # class counts of the training samples here
    feature: int | None = None           # None marks a leaf
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def to_dict(self) -> dict:
        out: dict = {"counts": self.counts.tolist()}
        if not self.is_leaf:
            out.update(feature=self.feature, threshold=self.threshold,
                       left=self.left.to_dict(), right=self.right.to_dict())
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        node = cls(counts=np.asarray(data["counts"], dtype=np.int64))
        if "feature" in data:
            node.feature = int(data["feature"])
            node.threshold = float(data["threshold"])
            node.left = cls.from_dict(data["left"])
            node.right = cls.from_dict(data["right"])
        return node


@dataclass
class DecisionTreeModel:
    root: TreeNode
    classes: np.ndarray

    def predict_one(self, x: np.ndarray) -> int:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return int(self.classes[int(np.argmax(node.counts))])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.array([self.predict_one(x) for x in X], dtype=np.int64)

    def depth(self) -> int:
        def walk(node: TreeNode) -> int:
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))
        return walk(self.root)

    def to_json(self) -> str:
        return json.dumps({
            "version": MODEL_FORMAT_VERSION,
            "kind": "decision_tree",
            "classes": self.classes.tolist(),
            "root": self.root.to_dict(),
        })

    @classmethod
    def from_json(cls, payload: str) -> "DecisionTreeModel":
        data = json.loads(payload)
        check_header(data, "decision_tree")
        return cls(root=TreeNode.from_dict(data["root"]),
                   classes=np.asarray(data["classes"], dtype=np.int64))


def _best_split(X: np.ndarray, y_idx: np.ndarray, n_classes: int,
                min_leaf: int) -> tuple[int, float] | None:
    """Exhaustive search over (feature, midpoint threshold) pairs.

    Returns the split maximizing size-weighted child purity, or None when
    no split separates the samples.  Strict improvement keeps the first
    candidate found, enforcing the lowest-feature / lowest-threshold tie
    rule.
    """
    n, dim = X.shape
    best: tuple[int, float] | None = None
    best_score = -1.0
    for feature in range(dim):
        column = X[:, feature]
        order = np.argsort(column, kind="stable")
        sorted_vals = column[order]
        sorted_idx = y_idx[order]
        left_counts = np.zeros(n_classes)
        right_counts = np.bincount(y_idx, minlength=n_classes).astype(np.float64)
        for i in range(n - 1):
            left_counts[sorted_idx[i]] += 1
            right_counts[sorted_idx[i]] -= 1
            if sorted_vals[i] == sorted_vals[i + 1]:
                continue
            n_left = i + 1
            n_right = n - n_left
            if n_left < min_leaf or n_right < min_leaf:
                continue
            threshold = (sorted_vals[i] + sorted_vals[i + 1]) / 2.0
            score = (n_left * _purity(left_counts)
                     + n_right * _purity(right_counts)) / n
            if score > best_score:
                best_score = score
                best = (feature, float(threshold))
    return best


def train_decision_tree(X: np.ndarray, y: np.ndarray,
                        max_depth: int | None = None,
                        min_leaf: int = 1) -> DecisionTreeModel:
    """Grow a binary CART greedily until depth, leaf-size or purity stops."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y) or len(X) == 0:
        raise ValueError("X must be a nonempty 2-D array matching y")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    classes, y_idx = np.unique(y, return_inverse=True)
    n_classes = len(classes)

    def build(indices: np.ndarray, depth: int) -> TreeNode:
        counts = np.bincount(y_idx[indices], minlength=n_classes)
        node = TreeNode(counts=counts)
        if (np.count_nonzero(counts) <= 1
                or (max_depth is not None and depth >= max_depth)
                or len(indices) < 2 * min_leaf):
            return node
        split = _best_split(X[indices], y_idx[indices], n_classes, min_leaf)
        if split is None:
            return node
        feature, threshold = split
        mask = X[indices, feature] <= threshold
        node.feature = feature
        node.threshold = threshold
        node.left = build(indices[mask], depth + 1)
        node.right = build(indices[~mask], depth + 1)
        return node

    root = build(np.arange(len(y)), 0)
    return DecisionTreeModel(root=root, classes=classes)
