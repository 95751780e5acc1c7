"""Evaluation harness: document-level splits and per-class metrics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ClassMetrics:
    """Per-class precision/recall/F1 with supports and macro averages."""

    classes: tuple[int, ...]
    precision: dict[int, float]
    recall: dict[int, float]
    f1: dict[int, float]
    support: dict[int, int]
    macro_precision: float
    macro_recall: float
    macro_f1: float

    def to_json(self) -> str:
        return json.dumps({
            "classes": list(self.classes),
            "per_class": {
                str(c): {"precision": self.precision[c],
                         "recall": self.recall[c],
                         "f1": self.f1[c],
                         "support": self.support[c]}
                for c in self.classes
            },
            "macro": {"precision": self.macro_precision,
                      "recall": self.macro_recall,
                      "f1": self.macro_f1},
        })

    def format_table(self) -> str:
        """Aligned plain-text metrics table."""
        rows = [("class", "precision", "recall", "f1", "support")]
        for c in self.classes:
            rows.append((str(c), f"{self.precision[c]:.4f}",
                         f"{self.recall[c]:.4f}", f"{self.f1[c]:.4f}",
                         str(self.support[c])))
        rows.append(("macro", f"{self.macro_precision:.4f}",
                     f"{self.macro_recall:.4f}", f"{self.macro_f1:.4f}",
                     str(sum(self.support.values()))))
        widths = [max(len(row[i]) for row in rows) for i in range(5)]
        return "\n".join(
            "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
            for row in rows)


def train_test_split(doc_ids: Sequence[str], fraction: float = 0.6,
                     seed: int = 0) -> tuple[list[str], list[str]]:
    """Seeded shuffle-and-cut of document ids (never of lines).

    The split boundary sits at ``floor(fraction * N)`` documents, keeping
    whole documents on one side so no line-level leakage can occur.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    ids = list(doc_ids)
    if len(ids) < 2:
        raise ValueError(f"need at least 2 documents to split, got {len(ids)}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    cut = int(fraction * len(ids))
    train = [ids[i] for i in order[:cut]]
    test = [ids[i] for i in order[cut:]]
    return train, test


def compute_metrics(predicted: Sequence[int], gold: Sequence[int],
                    ) -> ClassMetrics:
    """Confusion-matrix precision/recall/F1 per class plus macro average.

    Classes are the union of values seen in either sequence; a class with
    zero predicted (or zero gold) occurrences gets precision (recall) 0.
    """
    predicted = np.asarray(predicted, dtype=np.int64)
    gold = np.asarray(gold, dtype=np.int64)
    if len(predicted) != len(gold):
        raise ValueError(f"length mismatch: {len(predicted)} predictions "
                         f"vs {len(gold)} gold labels")
    if len(gold) == 0:
        raise ValueError("empty label sequences")
    classes = tuple(sorted(set(predicted.tolist()) | set(gold.tolist())))
    precision: dict[int, float] = {}
    recall: dict[int, float] = {}
    f1: dict[int, float] = {}
    support: dict[int, int] = {}
    for c in classes:
        tp = int(np.sum((predicted == c) & (gold == c)))
        fp = int(np.sum((predicted == c) & (gold != c)))
        fn = int(np.sum((predicted != c) & (gold == c)))
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        precision[c] = p
        recall[c] = r
        f1[c] = 2 * p * r / (p + r) if p + r else 0.0
        support[c] = tp + fn
    return ClassMetrics(
        classes=classes,
        precision=precision, recall=recall, f1=f1, support=support,
        macro_precision=sum(precision.values()) / len(classes),
        macro_recall=sum(recall.values()) / len(classes),
        macro_f1=sum(f1.values()) / len(classes),
    )
