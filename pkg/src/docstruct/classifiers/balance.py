"""Class balancing by seeded downsampling."""

from __future__ import annotations

from typing import Sequence, TypeVar

import numpy as np

S = TypeVar("S")


def balance_dataset(samples: Sequence[tuple[S, int]], seed: int,
                    classes: Sequence[int] | None = None,
                    ) -> list[tuple[S, int]]:
    """Downsample every class to the minority-class count.

    Sampling is without replacement via a seeded shuffle, so the result
    is deterministic per seed.  When ``classes`` is given, any class with
    zero samples raises a ValueError naming it; otherwise the classes are
    taken from the data.
    """
    by_class: dict[int, list[tuple[S, int]]] = {}
    for sample in samples:
        by_class.setdefault(sample[1], []).append(sample)
    if classes is not None:
        for label in classes:
            if not by_class.get(label):
                raise ValueError(f"class {label} has zero samples")
    if not by_class:
        return []
    rng = np.random.default_rng(seed)
    quota = min(len(group) for group in by_class.values())
    balanced: list[tuple[S, int]] = []
    for label in sorted(by_class):
        group = by_class[label]
        order = rng.permutation(len(group))[:quota]
        balanced.extend(group[i] for i in order)
    # interleave classes so mini-batch training sees a mixed stream
    final_order = rng.permutation(len(balanced))
    return [balanced[i] for i in final_order]
