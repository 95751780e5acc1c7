"""Shared helpers for versioned JSON model serialization.

Arrays are stored row-major with an explicit shape so files are
self-describing and diffable.
"""

from __future__ import annotations

import numpy as np

MODEL_FORMAT_VERSION = 1


def array_to_json(arr: np.ndarray) -> dict:
    arr = np.asarray(arr, dtype=np.float64)
    return {"shape": list(arr.shape), "data": arr.reshape(-1).tolist()}


def array_from_json(obj: dict) -> np.ndarray:
    return np.asarray(obj["data"], dtype=np.float64).reshape(obj["shape"])


def check_header(data: dict, kind: str) -> None:
    if data.get("kind") != kind:
        raise ValueError(f"expected a {kind!r} model, got {data.get('kind')!r}")
    if data.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {data.get('version')!r}")
