"""Input validation helpers for pattern vectors and pattern matrices."""

from __future__ import annotations

import numpy as np


def check_pattern(values, dim: int | None = None, name: str = "pattern") -> np.ndarray:
    """Coerce to a 1-D float64 vector with components in [0, 1]."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} must have dimension {dim}, got {arr.shape[0]}")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError(f"{name} components must lie in [0, 1]")
    return arr


def check_pattern_matrix(values, dim: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 matrix of row patterns with components in [0, 1]."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"{name} must have {dim} columns, got {arr.shape[1]}")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError(f"{name} components must lie in [0, 1]")
    return arr


def check_mask(values, dim: int, name: str = "mask") -> np.ndarray:
    """Coerce to a boolean attention mask with at least one component attended."""
    arr = np.asarray(values, dtype=bool)
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise ValueError(f"{name} must be a boolean vector of dimension {dim}")
    if not arr.any():
        raise ValueError(f"{name} must attend to at least one component")
    return arr
