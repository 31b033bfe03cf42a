"""Shared numeric primitives: direction normalization and amnesic averaging."""

from __future__ import annotations

import numpy as np


def normalize(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to unit Euclidean length.

    The zero vector has no direction and maps to the zero vector, so a fully
    masked-off pattern contributes nothing to a match score instead of raising.
    """
    v = np.asarray(v, dtype=np.float64)
    n = float(np.sqrt((v * v).sum()))
    if n == 0.0:
        return np.zeros_like(v)
    return v / n


def amnesic_update(value: np.ndarray, sample: np.ndarray, age: int, gain: float = 1.0) -> np.ndarray:
    """One step of the recursive running mean ``v <- w1(n) v + w2(n) s``.

    ``age`` is the firing count *after* incrementing, ``w2 = gain / age``
    clamped to 1, ``w1 = 1 - w2``.  Computed in the residual form
    ``v + w2 (s - v)`` which is algebraically identical and leaves ``value``
    bit-exactly unchanged when ``sample == value``.  With ``gain == 1`` the
    result after ``n`` updates is the equally weighted batch mean of the
    samples; ``w2 == 1`` (first firing) overwrites outright so initial values
    never leak into the estimate.
    """
    if age < 1:
        raise ValueError("amnesic_update requires the post-increment age (>= 1)")
    w2 = min(gain / age, 1.0)
    if w2 == 1.0:
        return sample.astype(np.float64, copy=True)
    return value + w2 * (sample - value)


def unit_rows(m: np.ndarray) -> np.ndarray:
    """Row-wise :func:`normalize`; zero rows stay zero."""
    m = np.asarray(m, dtype=np.float64)
    norms = np.sqrt((m * m).sum(axis=1))
    safe = np.where(norms == 0.0, 1.0, norms)
    return m / safe[:, None]
