"""Scikit-learn style front end: fit on context/next-state pattern arrays,
predict next-state patterns, score by exact-match rate.

This wraps the incremental engine for batch-shaped workflows (pipelines,
`clone`, grid search); streaming supervision, attention masks, and snapshots
stay on :class:`dnemu.network.Network` itself.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .grounding import TrainingTriple
from .network import Network, StepInput
from .validation import check_pattern_matrix


def triples_to_arrays(triples: list[TrainingTriple]) -> tuple[np.ndarray, np.ndarray]:
    """Stack training triples into (X, y): X is [z | x] rows, y the next states."""
    if not triples:
        raise ValueError("no triples given")
    X = np.stack([np.concatenate([t.z, t.x]) for t in triples])
    y = np.stack([t.z_next for t in triples])
    return X, y


class TransitionEmulator(BaseEstimator):
    """Learns a pattern transition map one observation at a time.

    Rows of ``X`` are concatenated (state, input) context patterns; rows of
    ``y`` are the supervised next-state patterns, whose width fixes the state
    dimension.  ``capacity`` defaults to the number of fit samples, enough for
    one neuron per distinct context.

    Parameters
    ----------
    capacity : int or None
        Hidden-neuron budget; None sizes it to the training set.
    k : int
        Winners per competition; 1 is winner-take-all and what the error-free
        guarantee assumes.
    seed : int
        Seeds the (always overwritten) initial weights; results are seed
        independent by construction.
    epochs : int
        Supervised passes over the data in :meth:`fit`.
    learning_gain : float
        Multiplier on the hidden-layer learning rate.
    """

    def __init__(self, capacity: int | None = None, k: int = 1, seed: int = 0,
                 epochs: int = 1, learning_gain: float = 1.0):
        self.capacity = capacity
        self.k = k
        self.seed = seed
        self.epochs = epochs
        self.learning_gain = learning_gain

    def _split(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z_dim = self.z_dim_
        if X.shape[1] != z_dim + self.x_dim_:
            raise ValueError(f"X must have {z_dim + self.x_dim_} columns")
        return X[:, :z_dim], X[:, z_dim:]

    def fit(self, X, y) -> "TransitionEmulator":
        X = check_pattern_matrix(X, name="X")
        y = check_pattern_matrix(y, name="y")
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y must have the same number of rows")
        if y.shape[1] >= X.shape[1]:
            raise ValueError("X rows must be [state | input], wider than y rows")
        self.z_dim_ = y.shape[1]
        self.x_dim_ = X.shape[1] - y.shape[1]
        capacity = self.capacity if self.capacity is not None else X.shape[0]
        self.network_ = Network(self.z_dim_, self.x_dim_, capacity, k=self.k,
                                seed=self.seed)
        for _ in range(self.epochs):
            self._teach(X, y)
        self.n_recruited_ = self.network_.y.n_initialized
        return self

    def partial_fit(self, X, y) -> "TransitionEmulator":
        """One incremental supervised pass; creates the network on first call."""
        if not hasattr(self, "network_"):
            return self.fit(X, y)
        X = check_pattern_matrix(X, self.z_dim_ + self.x_dim_, name="X")
        y = check_pattern_matrix(y, self.z_dim_, name="y")
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y must have the same number of rows")
        self._teach(X, y)
        self.n_recruited_ = self.network_.y.n_initialized
        return self

    def _teach(self, X: np.ndarray, y: np.ndarray) -> None:
        zs, xs = self._split(X)
        for z, x, z_next in zip(zs, xs, y):
            self.network_.step(StepInput(z, x, z_supervised=True,
                                         x_supervised=True, z_next=z_next,
                                         learning_gain=self.learning_gain))

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "network_"):
            raise ValueError("estimator is not fitted")
        X = check_pattern_matrix(X, self.z_dim_ + self.x_dim_, name="X")
        zs, xs = self._split(X)
        return np.stack([self.network_.query(z, x).z_pred for z, x in zip(zs, xs)])

    def score(self, X, y) -> float:
        """Fraction of rows whose predicted pattern matches ``y`` bit-exactly."""
        y = check_pattern_matrix(y, name="y")
        pred = self.predict(X)
        if pred.shape != y.shape:
            raise ValueError("y has the wrong shape")
        return float(np.all(pred == y, axis=1).mean())
