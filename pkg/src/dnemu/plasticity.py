"""Synaptic maintenance: per-synapse deviation tracking and grow/keep/trim calls.

Optional layer, off by default.  Each synapse keeps a running average ``beta``
of how far its pre-synaptic signal sits from its weight; the ratio of ``beta``
to the neuron-wide mean decides whether the synapse grows back, stays, or is
trimmed out of matching.  Trimming never deletes the weight value, so a regrown
synapse resumes exactly where it left off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import amnesic_update

GROW_DEFAULT = 1.0
TRIM_DEFAULT = 1.5

GROW, KEEP, TRIM = "grow", "keep", "trim"


@dataclass(frozen=True)
class MaintenanceConfig:
    enabled: bool = False
    grow_threshold: float = GROW_DEFAULT
    trim_threshold: float = TRIM_DEFAULT

    def __post_init__(self):
        if self.grow_threshold < 0 or self.trim_threshold < self.grow_threshold:
            raise ValueError("need 0 <= grow_threshold <= trim_threshold")


@dataclass
class SynapseStats:
    """Running deviation of one synapse and its neuron's live-synapse mean."""

    beta: float = 0.0
    neuron_mean_beta: float = 0.0


def update_deviation(beta, pre_signal, weight, age: int, gain: float = 1.0):
    """Fold ``|pre_signal - weight|`` into the running deviation average.

    Shares the amnesic schedule of the weight update; ``age`` is the owning
    neuron's firing age after incrementing.  Works componentwise on arrays.
    """
    beta = np.asarray(beta, dtype=np.float64)
    sample = np.abs(np.asarray(pre_signal, dtype=np.float64)
                    - np.asarray(weight, dtype=np.float64))
    return amnesic_update(beta, sample, age, gain)


def synaptogenic_decision(beta: float, mean_beta: float,
                          grow_threshold: float = GROW_DEFAULT,
                          trim_threshold: float = TRIM_DEFAULT) -> str:
    """Classify one synapse by its novelty ratio ``beta / mean_beta``.

    A ratio strictly below the grow threshold grows, strictly above the trim
    threshold trims, and both boundaries keep.  A zero mean (all synapses in
    perfect agreement) counts as ratio 1, i.e. keep.
    """
    if mean_beta < 0 or beta < 0:
        raise ValueError("deviations are nonnegative")
    ratio = 1.0 if mean_beta == 0.0 else beta / mean_beta
    if ratio < grow_threshold:
        return GROW
    if ratio > trim_threshold:
        return TRIM
    return KEEP


def decide_all(betas: np.ndarray, live: np.ndarray,
               grow_threshold: float = GROW_DEFAULT,
               trim_threshold: float = TRIM_DEFAULT) -> list[str]:
    """Per-synapse decisions against the mean deviation over live synapses."""
    betas = np.asarray(betas, dtype=np.float64)
    live = np.asarray(live, dtype=bool)
    mean_beta = float(betas[live].mean()) if live.any() else 0.0
    return [synaptogenic_decision(float(b), mean_beta, grow_threshold, trim_threshold)
            for b in betas]


def apply_maintenance(live: np.ndarray, decisions) -> np.ndarray:
    """Apply decisions to a live-synapse mask.

    Trim switches a synapse off; grow only re-enables a previously trimmed one
    (it cannot invent connections that never existed).  Weight values are the
    caller's and stay untouched either way.
    """
    live = np.asarray(live, dtype=bool).copy()
    if len(decisions) != live.shape[0]:
        raise ValueError("one decision per synapse required")
    for i, decision in enumerate(decisions):
        if decision == TRIM:
            live[i] = False
        elif decision == GROW:
            live[i] = True
        elif decision != KEEP:
            raise ValueError(f"unknown decision {decision!r}")
    return live
