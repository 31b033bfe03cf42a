"""The learner core: a bank of two-part hidden neurons competing over
(state, input) contexts, plus frequency-weighted projections that predict the
next state and next input patterns.

One :meth:`Network.step` is one full two-phase update.  First half-step: the
hidden bank matches the current context, the single best (or top-k) neuron
fires, and either a fresh neuron is recruited for a novel supervised context or
the winners fold the context into their running averages.  Second half-step:
the state/input ports predict from the new hidden response, and any supervised
next patterns are folded into the projection frequencies.  Discrete time
advances by two per step, one tick per half.

All mutation is deterministic: ties break to the lowest neuron index, and the
random initial weights are always overwritten on recruitment, so networks with
different seeds taught identically end up with identical initialized weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import plasticity
from .grounding import apply_mask
from .numerics import amnesic_update, normalize, unit_rows
from .validation import check_mask, check_pattern

# An exact two-part match scores 2.0 (cosine 1 on each part).  Anything at
# least 2 - EPSILON counts as the same context; the slack only guards float
# noise because binary fixtures match exactly.
PERFECT_MATCH = 2.0
EPSILON = 1e-9


@dataclass(frozen=True)
class StepInput:
    """One port observation: the current (z, x) context plus supervision.

    ``z_supervised`` marks the context as teacher-written, which is what
    permits hidden-bank learning and recruitment on this step.  ``z_next`` /
    ``x_next``, when given, are the environment's values for the ports on the
    step's second half — supplying one teaches the just-fired winner to predict
    it.  They require the matching supervised flag.
    """

    z: np.ndarray
    x: np.ndarray
    z_supervised: bool = False
    x_supervised: bool = False
    z_next: np.ndarray | None = None
    x_next: np.ndarray | None = None
    z_mask: np.ndarray | None = None
    x_mask: np.ndarray | None = None
    learning_gain: float = 1.0


@dataclass(frozen=True)
class StepOutput:
    """Trace of one step: who fired, how well, and what the ports predict."""

    winner_ids: tuple[int, ...]
    y_response: np.ndarray
    z_pred: np.ndarray
    x_pred: np.ndarray
    recruited: bool
    pre_responses: np.ndarray
    z_pred_graded: np.ndarray
    x_pred_graded: np.ndarray


@dataclass
class Neuron:
    """Inspection copy of one hidden neuron."""

    top_down: np.ndarray
    bottom_up: np.ndarray
    age: int
    initialized: bool
    top_live: np.ndarray
    bottom_live: np.ndarray


class YArea:
    """The hidden bank: two-part weights, firing ages, live-synapse masks.

    Initialized neurons always occupy the prefix ``[0, n_initialized)`` because
    recruitment takes the lowest free index.  Uninitialized rows keep their
    random starting weights; they never compete, and recruitment overwrites
    them outright.
    """

    def __init__(self, capacity: int, z_dim: int, x_dim: int, k: int = 1,
                 rng: np.random.Generator | None = None):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        if not 1 <= k <= capacity:
            raise ValueError("need 1 <= k <= capacity")
        rng = rng or np.random.default_rng()
        self.capacity, self.k = capacity, k
        self.z_dim, self.x_dim = z_dim, x_dim
        self.top_down = rng.random((capacity, z_dim))
        self.bottom_up = rng.random((capacity, x_dim))
        self.ages = np.zeros(capacity, dtype=np.int64)
        self.top_live = np.ones((capacity, z_dim), dtype=bool)
        self.bottom_live = np.ones((capacity, x_dim), dtype=bool)
        self.n_initialized = 0
        self._units = None  # cached unit rows of the initialized prefix

    def neuron(self, j: int) -> Neuron:
        return Neuron(self.top_down[j].copy(), self.bottom_up[j].copy(),
                      int(self.ages[j]), j < self.n_initialized,
                      self.top_live[j].copy(), self.bottom_live[j].copy())

    def _invalidate(self):
        self._units = None

    def _all_live(self) -> bool:
        n = self.n_initialized
        return bool(self.top_live[:n].all() and self.bottom_live[:n].all())

    def masked_direction(self, j: int, z: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """The context as neuron ``j`` receives it: dead synapses excluded from
        each part before normalization, re-embedded as zeros."""
        top = np.zeros(self.z_dim)
        bottom = np.zeros(self.x_dim)
        lt, lb = self.top_live[j], self.bottom_live[j]
        top[lt] = normalize(z[lt])
        bottom[lb] = normalize(x[lb])
        return top, bottom

    def pre_response(self, j: int, z: np.ndarray, x: np.ndarray) -> float:
        """Two-part match score: unit top-down weight against the unit state
        pattern plus unit bottom-up weight against the unit input pattern,
        each part restricted to the neuron's live synapses."""
        lt, lb = self.top_live[j], self.bottom_live[j]
        v_t = float(np.dot(normalize(self.top_down[j][lt]), normalize(z[lt])))
        v_b = float(np.dot(normalize(self.bottom_up[j][lb]), normalize(x[lb])))
        return v_t + v_b

    def pre_responses(self, z: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Match scores of all initialized neurons (NaN for uninitialized)."""
        pres = np.full(self.capacity, np.nan)
        n = self.n_initialized
        if n == 0:
            return pres
        if self._all_live():
            if self._units is None:
                self._units = (unit_rows(self.top_down[:n]),
                               unit_rows(self.bottom_up[:n]))
            ut, ub = self._units
            # elementwise product + axis sum keeps the reduction order simple
            # enough for an independent scalar scan to reproduce bit-exactly
            pres[:n] = (ut * normalize(z)).sum(axis=1) + (ub * normalize(x)).sum(axis=1)
        else:
            for j in range(n):
                pres[j] = self.pre_response(j, z, x)
        return pres

    def compete(self, z: np.ndarray, x: np.ndarray) -> tuple[tuple[int, ...], np.ndarray, np.ndarray]:
        """Winner-take-all (or top-k) over the initialized prefix.

        Ties break to the lowest index.  For k = 1 the winner responds with 1.
        For k > 1 the winners' responses rescale linearly so the best is 1 and
        the (k+1)-th best would be 0 (floor 0 when fewer neurons exist); an
        all-tied committee responds with 1 throughout.
        """
        pres = self.pre_responses(z, x)
        response = np.zeros(self.capacity)
        n = self.n_initialized
        if n == 0:
            return (), response, pres
        if self.k == 1:
            j = int(np.argmax(pres[:n]))
            response[j] = 1.0
            return (j,), response, pres
        order = np.argsort(-pres[:n], kind="stable")
        winners = tuple(int(j) for j in order[: self.k])
        floor = float(pres[order[self.k]]) if n > self.k else 0.0
        top = float(pres[winners[0]])
        if top > floor:
            for j in winners:
                response[j] = (float(pres[j]) - floor) / (top - floor)
        else:
            for j in winners:
                response[j] = 1.0
        return winners, response, pres

    def recruit(self, z: np.ndarray, x: np.ndarray) -> int | None:
        """Initialize the lowest free neuron to exactly this context.

        Stores the per-part unit directions, i.e. the neuron's first amnesic
        firing, so later perfect re-matches average with identical values.
        Returns None when the pool is exhausted; the caller then falls back to
        updating the best existing match.
        """
        if self.n_initialized >= self.capacity:
            return None
        j = self.n_initialized
        self.top_down[j] = normalize(z)
        self.bottom_up[j] = normalize(x)
        self.ages[j] = 1
        self.n_initialized += 1
        self._invalidate()
        return j

    def hebbian_update(self, j: int, z: np.ndarray, x: np.ndarray,
                       response: float, gain: float = 1.0) -> None:
        """Fold the fired context into neuron ``j``'s running average.

        The firing age increments first; the weight then moves toward
        ``response * direction`` with step ``gain / age`` (clamped to 1, so a
        first firing overwrites whatever initialization was there).  Dead
        synapses are excluded from the direction and left untouched.
        """
        if response <= 0:
            raise ValueError("hebbian update requires a firing neuron (response > 0)")
        self.ages[j] += 1
        age = int(self.ages[j])
        top_dir, bottom_dir = self.masked_direction(j, z, x)
        lt, lb = self.top_live[j], self.bottom_live[j]
        self.top_down[j][lt] = amnesic_update(
            self.top_down[j], response * top_dir, age, gain)[lt]
        self.bottom_up[j][lb] = amnesic_update(
            self.bottom_up[j], response * bottom_dir, age, gain)[lb]
        self._invalidate()

    def set_live(self, j: int, top_live: np.ndarray, bottom_live: np.ndarray) -> None:
        self.top_live[j] = top_live
        self.bottom_live[j] = bottom_live
        self._invalidate()


class ProjectionArea:
    """Per-target-neuron firing frequencies over the hidden bank (one row per
    output component, rows of initialized targets sum to 1)."""

    def __init__(self, target_dim: int, capacity: int):
        self.weights = np.zeros((target_dim, capacity))
        self.ages = np.zeros(target_dim, dtype=np.int64)

    def update(self, response: np.ndarray, target: np.ndarray) -> None:
        """Average the hidden response into every target component that fires.

        The response is L1-normalized first (a no-op for a single winner) so
        each row stays a distribution over hidden neurons.  Components at 0 in
        the target do not fire and keep their memory untouched.  Nothing
        happens when no hidden neuron fired: there is no event to count.
        """
        total = float(response.sum())
        if total <= 0.0:
            return
        share = response if total == 1.0 else response / total
        for i in np.flatnonzero(target > 0):
            self.ages[i] += 1
            self.weights[i] = amnesic_update(self.weights[i], share, int(self.ages[i]))

    def predict(self, response: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Threshold firing: a component fires at 1 whenever its accumulated
        evidence for the current response is strictly positive.  Rows that
        never fired are all-zero and stay silent.  Returns (binary, graded)."""
        graded = (self.weights * response).sum(axis=1)
        return (graded > 0.0).astype(np.float64), graded


class Network:
    """Dimensions, hidden bank, both projections, and the discrete clock.

    Single-writer: all mutation flows through :meth:`step`.  :meth:`query` is a
    read-only evaluation of a context and is safe on a shared snapshot.
    """

    def __init__(self, z_dim: int, x_dim: int, capacity: int, k: int = 1,
                 seed: int = 0, maintenance: plasticity.MaintenanceConfig | None = None):
        if z_dim < 1 or x_dim < 1:
            raise ValueError("pattern dimensions must be positive")
        self.z_dim, self.x_dim = int(z_dim), int(x_dim)
        self.seed = int(seed)
        self.y = YArea(capacity, z_dim, x_dim, k=k,
                       rng=np.random.default_rng(self.seed))
        self.to_z = ProjectionArea(z_dim, capacity)
        self.to_x = ProjectionArea(x_dim, capacity)
        self.t = 0
        self.recruit_refusals = 0
        self.maintenance = maintenance or plasticity.MaintenanceConfig()
        self.deviations = (np.zeros((capacity, z_dim + x_dim))
                           if self.maintenance.enabled else None)

    @property
    def capacity(self) -> int:
        return self.y.capacity

    @property
    def k(self) -> int:
        return self.y.k

    def _checked(self, inp: StepInput) -> tuple[np.ndarray, np.ndarray, StepInput]:
        z = check_pattern(inp.z, self.z_dim, "z")
        x = check_pattern(inp.x, self.x_dim, "x")
        if inp.learning_gain <= 0:
            raise ValueError("learning_gain must be positive")
        if inp.z_next is not None and not inp.z_supervised:
            raise ValueError("z_next requires z_supervised")
        if inp.x_next is not None and not inp.x_supervised:
            raise ValueError("x_next requires x_supervised")
        if inp.z_mask is not None:
            z = apply_mask(z, check_mask(inp.z_mask, self.z_dim, "z_mask"))
        if inp.x_mask is not None:
            x = apply_mask(x, check_mask(inp.x_mask, self.x_dim, "x_mask"))
        return z, x, inp

    def step(self, inp: StepInput) -> StepOutput:
        """One full two-phase update; advances the clock by two ticks."""
        out = self._advance(inp, learn=True)
        self.t += 2
        return out

    def query(self, z: np.ndarray, x: np.ndarray,
              z_mask: np.ndarray | None = None,
              x_mask: np.ndarray | None = None) -> StepOutput:
        """Evaluate a context without learning or advancing time."""
        return self._advance(StepInput(z, x, z_mask=z_mask, x_mask=x_mask),
                             learn=False)

    def _advance(self, inp: StepInput, learn: bool) -> StepOutput:
        z, x, inp = self._checked(inp)

        # First half-step: the hidden bank competes on the (masked) context.
        winners, response, pres = self.y.compete(z, x)
        recruited = False
        if learn and inp.z_supervised:
            perfect = bool(winners) and pres[winners[0]] >= PERFECT_MATCH - EPSILON
            if perfect:
                self._fire(winners, response, z, x, inp.learning_gain)
            else:
                j = self.y.recruit(z, x)
                if j is None:
                    # pool exhausted: the nearest memory absorbs the novelty
                    self.recruit_refusals += 1
                    self._fire(winners, response, z, x, inp.learning_gain)
                else:
                    recruited = True
                    winners = (j,)
                    response = np.zeros(self.capacity)
                    response[j] = 1.0

        # Second half-step: ports predict from the new response, then fold in
        # whatever the environment supervises for them.
        z_pred, z_graded = self.to_z.predict(response)
        x_pred, x_graded = self.to_x.predict(response)
        if learn and inp.z_next is not None:
            self.to_z.update(response, check_pattern(inp.z_next, self.z_dim, "z_next"))
        if learn and inp.x_next is not None:
            self.to_x.update(response, check_pattern(inp.x_next, self.x_dim, "x_next"))

        return StepOutput(winners, response, z_pred, x_pred, recruited, pres,
                          z_graded, x_graded)

    def _fire(self, winners: tuple[int, ...], response: np.ndarray,
              z: np.ndarray, x: np.ndarray, gain: float) -> None:
        """Hebbian-update every firing winner; losers keep their memory."""
        for j in winners:
            r = float(response[j])
            if r <= 0.0:
                continue
            if self.maintenance.enabled:
                self._maintain(j, z, x, gain)
            self.y.hebbian_update(j, z, x, r, gain)

    def _maintain(self, j: int, z: np.ndarray, x: np.ndarray, gain: float) -> None:
        """Deviation bookkeeping and grow/trim for one about-to-fire neuron.

        Deviations compare the incoming direction against the weights the
        synapses actually held while matching, so they update before the
        weight moves; mask changes land after, effective from the next firing.
        """
        top_dir, bottom_dir = self.y.masked_direction(j, z, x)
        signal = np.concatenate([top_dir, bottom_dir])
        weight = np.concatenate([self.y.top_down[j], self.y.bottom_up[j]])
        live = np.concatenate([self.y.top_live[j], self.y.bottom_live[j]])
        age_after = int(self.y.ages[j]) + 1
        updated = plasticity.update_deviation(self.deviations[j], signal, weight,
                                              age_after, gain)
        self.deviations[j][live] = updated[live]
        decisions = plasticity.decide_all(self.deviations[j], live,
                                          self.maintenance.grow_threshold,
                                          self.maintenance.trim_threshold)
        new_live = plasticity.apply_maintenance(live, decisions)
        if not np.array_equal(new_live, live):
            self.y.set_live(j, new_live[: self.z_dim], new_live[self.z_dim:])

    def summary(self) -> dict:
        return {
            "z_dim": self.z_dim,
            "x_dim": self.x_dim,
            "capacity": self.capacity,
            "k": self.k,
            "seed": self.seed,
            "time": self.t,
            "initialized": self.y.n_initialized,
            "recruit_refusals": self.recruit_refusals,
            "under_provisioned": self.recruit_refusals > 0,
            "maintenance": self.maintenance.enabled,
        }

    # -- snapshot persistence ------------------------------------------------

    def to_dict(self) -> dict:
        y = self.y
        return {
            "format": "dnemu-network",
            "version": 1,
            "z_dim": self.z_dim,
            "x_dim": self.x_dim,
            "capacity": self.capacity,
            "k": self.k,
            "epsilon": EPSILON,
            "seed": self.seed,
            "time": self.t,
            "recruit_refusals": self.recruit_refusals,
            "neurons": [
                {
                    "top_down": y.top_down[j].tolist(),
                    "bottom_up": y.bottom_up[j].tolist(),
                    "age": int(y.ages[j]),
                    "initialized": j < y.n_initialized,
                    "top_live": y.top_live[j].tolist(),
                    "bottom_live": y.bottom_live[j].tolist(),
                }
                for j in range(self.capacity)
            ],
            "to_z": {"weights": self.to_z.weights.tolist(),
                     "ages": self.to_z.ages.tolist()},
            "to_x": {"weights": self.to_x.weights.tolist(),
                     "ages": self.to_x.ages.tolist()},
            "maintenance": {
                "enabled": self.maintenance.enabled,
                "grow_threshold": self.maintenance.grow_threshold,
                "trim_threshold": self.maintenance.trim_threshold,
            },
            "deviations": None if self.deviations is None else self.deviations.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Network":
        if doc.get("format") != "dnemu-network" or doc.get("version") != 1:
            raise ValueError("not a recognized network snapshot")
        cfg = plasticity.MaintenanceConfig(**doc["maintenance"])
        net = cls(doc["z_dim"], doc["x_dim"], doc["capacity"], k=doc["k"],
                  seed=doc["seed"], maintenance=cfg)
        net.t = int(doc["time"])
        net.recruit_refusals = int(doc["recruit_refusals"])
        y = net.y
        n_init = 0
        for j, rec in enumerate(doc["neurons"]):
            y.top_down[j] = np.asarray(rec["top_down"], dtype=np.float64)
            y.bottom_up[j] = np.asarray(rec["bottom_up"], dtype=np.float64)
            y.ages[j] = int(rec["age"])
            y.top_live[j] = np.asarray(rec["top_live"], dtype=bool)
            y.bottom_live[j] = np.asarray(rec["bottom_live"], dtype=bool)
            if rec["initialized"]:
                n_init = j + 1
        y.n_initialized = n_init
        y._invalidate()
        net.to_z.weights = np.asarray(doc["to_z"]["weights"], dtype=np.float64)
        net.to_z.ages = np.asarray(doc["to_z"]["ages"], dtype=np.int64)
        net.to_x.weights = np.asarray(doc["to_x"]["weights"], dtype=np.float64)
        net.to_x.ages = np.asarray(doc["to_x"]["ages"], dtype=np.int64)
        if doc["deviations"] is not None:
            net.deviations = np.asarray(doc["deviations"], dtype=np.float64)
        return net

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Network":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
