"""Teacher-learner loop, brute-force oracles, and verification reports.

Teaching presents one transition per step: the (state, input) context patterns
on the step itself and the successor patterns as the step's second-half
supervision.  A table sweep walks every entry row-major; a sequence replay
walks consecutive contexts of a script, so each boundary teaches both the next
state and the next input.  Verification re-queries contexts with supervision
off and compares predictions bit-exactly against the symbolic table.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .automata import TransitionTable
from .grounding import AmbiguousDecodeError, GroundingMap, format_bits
from .network import Network, StepInput


@dataclass(frozen=True)
class StepRecord:
    """One row of a run trace."""

    step: int
    winner_ids: tuple[int, ...]
    recruited: bool
    pre_response_max: float | None
    z_correct: bool | None


@dataclass
class RunReport:
    """Per-step trace of a teaching or verification run."""

    rows: list[StepRecord] = field(default_factory=list)

    @property
    def recruit_count(self) -> int:
        return sum(1 for r in self.rows if r.recruited)

    @property
    def agreement_rate(self) -> float:
        judged = [r.z_correct for r in self.rows if r.z_correct is not None]
        if not judged:
            return 0.0
        return 1.0 - sum(1 for ok in judged if not ok) / len(judged)

    def summary(self) -> dict:
        return {"agreementRate": self.agreement_rate,
                "recruitCount": self.recruit_count,
                "steps": len(self.rows)}


@dataclass
class VerificationReport:
    """Outcome of querying every table entry against the lookup oracle."""

    total_queries: int
    mismatches: list[tuple[str, str, str, str]]  # state, input, expected, got
    recruit_count: int
    rows: list[StepRecord] = field(default_factory=list)

    @property
    def agreement_rate(self) -> float:
        if self.total_queries == 0:
            return 1.0
        return 1.0 - len(self.mismatches) / self.total_queries

    @property
    def error_free(self) -> bool:
        return not self.mismatches

    def summary(self) -> dict:
        return {"agreementRate": self.agreement_rate,
                "recruitCount": self.recruit_count,
                "totalQueries": self.total_queries,
                "mismatches": len(self.mismatches)}


@dataclass(frozen=True)
class TeachingSchedule:
    """How a teaching run is driven.

    ``table-sweep`` presents every table entry row-major, once per epoch.
    ``sequence-replay`` walks an explicit (state, input) context script.
    ``free-run`` is evaluation only and not valid for teaching.
    """

    mode: str = "table-sweep"
    epochs: int = 1
    seed: int = 0
    steps: tuple[tuple[str, str], ...] | None = None
    z_supervised: bool = True
    x_supervised: bool = True

    def __post_init__(self):
        if self.mode not in ("table-sweep", "sequence-replay", "free-run"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.mode == "sequence-replay" and not self.steps:
            raise ValueError("sequence-replay requires an explicit step list")


def _pre_max(pres: np.ndarray) -> float | None:
    finite = pres[~np.isnan(pres)]
    return float(finite.max()) if finite.size else None


def teach_table(net: Network, table: TransitionTable, gmap: GroundingMap,
                epochs: int = 1, order: Sequence[tuple[int, int]] | None = None,
                gain: float = 1.0) -> RunReport:
    """Teach every table transition, one network step per entry.

    Default presentation order is row-major by state then input; on binary
    fixtures the final weights do not depend on the order because every
    distinct context claims its own neuron.
    """
    pairs = order if order is not None else [
        (q, s) for q in range(len(table.states)) for s in range(len(table.inputs))]
    report = RunReport()
    step_no = 0
    for _ in range(epochs):
        for q, s in pairs:
            z = gmap.encode_state(table.states[q].token)
            x = gmap.encode_input(table.inputs[s].token)
            z_next = gmap.encode_state(table.states[table.step(q, s)].token)
            out = net.step(StepInput(z, x, z_supervised=True, x_supervised=True,
                                     z_next=z_next, learning_gain=gain))
            report.rows.append(StepRecord(
                step_no, out.winner_ids, out.recruited,
                _pre_max(out.pre_responses),
                bool(np.array_equal(out.z_pred, z_next))))
            step_no += 1
    return report


def teach_sequence(net: Network, gmap: GroundingMap,
                   contexts: Sequence[tuple[str, str]],
                   table: TransitionTable | None = None,
                   z_supervised: bool = True, x_supervised: bool = True,
                   gain: float = 1.0) -> RunReport:
    """Teach a context script; each boundary teaches one transition.

    A script of m contexts yields m - 1 steps: step k presents context k and
    supervises context k+1's state (and input, when x is supervised) on the
    second half-step.  When a table is given, each step's pre-supervision
    prediction is judged against it.
    """
    report = RunReport()
    for k in range(len(contexts) - 1):
        q_tok, s_tok = contexts[k]
        nq_tok, ns_tok = contexts[k + 1]
        z_next = gmap.encode_state(nq_tok) if z_supervised else None
        x_next = gmap.encode_input(ns_tok) if x_supervised else None
        out = net.step(StepInput(
            gmap.encode_state(q_tok), gmap.encode_input(s_tok),
            z_supervised=z_supervised, x_supervised=x_supervised,
            z_next=z_next, x_next=x_next, learning_gain=gain))
        z_correct = None
        if table is not None:
            target = table.states[table.step(table.state_index(q_tok),
                                             table.input_index(s_tok))].token
            z_correct = bool(np.array_equal(out.z_pred, gmap.encode_state(target)))
        report.rows.append(StepRecord(k, out.winner_ids, out.recruited,
                                      _pre_max(out.pre_responses), z_correct))
    return report


def teach(net: Network, table: TransitionTable, gmap: GroundingMap,
          schedule: TeachingSchedule, gain: float = 1.0) -> RunReport:
    """Run a schedule against a teacher table."""
    if schedule.mode == "table-sweep":
        return teach_table(net, table, gmap, epochs=schedule.epochs, gain=gain)
    if schedule.mode == "sequence-replay":
        report = RunReport()
        for _ in range(schedule.epochs):
            part = teach_sequence(net, gmap, schedule.steps, table=table,
                                  z_supervised=schedule.z_supervised,
                                  x_supervised=schedule.x_supervised, gain=gain)
            base = len(report.rows)
            report.rows.extend(
                StepRecord(base + r.step, r.winner_ids, r.recruited,
                           r.pre_response_max, r.z_correct) for r in part.rows)
        return report
    raise ValueError("free-run schedules do not teach")


def verify_error_free(net: Network, table: TransitionTable,
                      gmap: GroundingMap) -> VerificationReport:
    """Query every (state, input) pair with supervision off and compare the
    predicted next-state pattern bit-exactly against the table."""
    mismatches = []
    rows = []
    total = 0
    for q, state in enumerate(table.states):
        for s, letter in enumerate(table.inputs):
            z = gmap.encode_state(state.token)
            x = gmap.encode_input(letter.token)
            expected = gmap.encode_state(table.states[table.step(q, s)].token)
            out = net.query(z, x)
            ok = bool(np.array_equal(out.z_pred, expected))
            if not ok:
                mismatches.append((state.token, letter.token,
                                   format_bits(expected), format_bits(out.z_pred)))
            rows.append(StepRecord(total, out.winner_ids, False,
                                   _pre_max(out.pre_responses), ok))
            total += 1
    return VerificationReport(total, mismatches, net.y.n_initialized, rows)


def oracle_nearest_context(contexts: Sequence[tuple[np.ndarray, np.ndarray]],
                           z: np.ndarray, x: np.ndarray) -> int:
    """Brute-force nearest stored context, re-derived with scalar arithmetic.

    Independent of the network's vectorized scan: plain loops, unit-normalizing
    each part and summing the two cosines, strict lowest-index tie-break.
    """

    def unit(vec):
        comps = [float(v) for v in vec]
        norm = math.sqrt(sum(v * v for v in comps))
        if norm == 0.0:
            return [0.0] * len(comps)
        return [v / norm for v in comps]

    if not contexts:
        raise ValueError("need at least one stored context")
    zu, xu = unit(z), unit(x)
    best_idx, best_score = 0, -math.inf
    for i, (top, bottom) in enumerate(contexts):
        v_t = 0.0
        for w, v in zip(unit(top), zu):
            v_t += w * v
        v_b = 0.0
        for w, v in zip(unit(bottom), xu):
            v_b += w * v
        score = v_t + v_b
        if score > best_score:
            best_idx, best_score = i, score
    return best_idx


def stored_contexts(net: Network) -> list[tuple[np.ndarray, np.ndarray]]:
    """The initialized neurons' two-part weights, for oracle cross-checks."""
    return [(net.y.top_down[j].copy(), net.y.bottom_up[j].copy())
            for j in range(net.y.n_initialized)]


def run_free(net: Network, gmap: GroundingMap, start_state: str,
             word: Sequence[str]) -> list[str]:
    """Drive the net with supervision off, chaining each predicted state
    pattern as the next context state; returns decoded state tokens.

    Undecodable predictions surface in place: ``?(a|b)`` for a tie between
    symbols, ``?()`` for an empty (all-zero) prediction.
    """
    z = gmap.encode_state(start_state)
    decoded = []
    for token in word:
        out = net.query(z, gmap.encode_input(token))
        try:
            name, _ = gmap.decode_nearest(out.z_pred, "state")
        except AmbiguousDecodeError as exc:
            name = "?(" + "|".join(exc.candidates) + ")"
        except ValueError:
            name = "?()"
        decoded.append(name)
        z = out.z_pred
    return decoded


def emit_metrics(report: RunReport | VerificationReport,
                 csv_path: str | Path | None = None,
                 json_path: str | Path | None = None) -> dict:
    """Write the per-step CSV trace and the JSON summary; returns the summary."""
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step", "winner", "recruited", "preResponseMax",
                             "zCorrect"])
            for row in report.rows:
                writer.writerow([
                    row.step,
                    "|".join(str(j) for j in row.winner_ids),
                    "true" if row.recruited else "false",
                    "" if row.pre_response_max is None else repr(row.pre_response_max),
                    "" if row.z_correct is None else ("true" if row.z_correct else "false"),
                ])
    summary = report.summary()
    if json_path is not None:
        Path(json_path).write_text(json.dumps(summary, indent=2) + "\n",
                                   encoding="utf-8")
    return summary
