"""Symbolic teacher machines: finite-automaton controls, their agent/attentive
extensions, lowering of Turing-machine controls, and grand-table composition.

Everything here is the teacher side of a teaching run: plain lookup tables over
interned symbols, immutable after construction, with deterministic ordering so
fixtures serialize reproducibly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

HEAD_MOVES = ("R", "L", "S")


@dataclass(frozen=True)
class Symbol:
    """An interned token, either an input letter or a state/action name."""

    token: str
    kind: str  # "input" or "state"

    def __post_init__(self):
        if not self.token:
            raise ValueError("symbol token must be non-empty")
        if self.kind not in ("input", "state"):
            raise ValueError(f"unknown symbol kind: {self.kind!r}")


def _check_unique(tokens: Sequence[str], what: str) -> None:
    if len(set(tokens)) != len(tokens):
        raise ValueError(f"duplicate {what} tokens: {tokens}")


class TransitionTable:
    """A total control function over states x inputs, stored as an index grid.

    Symbol order is construction order, which makes every derived artifact
    (grounding, teaching sweeps, serialized fixtures) bit-reproducible.
    """

    def __init__(self, states: Sequence[str], inputs: Sequence[str],
                 entries: Sequence[Sequence[int]]):
        _check_unique(list(states), "state")
        _check_unique(list(inputs), "input")
        self.states = tuple(Symbol(s, "state") for s in states)
        self.inputs = tuple(Symbol(s, "input") for s in inputs)
        if len(entries) != len(self.states):
            raise ValueError("entries must have one row per state")
        grid = []
        for row in entries:
            if len(row) != len(self.inputs):
                raise ValueError("entries must have one column per input")
            for target in row:
                if not 0 <= target < len(self.states):
                    raise ValueError(f"target state index {target} out of range")
            grid.append(tuple(int(t) for t in row))
        self.entries = tuple(grid)
        self._state_index = {s.token: i for i, s in enumerate(self.states)}
        self._input_index = {s.token: i for i, s in enumerate(self.inputs)}

    @classmethod
    def from_names(cls, states: Sequence[str], inputs: Sequence[str],
                   rows: Sequence[Sequence[str]]) -> "TransitionTable":
        """Build from rows of target state *names* (the JSON wire form)."""
        index = {name: i for i, name in enumerate(states)}
        try:
            entries = [[index[name] for name in row] for row in rows]
        except KeyError as exc:
            raise ValueError(f"entry references unknown state {exc.args[0]!r}") from None
        return cls(states, inputs, entries)

    def state_index(self, token: str) -> int:
        try:
            return self._state_index[token]
        except KeyError:
            raise KeyError(f"unknown state {token!r}") from None

    def input_index(self, token: str) -> int:
        try:
            return self._input_index[token]
        except KeyError:
            raise KeyError(f"unknown input {token!r}") from None

    def step(self, state: int, letter: int) -> int:
        """delta(q, sigma): one lookup."""
        if not 0 <= state < len(self.states):
            raise IndexError(f"state index {state} out of range")
        if not 0 <= letter < len(self.inputs):
            raise IndexError(f"input index {letter} out of range")
        return self.entries[state][letter]

    def run(self, start: int, word: Iterable[int]) -> list[int]:
        """Chain ``step`` over a word; returns the state after each letter."""
        out = []
        q = start
        if not 0 <= q < len(self.states):
            raise IndexError(f"state index {q} out of range")
        for letter in word:
            q = self.step(q, letter)
            out.append(q)
        return out

    def run_tokens(self, start_token: str, word_tokens: Iterable[str]) -> list[str]:
        trace = self.run(self.state_index(start_token),
                         [self.input_index(t) for t in word_tokens])
        return [self.states[i].token for i in trace]

    def __eq__(self, other) -> bool:
        return (isinstance(other, TransitionTable)
                and self.states == other.states
                and self.inputs == other.inputs
                and self.entries == other.entries)

    def __repr__(self) -> str:
        return (f"TransitionTable({len(self.states)} states, "
                f"{len(self.inputs)} inputs)")


def table_to_json(table: TransitionTable,
                  patterns: Mapping[str, str] | None = None) -> str:
    """Serialize to the canonical UTF-8 JSON document (byte-stable)."""
    doc = {
        "states": [s.token for s in table.states],
        "inputs": [s.token for s in table.inputs],
        "entries": [[table.states[t].token for t in row] for row in table.entries],
    }
    if patterns is not None:
        doc["patterns"] = dict(patterns)
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def table_from_json(text: str) -> tuple[TransitionTable, dict[str, str]]:
    """Parse a table document; returns the table and its pattern map (may be empty)."""
    doc = json.loads(text)
    table = TransitionTable.from_names(doc["states"], doc["inputs"], doc["entries"])
    return table, dict(doc.get("patterns", {}))


@dataclass(frozen=True)
class TmControl:
    """A Turing-machine control: delta(q, tape symbol) -> (q', write, move)."""

    states: tuple[str, ...]
    tape_alphabet: tuple[str, ...]
    delta: Mapping[tuple[int, int], tuple[int, int, str]]

    def __post_init__(self):
        _check_unique(self.states, "state")
        _check_unique(self.tape_alphabet, "tape symbol")
        nq, ng = len(self.states), len(self.tape_alphabet)
        for q in range(nq):
            for g in range(ng):
                if (q, g) not in self.delta:
                    raise ValueError(f"delta is not total: missing ({q}, {g})")
        for (q, g), (q2, g2, move) in self.delta.items():
            if not (0 <= q < nq and 0 <= g < ng):
                raise ValueError(f"delta key ({q}, {g}) out of range")
            if not (0 <= q2 < nq and 0 <= g2 < ng):
                raise ValueError(f"delta target ({q2}, {g2}) out of range")
            if move not in HEAD_MOVES:
                raise ValueError(f"unknown head move {move!r}")


@dataclass(frozen=True)
class AgentFaControl:
    """A TM control lowered to agent form: the whole extended state is output.

    Extended states are (state, last written symbol, last head move) triples;
    the transition ignores the last two components, which is exactly what makes
    the lowered control attentive.
    """

    extended_states: tuple[tuple[int, int, str], ...]
    inputs: tuple[str, ...]
    entries: Mapping[tuple[tuple[int, int, str], int], tuple[int, int, str]]

    def step(self, extended: tuple[int, int, str], letter: int) -> tuple[int, int, str]:
        return self.entries[(extended, letter)]

    def write_move_independent(self) -> bool:
        """Exhaustively verify the transition ignores (write, move) components."""
        by_state: dict[tuple[int, int], set[tuple[int, int, str]]] = {}
        for (ext, letter), target in self.entries.items():
            by_state.setdefault((ext[0], letter), set()).add(target)
        return all(len(targets) == 1 for targets in by_state.values())


def tm_to_agent_fa(tm: TmControl) -> AgentFaControl:
    """Lower a TM control to an (attentive) agent FA over Q x Gamma x moves.

    For every extended state (q, g, d) and read symbol g', the successor is
    delta(q, g') re-packaged as a triple, so the lowered table never consults
    what was last written or how the head last moved.
    """
    extended = tuple((q, g, d)
                     for q in range(len(tm.states))
                     for g in range(len(tm.tape_alphabet))
                     for d in HEAD_MOVES)
    entries = {}
    for ext in extended:
        q = ext[0]
        for letter in range(len(tm.tape_alphabet)):
            entries[(ext, letter)] = tm.delta[(q, letter)]
    return AgentFaControl(extended, tm.tape_alphabet, entries)


def simulate_tm(tm: TmControl, tape: Sequence[int], start: int = 0,
                max_steps: int = 10_000, blank: int = 0) -> list[int]:
    """Minimal tape interpreter; returns the state after each step.

    Only used to sanity-check lowered controls against their source machines;
    the head halts when it walks off a bounded budget.
    """
    cells = dict(enumerate(tape))
    head, q = 0, start
    trace = []
    for _ in range(max_steps):
        if head < 0 or head >= len(tape):
            break
        read = cells.get(head, blank)
        q, write, move = tm.delta[(q, read)]
        cells[head] = write
        head += {"R": 1, "L": -1, "S": 0}[move]
        trace.append(q)
    return trace


def read_only_tm_from_table(table: TransitionTable) -> TmControl:
    """View an FA control as a TM that writes back what it read and moves right."""
    delta = {}
    for q in range(len(table.states)):
        for g in range(len(table.inputs)):
            delta[(q, g)] = (table.step(q, g), g, "R")
    return TmControl(tuple(s.token for s in table.states),
                     tuple(s.token for s in table.inputs), delta)


def compose_grand(tasks: Sequence[tuple[str, TransitionTable]],
                  switch_inputs: Sequence[str]) -> TransitionTable:
    """Compose task controls into one grand table with task-switch inputs.

    Grand states are (tag, task state) pairs, rows grouped by task in
    declaration order.  A switch input jumps to the entry state (the task's
    first declared state) of its task from anywhere outside that task, and
    self-loops on the current state when the task is already active.  Within a
    task, non-switch inputs follow the task's own table.
    """
    if not tasks:
        raise ValueError("compose_grand needs at least one task")
    if switch_inputs and len(switch_inputs) != len(tasks):
        raise ValueError("need exactly one switch input per task (or none)")
    _check_unique([tag for tag, _ in tasks], "task tag")
    _check_unique(list(switch_inputs), "switch input")

    shared_inputs = tuple(s.token for s in tasks[0][1].inputs)
    for tag, table in tasks:
        if tuple(s.token for s in table.inputs) != shared_inputs:
            raise ValueError(f"task {tag!r} does not share the common input alphabet")
        if not table.states:
            raise ValueError(f"task {tag!r} has no entry state")
    if set(switch_inputs) & set(shared_inputs):
        raise ValueError("switch inputs collide with task inputs")

    grand_states = []
    offsets = []
    for tag, table in tasks:
        offsets.append(len(grand_states))
        grand_states.extend(f"({tag},{s.token})" for s in table.states)
    grand_inputs = list(switch_inputs) + list(shared_inputs)

    entries = []
    for t_idx, (tag, table) in enumerate(tasks):
        for q in range(len(table.states)):
            row = []
            for s_idx in range(len(tasks)):
                if s_idx == t_idx:
                    row.append(offsets[t_idx] + q)  # already in-task: self-loop
                else:
                    row.append(offsets[s_idx])      # jump to the task's entry state
            row = row[:len(switch_inputs)]
            for letter in range(len(shared_inputs)):
                row.append(offsets[t_idx] + table.step(q, letter))
            entries.append(row)
    return TransitionTable(grand_states, grand_inputs, entries)


@dataclass
class SuccessorModel:
    """Observed next-input sets per (state, input) context.

    The teacher machine never declares which input follows a context; this is
    accumulated from taught sequences and read back as a prediction set.
    """

    observed: dict[tuple[int, int], set[int]] = field(default_factory=dict)

    def record(self, state: int, letter: int, next_letter: int) -> "SuccessorModel":
        self.observed.setdefault((state, letter), set()).add(next_letter)
        return self

    def successors(self, state: int, letter: int) -> frozenset[int]:
        return frozenset(self.observed.get((state, letter), ()))

    @classmethod
    def from_context_sequence(cls, table: TransitionTable,
                              contexts: Sequence[tuple[str, str]]) -> "SuccessorModel":
        model = cls()
        for (q, s), (_, s_next) in zip(contexts, contexts[1:]):
            model.record(table.state_index(q), table.input_index(s),
                         table.input_index(s_next))
        return model
