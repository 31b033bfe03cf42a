"""Canonical teacher fixtures: the logic-AND control, the parity counter, and
their composed grand table, each with its pattern grounding.

Symbol order and code assignments are fixed here so that serialized fixture
files are byte-identical across runs.  The composed grand table carries its
own 5-bit state codes rather than anything derived from the per-task codes;
the standalone parity-task codes exist only so that task can be taught alone.
"""

from __future__ import annotations

import json

from .automata import TransitionTable, compose_grand, table_to_json
from .grounding import GroundingMap, TrainingTriple, format_bits, parse_bits

AND = "∧"  # the logic-AND input glyph; the CLI also accepts "AND"

TASK1_STATES = ("q0", "q_T", "q_F", f"q_T{AND}", f"q_F{AND}", "q_-")
TASK1_INPUTS = ("T", "F", AND)
TASK1_ROWS = (
    ("q_T", "q_F", "q_-"),
    ("q_-", "q_-", f"q_T{AND}"),
    ("q_-", "q_-", f"q_F{AND}"),
    ("q_T", "q_F", "q_-"),
    ("q_F", "q_F", "q_-"),
    ("q_-", "q_-", "q_-"),
)
TASK1_PATTERNS = {
    "q0": "001", "q_T": "010", "q_F": "011",
    f"q_T{AND}": "100", f"q_F{AND}": "101", "q_-": "110",
    "T": "010", "F": "011", AND: "100",
}

TASK3_STATES = ("qe", "qo")
TASK3_ROWS = (("qo", "qo", "qo"), ("qe", "qe", "qe"))
TASK3_PATTERNS = {"qe": "10", "qo": "01", "T": "010", "F": "011", AND: "100"}

GRAND_SWITCHES = ("s1", "s3")
GRAND_STATE_PATTERNS = {
    "(q1,q0)": "01001", "(q1,q_T)": "01010", "(q1,q_F)": "01011",
    f"(q1,q_T{AND})": "01100", f"(q1,q_F{AND})": "01101", "(q1,q_-)": "01110",
    "(q3,qe)": "11000", "(q3,qo)": "11001",
}
GRAND_INPUT_PATTERNS = {"s1": "101", "s3": "111", "T": "010", "F": "011", AND: "100"}


def task1_table() -> tuple[TransitionTable, GroundingMap]:
    """The six-state logic-AND evaluator with its 3-bit codes."""
    table = TransitionTable.from_names(TASK1_STATES, TASK1_INPUTS, TASK1_ROWS)
    return table, GroundingMap.from_patterns(table, TASK1_PATTERNS)


def task3_table() -> tuple[TransitionTable, GroundingMap]:
    """The two-state input-parity counter over the same alphabet."""
    table = TransitionTable.from_names(TASK3_STATES, TASK1_INPUTS, TASK3_ROWS)
    return table, GroundingMap.from_patterns(table, TASK3_PATTERNS)


def grand13_table() -> tuple[TransitionTable, GroundingMap]:
    """Both tasks composed behind the s1/s3 switch inputs, with 5-bit codes."""
    table = compose_grand([("q1", task1_table()[0]), ("q3", task3_table()[0])],
                          GRAND_SWITCHES)
    gmap = GroundingMap(
        {t: parse_bits(p) for t, p in GRAND_STATE_PATTERNS.items()},
        {t: parse_bits(p) for t, p in GRAND_INPUT_PATTERNS.items()})
    return table, gmap


FIXTURES = {
    "task1": task1_table,
    "task3": task3_table,
    "grand13": grand13_table,
}


def fixture_json(name: str) -> str:
    """Canonical JSON document for a named fixture (byte-stable)."""
    try:
        builder = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}") from None
    table, gmap = builder()
    return table_to_json(table, gmap.to_patterns())


def pattern_triples_json(triples: list[TrainingTriple]) -> str:
    """Pattern-only transition list as JSON bit-string triples (byte-stable)."""
    doc = [[format_bits(t.z), format_bits(t.x), format_bits(t.z_next)]
           for t in triples]
    return json.dumps(doc, indent=2) + "\n"
