"""Grounding of symbols as fixed-dimension binary patterns and back.

Codes are binary in every shipped fixture but typed as reals throughout, so
interpolated (graded) predictions flow through the same functions.  Bit-string
text like ``"01010"`` maps to components ``[0, 1, 0, 1, 0]`` left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .automata import TransitionTable
from .numerics import normalize, unit_rows
from .validation import check_mask, check_pattern


class AmbiguousDecodeError(ValueError):
    """A pattern sits at equal similarity to two or more distinct symbols."""

    def __init__(self, candidates: Sequence[str]):
        self.candidates = tuple(candidates)
        super().__init__(f"ambiguous decode, tied symbols: {', '.join(self.candidates)}")


def parse_bits(text: str) -> np.ndarray:
    """``"0110"`` -> array([0., 1., 1., 0.])."""
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"not a bit string: {text!r}")
    return np.array([float(c) for c in text], dtype=np.float64)


def format_bits(pattern: np.ndarray) -> str:
    """Inverse of :func:`parse_bits` for exactly binary patterns."""
    out = []
    for c in np.asarray(pattern, dtype=np.float64):
        if c == 0.0:
            out.append("0")
        elif c == 1.0:
            out.append("1")
        else:
            raise ValueError(f"pattern is not binary: component {c!r}")
    return "".join(out)


@dataclass(frozen=True)
class TrainingTriple:
    """One table entry as patterns: context (z, x) and supervised next state."""

    z: np.ndarray
    x: np.ndarray
    z_next: np.ndarray


class GroundingMap:
    """Bijection between a table's symbols and their pattern codes."""

    def __init__(self, state_codes: Mapping[str, np.ndarray],
                 input_codes: Mapping[str, np.ndarray]):
        if not state_codes or not input_codes:
            raise ValueError("grounding needs at least one state and one input code")
        self.state_codes = {t: check_pattern(c, name=f"state code {t!r}")
                            for t, c in state_codes.items()}
        self.input_codes = {t: check_pattern(c, name=f"input code {t!r}")
                            for t, c in input_codes.items()}
        self.z_dim = len(next(iter(self.state_codes.values())))
        self.x_dim = len(next(iter(self.input_codes.values())))
        for kind, codes, dim in (("state", self.state_codes, self.z_dim),
                                 ("input", self.input_codes, self.x_dim)):
            seen = {}
            for token, code in codes.items():
                if code.shape[0] != dim:
                    raise ValueError(f"{kind} code {token!r} has wrong dimension")
                if not code.any():
                    raise ValueError(f"{kind} code {token!r} is all-zero")
                key = code.tobytes()
                if key in seen:
                    raise ValueError(f"{kind} codes {seen[key]!r} and {token!r} collide")
                seen[key] = token
        self._units = {}

    @classmethod
    def from_patterns(cls, table: TransitionTable,
                      patterns: Mapping[str, str]) -> "GroundingMap":
        """Build from a table plus its JSON ``patterns`` bit-string map."""
        missing = [s.token for s in (*table.states, *table.inputs)
                   if s.token not in patterns]
        if missing:
            raise ValueError(f"patterns missing for symbols: {missing}")
        return cls({s.token: parse_bits(patterns[s.token]) for s in table.states},
                   {s.token: parse_bits(patterns[s.token]) for s in table.inputs})

    def to_patterns(self) -> dict[str, str]:
        out = {t: format_bits(c) for t, c in self.state_codes.items()}
        out.update({t: format_bits(c) for t, c in self.input_codes.items()})
        return out

    def _codes(self, kind: str) -> Mapping[str, np.ndarray]:
        if kind == "state":
            return self.state_codes
        if kind == "input":
            return self.input_codes
        raise ValueError(f"unknown symbol kind: {kind!r}")

    def encode_state(self, token: str) -> np.ndarray:
        try:
            return self.state_codes[token].copy()
        except KeyError:
            raise KeyError(f"no code for state {token!r}") from None

    def encode_input(self, token: str) -> np.ndarray:
        try:
            return self.input_codes[token].copy()
        except KeyError:
            raise KeyError(f"no code for input {token!r}") from None

    def decode_nearest(self, pattern: np.ndarray, kind: str) -> tuple[str, float]:
        """Symbol whose unit code best matches the unit pattern, plus that cosine.

        Exact codes decode with similarity 1.  Equal-best candidates raise
        :class:`AmbiguousDecodeError` rather than silently picking one: the
        fixture codes are distinct, so a tie means a malformed map or a
        genuinely ambiguous prediction worth surfacing.
        """
        codes = self._codes(kind)
        dim = self.z_dim if kind == "state" else self.x_dim
        p = np.asarray(pattern, dtype=np.float64)
        if p.shape != (dim,):
            raise ValueError(f"pattern has dimension {p.shape}, expected ({dim},)")
        if not p.any():
            raise ValueError("cannot decode the zero pattern: no direction")
        if kind not in self._units:
            self._units[kind] = (list(codes),
                                 unit_rows(np.stack(list(codes.values()))),
                                 {c.tobytes(): t for t, c in codes.items()})
        tokens, units, exact = self._units[kind]
        hit = exact.get(p.tobytes())
        if hit is not None:  # exact hit: skip the float cosine
            return hit, 1.0
        sims = (units * normalize(p)).sum(axis=1)
        best = float(sims.max())
        tied = [tokens[i] for i in np.flatnonzero(sims == best)]
        if len(tied) > 1:
            raise AmbiguousDecodeError(tied)
        return tied[0], best


def table_to_triples(table: TransitionTable, gmap: GroundingMap) -> list[TrainingTriple]:
    """All table entries as pattern triples, row-major by state then input."""
    triples = []
    for q, state in enumerate(table.states):
        z = gmap.encode_state(state.token)
        for s, letter in enumerate(table.inputs):
            target = table.states[table.step(q, s)].token
            triples.append(TrainingTriple(z.copy(), gmap.encode_input(letter.token),
                                          gmap.encode_state(target)))
    return triples


def apply_mask(pattern: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Zero the unattended components; attended ones pass through unchanged."""
    p = np.asarray(pattern, dtype=np.float64)
    m = check_mask(mask, p.shape[0])
    return np.where(m, p, 0.0)


def union_patterns(*patterns: np.ndarray) -> np.ndarray:
    """Componentwise union of patterns, for attending several symbols at once
    (the attended set need not be a connected region)."""
    if not patterns:
        raise ValueError("need at least one pattern")
    out = np.asarray(patterns[0], dtype=np.float64)
    for p in patterns[1:]:
        q = np.asarray(p, dtype=np.float64)
        if q.shape != out.shape:
            raise ValueError("patterns must share one dimension")
        out = np.maximum(out, q)
    return out
