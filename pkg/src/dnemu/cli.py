"""Command line entry point: build fixture tables, teach networks, verify them
against their teachers, replay words, and inspect snapshots."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .automata import table_from_json
from .fixtures import AND, FIXTURES, fixture_json
from .grounding import GroundingMap
from .harness import emit_metrics, run_free, teach_table, verify_error_free
from .network import Network
from .plasticity import GROW_DEFAULT, TRIM_DEFAULT, MaintenanceConfig

log = logging.getLogger("dnemu")

WORD_ALIASES = {"AND": AND}


def tokenize_word(chunks: list[str], tokens: list[str]) -> list[str]:
    """Split user word arguments into known input tokens.

    Whitespace-separated chunks are each consumed greedily, longest known
    token (or alias) first, so both "s3 T" and the glued glyph form work.
    """
    vocab = {t: t for t in tokens}
    vocab.update({a: t for a, t in WORD_ALIASES.items() if t in tokens})
    by_length = sorted(vocab, key=len, reverse=True)
    word = []
    for chunk in " ".join(chunks).split():
        pos = 0
        while pos < len(chunk):
            for cand in by_length:
                if chunk.startswith(cand, pos):
                    word.append(vocab[cand])
                    pos += len(cand)
                    break
            else:
                raise ValueError(f"cannot read input symbol at {chunk[pos:]!r}")
    return word


def _load_table(path: str):
    table, patterns = table_from_json(Path(path).read_text(encoding="utf-8"))
    if not patterns:
        raise ValueError(f"table file {path} carries no pattern codes")
    return table, GroundingMap.from_patterns(table, patterns)


def _maintenance(args) -> MaintenanceConfig:
    return MaintenanceConfig(enabled=args.maintenance == "on",
                             grow_threshold=args.grow_thresh,
                             trim_threshold=args.trim_thresh)


def cmd_build_table(args) -> int:
    text = fixture_json(args.name)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_teach(args) -> int:
    table, gmap = _load_table(args.table)
    capacity = args.capacity or len(table.states) * len(table.inputs)
    net = Network(gmap.z_dim, gmap.x_dim, capacity, k=args.k, seed=args.seed,
                  maintenance=_maintenance(args))
    report = teach_table(net, table, gmap, epochs=args.epochs)
    net.save(args.out)
    summary = emit_metrics(report,
                           csv_path=f"{args.metrics}.csv" if args.metrics else None,
                           json_path=f"{args.metrics}.json" if args.metrics else None)
    summary.update(net.summary())
    print(json.dumps(summary, indent=2))
    return 0


def cmd_verify(args) -> int:
    table, gmap = _load_table(args.table)
    net = Network.load(args.snapshot)
    report = verify_error_free(net, table, gmap)
    summary = emit_metrics(report,
                           csv_path=f"{args.metrics}.csv" if args.metrics else None,
                           json_path=f"{args.metrics}.json" if args.metrics else None)
    print(json.dumps(summary, indent=2))
    for state, letter, expected, got in report.mismatches:
        print(f"mismatch: ({state}, {letter}) expected {expected} got {got}")
    return 0 if report.error_free else 1


def cmd_run(args) -> int:
    table, gmap = _load_table(args.table)
    net = Network.load(args.snapshot)
    word = tokenize_word(args.word, [s.token for s in table.inputs])
    start = args.start or table.states[0].token
    trace = run_free(net, gmap, start, word)
    if trace:
        print(" ".join(trace))
    return 0


def cmd_inspect(args) -> int:
    net = Network.load(args.snapshot)
    print(json.dumps(net.summary(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dnemu",
        description="Teach an emergent-pattern network to emulate symbolic "
                    "transition tables, and verify it against them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-table", help="write a canonical fixture table")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_build_table)

    def common_teach(p):
        p.add_argument("--table", required=True)
        p.add_argument("--capacity", type=int, default=None,
                       help="hidden neuron budget (default: states x inputs)")
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--epochs", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--metrics", help="prefix for .csv/.json metric files")
        p.add_argument("--maintenance", choices=["on", "off"], default="off")
        p.add_argument("--grow-thresh", type=float, default=GROW_DEFAULT)
        p.add_argument("--trim-thresh", type=float, default=TRIM_DEFAULT)

    p = sub.add_parser("teach", help="teach a network from a table file")
    common_teach(p)
    p.add_argument("--out", required=True, help="snapshot output path")
    p.set_defaults(func=cmd_teach)

    p = sub.add_parser("verify", help="check a snapshot against its teacher table")
    p.add_argument("--table", required=True)
    p.add_argument("--snapshot", required=True)
    p.add_argument("--metrics", help="prefix for .csv/.json metric files")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="replay a word with supervision off")
    p.add_argument("--table", required=True)
    p.add_argument("--snapshot", required=True)
    p.add_argument("--start", help="start state token (default: first state)")
    p.add_argument("word", nargs="*", help="input symbols; AND aliases the glyph")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("inspect", help="summarize a snapshot")
    p.add_argument("--snapshot", required=True)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("DN_LOG", "WARNING").upper())
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # argparse handles usage errors with code 2
        print(f"error: {exc}", file=sys.stderr)
        log.debug("failure detail", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
