import csv
import json
import math
import random

import numpy as np
import pytest

from dnemu.grounding import parse_bits
from dnemu.harness import (TeachingSchedule, emit_metrics,
                           oracle_nearest_context, run_free, stored_contexts,
                           teach, teach_sequence, teach_table,
                           verify_error_free)
from dnemu.network import Network, StepInput

from reference_tables import AND, REPLAY_CONTEXTS, TASK1_TRACE, TASK1_WORD


# -- teaching sweeps -----------------------------------------------------------

def test_sweep_recruits_one_neuron_per_entry(taught_task1):
    net, report = taught_task1
    assert report.recruit_count == 18
    assert net.y.n_initialized == 18
    assert len(report.rows) == 18


def test_second_epoch_recruits_nothing(task1):
    table, gmap = task1
    net = Network(3, 3, 18)
    teach_table(net, table, gmap)
    again = teach_table(net, table, gmap)
    assert again.recruit_count == 0
    assert all(row.pre_response_max >= 2.0 - 1e-9 for row in again.rows)
    assert all(row.z_correct for row in again.rows)


def test_grand_sweep_recruits_forty(taught_grand):
    net, report = taught_grand
    assert report.recruit_count == 40 and net.y.n_initialized == 40


def test_recruits_bounded_by_distinct_contexts(task1):
    table, gmap = task1
    net = Network(3, 3, 30)  # head-room beyond the 18 distinct contexts
    teach_table(net, table, gmap, epochs=3)
    assert net.y.n_initialized == 18
    assert net.recruit_refusals == 0


def test_epochs_never_move_converged_weights(task1):
    table, gmap = task1
    once = Network(3, 3, 18, seed=6)
    teach_table(once, table, gmap)
    thrice = Network(3, 3, 18, seed=6)
    teach_table(thrice, table, gmap, epochs=3)
    assert np.array_equal(once.y.top_down[:18], thrice.y.top_down[:18])
    assert np.array_equal(once.y.bottom_up[:18], thrice.y.bottom_up[:18])
    # projection rows re-average the same winner mix each epoch; identical up
    # to rounding of the running mean
    assert np.abs(once.to_z.weights - thrice.to_z.weights).max() <= 1e-12


def test_presentation_order_does_not_matter(task1):
    table, gmap = task1
    pairs = [(q, s) for q in range(6) for s in range(3)]
    shuffled = pairs[:]
    random.Random(13).shuffle(shuffled)
    a = Network(3, 3, 18, seed=0)
    teach_table(a, table, gmap)
    b = Network(3, 3, 18, seed=0)
    teach_table(b, table, gmap, order=shuffled)
    rows_a = sorted((a.y.top_down[j].tobytes(), a.y.bottom_up[j].tobytes(),
                     int(a.y.ages[j])) for j in range(18))
    rows_b = sorted((b.y.top_down[j].tobytes(), b.y.bottom_up[j].tobytes(),
                     int(b.y.ages[j])) for j in range(18))
    assert rows_a == rows_b
    assert verify_error_free(b, table, gmap).error_free


def test_schedule_dispatch_and_validation(task1):
    table, gmap = task1
    with pytest.raises(ValueError):
        TeachingSchedule(mode="nope")
    with pytest.raises(ValueError):
        TeachingSchedule(epochs=0)
    with pytest.raises(ValueError):
        TeachingSchedule(mode="sequence-replay")
    net = Network(3, 3, 8)
    schedule = TeachingSchedule(mode="sequence-replay",
                                steps=tuple(REPLAY_CONTEXTS))
    report = teach(net, table, gmap, schedule)
    assert report.recruit_count == 5
    with pytest.raises(ValueError):
        teach(net, table, gmap, TeachingSchedule(mode="free-run"))


# -- verification ----------------------------------------------------------------

def test_taught_net_is_error_free(taught_task1, task1):
    net, _ = taught_task1
    table, gmap = task1
    report = verify_error_free(net, table, gmap)
    assert report.total_queries == 18
    assert report.mismatches == []
    assert report.agreement_rate == 1.0


def test_untaught_net_misses_everything(task1):
    table, gmap = task1
    report = verify_error_free(Network(3, 3, 18), table, gmap)
    assert report.total_queries == 18
    assert len(report.mismatches) == 18
    assert report.agreement_rate == 0.0


def test_grand_net_is_error_free(taught_grand, grand13):
    net, _ = taught_grand
    table, gmap = grand13
    report = verify_error_free(net, table, gmap)
    assert report.total_queries == 40 and report.error_free


def test_verification_is_repeatable(taught_task1, task1):
    net, _ = taught_task1
    table, gmap = task1
    first = verify_error_free(net, table, gmap)
    second = verify_error_free(net, table, gmap)
    assert first.summary() == second.summary()


# -- the brute-force nearest-context oracle ---------------------------------------

def test_oracle_exact_context_wins():
    contexts = [(parse_bits("001"), parse_bits("010")),
                (parse_bits("010"), parse_bits("100"))]
    assert oracle_nearest_context(contexts, parse_bits("010"), parse_bits("100")) == 1


def test_oracle_prefers_larger_overlap():
    # both contexts share the input part; the query state (1,1,1) overlaps
    # (1,1,0) at cos 2/sqrt(6) ~ 0.816 and (1,0,0) at cos 1/sqrt(3) ~ 0.577
    contexts = [(np.array([1.0, 1.0, 0.0]), parse_bits("100")),
                (np.array([1.0, 0.0, 0.0]), parse_bits("100"))]
    query_z = np.array([1.0, 1.0, 1.0])
    assert oracle_nearest_context(contexts, query_z, parse_bits("100")) == 0
    assert (2 / math.sqrt(6)) > (1 / math.sqrt(3))


def test_oracle_needs_contexts():
    with pytest.raises(ValueError):
        oracle_nearest_context([], parse_bits("1"), parse_bits("1"))


def test_engine_matches_oracle_when_under_provisioned(task1):
    table, gmap = task1
    net = Network(3, 3, 10, seed=21)
    teach_table(net, table, gmap, epochs=2)
    assert net.recruit_refusals > 0
    contexts = stored_contexts(net)
    rng = np.random.default_rng(2)
    for _ in range(300):
        z = rng.integers(0, 2, 3).astype(float)
        x = rng.integers(0, 2, 3).astype(float)
        out = net.query(z, x)
        assert out.winner_ids[0] == oracle_nearest_context(contexts, z, x)


# -- free running -----------------------------------------------------------------

def test_free_run_matches_symbolic_run(taught_task1, task1):
    net, _ = taught_task1
    _, gmap = task1
    assert run_free(net, gmap, "q0", TASK1_WORD) == TASK1_TRACE


def test_free_run_empty_word(taught_task1, task1):
    net, _ = taught_task1
    _, gmap = task1
    assert run_free(net, gmap, "q0", []) == []


def test_free_run_switches_tasks(taught_grand, grand13):
    net, _ = taught_grand
    _, gmap = grand13
    trace = run_free(net, gmap, "(q1,q0)", ["s3", "T", "F"])
    assert trace == ["(q3,qe)", "(q3,qo)", "(q3,qe)"]


def test_free_run_respects_task_isolation(taught_grand, grand13):
    net, _ = taught_grand
    _, gmap = grand13
    rng = random.Random(3)
    for _ in range(50):
        word = [rng.choice(["T", "F", AND]) for _ in range(rng.randrange(12))]
        trace = run_free(net, gmap, "(q1,q0)", word)
        assert all(tok.startswith("(q1,") for tok in trace)


def test_free_run_surfaces_undecodable_predictions():
    from dnemu.grounding import GroundingMap
    gmap = GroundingMap({"a": parse_bits("01"), "b": parse_bits("10")},
                        {"x": parse_bits("1")})
    net = Network(2, 1, 4)
    # an inconsistent teacher links one context to both state components
    z, x = gmap.encode_state("a"), gmap.encode_input("x")
    net.step(StepInput(z, x, z_supervised=True, x_supervised=True,
                       z_next=gmap.encode_state("a")))
    net.step(StepInput(z, x, z_supervised=True, x_supervised=True,
                       z_next=gmap.encode_state("b")))
    assert run_free(net, gmap, "a", ["x"]) == ["?(a|b)"]


def test_free_run_marks_empty_predictions():
    from dnemu.grounding import GroundingMap
    gmap = GroundingMap({"a": parse_bits("01"), "b": parse_bits("10")},
                        {"x": parse_bits("1")})
    net = Network(2, 1, 4)
    assert run_free(net, gmap, "a", ["x"]) == ["?()"]


def test_successor_prediction_after_sequence_teaching(task1):
    table, gmap = task1
    script = REPLAY_CONTEXTS + [(f"q_F{AND}", "T"), ("q_F", AND)]
    net = Network(3, 3, 8)
    report = teach_sequence(net, gmap, script, table=table)
    # the two repeated contexts re-fire under supervision without recruiting
    assert report.recruit_count == 5 and net.y.n_initialized == 5
    out = net.query(gmap.encode_state("q_F"), gmap.encode_input(AND))
    assert gmap.decode_nearest(out.x_pred, "input") == ("T", 1.0)


# -- metrics ------------------------------------------------------------------------

def test_metrics_one_csv_row_per_step(taught_task1, tmp_path):
    _, report = taught_task1
    summary = emit_metrics(report, csv_path=tmp_path / "m.csv",
                           json_path=tmp_path / "m.json")
    with open(tmp_path / "m.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["step", "winner", "recruited", "preResponseMax", "zCorrect"]
    assert len(rows) == 1 + 18
    assert rows[1][2] == "true" and rows[1][4] == "false"
    assert json.loads((tmp_path / "m.json").read_text())["recruitCount"] == 18
    assert summary["recruitCount"] == 18


def test_metrics_empty_report(tmp_path):
    from dnemu.harness import RunReport
    emit_metrics(RunReport(), csv_path=tmp_path / "m.csv")
    with open(tmp_path / "m.csv", newline="", encoding="utf-8") as fh:
        rows = list(fh)
    assert len(rows) == 1  # header only


def test_metrics_verification_summary(taught_task1, task1, tmp_path):
    net, _ = taught_task1
    table, gmap = task1
    report = verify_error_free(net, table, gmap)
    summary = emit_metrics(report, json_path=tmp_path / "v.json")
    assert summary["agreementRate"] == 1.0
    assert json.loads((tmp_path / "v.json").read_text())["totalQueries"] == 18
