"""Synthesis engine: scoring oracles, hypothesis ranking, row-surjection
candidates, and end-to-end synthesis on the worked example."""

from __future__ import annotations

import pytest

from tablesynth.dsl import exec_program
from tablesynth.progtext import format_program
from tablesynth.synth import (
    SynthSettings,
    SynthTask,
    _Engine,
    generate_hypotheses,
    score_subtable,
    synthesize,
    synthesize_forward_only,
)
from tablesynth.table import ColumnType, Id, Schema, Table
from tablesynth.taskgen import ablation_family

from conftest import SHIFT, SHIFT_SCHEMA

INT = ColumnType.INT
STR = ColumnType.STR
ID = ColumnType.ID

EXPECTED_RUNNING = """t1 = Filter(ti, isOdd(frame));
t2 = Filter(ti, isEven(frame));
Yield("shift", t1, id, "GB", linear(-5,-25)(frame), linear(-5,-25)(frame));
Yield("shift", t2, id, "GB", linear(5,20)(frame), linear(5,20)(frame));
"""


# -- consistency score -------------------------------------------------------

def test_score_single_row_equals_column_count(shift_out, frames_in):
    row = [shift_out.rows[0]]
    assert score_subtable(row, SHIFT_SCHEMA, [frames_in]) == 5


def test_score_yield1(yield1, frames_in):
    # Two constant columns (action, channel) over two rows.
    assert score_subtable(yield1.rows, SHIFT_SCHEMA, [frames_in]) == 4


def test_score_full_output(shift_out, frames_in):
    assert score_subtable(shift_out.rows, SHIFT_SCHEMA, [frames_in]) == 8


def test_score_ordered_run():
    s = Schema([("n", INT)])
    inp = Table("i", Schema([("x", INT)]), [(0,)])
    assert score_subtable([(4,), (5,), (6,)], s, [inp]) == 3
    assert score_subtable([(4,), (6,)], s, [inp]) == 0
    # A singleton never earns the ordered term on its own.
    assert score_subtable([(4,)], s, [inp]) == 1


def test_score_concat_coverage():
    s = Schema([("s", STR)])
    inp = Table("i", Schema([("name", STR)]), [("tiktok.jpg",)])
    assert score_subtable([("tiktok",)], s, [inp]) == 2  # const + concat
    assert score_subtable([("zzz",)], s, [inp]) == 1  # const only


def test_score_empty():
    assert score_subtable([], SHIFT_SCHEMA, []) == 0


# -- hypothesis pool ---------------------------------------------------------

def test_hypotheses_ranked_and_bounded(shift_out, frames_in, yield1, yield2):
    pool = generate_hypotheses(shift_out, [frames_in], 20)
    assert 0 < len(pool) <= 20
    # Highest score first; the full output table wins here.
    assert pool[0].rows == frozenset(shift_out.rows)
    scores = [h.score for h in pool]
    assert scores == sorted(scores, reverse=True)
    rowsets = {h.rows for h in pool}
    assert frozenset(yield1.rows) in rowsets
    assert frozenset(yield2.rows) in rowsets
    target = frozenset(shift_out.rows)
    assert all(h.rows and h.rows <= target for h in pool)


def test_hypotheses_distinct(shift_out, frames_in):
    pool = generate_hypotheses(shift_out, [frames_in], 50)
    rowsets = [h.rows for h in pool]
    assert len(rowsets) == len(set(rowsets))


# -- row surjections ---------------------------------------------------------

def _engine(frames_in, shift_out) -> _Engine:
    return _Engine(SynthTask((frames_in,), shift_out, SHIFT))


def test_singleton_hypothesis_gets_trivial_surjection(frames_in, shift_out):
    eng = _engine(frames_in, shift_out)
    h = Table("h", SHIFT_SCHEMA, [shift_out.rows[0]])
    assert list(eng._surjections(frames_in, h)) == [(0, 0, 0, 0)]


def test_id_anchor_surjection(frames_in, shift_out, yield1, odd_u):
    eng = _engine(frames_in, shift_out)
    # ODD_U carries exactly the ids of YIELD1: one anchored surjection.
    maps = list(eng._surjections(odd_u, yield1))
    assert len(maps) == 1
    (r,) = maps
    for i, row in enumerate(odd_u.rows):
        assert yield1.rows[r[i]][1] == row[2]  # id columns line up


def test_no_anchor_no_match(frames_in, shift_out, yield2, odd_u):
    eng = _engine(frames_in, shift_out)
    # YIELD2's ids are absent from ODD_U, so no surjection survives.
    assert list(eng._surjections(odd_u, yield2)) == []


def test_smaller_source_cannot_cover(frames_in, shift_out, odd_u):
    eng = _engine(frames_in, shift_out)
    # A 2-row table has no surjection onto 4 target rows.
    assert list(eng._surjections(odd_u, shift_out.renamed("h"))) == []


# -- end-to-end --------------------------------------------------------------

def test_synthesize_running_example(frames_in, shift_out):
    task = SynthTask((frames_in,), shift_out, SHIFT)
    result = synthesize(task)
    assert result.status == "solved"
    assert format_program(result.program) == EXPECTED_RUNNING
    assert exec_program(result.program, [frames_in], SHIFT) == shift_out
    stats = result.stats.to_json()
    assert stats["mode"] == "bi"
    assert stats["elapsed_ms"] >= 0
    assert stats["forward_tables"] > 0
    assert stats["hypotheses_tried"] >= stats["matches_solved"] >= 2


def test_synthesize_respects_timeout(frames_in, shift_out):
    settings = SynthSettings(timeout=1e-9)
    task = SynthTask((frames_in,), shift_out, SHIFT, settings=settings)
    assert synthesize(task).status == "timeout"
    with pytest.raises(Exception):
        SynthSettings(timeout=0.0)


def test_unsolvable_at_depth_zero(frames_in, shift_out):
    settings = SynthSettings(max_depth=0)
    task = SynthTask((frames_in,), shift_out, SHIFT, settings=settings)
    assert synthesize(task).status == "exhausted"


def test_forward_only_solves_small_family():
    task = ablation_family(4)
    result = synthesize_forward_only(task)
    assert result.status == "solved"
    out = exec_program(result.program, list(task.inputs), task.action)
    assert out == task.output.renamed(out.name)
    assert result.stats.to_json()["mode"] == "forward-only"


def test_bidirectional_solves_family_sizes():
    for k in (4, 10):
        task = ablation_family(k)
        result = synthesize(task)
        assert result.status == "solved", k


def test_task_rejects_mismatched_output_schema(frames_in):
    bad = Table("to", Schema([("action", STR), ("id", ID)]), [("shift", Id("f1"))])
    with pytest.raises(Exception):
        SynthTask((frames_in,), bad, SHIFT)
