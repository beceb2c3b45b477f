"""Synthetic task generators: shapes and the generating-program oracle."""

from __future__ import annotations

import random

from tablesynth.dsl import exec_program
from tablesynth.table import ColumnType
from tablesynth.taskgen import ablation_family, random_task


def test_ablation_family_shape():
    task = ablation_family(10)
    (inp,) = task.inputs
    assert inp.nrows == 10
    assert task.output.nrows == 10
    assert task.action.name == "shift"
    channels = set(task.output.column("channel"))
    assert channels == {"GB", "R"}
    # Odd frames shift by -5k - 25, even frames by 5k + 20.
    by_id = {row[1].label: row for row in task.output.rows}
    assert by_id["f03"][3] == -40
    assert by_id["f04"][3] == 40


def test_ablation_family_grows():
    for k in (4, 20):
        task = ablation_family(k)
        assert task.output.nrows == k


def test_random_task_program_is_an_oracle():
    rng = random.Random(20260823)
    for _ in range(50):
        task, program = random_task(rng)
        out = exec_program(program, list(task.inputs), task.action)
        assert out == task.output.renamed(out.name)
        assert task.output.nrows > 0
        assert task.output.schema.columns[0] == ("action", ColumnType.STR)


def test_random_task_is_deterministic_per_seed():
    t1, p1 = random_task(random.Random(5))
    t2, p2 = random_task(random.Random(5))
    assert t1.output == t2.output
    assert p1 == p2
