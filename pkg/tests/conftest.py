"""Shared fixtures: the worked four-frame example and benchmark paths."""

from __future__ import annotations

from pathlib import Path

import pytest

from tablesynth.dsl import ActionSignature
from tablesynth.table import ColumnType, Id, Schema, Table

ROOT = Path(__file__).resolve().parent.parent
BENCHMARKS = ROOT / "benchmarks"
SCHEMAS = ROOT / "schemas"

INT = ColumnType.INT
STR = ColumnType.STR
ID = ColumnType.ID

FRAME_SCHEMA = Schema([("file", STR), ("frame", INT), ("id", ID)])
SHIFT = ActionSignature("shift", (("id", ID), ("channel", STR),
                                  ("bx", INT), ("by", INT)))
SHIFT_SCHEMA = SHIFT.output_schema()


@pytest.fixture
def frames_in() -> Table:
    return Table("ti", FRAME_SCHEMA,
                 [("tiktok.jpg", k, Id(f"f{k}")) for k in range(1, 5)])


@pytest.fixture
def shift_out() -> Table:
    return Table("to", SHIFT_SCHEMA, [
        ("shift", Id("f1"), "GB", -30, -30),
        ("shift", Id("f2"), "GB", 30, 30),
        ("shift", Id("f3"), "GB", -40, -40),
        ("shift", Id("f4"), "GB", 40, 40),
    ])


@pytest.fixture
def odd_u() -> Table:
    return Table("u", FRAME_SCHEMA, [("tiktok.jpg", 1, Id("f1")),
                                     ("tiktok.jpg", 3, Id("f3"))])


@pytest.fixture
def even_v() -> Table:
    return Table("v", FRAME_SCHEMA, [("tiktok.jpg", 2, Id("f2")),
                                     ("tiktok.jpg", 4, Id("f4"))])


@pytest.fixture
def yield1() -> Table:
    return Table("y1", SHIFT_SCHEMA, [("shift", Id("f1"), "GB", -30, -30),
                                      ("shift", Id("f3"), "GB", -40, -40)])


@pytest.fixture
def yield2() -> Table:
    return Table("y2", SHIFT_SCHEMA, [("shift", Id("f2"), "GB", 30, 30),
                                      ("shift", Id("f4"), "GB", 40, 40)])
