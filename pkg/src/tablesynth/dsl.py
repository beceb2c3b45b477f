"""Abstract syntax, static validity, and interpretation of table programs.

A program is a sequence of transformation statements (Filter / Join /
GroupJoin / Order), each defining a fresh intermediate table, followed by a
nonempty sequence of Yield mapping statements whose outputs are unioned into
the final action table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import SchemaError, ValidationFailure
from .features import FeatureInstance, apply_feature, FeatureMissError
from .table import (
    ColumnType,
    Schema,
    Table,
    Value,
    append_column,
    check_int,
    type_of,
    union,
)

# ---------------------------------------------------------------------------
# Predicates.

#: symbol -> (argument kinds, operand type). Kinds: "cc" column/column,
#: "ck" column/constant, "c" single column.
PREDICATE_SYMBOLS = {
    "IntEq": ("cc ck", ColumnType.INT),
    "IntLt": ("cc ck", ColumnType.INT),
    "IntLeq": ("cc ck", ColumnType.INT),
    "IntGt": ("cc ck", ColumnType.INT),
    "IntGeq": ("cc ck", ColumnType.INT),
    "StrEq": ("cc ck", ColumnType.STR),
    "IsSubstring": ("cc ck", ColumnType.STR),
    "StartsWith": ("cc ck", ColumnType.STR),
    "EndsWith": ("cc ck", ColumnType.STR),
    "IsOdd": ("c", ColumnType.INT),
    "IsEven": ("c", ColumnType.INT),
}


@dataclass(frozen=True)
class SymbolApp:
    """A predicate symbol applied to a column and an optional column/constant."""

    symbol: str
    col: str
    arg: Union[str, int, None] = None  # second column name or constant
    arg_is_col: bool = False

    def __post_init__(self):
        if self.symbol not in PREDICATE_SYMBOLS:
            raise SchemaError(f"unknown predicate symbol {self.symbol}")


@dataclass(frozen=True)
class And:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Or:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Not:
    inner: "Predicate"


Predicate = Union[SymbolApp, And, Or, Not]


def predicate_size(p: Predicate) -> int:
    """Number of predicate symbols (leaves)."""
    if isinstance(p, SymbolApp):
        return 1
    if isinstance(p, Not):
        return predicate_size(p.inner)
    return predicate_size(p.left) + predicate_size(p.right)


def _leaf_holds(app: SymbolApp, row, schema: Schema) -> bool:
    v1 = row[schema.index(app.col)]
    v2 = row[schema.index(app.arg)] if app.arg_is_col else app.arg
    s = app.symbol
    if s == "IntEq":
        return v1 == v2
    if s == "IntLt":
        return v1 < v2
    if s == "IntLeq":
        return v1 <= v2
    if s == "IntGt":
        return v1 > v2
    if s == "IntGeq":
        return v1 >= v2
    if s == "StrEq":
        return v1 == v2
    if s == "IsSubstring":
        return v2 in v1
    if s == "StartsWith":
        return v1.startswith(v2)
    if s == "EndsWith":
        return v1.endswith(v2)
    if s == "IsOdd":
        return v1 % 2 == 1  # mathematical parity; negatives included
    if s == "IsEven":
        return v1 % 2 == 0
    raise SchemaError(f"unknown predicate symbol {s}")


def eval_predicate(p: Predicate, row, schema: Schema) -> bool:
    if isinstance(p, SymbolApp):
        return _leaf_holds(p, row, schema)
    if isinstance(p, Not):
        return not eval_predicate(p.inner, row, schema)
    if isinstance(p, And):
        return eval_predicate(p.left, row, schema) and eval_predicate(p.right, row, schema)
    if isinstance(p, Or):
        return eval_predicate(p.left, row, schema) or eval_predicate(p.right, row, schema)
    raise SchemaError(f"not a predicate: {p!r}")


def _check_predicate(p: Predicate, schema: Schema) -> list[str]:
    """Type-check a predicate; returns problem descriptions."""
    problems: list[str] = []
    if isinstance(p, SymbolApp):
        kinds, ty = PREDICATE_SYMBOLS[p.symbol]
        unary = kinds == "c"
        for name in [p.col] + ([p.arg] if p.arg_is_col else []):
            if name not in schema:
                problems.append(f"unknown column {name!r}")
            elif schema.type_of(name) is not ty:
                problems.append(f"column {name!r} is not {ty} for {p.symbol}")
        if unary and p.arg is not None:
            problems.append(f"{p.symbol} takes a single column")
        if not unary:
            if p.arg is None:
                problems.append(f"{p.symbol} needs a second argument")
            elif not p.arg_is_col and type_of(p.arg) is not ty:
                problems.append(f"constant {p.arg!r} is not {ty} for {p.symbol}")
        return problems
    if isinstance(p, Not):
        return _check_predicate(p.inner, schema)
    return _check_predicate(p.left, schema) + _check_predicate(p.right, schema)


# ---------------------------------------------------------------------------
# Statements.


@dataclass(frozen=True)
class Filter:
    target: str
    src: str
    predicate: Predicate


@dataclass(frozen=True)
class Join:
    target: str
    src1: str
    src2: str
    col1: str
    col2: str


@dataclass(frozen=True)
class GroupJoin:
    target: str
    src: str
    col_index: str
    aggs: tuple[tuple[str, str], ...]  # (agg, column)


@dataclass(frozen=True)
class Order:
    target: str
    src: str
    col: str
    c_start: int = 0
    c_inv: bool = False
    col_index: Optional[str] = None


TransformStmt = Union[Filter, Join, GroupJoin, Order]

AGGREGATIONS = ("max", "min", "sum", "avg", "cnt")


@dataclass(frozen=True)
class ColP:
    name: str


@dataclass(frozen=True)
class ConstP:
    value: Value


@dataclass(frozen=True)
class MutateP:
    feature: FeatureInstance
    cols: tuple[str, ...]


Projection = Union[ColP, ConstP, MutateP]


@dataclass(frozen=True)
class Yield:
    src: str
    projections: tuple[Projection, ...]

    @property
    def action(self) -> str:
        head = self.projections[0]
        if isinstance(head, ConstP) and isinstance(head.value, str):
            return head.value
        raise SchemaError("first projection is not an action constant")


MappingStmt = Yield


@dataclass(frozen=True)
class ActionSignature:
    """Defines the output schema <action:Str, arg1:t1, ...>."""

    name: str
    args: tuple[tuple[str, ColumnType], ...]

    def output_schema(self) -> Schema:
        return Schema([("action", ColumnType.STR)] + list(self.args))


@dataclass(frozen=True)
class Program:
    transform: tuple[TransformStmt, ...]
    mapping: tuple[MappingStmt, ...]


@dataclass
class ExecState:
    """Defined tables, keyed by name."""

    tables: dict[str, Table] = field(default_factory=dict)

    def define(self, t: Table):
        if t.name in self.tables:
            raise SchemaError(f"table {t.name!r} already defined")
        self.tables[t.name] = t

    def __getitem__(self, name: str) -> Table:
        try:
            return self.tables[name]
        except KeyError:
            raise SchemaError(f"table {name!r} not defined") from None


# ---------------------------------------------------------------------------
# Transformation semantics.


def exec_filter(t: Table, predicate: Predicate, name: str = "filtered") -> Table:
    rows = [r for r in t.rows if eval_predicate(predicate, r, t.schema)]
    return Table(name, t.schema, rows)


def exec_join(t1: Table, t2: Table, col1: str, col2: str, name: str = "joined") -> Table:
    if t1.name == t2.name:
        raise SchemaError("join operands must have distinct names")
    for t, c in ((t1, col1), (t2, col2)):
        if t.schema.type_of(c) is not ColumnType.ID:
            raise SchemaError(f"join column {c!r} of {t.name!r} is not Id-typed")
    colliding = set(t1.schema.names) & set(t2.schema.names)

    def out_name(t: Table, col: str) -> str:
        return f"{t.name}.{col}" if col in colliding else col

    schema = Schema(
        [(out_name(t1, n), ty) for n, ty in t1.schema.columns]
        + [(out_name(t2, n), ty) for n, ty in t2.schema.columns]
    )
    i1 = t1.schema.index(col1)
    i2 = t2.schema.index(col2)
    rows = [r1 + r2 for r1 in t1.rows for r2 in t2.rows if r1[i1] == r2[i2]]
    return Table(name, schema, rows)


def _fresh_col(base: str, schema_names) -> str:
    if base not in schema_names:
        return base
    k = 2
    while f"{base}_{k}" in schema_names:
        k += 1
    return f"{base}_{k}"


def _aggregate(agg: str, values: Sequence[Value]) -> int:
    if agg == "cnt":
        return len(values)
    ints = list(values)
    if agg == "max":
        return max(ints)
    if agg == "min":
        return min(ints)
    if agg == "sum":
        return check_int(sum(ints))
    if agg == "avg":
        s = sum(ints)
        # Integer division truncated toward zero keeps Int closed.
        q = abs(s) // len(ints)
        return q if s >= 0 else -q
    raise SchemaError(f"unknown aggregation {agg!r}")


def exec_groupjoin(
    t: Table, col_index: str, aggs: Sequence[tuple[str, str]], name: str = "grouped"
) -> Table:
    if not aggs:
        raise SchemaError("groupjoin needs at least one aggregation")
    gi = t.schema.index(col_index)
    for agg, col in aggs:
        if agg not in AGGREGATIONS:
            raise SchemaError(f"unknown aggregation {agg!r}")
        ty = t.schema.type_of(col)
        if agg != "cnt" and ty is not ColumnType.INT:
            raise SchemaError(f"{agg} over non-Int column {col!r}")
    groups: dict[Value, list] = {}
    for row in t.rows:
        groups.setdefault(row[gi], []).append(row)
    out = t
    for agg, col in aggs:
        ci = t.schema.index(col)
        vals = [_aggregate(agg, [g[ci] for g in groups[row[gi]]]) for row in out.rows]
        new_name = _fresh_col(f"{agg}_{col}", out.schema.names)
        out = append_column(out, new_name, ColumnType.INT, vals)
    return out.renamed(name)


def exec_order(
    t: Table,
    col: str,
    c_start: int = 0,
    c_inv: bool = False,
    col_index: Optional[str] = None,
    name: str = "ordered",
) -> Table:
    ty = t.schema.type_of(col)
    if ty is ColumnType.ID:
        raise SchemaError(f"cannot order on Id column {col!r}")
    ci = t.schema.index(col)
    gi = t.schema.index(col_index) if col_index is not None else None
    ranks = []
    for row in t.rows:
        group = [r for r in t.rows if gi is None or r[gi] == row[gi]]
        if c_inv:
            smaller = sum(1 for r in group if r[ci] > row[ci])
        else:
            smaller = sum(1 for r in group if r[ci] < row[ci])
        ranks.append(check_int(c_start + smaller))
    new_name = _fresh_col(f"ord_{col}", t.schema.names)
    return append_column(t, new_name, ColumnType.INT, ranks).renamed(name)


def exec_transform(state: ExecState, stmt: TransformStmt) -> Table:
    if isinstance(stmt, Filter):
        out = exec_filter(state[stmt.src], stmt.predicate, stmt.target)
    elif isinstance(stmt, Join):
        out = exec_join(state[stmt.src1], state[stmt.src2], stmt.col1, stmt.col2, stmt.target)
    elif isinstance(stmt, GroupJoin):
        out = exec_groupjoin(state[stmt.src], stmt.col_index, stmt.aggs, stmt.target)
    elif isinstance(stmt, Order):
        out = exec_order(
            state[stmt.src], stmt.col, stmt.c_start, stmt.c_inv, stmt.col_index, stmt.target
        )
    else:
        raise SchemaError(f"not a transform statement: {stmt!r}")
    state.define(out)
    return out


# ---------------------------------------------------------------------------
# Mapping semantics.


def _projection_column(p: Projection, t: Table) -> tuple[ColumnType, list[Value]]:
    if isinstance(p, ColP):
        return t.schema.type_of(p.name), list(t.column(p.name))
    if isinstance(p, ConstP):
        return type_of(p.value), [p.value] * t.nrows
    if isinstance(p, MutateP):
        idx = [t.schema.index(c) for c in p.cols]
        vals = [apply_feature(p.feature, [row[i] for i in idx]) for row in t.rows]
        return p.feature.out_type, vals
    raise SchemaError(f"not a projection: {p!r}")


def exec_yield(state: ExecState, stmt: Yield, action: ActionSignature) -> Table:
    t = state[stmt.src]
    out_schema = action.output_schema()
    if len(stmt.projections) != len(out_schema):
        raise SchemaError(
            f"yield arity {len(stmt.projections)} != action arity {len(out_schema)}"
        )
    columns = []
    for p, (col_name, col_ty) in zip(stmt.projections, out_schema.columns):
        ty, vals = _projection_column(p, t)
        if ty is not col_ty:
            raise SchemaError(f"projection for {col_name!r} has type {ty}, wants {col_ty}")
        columns.append(vals)
    rows = {tuple(c[i] for c in columns) for i in range(t.nrows)}
    return Table("yielded", out_schema, rows)


def exec_program(
    program: Program, inputs: Sequence[Table], action: ActionSignature
) -> Table:
    """Run the program over its inputs; returns the union of Yield outputs."""
    violations = validate_program(program, [t.schema for t in inputs],
                                  [t.name for t in inputs], action)
    if violations:
        raise ValidationFailure(violations)
    state = ExecState()
    for t in inputs:
        state.define(t)
    for i, stmt in enumerate(program.transform):
        try:
            exec_transform(state, stmt)
        except (SchemaError, FeatureMissError) as exc:
            raise SchemaError(f"transform statement {i}: {exc}") from exc
    out: Optional[Table] = None
    for i, stmt in enumerate(program.mapping):
        try:
            part = exec_yield(state, stmt, action)
        except (SchemaError, FeatureMissError) as exc:
            raise SchemaError(f"mapping statement {i}: {exc}") from exc
        out = part if out is None else union(out, part)
    assert out is not None
    return out.renamed("out")


# ---------------------------------------------------------------------------
# Static validity.


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str


def _transform_schema(stmt: TransformStmt, env: dict[str, Schema]) -> Schema:
    """Schema of a transform statement's result, given defined schemas.

    Mirrors the interpreter; raises SchemaError on any type problem."""
    if isinstance(stmt, Filter):
        schema = env[stmt.src]
        problems = _check_predicate(stmt.predicate, schema)
        if problems:
            raise SchemaError("; ".join(problems))
        return schema
    probe_rows: list = []
    if isinstance(stmt, Join):
        t1 = Table(stmt.src1, env[stmt.src1], probe_rows)
        t2 = Table(stmt.src2, env[stmt.src2], probe_rows)
        return exec_join(t1, t2, stmt.col1, stmt.col2, stmt.target).schema
    if isinstance(stmt, GroupJoin):
        t = Table(stmt.src, env[stmt.src], probe_rows)
        return exec_groupjoin(t, stmt.col_index, stmt.aggs, stmt.target).schema
    if isinstance(stmt, Order):
        t = Table(stmt.src, env[stmt.src], probe_rows)
        return exec_order(
            t, stmt.col, stmt.c_start, stmt.c_inv, stmt.col_index, stmt.target
        ).schema
    raise SchemaError(f"not a transform statement: {stmt!r}")


def validate_program(
    program: Program,
    input_schemas: Sequence[Schema],
    input_names: Sequence[str],
    action: ActionSignature,
) -> list[Violation]:
    """Static validity: defined-before-use, fresh names, type checks, and the
    Yield rules (action constant first, argument types agree). Returns the
    list of violations; empty means valid."""
    violations: list[Violation] = []
    env: dict[str, Schema] = dict(zip(input_names, input_schemas))
    for i, stmt in enumerate(program.transform):
        srcs = (
            [stmt.src1, stmt.src2]
            if isinstance(stmt, Join)
            else [stmt.src]
        )
        missing = [s for s in srcs if s not in env]
        if missing:
            violations.append(
                Violation("defined-before-use", f"statement {i} uses undefined {missing}")
            )
            continue
        if stmt.target in env:
            violations.append(
                Violation("fresh name", f"statement {i} redefines {stmt.target!r}")
            )
            continue
        if isinstance(stmt, Join):
            for src, col in ((stmt.src1, stmt.col1), (stmt.src2, stmt.col2)):
                if col in env[src] and env[src].type_of(col) is not ColumnType.ID:
                    violations.append(
                        Violation("Id-typed join", f"statement {i} joins on non-Id {col!r}")
                    )
        try:
            env[stmt.target] = _transform_schema(stmt, env)
        except SchemaError as exc:
            violations.append(Violation("type check", f"statement {i}: {exc}"))
            env[stmt.target] = env[srcs[0]]  # keep going with a best guess
    if not program.mapping:
        violations.append(Violation("nonempty mapping", "program has no Yield"))
    out_schema = action.output_schema()
    for i, stmt in enumerate(program.mapping):
        if stmt.src not in env:
            violations.append(
                Violation("defined-before-use", f"yield {i} uses undefined {stmt.src!r}")
            )
            continue
        schema = env[stmt.src]
        head = stmt.projections[0] if stmt.projections else None
        if not (isinstance(head, ConstP) and isinstance(head.value, str)):
            violations.append(
                Violation("action constant", f"yield {i} must start with a constant string")
            )
        elif head.value != action.name:
            violations.append(
                Violation("action constant", f"yield {i} names action {head.value!r}, "
                                             f"expected {action.name!r}")
            )
        if len(stmt.projections) != len(out_schema):
            violations.append(
                Violation("argument arity", f"yield {i} has {len(stmt.projections)} "
                                            f"projections, action wants {len(out_schema)}")
            )
            continue
        for j, (p, (col_name, col_ty)) in enumerate(
            zip(stmt.projections, out_schema.columns)
        ):
            try:
                ty = _projection_type(p, schema)
            except SchemaError as exc:
                violations.append(Violation("type check", f"yield {i} arg {j}: {exc}"))
                continue
            if ty is not col_ty:
                violations.append(
                    Violation("argument type", f"yield {i} arg {j} ({col_name}) has type "
                                               f"{ty}, wants {col_ty}")
                )
    return violations


def _projection_type(p: Projection, schema: Schema) -> ColumnType:
    if isinstance(p, ColP):
        return schema.type_of(p.name)
    if isinstance(p, ConstP):
        return type_of(p.value)
    if isinstance(p, MutateP):
        for c in p.cols:
            if schema.type_of(c) is not p.feature.in_type:
                raise SchemaError(f"mutate input {c!r} is not {p.feature.in_type}")
        return p.feature.out_type
    raise SchemaError(f"not a projection: {p!r}")
