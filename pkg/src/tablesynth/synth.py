"""Bidirectional synthesis of table programs from one input/output example.

Forward direction: depth-bounded enumeration of transform statements, with
observational equivalence classing. Backward direction: sub-tables of the
output example (hypotheses) ranked by a consistency score, each matched
against forward tables by solving per-column feature parameters. Matched
hypotheses are combined by exact cover, and the winning cover is assembled
into a verified program.

A forward-only baseline replaces the hypothesis generator with brute-force
enumeration of output subsets in decreasing size; it is intentionally
exponential in the number of output rows.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Sequence

from .dsl import (
    ActionSignature,
    And,
    ColP,
    ConstP,
    Filter,
    GroupJoin,
    Join,
    MutateP,
    Not,
    Or,
    Order,
    Predicate,
    Program,
    Projection,
    SymbolApp,
    TransformStmt,
    Yield,
    exec_program,
    exec_transform,
    ExecState,
    validate_program,
)
from .errors import EngineInternalError, SchemaError, TableSynthError
from .features import (
    DEFAULT_CAPS,
    FeatureFamily,
    SolverCaps,
    solve_concat,
    solve_div,
    solve_linear,
    solve_mod,
    solve_substring,
    solve_sum,
)
from .table import ColumnType, Schema, Table, Value, _sort_key

# ---------------------------------------------------------------------------
# Configuration and result types.


@dataclass(frozen=True)
class SynthSettings:
    max_depth: int = 3
    hypothesis_bound: int = 20
    timeout: float = 120.0
    mode: str = "bi"  # "bi" | "forward-only"
    caps: SolverCaps = DEFAULT_CAPS
    merge_equivalent: bool = True
    cache_solver: bool = True
    groupjoin_max_aggs: int = 2
    concat_max_inputs: int = 2
    # Sub-table pools are augmented with the full power set when the output
    # example is at most this many rows; keeps small examples complete.
    powerset_rows: int = 6
    surjection_node_cap: int = 20000

    def __post_init__(self):
        if self.max_depth < 0 or self.hypothesis_bound <= 0 or self.timeout <= 0:
            raise SchemaError("settings must be positive")
        if self.mode not in ("bi", "forward-only"):
            raise SchemaError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class SynthTask:
    inputs: tuple[Table, ...]
    output: Table
    action: ActionSignature
    constants: tuple[Value, ...] = ()
    settings: SynthSettings = SynthSettings()

    def __post_init__(self):
        names = [t.name for t in self.inputs]
        if len(set(names)) != len(names):
            raise SchemaError("input tables must have distinct names")
        if self.output.schema != self.action.output_schema():
            raise SchemaError("output schema does not match the action signature")
        a = self.output.schema.index("action")
        for row in self.output.rows:
            if row[a] != self.action.name:
                raise SchemaError(f"output row names action {row[a]!r}, "
                                  f"expected {self.action.name!r}")


@dataclass(frozen=True)
class ForwardEntry:
    stmt: Optional[TransformStmt]  # None for input tables
    table: Table
    depth: int
    order: int  # creation index, used for topological assembly


@dataclass(frozen=True)
class Hypothesis:
    rows: frozenset
    score: int
    provenance: str  # signature-group | complement | full-table


@dataclass(frozen=True)
class MatchResult:
    row_map: tuple[int, ...]  # t row index -> h row index
    col_map: tuple[str, ...]  # human-readable choice per output column


@dataclass
class SynthStats:
    elapsed_ms: int = 0
    forward_tables: int = 0
    hypotheses_tried: int = 0
    matches_solved: int = 0
    mode: str = "bi"

    def to_json(self) -> dict:
        return {
            "elapsed_ms": self.elapsed_ms,
            "forward_tables": self.forward_tables,
            "hypotheses_tried": self.hypotheses_tried,
            "matches_solved": self.matches_solved,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class SynthResult:
    status: str  # solved | timeout | exhausted
    program: Optional[Program]
    stats: SynthStats


class _SearchTimeout(Exception):
    pass


class _Deadline:
    def __init__(self, seconds: float):
        self.end = time.monotonic() + seconds

    def check(self):
        if time.monotonic() > self.end:
            raise _SearchTimeout


# ---------------------------------------------------------------------------
# Consistency score (per-column constant / consecutive-run / concat terms).


def _concat_feasible(value: str, inputs: Sequence[Table]) -> bool:
    """Greedy longest-match coverage of ``value`` by substrings of the string
    fields of some single input row."""
    if not value:
        return False
    for t in inputs:
        str_idx = [i for i, (_, ty) in enumerate(t.schema.columns)
                   if ty is ColumnType.STR]
        if not str_idx:
            continue
        for row in t.rows:
            fields = [row[i] for i in str_idx]
            pos = 0
            while pos < len(value):
                best = 0
                for length in range(len(value) - pos, 0, -1):
                    piece = value[pos:pos + length]
                    if any(piece in f for f in fields):
                        best = length
                        break
                if best == 0:
                    break
                pos += best
            if pos == len(value):
                return True
    return False


def score_subtable(rows: Sequence, schema: Schema, inputs: Sequence[Table]) -> int:
    """S(t) = sum over columns of (const + ordered + concat terms) x row count."""
    rows = list(rows)
    if not rows:
        return 0
    per_col = 0
    for j, (_, ty) in enumerate(schema.columns):
        vals = [r[j] for r in rows]
        if len(set(vals)) == 1:
            per_col += 1
        if ty is ColumnType.INT and len(vals) >= 2:
            s = sorted(vals)
            if all(b - a == 1 for a, b in zip(s, s[1:])):
                per_col += 1
        if ty is ColumnType.STR:
            if all(_concat_feasible(v, inputs) for v in vals):
                per_col += 1
    return per_col * len(rows)


# ---------------------------------------------------------------------------
# Hypothesis generation and ranking.


def _row_key(row) -> tuple:
    return tuple(_sort_key(v) for v in row)


def _rowset_key(rows: frozenset) -> tuple:
    return tuple(sorted(_row_key(r) for r in rows))


class HypothesisGenerator:
    """Prioritized, bounded queue of sub-tables of the output example.

    Candidates: the full example; per-column constant-signature groups;
    maximal consecutive-integer runs per Int column; concat-feasible groups
    per Str column; pairwise intersections; complements of everything; plus
    the full power set when the example is small enough. Ranked by score
    descending, then more rows, then canonical row-set order.
    """

    def __init__(self, output: Table, inputs: Sequence[Table],
                 settings: SynthSettings):
        self.output = output
        self.inputs = list(inputs)
        self.bound = settings.hypothesis_bound
        self.all_rows = frozenset(output.rows)
        pool: dict[frozenset, str] = {self.all_rows: "full-table"}

        def add(rows, tag):
            if rows and rows not in pool:
                pool[frozenset(rows)] = tag

        for j, (_, ty) in enumerate(output.schema.columns):
            groups: dict[Value, list] = {}
            for row in output.rows:
                groups.setdefault(row[j], []).append(row)
            for group in groups.values():
                add(frozenset(group), "signature-group")
            if ty is ColumnType.INT:
                for run in self._consecutive_runs(j):
                    add(run, "signature-group")
            if ty is ColumnType.STR:
                feasible = [r for r in output.rows
                            if _concat_feasible(r[j], self.inputs)]
                add(frozenset(feasible), "signature-group")
        base = list(pool)
        for a, b in itertools.combinations(base, 2):
            add(a & b, "signature-group")
        for c in list(pool):
            add(self.all_rows - c, "complement")
        if output.nrows <= settings.powerset_rows:
            for k in range(1, output.nrows):
                for combo in itertools.combinations(output.rows, k):
                    add(frozenset(combo), "signature-group")
        self.queue: list[Hypothesis] = sorted(
            (Hypothesis(rows, score_subtable(rows, output.schema, self.inputs), tag)
             for rows, tag in pool.items()),
            key=lambda h: (-h.score, -len(h.rows), _rowset_key(h.rows)),
        )
        self.emitted = 0

    def _consecutive_runs(self, j: int) -> list[frozenset]:
        vals = [r[j] for r in self.output.rows]
        if len(set(vals)) != len(vals):
            return []
        by_val = {r[j]: r for r in self.output.rows}
        runs = []
        current = []
        for v in sorted(by_val):
            if current and v != current[-1] + 1:
                runs.append(current)
                current = []
            current.append(v)
        runs.append(current)
        return [frozenset(by_val[v] for v in run) for run in runs if len(run) >= 2]

    def next(self) -> Optional[Hypothesis]:
        if self.emitted >= self.bound or not self.queue:
            return None
        self.emitted += 1
        return self.queue.pop(0)

    def update_rank(self, matched: Hypothesis):
        complement = self.all_rows - matched.rows
        demoted = [h for h in self.queue
                   if h.rows < matched.rows and h.rows != complement]
        kept = [h for h in self.queue
                if not (h.rows < matched.rows) and h.rows != complement]
        front = []
        if complement:
            front = [Hypothesis(
                complement,
                score_subtable(complement, self.output.schema, self.inputs),
                "complement",
            )]
        self.queue = front + kept + demoted


# ---------------------------------------------------------------------------
# Forward expansion.

_INT_CONST_SYMBOLS = ("IntEq", "IntLt", "IntLeq", "IntGt", "IntGeq")
_STR_CONST_SYMBOLS = ("StrEq", "IsSubstring", "StartsWith", "EndsWith")
#: symbols without a complementary symbol in the set get an explicit Not atom.
_NEGATABLE = ("IntEq", "StrEq", "IsSubstring", "StartsWith", "EndsWith")


def _atoms(schema: Schema, constants: Sequence[Value]) -> list[Predicate]:
    atoms: list[Predicate] = []
    int_cols = [n for n, ty in schema.columns if ty is ColumnType.INT]
    str_cols = [n for n, ty in schema.columns if ty is ColumnType.STR]
    for col in int_cols:
        atoms.append(SymbolApp("IsOdd", col))
        atoms.append(SymbolApp("IsEven", col))
    for cols, symbols, eq in ((int_cols, _INT_CONST_SYMBOLS, "IntEq"),
                              (str_cols, _STR_CONST_SYMBOLS, "StrEq")):
        for a, b in itertools.combinations(cols, 2):
            atoms.append(SymbolApp(eq, a, b, arg_is_col=True))
            for sym in symbols:
                if sym == eq:
                    continue
                atoms.append(SymbolApp(sym, a, b, arg_is_col=True))
                atoms.append(SymbolApp(sym, b, a, arg_is_col=True))
    for const in constants:
        if isinstance(const, int) and not isinstance(const, bool):
            for col in int_cols:
                for sym in _INT_CONST_SYMBOLS:
                    atoms.append(SymbolApp(sym, col, const))
        elif isinstance(const, str):
            for col in str_cols:
                for sym in _STR_CONST_SYMBOLS:
                    atoms.append(SymbolApp(sym, col, const))
    atoms += [Not(a) for a in atoms
              if isinstance(a, SymbolApp) and a.symbol in _NEGATABLE]
    return atoms


def _predicates(schema: Schema, constants, size: int,
                memo: dict) -> list[Predicate]:
    key = (schema, size)
    if key in memo:
        return memo[key]
    if size == 1:
        out = _atoms(schema, constants)
    else:
        out = []
        smaller = _predicates(schema, constants, size - 1, memo)
        atoms = _predicates(schema, constants, 1, memo)
        for left in atoms:
            for right in smaller:
                out.append(And(left, right))
                out.append(Or(left, right))
    memo[key] = out
    return out


class _Engine:
    def __init__(self, task: SynthTask):
        self.task = task
        self.settings = task.settings
        self.deadline = _Deadline(self.settings.timeout)
        self.stats = SynthStats(mode=self.settings.mode)
        self.entries: list[ForwardEntry] = []
        self.by_name: dict[str, ForwardEntry] = {}
        self.seen_tables: dict[Table, ForwardEntry] = {}
        self.pred_memo: dict = {}
        self.solver_cache: dict = {}
        self.name_counter = 0
        for t in task.inputs:
            self._add_entry(None, t, 0)

    # -- forward search ------------------------------------------------------

    def _fresh_name(self) -> str:
        while True:
            self.name_counter += 1
            name = f"t{self.name_counter}"
            if name not in self.by_name:
                return name

    def _add_entry(self, stmt, table: Table, depth: int) -> bool:
        if self.settings.merge_equivalent and table in self.seen_tables:
            return False
        entry = ForwardEntry(stmt, table, depth, len(self.entries))
        self.entries.append(entry)
        self.by_name[table.name] = entry
        self.seen_tables.setdefault(table, entry)
        self.stats.forward_tables = len(self.entries)
        return True

    def _try_stmt(self, stmt: TransformStmt, depth: int):
        state = ExecState(dict(self.by_name_tables()))
        try:
            table = exec_transform(state, stmt)
        except TableSynthError:
            return
        if table.nrows == 0:
            return  # empty intermediates can never feed a Yield
        self._add_entry(stmt, table, depth)

    def by_name_tables(self):
        return {name: e.table for name, e in self.by_name.items()}

    def expand(self, d: int):
        existing = list(self.entries)
        constants = sorted(self.task.constants, key=lambda v: (str(type(v)), v))
        for e in existing:
            self.deadline.check()
            size = d - e.depth
            if size >= 1:
                for pred in _predicates(e.table.schema, constants, size,
                                        self.pred_memo):
                    self.deadline.check()
                    self._try_stmt(Filter(self._fresh_name(), e.table.name, pred),
                                   d)
        for e1 in existing:
            for e2 in existing:
                if e1 is e2 or max(e1.depth, e2.depth) + 1 != d:
                    continue
                id1 = [n for n, ty in e1.table.schema.columns
                       if ty is ColumnType.ID]
                id2 = [n for n, ty in e2.table.schema.columns
                       if ty is ColumnType.ID]
                for c1 in id1:
                    for c2 in id2:
                        self.deadline.check()
                        self._try_stmt(
                            Join(self._fresh_name(), e1.table.name,
                                 e2.table.name, c1, c2), d)
        for e in existing:
            if e.depth != d - 1:
                continue
            schema = e.table.schema
            int_cols = [n for n, ty in schema.columns if ty is ColumnType.INT]
            for col_index in schema.names:
                singles = [("cnt", col_index)]
                singles += [(agg, c) for c in int_cols
                            for agg in ("max", "min", "sum", "avg")]
                pools = [(s,) for s in singles]
                if self.settings.groupjoin_max_aggs >= 2:
                    pools += list(itertools.combinations(singles, 2))
                for aggs in pools:
                    self.deadline.check()
                    self._try_stmt(
                        GroupJoin(self._fresh_name(), e.table.name, col_index,
                                  tuple(aggs)), d)
            orderable = [n for n, ty in schema.columns if ty is not ColumnType.ID]
            for col in orderable:
                for col_index in [None] + [n for n in schema.names if n != col]:
                    self.deadline.check()
                    self._try_stmt(
                        Order(self._fresh_name(), e.table.name, col, 0, False,
                              col_index), d)

    # -- matching ------------------------------------------------------------

    def _solve(self, family: FeatureFamily, data: tuple):
        key = (family, data)
        if self.settings.cache_solver and key in self.solver_cache:
            return self.solver_cache[key]
        self.deadline.check()
        caps = self.settings.caps
        if family is FeatureFamily.LINEAR:
            result = solve_linear(data)
        elif family is FeatureFamily.DIV:
            result = solve_div(data, caps)
        elif family is FeatureFamily.MOD:
            result = solve_mod(data)
        elif family is FeatureFamily.SUM:
            result = solve_sum(data)
        elif family is FeatureFamily.SUBSTRING:
            result = solve_substring(data, caps)
        else:
            result = solve_concat(data, caps)
        if self.settings.cache_solver:
            self.solver_cache[key] = result
        return result

    def _surjections(self, t: Table, h: Table) -> Iterator[tuple[int, ...]]:
        """Candidate row surjections t-rows -> h-rows.

        A column of h whose values are pairwise distinct identifies the row
        map: each candidate comes from reading that column out of some
        type-compatible concrete column of t (Id anchors are the special
        case). When such a column exists only anchored candidates are tried;
        blind enumeration is reserved for hypotheses without one.
        """
        if h.nrows == 1:
            yield (0,) * t.nrows
            return
        identifying = []
        for j in range(len(h.schema)):
            vals = [row[j] for row in h.rows]
            if len(set(vals)) == len(vals):
                identifying.append((j, {v: i for i, v in enumerate(vals)}))
        if identifying:
            seen = set()
            for j, index in identifying:
                ty_j = h.schema.columns[j][1]
                for c, (_, tty) in enumerate(t.schema.columns):
                    if tty is not ty_j:
                        continue
                    r = []
                    for trow in t.rows:
                        i = index.get(trow[c])
                        if i is None:
                            break
                        r.append(i)
                    else:
                        rt = tuple(r)
                        if len(set(rt)) == h.nrows and rt not in seen:
                            seen.add(rt)
                            yield rt
            return
        t_id = [i for i, (_, ty) in enumerate(t.schema.columns)
                if ty is ColumnType.ID]
        h_id = [j for j, (_, ty) in enumerate(h.schema.columns)
                if ty is ColumnType.ID]
        yield from self._enumerate_surjections(t, h, t_id, h_id)

    def _enumerate_surjections(self, t, h, t_id, h_id):
        nh = h.nrows
        compat = []
        for trow in t.rows:
            ok_rows = []
            for i, hrow in enumerate(h.rows):
                if self._pair_compatible(t, trow, h, hrow, t_id):
                    ok_rows.append(i)
            compat.append(ok_rows)
        budget = [self.settings.surjection_node_cap]

        def rec(k, assignment, covered):
            if budget[0] <= 0:
                return
            budget[0] -= 1
            if k == t.nrows:
                if len(covered) == nh:
                    yield tuple(assignment)
                return
            remaining = t.nrows - k
            if nh - len(covered) > remaining:
                return
            for i in compat[k]:
                assignment.append(i)
                added = i not in covered
                if added:
                    covered.add(i)
                yield from rec(k + 1, assignment, covered)
                if added:
                    covered.remove(i)
                assignment.pop()

        yield from rec(0, [], set())

    def _pair_compatible(self, t, trow, h, hrow, t_id) -> bool:
        for j, (_, ty) in enumerate(h.schema.columns):
            want = hrow[j]
            if ty is ColumnType.ID:
                if not any(trow[i] == want for i in t_id):
                    return False
                continue
            cols = [i for i, (_, tty) in enumerate(t.schema.columns) if tty is ty]
            if any(trow[i] == want for i in cols):
                continue
            hcol = {r[j] for r in h.rows}
            if len(hcol) == 1:
                continue  # constant projection remains possible
            # A symbolic column could still produce the value.
            if ty is ColumnType.INT and any(
                tty is ColumnType.INT for _, tty in t.schema.columns
            ):
                continue
            if ty is ColumnType.STR and any(
                tty is ColumnType.STR for _, tty in t.schema.columns
            ):
                continue
            return False
        return True

    def _solve_columns(self, t: Table, h: Table,
                       r: tuple[int, ...]):
        """Find one projection per output column reproducing h under r."""
        projections: list[Projection] = [ConstP(self.task.action.name)]
        choices = ["const action"]
        schema = t.schema
        int_cols = [n for n, ty in schema.columns if ty is ColumnType.INT]
        str_cols = [n for n, ty in schema.columns if ty is ColumnType.STR]
        for j in range(1, len(h.schema)):
            _, ty = h.schema.columns[j]
            want = tuple(h.rows[r[i]][j] for i in range(t.nrows))
            found = None
            for name, cty in schema.columns:
                if cty is ty and t.column(name) == want:
                    found = ColP(name)
                    choices.append(f"col {name}")
                    break
            if found is None and ty is not ColumnType.ID and len(set(want)) == 1:
                found = ConstP(want[0])
                choices.append("const")
            if found is None and ty is ColumnType.INT:
                for family in (FeatureFamily.LINEAR, FeatureFamily.DIV,
                               FeatureFamily.MOD):
                    for name in int_cols:
                        data = tuple(zip(t.column(name), want))
                        inst = self._solve(family, data)
                        if inst is not None:
                            found = MutateP(inst, (name,))
                            choices.append(f"{family.value}({name})")
                            break
                    if found:
                        break
                if found is None:
                    for a, b in itertools.combinations(int_cols, 2):
                        data = tuple(zip(t.column(a), t.column(b), want))
                        inst = self._solve(FeatureFamily.SUM, data)
                        if inst is not None:
                            found = MutateP(inst, (a, b))
                            choices.append(f"sum({a},{b})")
                            break
            if found is None and ty is ColumnType.STR:
                for name in str_cols:
                    data = tuple(zip(t.column(name), want))
                    inst = self._solve(FeatureFamily.SUBSTRING, data)
                    if inst is not None:
                        found = MutateP(inst, (name,))
                        choices.append(f"substring({name})")
                        break
                if found is None:
                    for size in range(1, self.settings.concat_max_inputs + 1):
                        for combo in itertools.permutations(str_cols, size):
                            cols = tuple(t.column(c) for c in combo)
                            data = tuple(
                                (tuple(col[i] for col in cols), want[i])
                                for i in range(t.nrows)
                            )
                            inst = self._solve(FeatureFamily.CONCAT, data)
                            if inst is not None:
                                found = MutateP(inst, combo)
                                choices.append(f"concat{combo}")
                                break
                        if found:
                            break
            if found is None:
                return None
            projections.append(found)
        return tuple(projections), tuple(choices)

    def match_hypothesis(self, h: Hypothesis):
        """First forward table (ascending depth) admitting an exact match."""
        h_table = Table("h", self.task.output.schema, h.rows)
        for entry in sorted(self.entries, key=lambda e: (e.depth, e.order)):
            self.deadline.check()
            t = entry.table
            if t.nrows < h_table.nrows:
                continue
            for r in self._surjections(t, h_table):
                solved = self._solve_columns(t, h_table, r)
                if solved is None:
                    continue
                projections, choices = solved
                stmt = Yield(t.name, projections)
                self._verify_match(t, h_table, projections)
                return stmt, MatchResult(r, choices)
        return None

    def _verify_match(self, t: Table, h_table: Table,
                      projections: Sequence[Projection]):
        state = ExecState({t.name: t})
        from .dsl import exec_yield

        got = exec_yield(state, Yield(t.name, tuple(projections)),
                         self.task.action)
        if got != h_table.renamed(got.name):
            raise EngineInternalError("match replay does not reproduce hypothesis")

    # -- assembly ------------------------------------------------------------

    def assemble_mapping(self, matched: Sequence[tuple[Yield, Hypothesis]]):
        """Exact cover of the output rows by pairwise-disjoint hypotheses."""
        target = frozenset(self.task.output.rows)
        seen = set()
        items = []
        for stmt, h in sorted(matched, key=lambda m: (-m[1].score,
                                                      -len(m[1].rows),
                                                      _rowset_key(m[1].rows))):
            if h.rows not in seen:
                seen.add(h.rows)
                items.append((stmt, h.rows))

        def rec(start, remaining, picked):
            if not remaining:
                return list(picked)
            for k in range(start, len(items)):
                stmt, rows = items[k]
                if rows <= remaining:
                    picked.append(stmt)
                    result = rec(k + 1, remaining - rows, picked)
                    if result is not None:
                        return result
                    picked.pop()
            return None

        return rec(0, target, [])

    def assemble_program(self, mapping: Sequence[Yield]) -> Program:
        needed: dict[str, ForwardEntry] = {}

        def visit(name: str):
            entry = self.by_name[name]
            if entry.stmt is None or name in needed:
                return
            stmt = entry.stmt
            srcs = ([stmt.src1, stmt.src2] if isinstance(stmt, Join)
                    else [stmt.src])
            for s in srcs:
                visit(s)
            needed[name] = entry

        for stmt in mapping:
            visit(stmt.src)
        transform = tuple(e.stmt for e in
                          sorted(needed.values(), key=lambda e: e.order))
        program = Program(transform, tuple(mapping))
        violations = validate_program(
            program, [t.schema for t in self.task.inputs],
            [t.name for t in self.task.inputs], self.task.action)
        if violations:
            raise EngineInternalError(f"assembled program invalid: {violations}")
        got = exec_program(program, self.task.inputs, self.task.action)
        if got != self.task.output.renamed(got.name):
            raise EngineInternalError("assembled program does not reproduce "
                                      "the output example")
        return program

    # -- top-level loops -----------------------------------------------------

    def run_bidirectional(self) -> SynthResult:
        start = time.monotonic()
        matched: list[tuple[Yield, Hypothesis]] = []
        try:
            max_depth = self.settings.max_depth
            depths = range(1, max_depth + 1) if max_depth > 0 else [0]
            for d in depths:
                if d > 0:
                    self.expand(d)
                generator = HypothesisGenerator(self.task.output,
                                                self.task.inputs, self.settings)
                while True:
                    h = generator.next()
                    if h is None:
                        break
                    self.stats.hypotheses_tried += 1
                    result = self.match_hypothesis(h)
                    if result is None:
                        continue
                    stmt, _ = result
                    self.stats.matches_solved += 1
                    matched.append((stmt, h))
                    generator.update_rank(h)
                    cover = self.assemble_mapping(matched)
                    if cover is not None:
                        program = self.assemble_program(cover)
                        return self._finish("solved", program, start)
            return self._finish("exhausted", None, start)
        except _SearchTimeout:
            return self._finish("timeout", None, start)

    def run_forward_only(self) -> SynthResult:
        start = time.monotonic()
        output = self.task.output
        matched: list[tuple[Yield, Hypothesis]] = []
        seen_rowsets = set()
        try:
            for d in range(1, max(self.settings.max_depth, 1) + 1):
                if self.settings.max_depth > 0:
                    self.expand(d)
                # Brute force: all subsets of the output rows, larger first.
                for k in range(output.nrows, 0, -1):
                    for combo in itertools.combinations(output.rows, k):
                        self.deadline.check()
                        rows = frozenset(combo)
                        if rows in seen_rowsets:
                            continue
                        self.stats.hypotheses_tried += 1
                        h = Hypothesis(rows, 0, "signature-group")
                        result = self.match_hypothesis(h)
                        if result is None:
                            continue
                        seen_rowsets.add(rows)
                        self.stats.matches_solved += 1
                        matched.append((result[0], h))
                        cover = self.assemble_mapping(matched)
                        if cover is not None:
                            program = self.assemble_program(cover)
                            return self._finish("solved", program, start)
            return self._finish("exhausted", None, start)
        except _SearchTimeout:
            return self._finish("timeout", None, start)

    def _finish(self, status, program, start) -> SynthResult:
        self.stats.elapsed_ms = int((time.monotonic() - start) * 1000)
        return SynthResult(status, program, self.stats)


# ---------------------------------------------------------------------------
# Public entry points.


def synthesize(task: SynthTask) -> SynthResult:
    engine = _Engine(task)
    if task.settings.mode == "forward-only":
        return engine.run_forward_only()
    return engine.run_bidirectional()


def synthesize_forward_only(task: SynthTask) -> SynthResult:
    if task.settings.mode != "forward-only":
        task = replace(task, settings=replace(task.settings, mode="forward-only"))
    return _Engine(task).run_forward_only()


def generate_hypotheses(output: Table, inputs: Sequence[Table],
                        bound: int) -> list[Hypothesis]:
    """The ranked hypothesis stream, fully drained (bounded)."""
    gen = HypothesisGenerator(output, inputs,
                              SynthSettings(hypothesis_bound=bound))
    out = []
    while True:
        h = gen.next()
        if h is None:
            return out
        out.append(h)
