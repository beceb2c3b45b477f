"""Higher-order feature families and their parameter solvers.

Six families are supported: linear, div, mod, and sum over integers, and
substring/concat over strings. Each family has a row-wise application and a
solver that instantiates the free parameters from (input, expected output)
pairs. Solvers are deterministic: given the same pairs they return the same
instance, with documented tie-breaking (smallest dividend, fewest tokens,
fewest segments).

Integer semantics: div floors toward minus infinity and mod returns a value
in [0, d), so interpretation and solving agree on negative operands.
"""

from __future__ import annotations

import enum
import heapq
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import FeatureMissError, SchemaError
from .table import ColumnType, Value, check_int


class FeatureFamily(enum.Enum):
    LINEAR = "linear"
    DIV = "div"
    MOD = "mod"
    SUM = "sum"
    SUBSTRING = "substring"
    CONCAT = "concat"


#: Deterministic enumeration order for type-compatible families.
FAMILY_ORDER = (
    FeatureFamily.LINEAR,
    FeatureFamily.DIV,
    FeatureFamily.MOD,
    FeatureFamily.SUM,
    FeatureFamily.SUBSTRING,
    FeatureFamily.CONCAT,
)


def enumerate_feature_families(
    in_types: Sequence[ColumnType], out_type: ColumnType
) -> list[FeatureFamily]:
    """Families type-compatible with the signature, in canonical order."""
    ins = tuple(in_types)
    if ColumnType.ID in ins or out_type is ColumnType.ID:
        return []
    out: list[FeatureFamily] = []
    if ins == (ColumnType.INT,) and out_type is ColumnType.INT:
        out += [FeatureFamily.LINEAR, FeatureFamily.DIV, FeatureFamily.MOD]
    if ins == (ColumnType.INT, ColumnType.INT) and out_type is ColumnType.INT:
        out.append(FeatureFamily.SUM)
    if all(t is ColumnType.STR for t in ins) and out_type is ColumnType.STR and ins:
        if ins == (ColumnType.STR,):
            out.append(FeatureFamily.SUBSTRING)
        out.append(FeatureFamily.CONCAT)
    return out


# ---------------------------------------------------------------------------
# Token classes and substring extraction.


@dataclass(frozen=True)
class TokenClass:
    """One character class; ``kind`` is a name or 'Punct' with a single char."""

    kind: str
    char: str = ""

    def pattern(self) -> str:
        base = _TOKEN_PATTERNS.get(self.kind)
        if base is None:
            if self.kind != "Punct" or len(self.char) != 1:
                raise SchemaError(f"bad token class {self!r}")
            base = re.escape(self.char)
        # Maximal run: not extendable by the same class on either side.
        return f"(?:(?<!{base}){base}+(?!{base}))"

    def __str__(self) -> str:
        return f"'{self.char}'" if self.kind == "Punct" else self.kind


_TOKEN_PATTERNS = {
    "Digits": "[0-9]",
    "Lower": "[a-z]",
    "Upper": "[A-Z]",
    "Alpha": "[A-Za-z]",
    "Alnum": "[A-Za-z0-9]",
    "Whitespace": r"[ \t]",
}

DIGITS = TokenClass("Digits")
LOWER = TokenClass("Lower")
UPPER = TokenClass("Upper")
ALPHA = TokenClass("Alpha")
ALNUM = TokenClass("Alnum")
WHITESPACE = TokenClass("Whitespace")

# Ranking order: specific numeric runs first, then the broad alphanumeric
# class, then alphabetic subclasses. Earlier classes win ties in solvers.
BASE_TOKEN_CLASSES = (DIGITS, ALNUM, ALPHA, LOWER, UPPER, WHITESPACE)


@dataclass(frozen=True)
class ExtractSpec:
    """k-th maximal match of a token sequence; negative k counts from the end."""

    tokens: tuple[TokenClass, ...]
    occurrence: int

    def __post_init__(self):
        if not self.tokens:
            raise SchemaError("empty token sequence")
        if self.occurrence == 0:
            raise SchemaError("occurrence must be nonzero")

    def __str__(self) -> str:
        return "{%s#%d}" % ("".join(str(t) for t in self.tokens), self.occurrence)


@lru_cache(maxsize=4096)
def _compiled(tokens: tuple[TokenClass, ...]):
    return re.compile("".join(t.pattern() for t in tokens))


def extract(spec: ExtractSpec, text: str) -> str:
    """Apply ``spec`` to ``text``; raises FeatureMissError when nothing matches."""
    matches = [m.group(0) for m in _compiled(spec.tokens).finditer(text)]
    k = spec.occurrence
    idx = k - 1 if k > 0 else len(matches) + k
    if not 0 <= idx < len(matches):
        raise FeatureMissError(f"{spec} has no match {k} in {text!r}")
    return matches[idx]


# ---------------------------------------------------------------------------
# Concatenation programs.


@dataclass(frozen=True)
class ExtractSegment:
    input_pos: int
    spec: ExtractSpec


@dataclass(frozen=True)
class LiteralSegment:
    text: str

    def __post_init__(self):
        if not self.text:
            raise SchemaError("empty literal segment")


Segment = ExtractSegment | LiteralSegment


@dataclass(frozen=True)
class ConcatProgram:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise SchemaError("empty concat program")

    def run(self, inputs: Sequence[str]) -> str:
        pieces = []
        for seg in self.segments:
            if isinstance(seg, LiteralSegment):
                pieces.append(seg.text)
            else:
                if seg.input_pos >= len(inputs):
                    raise SchemaError(f"input position {seg.input_pos} out of range")
                pieces.append(extract(seg.spec, inputs[seg.input_pos]))
        return "".join(pieces)


# ---------------------------------------------------------------------------
# Concrete feature instances.


@dataclass(frozen=True)
class FeatureInstance:
    """A fully instantiated feature: family plus family-specific parameters."""

    family: FeatureFamily
    params: tuple = ()
    extract_spec: Optional[ExtractSpec] = None
    concat: Optional[ConcatProgram] = None

    @property
    def arity(self) -> int:
        if self.family is FeatureFamily.SUM:
            return 2
        if self.family is FeatureFamily.CONCAT:
            top = max(
                (s.input_pos for s in self.concat.segments
                 if isinstance(s, ExtractSegment)),
                default=0,
            )
            return top + 1
        return 1

    @property
    def in_type(self) -> ColumnType:
        if self.family in (FeatureFamily.SUBSTRING, FeatureFamily.CONCAT):
            return ColumnType.STR
        return ColumnType.INT

    @property
    def out_type(self) -> ColumnType:
        return self.in_type


def linear(a: int, b: int) -> FeatureInstance:
    return FeatureInstance(FeatureFamily.LINEAR, (a, b))


def div(b: int, d: int) -> FeatureInstance:
    if d < 2:
        raise SchemaError("div dividend must be >= 2")
    return FeatureInstance(FeatureFamily.DIV, (b, d))


def mod(b1: int, b2: int, d: int) -> FeatureInstance:
    if not 2 <= d <= 10:
        raise SchemaError("mod dividend must be in [2, 10]")
    if not 0 <= b1 < d:
        raise SchemaError("mod offset b1 must be in [0, d)")
    return FeatureInstance(FeatureFamily.MOD, (b1, b2, d))


def sum_feature(b: int) -> FeatureInstance:
    return FeatureInstance(FeatureFamily.SUM, (b,))


def substring(spec: ExtractSpec) -> FeatureInstance:
    return FeatureInstance(FeatureFamily.SUBSTRING, extract_spec=spec)


def concat(program: ConcatProgram) -> FeatureInstance:
    return FeatureInstance(FeatureFamily.CONCAT, concat=program)


def apply_feature(f: FeatureInstance, args: Sequence[Value]) -> Value:
    """Row-wise application; raises FeatureMissError on extraction misses."""
    fam = f.family
    if fam is FeatureFamily.LINEAR:
        (a, b) = f.params
        (x,) = args
        return check_int(a * x + b)
    if fam is FeatureFamily.DIV:
        (b, d) = f.params
        (x,) = args
        return check_int((x + b) // d)
    if fam is FeatureFamily.MOD:
        (b1, b2, d) = f.params
        (x,) = args
        return check_int((x + b1) % d + b2)
    if fam is FeatureFamily.SUM:
        (b,) = f.params
        x, y = args
        return check_int(x + y + b)
    if fam is FeatureFamily.SUBSTRING:
        (x,) = args
        return extract(f.extract_spec, x)
    if fam is FeatureFamily.CONCAT:
        return f.concat.run(args)
    raise SchemaError(f"unknown family {fam}")


# ---------------------------------------------------------------------------
# Solver caps (engine configuration for the enumerative solvers).


@dataclass(frozen=True)
class SolverCaps:
    div_max_dividend: int = 100
    max_tokens: int = 3
    max_occurrence: int = 3
    max_segments: int = 6
    max_literal_len: int = 20


DEFAULT_CAPS = SolverCaps()


# ---------------------------------------------------------------------------
# Integer solvers.


def solve_linear(pairs: Sequence[tuple[int, int]]) -> Optional[FeatureInstance]:
    """Fit y = a*x + b with integer a, b; requires two distinct x values."""
    distinct = {}
    for x, y in pairs:
        if x in distinct:
            if distinct[x] != y:
                return None
        else:
            distinct[x] = y
    if len(distinct) < 2:
        return None
    (x1, y1), (x2, y2) = list(distinct.items())[:2]
    if (y2 - y1) % (x2 - x1) != 0:
        return None
    a = (y2 - y1) // (x2 - x1)
    b = y1 - a * x1
    inst = linear(a, b)
    if all(apply_feature(inst, (x,)) == y for x, y in pairs):
        return inst
    return None


def solve_sum(triples: Sequence[tuple[int, int, int]]) -> Optional[FeatureInstance]:
    """Fit out = x + y + b."""
    if not triples:
        return None
    x0, y0, out0 = triples[0]
    b = out0 - x0 - y0
    inst = sum_feature(b)
    if all(apply_feature(inst, (x, y)) == out for x, y, out in triples):
        return inst
    return None


def solve_div(
    pairs: Sequence[tuple[int, int]], caps: SolverCaps = DEFAULT_CAPS
) -> Optional[FeatureInstance]:
    """Fit y = floor((x + b) / d) by interval intersection over b for each d.

    Each pair constrains b to [d*y - x, d*y - x + d - 1]. The first nonempty
    intersection (smallest d, then smallest feasible b) wins.
    """
    if len(pairs) < 2:
        return None
    for d in range(2, caps.div_max_dividend + 1):
        lo, hi = None, None
        for x, y in pairs:
            plo = d * y - x
            phi = plo + d - 1
            lo = plo if lo is None else max(lo, plo)
            hi = phi if hi is None else min(hi, phi)
        if lo <= hi:
            return div(lo, d)
    return None


def solve_mod(pairs: Sequence[tuple[int, int]]) -> Optional[FeatureInstance]:
    """Fit y = (x + b1) mod d + b2 with d in [2, 10], b1 in [0, d)."""
    if len(pairs) < 2:
        return None
    x1, y1 = pairs[0]
    for d in range(2, 11):
        for b1 in range(d):
            b2 = y1 - (x1 + b1) % d
            inst = mod(b1, b2, d)
            if all(apply_feature(inst, (x,)) == y for x, y in pairs):
                return inst
    return None


# ---------------------------------------------------------------------------
# String solvers.


def _punct_classes(texts: Sequence[str]) -> list[TokenClass]:
    chars = sorted({c for s in texts for c in s if not c.isalnum() and c not in " \t"})
    return [TokenClass("Punct", c) for c in chars]


def _spec_space(texts: Sequence[str], caps: SolverCaps):
    """Enumerate extract specs: fewer tokens first, then occurrence order
    1, 2, ..., then -1, -2, ... Adjacent equal tokens can never match a
    maximal-run sequence and are skipped."""
    classes = list(BASE_TOKEN_CLASSES) + _punct_classes(texts)
    occs = list(range(1, caps.max_occurrence + 1)) + [
        -k for k in range(1, caps.max_occurrence + 1)
    ]

    def sequences(length: int):
        if length == 1:
            for c in classes:
                yield (c,)
            return
        for prefix in sequences(length - 1):
            for c in classes:
                if c != prefix[-1]:
                    yield prefix + (c,)

    for length in range(1, caps.max_tokens + 1):
        for tokens in sequences(length):
            for occ in occs:
                yield ExtractSpec(tokens, occ)


def solve_substring(
    pairs: Sequence[tuple[str, str]], caps: SolverCaps = DEFAULT_CAPS
) -> Optional[FeatureInstance]:
    """Find one extract spec reproducing every (input, output) pair."""
    if not pairs or any(not y for _, y in pairs):
        return None
    # Extraction only returns substrings; quick reject saves enumeration.
    if any(y not in x for x, y in pairs):
        return None
    inputs = [x for x, _ in pairs]
    for spec in _spec_space(inputs, caps):
        try:
            if all(extract(spec, x) == y for x, y in pairs):
                return substring(spec)
        except FeatureMissError:
            continue
    return None


def solve_concat(
    rows: Sequence[tuple[tuple[str, ...], str]], caps: SolverCaps = DEFAULT_CAPS
) -> Optional[FeatureInstance]:
    """Find a concat program (extract and literal segments) reproducing every
    (inputs, output) row. Searches by increasing segment count; at equal
    count, extract segments are preferred over literals."""
    if not rows:
        return None
    n_inputs = len(rows[0][0])
    if any(len(ins) != n_inputs for ins, _ in rows):
        return None
    all_inputs = [x for ins, _ in rows for x in ins]
    specs = list(_spec_space(all_inputs, caps))

    # Precompute per-row extract results for each (input position, spec).
    # A usable segment must extract successfully on every row and the result
    # must occur in that row's output, otherwise it can never be placed.
    piece: dict[tuple[int, int], list[str]] = {}
    for pos in range(n_inputs):
        for si, spec in enumerate(specs):
            results = []
            for ins, out in rows:
                try:
                    r = extract(spec, ins[pos])
                except FeatureMissError:
                    break
                if r not in out:
                    break
                results.append(r)
            else:
                piece[(pos, si)] = results

    outs = [out for _, out in rows]

    def moves(positions: tuple[int, ...]):
        # Extract moves carry zero literal cost and are explored first.
        for (pos, si), results in piece.items():
            nxt = []
            for p, out, r in zip(positions, outs, results):
                if not out.startswith(r, p):
                    break
                nxt.append(p + len(r))
            else:
                yield ExtractSegment(pos, specs[si]), tuple(nxt), 0
        # Literal moves: common across rows by construction.
        remaining0 = outs[0][positions[0]:]
        limit = min(len(remaining0), caps.max_literal_len)
        for length in range(limit, 0, -1):
            lit = remaining0[:length]
            if all(out.startswith(lit, p) for out, p in zip(outs, positions)):
                yield LiteralSegment(lit), tuple(p + length for p in positions), length

    goal = tuple(len(out) for out in outs)
    start = tuple(0 for _ in outs)

    # Uniform-cost search minimizing (total literal characters, segment
    # count): extracts are preferred to literals even when a single long
    # literal would cover the whole output.
    counter = 0
    frontier = [(0, 0, 0, start, ())]
    best: dict[tuple[int, ...], tuple[int, int]] = {start: (0, 0)}
    while frontier:
        lit_cost, n_segs, _, positions, segs = heapq.heappop(frontier)
        if positions == goal:
            return concat(ConcatProgram(segs))
        if best.get(positions, (lit_cost, n_segs)) < (lit_cost, n_segs):
            continue
        if n_segs == caps.max_segments:
            continue
        for seg, nxt, step_cost in moves(positions):
            cost = (lit_cost + step_cost, n_segs + 1)
            if nxt in best and best[nxt] <= cost:
                continue
            best[nxt] = cost
            counter += 1
            heapq.heappush(frontier, cost + (counter, nxt, segs + (seg,)))
    return None
