"""Level structures: multiplicity matrices, diagrams, tails, text format.

A diagram is a finite list of nonnegative integer matrices, optionally
followed by a tail rule that generates further levels on demand.  Matrix n
connects level n (columns) to level n+1 (rows); matrix 0 always has one
column, the root.  Vertices are numbered from 1 in every public interface;
the tuples inside MultiplicityMatrix are plain 0-based Python data.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import matops
from .config import depth_limit
from .errors import DepthExceeded, IndexOutOfRange, NotDilatable, RankDeficient


# ---------------------------------------------------------------------------
# multiplicity matrices


class MultiplicityMatrix:
    """Immutable rectangular matrix of nonnegative integers."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        data = tuple(tuple(int(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(data[0])
        for row in data:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for x in row:
                if x < 0:
                    raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "rows", data)

    def __setattr__(self, name, value):
        raise AttributeError("MultiplicityMatrix is immutable")

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0])

    def at(self, i, j):
        """Entry in row i, column j, both 1-based."""
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise IndexOutOfRange(f"entry ({i},{j}) outside {self.nrows}x{self.ncols}")
        return self.rows[i - 1][j - 1]

    def row_support(self, i):
        """1-based columns where row i (1-based) is positive."""
        return tuple(j + 1 for j, x in enumerate(self.rows[i - 1]) if x > 0)

    def col_support(self, j):
        """1-based rows where column j (1-based) is positive."""
        return tuple(i + 1 for i, row in enumerate(self.rows) if row[j - 1] > 0)

    def is_row_monomial(self, i):
        return len(self.row_support(i)) == 1

    def has_positive_rows_and_cols(self):
        return all(self.row_support(i) for i in range(1, self.nrows + 1)) and all(
            self.col_support(j) for j in range(1, self.ncols + 1)
        )

    def to_lists(self):
        return [list(row) for row in self.rows]

    def __eq__(self, other):
        return isinstance(other, MultiplicityMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"MultiplicityMatrix({[list(r) for r in self.rows]})"


def multiplicity_rank(m):
    """Exact rank of a multiplicity matrix (or raw rows)."""
    rows = m.rows if isinstance(m, MultiplicityMatrix) else m
    return matops.rank([list(r) for r in rows])


def mm_product(later, earlier):
    """Composite multiplicities across two steps: `later` applied after `earlier`."""
    prod = matops.mat_mul(later.to_lists(), earlier.to_lists())
    return MultiplicityMatrix([[int(x) for x in row] for row in prod])


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class ShapeClass:
    kind: str  # "type2" | "type1" | "irregular"
    width: int | None = None  # constant level size for type1

    def label(self):
        if self.kind == "type1":
            return f"type1 {self.width}"
        return self.kind


def matrix_fits_shape(shape, n, mat):
    """Does the matrix at index n have the right dimensions for the shape?"""
    if shape.kind == "type2":
        return mat.nrows == n + 2 and mat.ncols == n + 1
    if shape.kind == "type1":
        want_cols = 1 if n == 0 else shape.width
        return mat.nrows == shape.width and mat.ncols == want_cols
    return True


def infer_shape(mats):
    """Best-effort shape from a materialized prefix; type2 wins ties."""
    if all(m.nrows == n + 2 and m.ncols == n + 1 for n, m in enumerate(mats)):
        return ShapeClass("type2")
    if mats:
        width = mats[0].nrows
        ok = mats[0].ncols == 1 and all(
            m.nrows == width and m.ncols == width for m in mats[1:]
        )
        if ok:
            return ShapeClass("type1", width)
    return ShapeClass("irregular")


# ---------------------------------------------------------------------------
# tails

_POW_RE = re.compile(r"^(\d+)\^\{([^{}]+)\}$")
_AFFINE_RE = re.compile(r"^(?:(\d+)\*?)?n([+-]\d+)?$|^([+-]?\d+)$")


@dataclass(frozen=True)
class PowToken:
    """Level-indexed entry base^(coeff*n + offset)."""

    base: int
    coeff: int
    offset: int

    def value_at(self, n):
        exp = self.coeff * n + self.offset
        if exp < 0:
            raise ValueError(f"negative exponent at level {n} in {self.render()}")
        return self.base ** exp

    def render(self):
        if self.coeff == 0:
            inner = str(self.offset)
        else:
            lead = "n" if self.coeff == 1 else f"{self.coeff}n"
            inner = lead if self.offset == 0 else f"{lead}{self.offset:+d}"
        return f"{self.base}^{{{inner}}}"


def parse_entry_token(tok):
    """An integer literal or a power token like 2^{n+1}."""
    m = _POW_RE.match(tok)
    if not m:
        return int(tok)
    base = int(m.group(1))
    inner = m.group(2).replace(" ", "")
    am = _AFFINE_RE.match(inner)
    if not am:
        raise ValueError(f"cannot parse exponent {inner!r}")
    if am.group(3) is not None:
        return PowToken(base, 0, int(am.group(3)))
    coeff = int(am.group(1)) if am.group(1) else 1
    offset = int(am.group(2)) if am.group(2) else 0
    return PowToken(base, coeff, offset)


def render_entry_token(tok):
    return tok.render() if isinstance(tok, PowToken) else str(int(tok))


@dataclass(frozen=True)
class PeriodicTail:
    """Repeat template matrices forever; entries may be level-indexed tokens.

    Template k (0-based) serves level anchor+k, anchor+period+k, ...  Only
    constant level sizes repeat cleanly, so templates must be square and all
    the same size.
    """

    templates: tuple  # tuple of tuple-of-tuple tokens (int | PowToken)
    anchor: int

    def __post_init__(self):
        if not self.templates:
            raise ValueError("periodic tail needs at least one template")
        size = len(self.templates[0])
        for t in self.templates:
            if len(t) != size or any(len(row) != size for row in t):
                raise ValueError("periodic templates must be square and equal-sized")

    @property
    def period(self):
        return len(self.templates)

    @property
    def width(self):
        return len(self.templates[0])

    def matrix_at(self, n):
        tpl = self.templates[(n - self.anchor) % self.period]
        rows = [
            [t.value_at(n) if isinstance(t, PowToken) else t for t in row]
            for row in tpl
        ]
        return MultiplicityMatrix(rows)


def _gicar_level(n):
    rows = []
    for i in range(1, n + 3):
        row = [0] * (n + 1)
        for j in (i - 1, i):
            if 1 <= j <= n + 1:
                row[j - 1] = 1
        rows.append(row)
    return MultiplicityMatrix(rows)


def _dyadic_level(n):
    rows = []
    for i in range(1, n + 1):
        row = [0] * (n + 1)
        row[i - 1] = 1
        rows.append(row)
    big = [0] * (n + 1)
    big[n] = 2 ** (n + 1)
    rows.append(big)
    last = [0] * (n + 1)
    last[n] = 1
    rows.append(last)
    return MultiplicityMatrix(rows)


def _dupline_level(n):
    rows = []
    for i in range(1, n + 2):
        row = [0] * (n + 1)
        row[i - 1] = 1
        rows.append(row)
    last = [0] * (n + 1)
    last[n] = 1
    rows.append(last)
    return MultiplicityMatrix(rows)


TAIL_FAMILIES = {
    # single-growth ladder with two parallel edges at each new vertex pair
    "gicar": _gicar_level,
    # identity lines plus a 2^{n+1}-weighted fork column
    "dyadic": _dyadic_level,
    # identity lines plus a plain fork column
    "dupline": _dupline_level,
}


@dataclass(frozen=True)
class FamilyTail:
    """Named built-in generator covering every level index it is asked for."""

    name: str

    def __post_init__(self):
        if self.name not in TAIL_FAMILIES:
            raise ValueError(f"unknown tail family {self.name!r}")

    def matrix_at(self, n):
        return TAIL_FAMILIES[self.name](n)


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class BratteliDiagram:
    """Explicit matrices plus an optional tail rule.

    `shape` is declarative; validate_diagram checks it against the data.
    """

    matrices: tuple
    tail: object = None  # None | PeriodicTail | FamilyTail
    shape: ShapeClass = None
    name: str = ""

    def __post_init__(self):
        mats = tuple(
            m if isinstance(m, MultiplicityMatrix) else MultiplicityMatrix(m)
            for m in self.matrices
        )
        object.__setattr__(self, "matrices", mats)
        if not mats and self.tail is None:
            raise ValueError("diagram needs at least one matrix or a tail rule")
        for k in range(len(mats) - 1):
            if mats[k + 1].ncols != mats[k].nrows:
                raise ValueError(
                    f"matrix {k + 1} has {mats[k + 1].ncols} columns but "
                    f"matrix {k} has {mats[k].nrows} rows"
                )
        if isinstance(self.tail, PeriodicTail) and mats:
            if self.tail.width != mats[-1].nrows:
                raise ValueError("periodic tail width does not match last matrix")
        if self.matrix(0).ncols != 1:
            raise ValueError("matrix 0 must have exactly one column")
        if self.shape is None:
            probe_count = len(mats) if self.tail is None else max(len(mats), 3)
            probe = [self.matrix(k) for k in range(probe_count)]
            object.__setattr__(self, "shape", infer_shape(probe))
        if self.tail is not None and isinstance(self.tail, FamilyTail) and mats:
            gen = self.tail.matrix_at(len(mats))
            if gen.ncols != mats[-1].nrows:
                raise ValueError("family tail does not chain with the last matrix")

    @property
    def explicit_depth(self):
        return len(self.matrices)

    @property
    def has_tail(self):
        return self.tail is not None

    def max_matrix_index(self):
        """Largest usable matrix index (inclusive); respects the depth limit."""
        if self.tail is not None:
            return depth_limit() - 1
        return len(self.matrices) - 1

    def matrix(self, n):
        """Multiplicity matrix connecting level n to level n+1."""
        if n < 0:
            raise IndexOutOfRange(f"matrix index {n} is negative")
        if n < len(self.matrices):
            return self.matrices[n]
        if self.tail is None:
            raise DepthExceeded(
                f"matrix {n} requested but the diagram ends at {len(self.matrices) - 1}"
            )
        if n > self.max_matrix_index():
            raise DepthExceeded(
                f"matrix {n} exceeds the depth limit {depth_limit()}"
            )
        return self.tail.matrix_at(n)

    def level_count(self, n):
        """Number of vertices at level n."""
        if n == 0:
            return self.matrix(0).ncols
        return self.matrix(n - 1).nrows

    def size_vector(self, n):
        """Integer sizes at level n: start at (1,), multiply upward."""
        v = [1]
        for k in range(n):
            v = [int(x) for x in matops.mat_vec(self.matrix(k).to_lists(), v)]
        return tuple(v)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple
    shape: ShapeClass
    levels_checked: int


def validate_diagram(diagram, depth=None):
    """Check positivity and the declared shape over a materialized prefix."""
    if depth is None:
        depth = max(diagram.explicit_depth, 3 if diagram.has_tail else 0)
    depth = min(depth, diagram.max_matrix_index() + 1)
    issues = []
    for n in range(depth):
        mat = diagram.matrix(n)
        for i in range(1, mat.nrows + 1):
            if not mat.row_support(i):
                issues.append(f"matrix {n}: row {i} is zero")
        for j in range(1, mat.ncols + 1):
            if not mat.col_support(j):
                issues.append(f"matrix {n}: column {j} is zero")
        if not matrix_fits_shape(diagram.shape, n, mat):
            issues.append(
                f"matrix {n} is {mat.nrows}x{mat.ncols}, outside shape "
                f"{diagram.shape.label()}"
            )
    return ValidationReport(not issues, tuple(issues), diagram.shape, depth)


def check_valid(diagram, depth=None):
    """Raise when validate_diagram has complaints; used as an op precondition."""
    report = validate_diagram(diagram, depth)
    if not report.ok:
        raise ValueError(f"invalid diagram: {report.issues[0]}")
    return report


# ---------------------------------------------------------------------------
# telescoping and single-growth normalization


def telescope(diagram, indices):
    """Keep only the given levels; composite matrices bridge the gaps.

    `indices` must start at 0 and strictly increase.  The result is finite
    (tail rules do not survive recombination).
    """
    idx = list(indices)
    if not idx or idx[0] != 0:
        raise IndexOutOfRange("telescope indices must start at level 0")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise IndexOutOfRange("telescope indices must strictly increase")
    if len(idx) < 2:
        raise IndexOutOfRange("telescope needs at least two retained levels")
    top = idx[-1]
    if top - 1 > diagram.max_matrix_index():
        raise IndexOutOfRange(f"level {top} is beyond the diagram")
    mats = []
    for a, b in zip(idx, idx[1:]):
        prod = diagram.matrix(a)
        for k in range(a + 1, b):
            prod = mm_product(diagram.matrix(k), prod)
        mats.append(prod)
    return BratteliDiagram(tuple(mats), None, None, diagram.name)


def dilate_step(mat):
    """Split a tall full-column-rank step into single-growth factors.

    Returns (row_order, factors): row_order is a tuple with the original row
    index (0-based) now sitting at each position, and factors multiply as
    factors[-1] ... factors[0] to give the reordered matrix.
    """
    if not isinstance(mat, MultiplicityMatrix):
        mat = MultiplicityMatrix(mat)
    r, c = mat.nrows, mat.ncols
    if r <= c:
        raise ValueError(f"dilate_step needs more rows than columns, got {r}x{c}")
    if multiplicity_rank(mat) < c:
        raise RankDeficient(f"matrix has rank below {c}")

    rows = mat.to_lists()
    # collect an invertible bottom block scanning upward from the last row
    bottom = []
    picked = []
    for i in range(r - 1, -1, -1):
        if len(picked) == c:
            break
        trial = [rows[i]] + [rows[p] for p in picked]
        if matops.rank(trial) > matops.rank([rows[p] for p in picked] or [[0] * c]):
            picked.append(i)
    picked.reverse()
    bottom = picked
    top = [i for i in range(r) if i not in set(bottom)]
    row_order = tuple(top + bottom)
    pm = [rows[i] for i in row_order]

    d = r - c
    if d == 1:
        return row_order, (MultiplicityMatrix(pm),)

    factors = []
    for i in range(1, d + 1):
        lead = i - 1
        out = []
        for p in range(lead):
            row = [0] * (c + i - 1)
            row[p] = 1
            out.append(row)
        if i < d:
            out.append([0] * lead + pm[i - 1])
            for p in range(c):
                row = [0] * (c + i - 1)
                row[lead + p] = 1
                out.append(row)
        else:
            for q in range(d - 1, r):
                out.append([0] * lead + pm[q])
        factors.append(MultiplicityMatrix(out))
    return row_order, tuple(factors)


def _permute_rows(mat, row_order_inverse):
    rows = mat.to_lists()
    return MultiplicityMatrix([rows[i] for i in row_order_inverse])


def normalize_type2(diagram):
    """Rewrite a chain so every level grows by exactly one vertex.

    Already single-growth diagrams come back unchanged (tail intact).
    Otherwise the materialized prefix is folded into strictly growing
    composite steps, each step is dilated, and the row permutations are
    absorbed so the factors chain correctly.  The result is finite.
    """
    if diagram.shape.kind == "type2":
        return diagram

    k = diagram.explicit_depth
    if k == 0:
        raise NotDilatable("nothing materialized to normalize")
    sizes = [diagram.level_count(n) for n in range(k + 1)]
    for a, b in zip(sizes, sizes[1:]):
        if b < a:
            raise NotDilatable("level sizes must not shrink")
    # retained levels: 0, then the last level of each size above 1
    retained = [0]
    for value in sorted(set(sizes[1:])):
        if value == 1:
            continue
        retained.append(max(n for n, s in enumerate(sizes) if s == value))
    if retained[-1] != k:
        retained.append(k)
    if len(retained) < 2:
        raise NotDilatable("diagram never grows")

    folded = telescope(diagram, retained)
    out = []
    for step_index in range(folded.explicit_depth):
        step = folded.matrix(step_index)
        if step.nrows == step.ncols:
            raise NotDilatable("a square step survived folding")
        try:
            row_order, factors = dilate_step(step)
        except RankDeficient as exc:
            raise NotDilatable(str(exc)) from exc
        # undo the permutation inside the last factor so the chain composes
        inverse = [0] * len(row_order)
        for pos, orig in enumerate(row_order):
            inverse[orig] = pos
        factors = list(factors)
        factors[-1] = _permute_rows(factors[-1], inverse)
        out.extend(factors)
    result = BratteliDiagram(tuple(out), None, ShapeClass("type2"), diagram.name)
    check_valid(result)
    return result


# ---------------------------------------------------------------------------
# text format


def format_bdspec(diagram):
    lines = ["bdspec v1", f"shape: {diagram.shape.label()}"]
    for n, mat in enumerate(diagram.matrices):
        lines.append(f"matrix {n}:")
        for row in mat.rows:
            lines.append(" ".join(str(x) for x in row))
    if diagram.tail is None:
        lines.append("tail: none")
    elif isinstance(diagram.tail, FamilyTail):
        lines.append(f"tail: family {diagram.tail.name}")
    else:
        lines.append(f"tail: periodic {diagram.tail.period}")
        for tpl in diagram.tail.templates:
            lines.append("template:")
            for row in tpl:
                lines.append(" ".join(render_entry_token(t) for t in row))
    return "\n".join(lines) + "\n"


class BdspecParseError(ValueError):
    """Malformed bdspec text; carries the 1-based source line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_bdspec(text, name=""):
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or lines[0][1] != "bdspec v1":
        raise BdspecParseError(lines[0][0] if lines else 1, "expected header 'bdspec v1'")
    if len(lines) < 2 or not lines[1][1].startswith("shape:"):
        raise BdspecParseError(
            lines[1][0] if len(lines) > 1 else lines[0][0],
            "expected 'shape:' after the header",
        )
    shape_words = lines[1][1][len("shape:"):].split()
    if shape_words == ["type2"]:
        shape = ShapeClass("type2")
    elif len(shape_words) == 2 and shape_words[0] == "type1" and shape_words[1].isdigit():
        shape = ShapeClass("type1", int(shape_words[1]))
    elif shape_words == ["irregular"]:
        shape = ShapeClass("irregular")
    else:
        raise BdspecParseError(lines[1][0], f"unknown shape {' '.join(shape_words)!r}")

    mats = []
    tail = None
    i = 2
    while i < len(lines):
        no, ln = lines[i]
        if ln.startswith("matrix "):
            head = ln[len("matrix "):].rstrip(":")
            if not head.isdigit() or int(head) != len(mats):
                raise BdspecParseError(no, f"matrix blocks must be consecutive, got {ln!r}")
            i += 1
            rows = []
            while i < len(lines) and lines[i][1][0].isdigit():
                row_no, row_ln = lines[i]
                try:
                    rows.append([int(t) for t in row_ln.split()])
                except ValueError:
                    raise BdspecParseError(row_no, f"bad matrix row {row_ln!r}") from None
                i += 1
            try:
                mats.append(MultiplicityMatrix(rows))
            except ValueError as exc:
                raise BdspecParseError(no, str(exc)) from None
        elif ln.startswith("tail:"):
            words = ln[len("tail:"):].split()
            i += 1
            if words == ["none"]:
                tail = None
            elif len(words) == 2 and words[0] == "family":
                tail = FamilyTail(words[1])
            elif len(words) == 2 and words[0] == "periodic" and words[1].isdigit():
                period = int(words[1])
                templates = []
                while i < len(lines) and lines[i][1] == "template:":
                    i += 1
                    tpl = []
                    while i < len(lines) and lines[i][1] != "template:" and not lines[i][1].startswith(("matrix", "tail")):
                        row_no, row_ln = lines[i]
                        try:
                            tpl.append(tuple(parse_entry_token(t) for t in row_ln.split()))
                        except ValueError as exc:
                            raise BdspecParseError(row_no, str(exc)) from None
                        i += 1
                    templates.append(tuple(tpl))
                if len(templates) != period:
                    raise BdspecParseError(
                        no,
                        f"tail: periodic {period} needs {period} templates, got {len(templates)}",
                    )
                tail = PeriodicTail(tuple(templates), len(mats))
            else:
                raise BdspecParseError(no, f"unknown tail {' '.join(words)!r}")
        else:
            raise BdspecParseError(no, f"unexpected line {ln!r}")
    return BratteliDiagram(tuple(mats), tail, shape, name)


def write_dot(diagram, depth):
    """Graphviz rendering of the first `depth` levels."""
    depth = min(depth, diagram.max_matrix_index() + 1)
    out = ["digraph diagram {", "  rankdir=TB;", "  node [shape=circle];"]
    for n in range(depth + 1):
        names = [f'"v{n}_{j}"' for j in range(1, diagram.level_count(n) + 1)]
        for j, nm in enumerate(names, start=1):
            out.append(f"  {nm} [label=\"{n}:{j}\"];")
        out.append("  { rank=same; " + "; ".join(names) + "; }")
    for n in range(depth):
        mat = diagram.matrix(n)
        for i in range(1, mat.nrows + 1):
            for j in range(1, mat.ncols + 1):
                mult = mat.at(i, j)
                if mult == 0:
                    continue
                label = f' [label="x{mult}"]' if mult > 1 else ""
                out.append(f'  "v{n}_{j}" -> "v{n + 1}_{i}"{label};')
    out.append("}")
    return "\n".join(out) + "\n"
