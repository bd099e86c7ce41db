"""Boundary path spaces of reduced diagrams.

A minimal diagram is a tree: each level's matrix is collapsed to one
parent per vertex by a reduction strategy.  The boundary (the space of
infinite root paths) is described through cylinders B(vertex, level) and
locally constant functions on them.  Levels materialize lazily and only
ever append, so a shared tree deepens idempotently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DepthExceeded, Uncertified, UnsupportedUserMap
from .reduction import minimal_reduce, minimal_reduce_square


# ---------------------------------------------------------------------------
# strategies


@dataclass(frozen=True)
class Theorem:
    """Deterministic minimal reduction at every level."""


@dataclass(frozen=True)
class LexFirst:
    """Lexicographically first valid reduction at every level."""


@dataclass(frozen=True)
class UserMap:
    """Explicit parent tuples per level; levels beyond the last supplied one
    extend only where the matrix forces a unique choice."""

    maps: tuple  # tuple of (level, parents-tuple)

    def lookup(self, level):
        for lev, parents in self.maps:
            if lev == level:
                return parents
        return None


@dataclass(frozen=True)
class NamedFamily:
    """Built-in single-growth parent patterns with known end structure."""

    name: str  # rightmost | leftmost | alternating | positions
    positions: tuple | None = None

    def __post_init__(self):
        if self.name not in ("rightmost", "leftmost", "alternating", "positions"):
            raise ValueError(f"unknown family {self.name!r}")
        if self.name == "positions" and not self.positions:
            raise ValueError("positions family needs a nonempty position list")


def strategy_from_string(text):
    text = text.strip().lower()
    if text == "theorem":
        return Theorem()
    if text == "lexfirst":
        return LexFirst()
    if text in ("rightmost", "leftmost", "alternating"):
        return NamedFamily(text)
    if text.startswith("positions:"):
        nums = tuple(int(t) for t in text[len("positions:"):].split(",") if t)
        return NamedFamily("positions", nums)
    raise ValueError(f"unknown strategy {text!r}")


def _family_branch_position(family, level, prev_count):
    if family.name == "rightmost":
        return prev_count
    if family.name == "leftmost":
        return 1
    if family.name == "alternating":
        return prev_count if level % 2 == 0 else 1
    nums = family.positions
    raw = nums[(level - 1) % len(nums)]
    return max(1, min(raw, prev_count))


def _family_parents(family, level, prev_count, cur_count):
    if cur_count != prev_count + 1:
        raise UnsupportedUserMap(
            f"family {family.name!r} needs single growth at level {level}"
        )
    a = _family_branch_position(family, level, prev_count)
    return tuple(j if j <= a else j - 1 for j in range(1, cur_count + 1))


def _lex_first_reduction(mat):
    """First surjective support assignment in lexicographic order, or None."""
    r, c = mat.nrows, mat.ncols
    supports = [mat.row_support(i) for i in range(1, r + 1)]
    tail_union = [set() for _ in range(r + 1)]
    for i in range(r - 1, -1, -1):
        tail_union[i] = tail_union[i + 1] | set(supports[i])
    choice = [0] * r

    def walk(i, uncovered):
        if len(uncovered) > r - i or not uncovered <= tail_union[i]:
            return None
        if i == r:
            return tuple(choice)
        for j in supports[i]:
            choice[i] = j
            got = walk(i + 1, uncovered - {j})
            if got is not None:
                return got
        return None

    return walk(0, set(range(1, c + 1)))


# ---------------------------------------------------------------------------
# the tree


@dataclass(frozen=True)
class BranchData:
    """Level at which one parent carries two children."""

    parent: int  # position of the doubled parent at the level above
    small_child: int
    big_child: int


class MinimalDiagram:
    """Reduced tree over a diagram; levels appear on demand."""

    def __init__(self, diagram, strategy, family_tag=None):
        self.diagram = diagram
        self.strategy = strategy
        self.family_tag = family_tag
        self._parents = []  # _parents[k] covers level k+1, 1-based entries
        self._branches = []  # BranchData | None per materialized level

    # -- materialization

    @property
    def depth(self):
        return len(self._parents)

    def max_depth(self):
        return self.diagram.max_matrix_index() + 1

    def ensure_depth(self, n):
        if n > self.max_depth():
            raise DepthExceeded(
                f"level {n} requested, diagram allows {self.max_depth()}"
            )
        while self.depth < n:
            self._materialize_next()
        return self

    def _materialize_next(self):
        level = self.depth + 1
        mat = self.diagram.matrix(level - 1)
        prev, cur = mat.ncols, mat.nrows
        strat = self.strategy
        if isinstance(strat, Theorem):
            if cur == prev + 1:
                parents = minimal_reduce(mat).parents
            elif cur == prev:
                parents = minimal_reduce_square(mat).parents
            elif prev == 1:
                parents = (1,) * cur
            else:
                raise UnsupportedUserMap(
                    f"no canonical reduction for a {cur}x{prev} step at level {level}"
                )
        elif isinstance(strat, LexFirst):
            parents = _lex_first_reduction(mat)
            if parents is None:
                raise UnsupportedUserMap(f"no valid reduction at level {level}")
        elif isinstance(strat, NamedFamily):
            parents = _family_parents(strat, level, prev, cur)
        elif isinstance(strat, UserMap):
            parents = strat.lookup(level)
            if parents is None:
                if all(mat.is_row_monomial(i) for i in range(1, cur + 1)):
                    parents = tuple(mat.row_support(i)[0] for i in range(1, cur + 1))
                else:
                    raise DepthExceeded(
                        f"user maps end before level {level} and the matrix "
                        "does not force a unique choice"
                    )
        else:
            raise TypeError(f"unknown strategy {strat!r}")
        self._check_parents(level, mat, parents)
        self._parents.append(tuple(parents))
        self._branches.append(self._branch_from(parents))

    def _check_parents(self, level, mat, parents):
        if len(parents) != mat.nrows:
            raise UnsupportedUserMap(
                f"level {level} needs {mat.nrows} parents, got {len(parents)}"
            )
        for child, parent in enumerate(parents, start=1):
            if not (1 <= parent <= mat.ncols) or mat.at(child, parent) == 0:
                raise UnsupportedUserMap(
                    f"level {level}: vertex {child} cannot attach to {parent}"
                )
        covered = set(parents)
        if len(covered) < mat.ncols and self.diagram.shape.kind != "irregular":
            raise UnsupportedUserMap(
                f"level {level}: parents {sorted(set(range(1, mat.ncols + 1)) - covered)} "
                "have no children"
            )

    @staticmethod
    def _branch_from(parents):
        seen = {}
        for child, parent in enumerate(parents, start=1):
            seen.setdefault(parent, []).append(child)
        doubled = [(p, kids) for p, kids in seen.items() if len(kids) == 2]
        if len(doubled) == 1 and all(len(k) <= 2 for _, k in seen.items()):
            p, kids = doubled[0]
            if all(len(k) == 1 for q, k in seen.items() if q != p):
                return BranchData(p, min(kids), max(kids))
        return None

    # -- queries

    def parents_at(self, level):
        self.ensure_depth(level)
        return self._parents[level - 1]

    def parent(self, level, vertex):
        parents = self.parents_at(level)
        if not (1 <= vertex <= len(parents)):
            raise DepthExceeded(f"no vertex {vertex} at level {level}")
        return parents[vertex - 1]

    def branch(self, level):
        self.ensure_depth(level)
        return self._branches[level - 1]

    def level_count(self, level):
        if level == 0:
            return 1
        return len(self.parents_at(level))

    def ancestor(self, level, vertex, to_level):
        v = vertex
        for lev in range(level, to_level, -1):
            v = self.parent(lev, v)
        return v

    def children(self, level, vertex):
        parents = self.parents_at(level + 1)
        return tuple(j for j, p in enumerate(parents, start=1) if p == vertex)


def build_minimal_diagram(diagram, strategy):
    """Attach a reduction strategy to a diagram and return the lazy tree."""
    if isinstance(strategy, str):
        strategy = strategy_from_string(strategy)
    family_tag = strategy.name if isinstance(strategy, NamedFamily) else None
    tree = MinimalDiagram(diagram, strategy, family_tag)
    if diagram.explicit_depth:
        tree.ensure_depth(min(diagram.explicit_depth, tree.max_depth()))
    return tree


# ---------------------------------------------------------------------------
# cylinders and functions


@dataclass(frozen=True)
class Cylinder:
    level: int
    vertex: int


def cylinder_children(tree, cyl):
    """The next level's cylinders sitting inside this one."""
    kids = tree.children(cyl.level, cyl.vertex)
    return tuple(Cylinder(cyl.level + 1, j) for j in kids)


@dataclass(frozen=True)
class LocallyConstantFunction:
    """One rational value per vertex at a fixed depth."""

    depth: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def value_at(self, vertex):
        return self.values[vertex - 1]

    def is_integral(self):
        return all(v.denominator == 1 for v in self.values)


def refine(func, to_depth, tree):
    """Re-express a function on a deeper level's cylinders."""
    if to_depth < func.depth:
        raise ValueError("refine only goes deeper")
    if to_depth == func.depth:
        return func
    tree.ensure_depth(to_depth)
    values = []
    for j in range(1, tree.level_count(to_depth) + 1):
        anc = tree.ancestor(to_depth, j, func.depth)
        values.append(func.values[anc - 1])
    return LocallyConstantFunction(to_depth, tuple(values))


def indicator(cylinders, tree):
    """Indicator function of a union of cylinders, at the deepest level used."""
    cyls = [cylinders] if isinstance(cylinders, Cylinder) else list(cylinders)
    if not cyls:
        raise ValueError("empty cylinder collection")
    depth = max(c.level for c in cyls)
    tree.ensure_depth(depth)
    values = [Fraction(0)] * tree.level_count(depth)
    for j in range(1, tree.level_count(depth) + 1):
        for c in cyls:
            if tree.ancestor(depth, j, c.level) == c.vertex:
                values[j - 1] = Fraction(1)
                break
    return LocallyConstantFunction(depth, tuple(values))


def lcf_add(f, g):
    if f.depth != g.depth:
        raise ValueError("functions live at different depths; refine first")
    return LocallyConstantFunction(
        f.depth, tuple(a + b for a, b in zip(f.values, g.values))
    )


def lcf_scale(f, s):
    s = Fraction(s)
    return LocallyConstantFunction(f.depth, tuple(s * v for v in f.values))


def functions_equal(f, g, tree):
    deep = max(f.depth, g.depth)
    return refine(f, deep, tree).values == refine(g, deep, tree).values


# ---------------------------------------------------------------------------
# end structure


@dataclass(frozen=True)
class EndCensus:
    """kind: 'finite' | 'countably-infinite' | 'at-least' (uncertified floor)."""

    kind: str
    count: int | None
    condensation: int
    certified: bool
    depth_examined: int | None

    def summary(self):
        if self.kind == "countably-infinite":
            ends = "countably infinite ends"
        elif self.kind == "finite":
            ends = f"{self.count} ends"
        else:
            ends = f">= {self.count} ends (uncertified)"
        tag = "certified" if self.certified else "uncertified"
        return f"{ends}, {self.condensation} condensation points [{tag}]"


_FAMILY_CENSUS = {
    "rightmost": ("countably-infinite", None, 1),
    "leftmost": ("countably-infinite", None, 1),
    "alternating": ("countably-infinite", None, 2),
}


def end_census(tree, depth=None):
    """End count and condensation summary.

    Built-in families and constant-width diagrams have closed forms and come
    back certified.  Anything else is a finite-depth report: a floor on the
    end count plus a crude condensation estimate (frontier vertices whose
    ancestry meets a branch parent within the last two levels).
    """
    diagram = tree.diagram
    if diagram.has_tail and tree.family_tag in _FAMILY_CENSUS:
        kind, count, cond = _FAMILY_CENSUS[tree.family_tag]
        return EndCensus(kind, count, cond, True, None)
    if diagram.has_tail and diagram.shape.kind == "type1":
        return EndCensus("finite", diagram.shape.width, 0, True, None)

    if depth is None:
        depth = min(tree.max_depth(), max(diagram.explicit_depth, 8))
    tree.ensure_depth(depth)
    frontier = tree.level_count(depth)
    recent = 0
    for j in range(1, frontier + 1):
        hit = False
        for lev in (depth, depth - 1):
            if lev < 1:
                continue
            b = tree.branch(lev)
            if b is None:
                continue
            if tree.ancestor(depth, j, lev - 1) == b.parent:
                hit = True
                break
        if hit:
            recent += 1
    return EndCensus("at-least", frontier, recent, False, depth)


def compare_invariants(tree_a, tree_b, depth=None):
    """'distinct' when certified censuses disagree, else 'indistinguishable'."""
    ca = end_census(tree_a, depth)
    cb = end_census(tree_b, depth)
    if not (ca.certified and cb.certified):
        raise Uncertified("both censuses must be certified to compare")
    if (ca.kind, ca.count) != (cb.kind, cb.count) or ca.condensation != cb.condensation:
        return "distinct"
    return "indistinguishable"


# ---------------------------------------------------------------------------
# text formats


def format_tree_dump(tree, depth):
    tree.ensure_depth(depth)
    lines = ["tree v1"]
    for lev in range(1, depth + 1):
        parents = tree.parents_at(lev)
        inner = " ".join(
            f"parent({j})={p}" for j, p in enumerate(parents, start=1)
        )
        lines.append(f"level {lev}: {inner}")
        b = tree.branch(lev)
        if b is not None:
            lines.append(f"branch {lev}: a={b.parent} r'={b.small_child} r={b.big_child}")
    return "\n".join(lines) + "\n"


def parse_tree_dump(text):
    """Returns (maps, branches): maps is a tuple of (level, parents)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "tree v1":
        raise ValueError("expected header 'tree v1'")
    maps = []
    branches = {}
    for ln in lines[1:]:
        if ln.startswith("level "):
            head, _, rest = ln.partition(":")
            level = int(head.split()[1])
            parents = []
            for tok in rest.split():
                if not tok.startswith("parent("):
                    raise ValueError(f"bad token {tok!r}")
                j, p = tok[len("parent("):].split(")=")
                if int(j) != len(parents) + 1:
                    raise ValueError(f"parents out of order in {ln!r}")
                parents.append(int(p))
            maps.append((level, tuple(parents)))
        elif ln.startswith("branch "):
            head, _, rest = ln.partition(":")
            level = int(head.split()[1])
            fields = dict(tok.split("=") for tok in rest.split())
            branches[level] = BranchData(
                int(fields["a"]), int(fields["r'"]), int(fields["r"])
            )
        else:
            raise ValueError(f"unexpected line {ln!r}")
    return tuple(maps), branches


def write_tree_dot(tree, depth):
    """Graphviz rendering; branch parents are double circles."""
    tree.ensure_depth(depth)
    out = ["digraph tree {", "  rankdir=TB;", "  node [shape=circle];"]
    out.append('  "t0_1" [label="0:1"];')
    for lev in range(1, depth + 1):
        b = tree.branch(lev)
        names = []
        for j in range(1, tree.level_count(lev) + 1):
            nm = f'"t{lev}_{j}"'
            names.append(nm)
            out.append(f'  {nm} [label="{lev}:{j}"];')
        out.append("  { rank=same; " + "; ".join(names) + "; }")
        if b is not None:
            out.append(f'  "t{lev - 1}_{b.parent}" [shape=doublecircle];')
        for j in range(1, tree.level_count(lev) + 1):
            out.append(f'  "t{lev - 1}_{tree.parent(lev, j)}" -> "t{lev}_{j}";')
    out.append("}")
    return "\n".join(out) + "\n"
