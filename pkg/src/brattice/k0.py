"""The ordered group of a diagram, realized as functions on the boundary.

Each level's multiplicity matrix gains one integer column to become
invertible; the resulting chain turns integer vectors into locally
constant rational functions on the tree boundary.  Everything is exact:
denominators are tracked through signed determinants, and membership of a
function comes down to integrality of one vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import matops
from .diagram import MultiplicityMatrix, multiplicity_rank
from .errors import (
    CompletionNotFound,
    DepthExceeded,
    NotInK0,
    NotUniqueMinimal,
    RankDeficient,
    SingularCompletion,
)
from .pathspace import (
    LocallyConstantFunction,
    MinimalDiagram,
    UserMap,
    functions_equal,
    indicator,
    refine,
)
from .reduction import is_unique_minimal


# ---------------------------------------------------------------------------
# completions


@dataclass(frozen=True)
class Auto:
    """Try standard basis columns, then small {0,1,2} columns."""


@dataclass(frozen=True)
class WeightColumn:
    """Place b at the larger branch child of a unique-minimal matrix."""

    b: int


@dataclass(frozen=True)
class ExplicitColumn:
    column: tuple


def complete_matrix(mat, hint=Auto()):
    """Append one integer column making a (c+1) x c step invertible."""
    if not isinstance(mat, MultiplicityMatrix):
        mat = MultiplicityMatrix(mat)
    r, c = mat.nrows, mat.ncols
    if r != c + 1:
        raise ValueError(f"completion needs one more row than columns, got {r}x{c}")
    if multiplicity_rank(mat) < c:
        raise RankDeficient(f"rank is below {c}")
    base = mat.to_lists()

    def with_column(col):
        return [base[i] + [col[i]] for i in range(r)]

    if isinstance(hint, ExplicitColumn):
        col = [int(x) for x in hint.column]
        if len(col) != r:
            raise ValueError(f"column needs {r} entries, got {len(col)}")
        square = with_column(col)
        if matops.det(square) == 0:
            raise SingularCompletion("explicit column keeps the matrix singular")
        return square

    if isinstance(hint, WeightColumn):
        flag, j = is_unique_minimal(mat)
        if not flag or j is None:
            raise NotUniqueMinimal("weight column needs a unique minimal reduction")
        big = max(mat.col_support(j))
        col = [hint.b if i == big else 0 for i in range(1, r + 1)]
        square = with_column(col)
        if matops.det(square) == 0:
            raise SingularCompletion("weight column keeps the matrix singular")
        return square

    if isinstance(hint, Auto):
        for i in range(r):
            col = [1 if p == i else 0 for p in range(r)]
            square = with_column(col)
            if matops.det(square) != 0:
                return square
        for tup in itertools.product((0, 1, 2), repeat=r):
            if not any(tup):
                continue
            square = with_column(list(tup))
            if matops.det(square) != 0:
                return square
        raise CompletionNotFound("no integer completion found in the search")

    raise TypeError(f"unknown completion hint {hint!r}")


# ---------------------------------------------------------------------------
# chains


class CompletedChain:
    """Invertible integer squares, one per level, with cached products.

    mode 'growth' means sizes rise by one per level (the cumulative product
    pads with an identity line before each new factor); 'constant' keeps one
    size throughout.  A single square is compatible with both readings, and
    both give the same depth-1 product.
    """

    def __init__(self, squares, dets, mode):
        self.squares = squares
        self.dets = dets
        self.mode = mode
        self._u = {0: None}  # computed lazily
        self._a = {}

    @property
    def depth(self):
        return len(self.squares)

    def group_scale(self, n):
        """Denominator bound at depth n: product of |det| over the first n levels."""
        if n > self.depth:
            raise DepthExceeded(f"chain has depth {self.depth}, asked for {n}")
        out = 1
        for d in self.dets[:n]:
            out *= abs(d)
        return out

    def u_matrix(self, n):
        """Integer product taking basis vectors at depth n to R-basis vectors."""
        if n > self.depth:
            raise DepthExceeded(f"chain has depth {self.depth}, asked for {n}")
        if n == 0:
            size = 1 if self.mode != "constant" else len(self.squares[0])
            return matops.identity(size)
        if n in self._u and self._u[n] is not None:
            return self._u[n]
        prev = self.u_matrix(n - 1)
        if self.mode == "constant":
            padded = prev
        else:
            size = len(prev)
            padded = [list(row) + [Fraction(0)] for row in prev]
            padded.append([Fraction(0)] * size + [Fraction(1)])
        cur = matops.mat_mul([list(r) for r in self.squares[n - 1]], padded)
        self._u[n] = cur
        return cur

    def a_matrix(self, n):
        """Rational inverse of u_matrix(n)."""
        if n not in self._a:
            self._a[n] = matops.inverse(self.u_matrix(n))
        return self._a[n]

    def exactness_report(self, n):
        """Cross-checks tying dets, adjugates, and scales together at depth n."""
        u = self.u_matrix(n)
        a = self.a_matrix(n)
        det_u = matops.det(u)
        prod = Fraction(1)
        for d in self.dets[:n]:
            prod *= d
        adj = matops.adjugate(u)
        adj_expected = matops.scale(a, det_u)
        scale = self.group_scale(n)
        return {
            "det_matches_product": det_u == prod,
            "adjugate_law": matops.mat_eq(adj, adj_expected),
            "adjugate_integral": matops.is_integral(adj),
            "scaled_inverse_integral": matops.is_integral(matops.scale(a, scale)),
        }


def build_chain(completions, diagram=None):
    """Wrap completed squares into a chain, checking sizes and invertibility."""
    squares = []
    dets = []
    for k, raw in enumerate(completions):
        rows = tuple(tuple(int(x) for x in row) for row in raw)
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise ValueError(f"completion {k} is not square")
        d = matops.det([list(r) for r in rows])
        if d == 0:
            raise SingularCompletion(f"completion {k} is singular")
        squares.append(rows)
        dets.append(int(d))
    if not squares:
        raise ValueError("chain needs at least one completion")

    sizes = [len(s) for s in squares]
    if len(sizes) == 1:
        mode = "either" if sizes[0] == 2 else "constant"
    elif all(b == a + 1 for a, b in zip(sizes, sizes[1:])):
        if sizes[0] != 2:
            raise ValueError(f"growing chains start with a 2x2 square, got {sizes[0]}")
        mode = "growth"
    elif all(s == sizes[0] for s in sizes):
        mode = "constant"
    else:
        raise ValueError(f"level sizes {sizes} neither grow by one nor stay constant")

    if diagram is not None:
        _check_against_diagram(squares, mode, diagram)
    return CompletedChain(tuple(squares), tuple(dets), mode)


def _check_against_diagram(squares, mode, diagram):
    if mode in ("growth", "either") and diagram.shape.kind != "type1":
        for k, sq in enumerate(squares):
            mat = diagram.matrix(k)
            if mat.nrows != len(sq) or mat.ncols != len(sq) - 1:
                raise ValueError(f"completion {k} does not fit matrix {k}")
            for i in range(mat.nrows):
                if tuple(sq[i][: mat.ncols]) != mat.rows[i]:
                    raise ValueError(f"completion {k} alters matrix {k}")
    else:
        wanted = []
        n = 0
        while len(wanted) < len(squares):
            mat = diagram.matrix(n)
            if mat.nrows == mat.ncols:
                wanted.append(mat)
            n += 1
        for k, (sq, mat) in enumerate(zip(squares, wanted)):
            if tuple(tuple(r) for r in sq) != mat.rows:
                raise ValueError(f"chain square {k} is not the diagram's square matrix")


def complete_chain(diagram, hints=None, depth=None):
    """Build a chain for a diagram; hints may be one hint or a per-level list."""
    if depth is None:
        depth = max(diagram.explicit_depth, 1)
    depth = min(depth, diagram.max_matrix_index() + 1)
    if diagram.shape.kind == "type1":
        squares = []
        n = 0
        while len(squares) < depth:
            mat = diagram.matrix(n)
            if mat.nrows == mat.ncols:
                squares.append(mat.to_lists())
            n += 1
        return build_chain(squares, diagram)
    completions = []
    for k in range(depth):
        if hints is None:
            hint = Auto()
        elif isinstance(hints, (Auto, WeightColumn, ExplicitColumn)):
            hint = hints
        else:
            hint = hints[k] if k < len(hints) else Auto()
        completions.append(complete_matrix(diagram.matrix(k), hint))
    return build_chain(completions, diagram)


# ---------------------------------------------------------------------------
# the R basis


def r_vertices(tree, n):
    """The distinguished vertex at each level 0..n: root, then the larger
    branch child."""
    out = [1]
    for lev in range(1, n + 1):
        b = tree.branch(lev)
        if b is None:
            raise ValueError(f"level {lev} does not branch exactly once")
        out.append(b.big_child)
    return out


def r_map(beta, tree):
    """Turn basis coefficients into a function: each coefficient rides the
    cylinder at its level's distinguished vertex."""
    n = len(beta) - 1
    rs = r_vertices(tree, n)
    tree.ensure_depth(n)
    values = []
    for j in range(1, tree.level_count(n) + 1):
        total = Fraction(0)
        for lev in range(n + 1):
            if tree.ancestor(n, j, lev) == rs[lev]:
                total += Fraction(beta[lev])
        values.append(total)
    return LocallyConstantFunction(n, tuple(values))


def to_R_basis(func, tree):
    """Invert r_map: peel one level at a time from the deepest."""
    n = func.depth
    rs = r_vertices(tree, n)
    gamma = list(func.values)
    beta = [Fraction(0)] * (n + 1)
    for lev in range(n, 0, -1):
        b = tree.branch(lev)
        parents = tree.parents_at(lev)
        beta[lev] = gamma[b.big_child - 1] - gamma[b.small_child - 1]
        shallower = [Fraction(0)] * tree.level_count(lev - 1)
        for child, parent in enumerate(parents, start=1):
            if child == b.big_child:
                continue
            shallower[parent - 1] = gamma[child - 1]
        gamma = shallower
    beta[0] = gamma[0]
    return tuple(beta)


# ---------------------------------------------------------------------------
# the realization maps


def phi(alpha, chain, tree):
    """Function of an integer (or rational) vector at its own depth."""
    if chain.mode == "constant":
        raise ValueError("constant-width chains use phi_type1")
    n = len(alpha) - 1
    if n > chain.depth:
        raise DepthExceeded(f"chain has depth {chain.depth}, vector needs {n}")
    beta = matops.mat_vec(chain.a_matrix(n), [Fraction(x) for x in alpha])
    return r_map(beta, tree)


def phi_type1(a, chain, tree):
    """Constant-width realization at the chain's depth: apply the inverses of
    the square matrices, in level order, to the value vector."""
    if chain.mode == "growth":
        raise ValueError("growing chains use phi")
    d = chain.depth
    values = [Fraction(x) for x in a]
    for k in range(d - 1, -1, -1):
        values = matops.mat_vec(matops.inverse([list(r) for r in chain.squares[k]]), values)
    tree.ensure_depth(d)
    if len(values) != tree.level_count(d):
        raise ValueError("vector length does not match the level width")
    return LocallyConstantFunction(d, tuple(values))


def commuting_check(n, alpha, chain, tree):
    """One square of the level diagram: push the vector, compare functions."""
    f_here = phi(alpha, chain, tree)
    pushed = matops.mat_vec(tree.diagram.matrix(n).to_lists(), [Fraction(x) for x in alpha])
    f_next = phi(pushed, chain, tree)
    return functions_equal(refine(f_here, n + 1, tree), f_next, tree)


# ---------------------------------------------------------------------------
# membership and positivity


@dataclass(frozen=True)
class K0Witness:
    alpha: tuple
    depth: int


@dataclass(frozen=True)
class NotMember:
    depth_checked: int


def witness_vector(func, chain, tree):
    """The exact coordinate vector of a function at its own depth, integral
    or not."""
    n = func.depth
    if n > chain.depth:
        raise DepthExceeded(f"chain has depth {chain.depth}, function sits at {n}")
    beta = to_R_basis(func, tree)
    return tuple(matops.mat_vec(chain.u_matrix(n), list(beta)))


def membership(func, chain, tree):
    """Exact integrality test at the function's own depth."""
    alpha = witness_vector(func, chain, tree)
    if matops.vec_is_integral(alpha):
        return K0Witness(tuple(int(x) for x in alpha), func.depth)
    return NotMember(func.depth)


@dataclass(frozen=True)
class Positive:
    level: int
    witness: tuple


@dataclass(frozen=True)
class NotPositiveUpTo:
    bound: int | None  # None: definitively never nonnegative


@dataclass(frozen=True)
class Unknown:
    checked: int


def positivity(func, chain, tree, bound=None):
    """Scan pushforwards of the witness for an all-nonnegative level."""
    verdict = membership(func, chain, tree)
    if isinstance(verdict, NotMember):
        raise NotInK0(f"no integer witness at depth {verdict.depth_checked}")
    if bound is None:
        bound = tree.max_depth()
    alpha = [Fraction(x) for x in verdict.alpha]
    level = verdict.depth
    while True:
        if all(x >= 0 for x in alpha):
            return Positive(level, tuple(int(x) for x in alpha))
        if level >= bound:
            return NotPositiveUpTo(bound)
        try:
            mat = tree.diagram.matrix(level)
        except DepthExceeded:
            return Unknown(level)
        alpha = matops.mat_vec(mat.to_lists(), alpha)
        level += 1


# ---------------------------------------------------------------------------
# weight schemes


class WeightScheme:
    """Per-vertex integer weights on a diagram whose reductions are forced.

    k(root) = 1 and every child multiplies its parent's weight by the one
    multiplicity on its parent edge.  The closed form values functions as
    alpha_i / k(i, n), so membership and positivity become immediate.
    """

    def __init__(self, diagram):
        from .diagram import check_valid

        check_valid(diagram)
        self.diagram = diagram
        self.tree = MinimalDiagram(diagram, UserMap(()))
        self._k = [(1,)]
        self._j = []
        self._b = []

    @property
    def depth(self):
        return len(self._k) - 1

    def ensure_depth(self, n):
        while self.depth < n:
            self._extend()
        return self

    def _extend(self):
        level = self.depth  # matrix index to absorb next
        mat = self.diagram.matrix(level)
        flag, j = is_unique_minimal(mat)
        if not flag:
            raise NotUniqueMinimal(f"matrix {level} admits several reductions")
        if j is None:
            raise NotUniqueMinimal(f"matrix {level} does not grow by a single branch")
        self.tree.ensure_depth(level + 1)
        parents = self.tree.parents_at(level + 1)
        prev = self._k[level]
        row = tuple(
            mat.at(child, parent) * prev[parent - 1]
            for child, parent in enumerate(parents, start=1)
        )
        self._k.append(row)
        self._j.append(j)
        big = max(mat.col_support(j))
        self._b.append(row[big - 1])

    def k(self, vertex, level):
        self.ensure_depth(level)
        return self._k[level][vertex - 1]

    def weights(self, level):
        self.ensure_depth(level)
        return self._k[level]

    def branch_col(self, level):
        """Branch column of the matrix between level and level+1."""
        self.ensure_depth(level + 1)
        return self._j[level]

    def b(self, level):
        """Weight of the larger branch child created by matrix `level`."""
        self.ensure_depth(level + 1)
        return self._b[level]

    def completions(self, depth):
        self.ensure_depth(depth)
        out = []
        for level in range(depth):
            out.append(
                complete_matrix(self.diagram.matrix(level), WeightColumn(self.b(level)))
            )
        return out

    def chain(self, depth):
        return build_chain(self.completions(depth), self.diagram)

    def phi_closed(self, alpha):
        n = len(alpha) - 1
        ks = self.weights(n)
        values = tuple(Fraction(a) / ks[i] for i, a in enumerate(alpha))
        return LocallyConstantFunction(n, values)

    def membership(self, func):
        n = func.depth
        ks = self.weights(n)
        alpha = [v * ks[i] for i, v in enumerate(func.values)]
        if matops.vec_is_integral(alpha):
            return K0Witness(tuple(int(x) for x in alpha), n)
        return NotMember(n)

    def positivity(self, func):
        verdict = self.membership(func)
        if isinstance(verdict, NotMember):
            raise NotInK0(f"no integer witness at depth {verdict.depth_checked}")
        if all(v >= 0 for v in func.values):
            return Positive(func.depth, verdict.alpha)
        return NotPositiveUpTo(None)


def weight_scheme(diagram):
    return WeightScheme(diagram)


# ---------------------------------------------------------------------------
# derived probes


def _scheme_or_chain_membership(func, realizer, tree):
    if isinstance(realizer, WeightScheme):
        return realizer.membership(func)
    return membership(func, realizer, tree)


def _realize(alpha, realizer, tree):
    if isinstance(realizer, WeightScheme):
        return realizer.phi_closed(alpha)
    return phi(alpha, realizer, tree)


def indicator_membership(cylinders, realizer, tree):
    """Membership verdict for the indicator of a union of cylinders."""
    func = indicator(cylinders, tree)
    return _scheme_or_chain_membership(func, realizer, tree)


@dataclass(frozen=True)
class Preserved:
    checked: int


@dataclass(frozen=True)
class Broken:
    witness: LocallyConstantFunction
    image: LocallyConstantFunction


def automorphism_probe(theta, realizer, tree, depth, candidate_cap=512):
    """Does relabeling depth-`depth` vertices by `theta` preserve the group?

    Candidates are realized members: pair vectors over moved vertices first,
    then single basis vectors, then indicators of vertex subsets.  The first
    candidate whose relabeled image has no integer witness breaks the probe.
    """
    tree.ensure_depth(depth)
    m = tree.level_count(depth)
    images = tuple(int(t) for t in theta)
    if sorted(images) != list(range(1, m + 1)):
        raise ValueError(f"theta must permute 1..{m}")
    inverse = [0] * m
    for i, t in enumerate(images, start=1):
        inverse[t - 1] = i

    def basis(*idx):
        return [1 if (p + 1) in idx else 0 for p in range(m)]

    candidates = []
    seen = set()

    def push(alpha):
        key = tuple(alpha)
        if key not in seen:
            seen.add(key)
            candidates.append(alpha)

    for i in range(1, m + 1):
        if images[i - 1] != i:
            push(basis(i, images[i - 1]))
    for i in range(1, m + 1):
        push(basis(i))
    for size in range(2, m):
        for combo in itertools.combinations(range(1, m + 1), size):
            push(basis(*combo))
            if len(candidates) >= candidate_cap:
                break
        if len(candidates) >= candidate_cap:
            break

    checked = 0
    for alpha in candidates[:candidate_cap]:
        func = _realize(alpha, realizer, tree)
        pulled = LocallyConstantFunction(
            depth, tuple(func.values[inverse[j - 1] - 1] for j in range(1, m + 1))
        )
        verdict = _scheme_or_chain_membership(pulled, realizer, tree)
        checked += 1
        if isinstance(verdict, NotMember):
            return Broken(func, pulled)
    return Preserved(checked)


# ---------------------------------------------------------------------------
# chain dump format


def format_chain_dump(chain, witnesses=(), funcs=()):
    lines = ["chain v1"]
    for k, sq in enumerate(chain.squares):
        rows = " ; ".join(" ".join(str(x) for x in row) for row in sq)
        lines.append(f"A {k}: {rows} det={chain.dets[k]}")
    for w in witnesses:
        lines.append(
            f"witness depth={w.depth}: " + " ".join(str(x) for x in w.alpha)
        )
    for f in funcs:
        lines.append(
            f"func depth={f.depth}: " + " ".join(matops.frac_str(v) for v in f.values)
        )
    return "\n".join(lines) + "\n"


def parse_chain_dump(text):
    """Returns (chain, witnesses, funcs); determinants are re-verified."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "chain v1":
        raise ValueError("expected header 'chain v1'")
    squares = []
    witnesses = []
    funcs = []
    for ln in lines[1:]:
        if ln.startswith("A "):
            head, _, rest = ln.partition(":")
            index = int(head.split()[1])
            if index != len(squares):
                raise ValueError(f"chain squares out of order at {ln!r}")
            body, _, det_part = rest.rpartition("det=")
            rows = [
                [int(t) for t in chunk.split()]
                for chunk in body.split(";")
            ]
            claimed = int(det_part)
            if matops.det(rows) != claimed:
                raise ValueError(f"determinant mismatch in {ln!r}")
            squares.append(rows)
        elif ln.startswith("witness depth="):
            head, _, rest = ln.partition(":")
            depth = int(head.split("=")[1])
            witnesses.append(K0Witness(tuple(int(t) for t in rest.split()), depth))
        elif ln.startswith("func depth="):
            head, _, rest = ln.partition(":")
            depth = int(head.split("=")[1])
            funcs.append(
                LocallyConstantFunction(
                    depth, tuple(Fraction(t) for t in rest.split())
                )
            )
        else:
            raise ValueError(f"unexpected line {ln!r}")
    return build_chain(squares), witnesses, funcs
