"""Minimal sub-diagram trees, cylinders, and the end census."""

from fractions import Fraction

import pytest

from brattice import corpus
from brattice.diagram import (
    BratteliDiagram,
    MultiplicityMatrix,
    ShapeClass,
)
from brattice.errors import DepthExceeded, Uncertified, UnsupportedUserMap
from brattice.pathspace import (
    BranchData,
    Cylinder,
    LexFirst,
    LocallyConstantFunction,
    NamedFamily,
    Theorem,
    UserMap,
    build_minimal_diagram,
    compare_invariants,
    cylinder_children,
    end_census,
    format_tree_dump,
    functions_equal,
    indicator,
    lcf_add,
    lcf_scale,
    parse_tree_dump,
    refine,
    strategy_from_string,
    write_tree_dot,
)


GICAR = corpus.get("gicar").diagram()
PROPERSUB = corpus.get("propersub").diagram()
PINCH = corpus.get("pinch").diagram()
THREELINE = corpus.get("threeline").diagram()

PINCH_MAPS = UserMap(((1, (1, 1)), (2, (1,))))


def finite_gicar(depth):
    mats = tuple(GICAR.matrix(n) for n in range(depth))
    return BratteliDiagram(mats, None, ShapeClass("type2"), f"gicar-{depth}")


def test_strategy_from_string():
    assert isinstance(strategy_from_string("theorem"), Theorem)
    assert isinstance(strategy_from_string("lexfirst"), LexFirst)
    assert strategy_from_string("rightmost") == NamedFamily("rightmost")
    assert strategy_from_string("positions:1,2") == NamedFamily("positions", (1, 2))
    with pytest.raises(ValueError):
        strategy_from_string("bogus")


def test_family_parent_maps():
    right = build_minimal_diagram(GICAR, "rightmost")
    assert right.parents_at(1) == (1, 1)
    assert right.parents_at(2) == (1, 2, 2)
    assert right.parents_at(3) == (1, 2, 3, 3)

    left = build_minimal_diagram(GICAR, "leftmost")
    assert left.parents_at(2) == (1, 1, 2)
    assert left.parents_at(3) == (1, 1, 2, 3)

    alt = build_minimal_diagram(GICAR, "alternating")
    assert alt.parents_at(1) == (1, 1)
    assert alt.parents_at(2) == (1, 2, 2)
    assert alt.parents_at(3) == (1, 1, 2, 3)


def test_positions_strategy():
    pos = build_minimal_diagram(GICAR, "positions:1,2")
    assert pos.parents_at(1) == (1, 1)
    assert pos.parents_at(2) == (1, 2, 2)
    # the list cycles, clamped into the valid range
    assert pos.parents_at(3) == (1, 1, 2, 3)
    assert pos.parents_at(4) == (1, 2, 2, 3, 4)
    big = build_minimal_diagram(GICAR, "positions:9")
    assert big.parents_at(2) == (1, 2, 2)


def test_branch_data():
    right = build_minimal_diagram(GICAR, "rightmost")
    assert right.branch(2) == BranchData(2, 2, 3)
    assert right.branch(3) == BranchData(3, 3, 4)
    tree = build_minimal_diagram(THREELINE, "theorem")
    assert tree.parents_at(1) == (1, 1, 1)
    assert tree.branch(1) is None  # a triple fork is not a single doubling
    assert tree.branch(3) is None  # square levels copy straight across


def test_theorem_tree_is_forced_on_propersub():
    tree = build_minimal_diagram(PROPERSUB, "theorem")
    assert tree.parents_at(1) == (1, 1)
    assert tree.parents_at(2) == (1, 2, 2)
    assert tree.parents_at(3) == (1, 2, 3, 3)
    assert tree.branch(1) == BranchData(1, 1, 2)
    assert tree.branch(2) == BranchData(2, 2, 3)


def test_lexfirst_agrees_when_forced():
    a = build_minimal_diagram(PROPERSUB, "theorem")
    b = build_minimal_diagram(PROPERSUB, LexFirst())
    for lev in range(1, 5):
        assert a.parents_at(lev) == b.parents_at(lev)


def test_user_map_checks():
    good = build_minimal_diagram(GICAR, UserMap(((1, (1, 1)), (2, (1, 2, 2)))))
    assert good.parents_at(2) == (1, 2, 2)
    with pytest.raises(UnsupportedUserMap):
        # vertex 1 at level 2 has no edge to column 2
        tree = build_minimal_diagram(GICAR, UserMap(((1, (1, 1)), (2, (2, 2, 2)))))
        tree.ensure_depth(2)
    with pytest.raises(UnsupportedUserMap):
        # column 2 left uncovered on a non-irregular diagram
        tree = build_minimal_diagram(GICAR, UserMap(((1, (1, 1)), (2, (1, 1, 1)))))
        tree.ensure_depth(2)
    # maps that end early, with nothing forcing the next level, stop cleanly
    short = build_minimal_diagram(GICAR, UserMap(((1, (1, 1)),)))
    short.ensure_depth(1)
    with pytest.raises(DepthExceeded):
        short.ensure_depth(2)


def test_user_map_extends_when_forced():
    # only the first level is given; the identity-plus-duplicate tail rows
    # are monomial, so deeper maps are forced
    tree = build_minimal_diagram(PROPERSUB, UserMap(((1, (1, 1)),)))
    assert tree.parents_at(2) == (1, 2, 2)
    assert tree.parents_at(3) == (1, 2, 3, 3)


def test_user_map_dead_ends_need_irregular_shape():
    tree = build_minimal_diagram(PINCH, PINCH_MAPS)
    assert tree.parents_at(2) == (1,)
    assert cylinder_children(tree, Cylinder(1, 2)) == ()
    assert cylinder_children(tree, Cylinder(1, 1)) == (Cylinder(2, 1),)


def test_ensure_depth_limit():
    fin = finite_gicar(3)
    tree = build_minimal_diagram(fin, "rightmost")
    tree.ensure_depth(3)
    with pytest.raises(DepthExceeded):
        tree.ensure_depth(4)


def test_cylinder_children_frozen():
    right = build_minimal_diagram(GICAR, "rightmost")
    assert cylinder_children(right, Cylinder(1, 1)) == (Cylinder(2, 1),)
    assert cylinder_children(right, Cylinder(1, 2)) == (Cylinder(2, 2), Cylinder(2, 3))


def test_refine_and_indicator():
    right = build_minimal_diagram(GICAR, "rightmost")
    f = LocallyConstantFunction(1, (1, 2))
    assert refine(f, 2, right).values == (1, 2, 2)
    assert refine(f, 1, right) is f
    with pytest.raises(ValueError):
        refine(f, 0, right)

    chi = indicator(Cylinder(1, 2), right)
    assert chi.depth == 1 and chi.values == (0, 1)
    union = indicator((Cylinder(1, 1), Cylinder(2, 3)), right)
    assert union.depth == 2
    assert union.values == (1, 0, 1)


def test_function_algebra():
    right = build_minimal_diagram(GICAR, "rightmost")
    f = LocallyConstantFunction(1, (1, 2))
    g = LocallyConstantFunction(1, (0, Fraction(1, 2)))
    assert lcf_add(f, g).values == (1, Fraction(5, 2))
    assert lcf_scale(g, 2).values == (0, 1)
    deep = refine(f, 3, right)
    assert functions_equal(f, deep, right)
    assert not functions_equal(f, g, right)
    with pytest.raises(ValueError):
        lcf_add(f, refine(g, 2, right))


def test_census_frozen():
    right = end_census(build_minimal_diagram(GICAR, "rightmost"))
    assert (right.kind, right.count, right.condensation) == ("countably-infinite", None, 1)
    assert right.certified

    alt = end_census(build_minimal_diagram(GICAR, "alternating"))
    assert (alt.kind, alt.count, alt.condensation) == ("countably-infinite", None, 2)

    lines = end_census(build_minimal_diagram(THREELINE, "theorem"))
    assert (lines.kind, lines.count, lines.condensation) == ("finite", 3, 0)
    assert lines.certified
    assert "3 ends" in lines.summary()


def test_census_uncertified_on_finite_prefix():
    tree = build_minimal_diagram(finite_gicar(4), "rightmost")
    census = end_census(tree)
    assert not census.certified
    assert census.kind == "at-least"
    assert census.count >= 1
    assert census.depth_examined is not None


def test_compare_invariants():
    right = build_minimal_diagram(GICAR, "rightmost")
    alt = build_minimal_diagram(GICAR, "alternating")
    left = build_minimal_diagram(GICAR, "leftmost")
    assert compare_invariants(right, alt) == "distinct"
    assert compare_invariants(right, left) == "indistinguishable"
    finite = build_minimal_diagram(finite_gicar(4), "rightmost")
    with pytest.raises(Uncertified):
        compare_invariants(right, finite)


def test_tree_dump_round_trip():
    right = build_minimal_diagram(GICAR, "rightmost")
    text = format_tree_dump(right, 4)
    maps, branches = parse_tree_dump(text)
    assert maps == tuple((lev, right.parents_at(lev)) for lev in range(1, 5))
    for lev in range(1, 5):
        assert branches[lev] == right.branch(lev)
    rebuilt = build_minimal_diagram(GICAR, UserMap(maps))
    assert format_tree_dump(rebuilt, 4) == text


def test_tree_dot_marks_branch_parents():
    right = build_minimal_diagram(GICAR, "rightmost")
    dot = write_tree_dot(right, 3)
    assert "doublecircle" in dot
    assert '"t0_1" -> "t1_1"' in dot
    assert '"t2_3" -> "t3_4"' in dot
