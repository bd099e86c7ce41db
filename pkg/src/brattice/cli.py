"""Command-line front end.

Verbs: validate, telescope, dilate, reduce, pathspace, k0 (chain, phi,
member, positive, probe), corpus.  Inputs are bdspec files, bare matrix
files (integer rows), or corpus:NAME references.  Exit codes: 0 success,
1 domain verdict (not a member, rank deficient, ...), 2 usage or parse
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus as corpus_lib
from .diagram import (
    BdspecParseError,
    MultiplicityMatrix,
    dilate_step,
    format_bdspec,
    normalize_type2,
    parse_bdspec,
    telescope,
    validate_diagram,
    write_dot,
)
from .errors import BratticeError, NotUniqueMinimal, RankDeficient, Singular
from .k0 import (
    Auto,
    Broken,
    ExplicitColumn,
    K0Witness,
    NotPositiveUpTo,
    Positive,
    automorphism_probe,
    complete_chain,
    format_chain_dump,
    membership,
    phi,
    phi_type1,
    positivity,
    weight_scheme,
)
from .pathspace import (
    LocallyConstantFunction,
    UserMap,
    build_minimal_diagram,
    compare_invariants,
    end_census,
    format_tree_dump,
    parse_tree_dump,
    strategy_from_string,
    write_tree_dot,
)
from .reduction import (
    enumerate_minimal_reductions,
    minimal_reduce,
    minimal_reduce_square,
)


class UsageError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_input(ref):
    """Returns ('diagram', BratteliDiagram) or ('matrix', MultiplicityMatrix)."""
    if ref.startswith("corpus:"):
        name = ref[len("corpus:"):]
        try:
            entry = corpus_lib.get(name)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
        if entry.kind == "diagram":
            return "diagram", entry.diagram()
        return "matrix", entry.matrix()
    text = _read(ref)
    meat = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if meat and meat[0] == "bdspec v1":
        return "diagram", parse_bdspec(text, name=ref)
    rows = []
    for ln in meat:
        toks = ln.split()
        if not all(t.isdigit() for t in toks):
            raise UsageError(f"{ref}: neither a bdspec file nor a bare matrix")
        rows.append([int(t) for t in toks])
    if not rows:
        raise UsageError(f"{ref}: empty input")
    return "matrix", MultiplicityMatrix(rows)


def _need_diagram(ref, verb):
    kind, obj = _load_input(ref)
    if kind != "diagram":
        raise UsageError(f"{verb} needs a diagram, {ref} is a bare matrix")
    return obj


def _strategy(text):
    if text.startswith("map:"):
        maps, _ = parse_tree_dump(_read(text[len("map:"):]))
        return UserMap(maps)
    try:
        return strategy_from_string(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_func(text):
    head, sep, rest = text.partition(":")
    head = head.strip()
    if not sep or not head.startswith("depth="):
        raise UsageError(f"--func must look like 'depth=N: v1 v2 ...', got {text!r}")
    try:
        depth = int(head[len("depth="):])
        values = tuple(Fraction(t) for t in rest.replace(",", " ").split())
    except ValueError as exc:
        raise UsageError(f"bad --func value: {exc}") from None
    return LocallyConstantFunction(depth, values)


def _parse_vector(text, flag):
    try:
        return tuple(Fraction(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise UsageError(f"bad {flag} value: {exc}") from None


def _parse_ints(text, flag):
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise UsageError(f"bad {flag} value: {exc}") from None


def _hints(args):
    if getattr(args, "column", None):
        return [ExplicitColumn(_parse_ints(args.column, "--column"))]
    return Auto()


def _default_depth(diagram):
    if diagram.has_tail:
        return max(diagram.explicit_depth, 6)
    return max(diagram.explicit_depth, 1)


def _write_file(path, text):
    Path(path).write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _emit_json(payload):
    print(json.dumps(payload, sort_keys=True))


def _fmt_vec(vec):
    return " ".join(str(x) for x in vec)


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args):
    kind, obj = _load_input(args.input)
    if kind == "matrix":
        issues = []
        for i in range(1, obj.nrows + 1):
            if not obj.row_support(i):
                issues.append(f"row {i} is zero")
        for j in range(1, obj.ncols + 1):
            if not obj.col_support(j):
                issues.append(f"column {j} is zero")
    else:
        report = validate_diagram(obj, args.depth)
        issues = list(report.issues)
        if args.dot:
            _write_file(args.dot, write_dot(obj, args.depth or _default_depth(obj)))
    if args.json:
        _emit_json({"input": args.input, "issues": issues, "valid": not issues})
    elif issues:
        for issue in issues:
            print(f"violation: {issue}")
    else:
        print("valid")
    return 1 if issues else 0


def cmd_telescope(args):
    diagram = _need_diagram(args.input, "telescope")
    out = telescope(diagram, _parse_ints(args.levels, "--levels"))
    sys.stdout.write(format_bdspec(out))
    if args.dot:
        _write_file(args.dot, write_dot(out, out.explicit_depth))
    return 0


def cmd_dilate(args):
    diagram = _need_diagram(args.input, "dilate")
    if args.level is not None:
        order, factors = dilate_step(diagram.matrix(args.level))
        print(f"row order: {_fmt_vec(order)}")
        for k, fac in enumerate(factors, start=1):
            print(f"factor {k}:")
            for row in fac.rows:
                print("  " + _fmt_vec(row))
        return 0
    out = normalize_type2(diagram)
    sys.stdout.write(format_bdspec(out))
    if args.dot:
        _write_file(args.dot, write_dot(out, out.explicit_depth))
    return 0


def cmd_reduce(args):
    kind, obj = _load_input(args.input)
    if kind == "matrix":
        return _reduce_matrix(obj, args)
    strat = _strategy(args.strategy)
    tree = build_minimal_diagram(obj, strat)
    depth = args.depth or _default_depth(obj)
    sys.stdout.write(format_tree_dump(tree, depth))
    if args.dot:
        _write_file(args.dot, write_tree_dot(tree, depth))
    return 0


def _reduce_matrix(mat, args):
    if args.dot:
        raise UsageError("--dot needs a diagram input")
    shown = []
    if args.enumerate is not None:
        maps = enumerate_minimal_reductions(mat)
        for parents in maps[: args.enumerate]:
            shown.append(parents)
        if args.json:
            _emit_json(
                {
                    "count": len(maps),
                    "maps": [list(p) for p in shown],
                }
            )
        else:
            for parents in shown:
                print(f"map: {_fmt_vec(parents)}")
            print(f"{len(maps)} reductions total")
        return 0 if maps else 1
    try:
        if mat.nrows == mat.ncols:
            outcome = minimal_reduce_square(mat)
        else:
            outcome = minimal_reduce(mat)
    except (RankDeficient, Singular) as exc:
        found = len(enumerate_minimal_reductions(mat))
        msg = f"rank deficient; brute force found {found} reductions"
        if isinstance(exc, Singular):
            msg = f"singular; brute force found {found} reductions"
        if args.json:
            _emit_json({"error": msg, "reductions": found})
        else:
            print(msg)
        return 1
    if args.json:
        _emit_json(
            {
                "branch_column": outcome.branch_col,
                "method": outcome.method,
                "parents": list(outcome.parents),
            }
        )
    else:
        print(f"parents: {_fmt_vec(outcome.parents)}")
        if outcome.branch_col is not None:
            print(f"branch column: {outcome.branch_col}")
        print(f"method: {outcome.method}")
    return 0


def cmd_pathspace(args):
    diagram = _need_diagram(args.input, "pathspace")
    tree = build_minimal_diagram(diagram, _strategy(args.strategy))
    census = end_census(tree, args.depth)
    if args.json:
        payload = {
            "certified": census.certified,
            "condensation": census.condensation,
            "count": census.count,
            "kind": census.kind,
            "strategy": args.strategy,
        }
        if args.compare:
            other = build_minimal_diagram(diagram, _strategy(args.compare))
            payload["comparison"] = compare_invariants(tree, other, args.depth)
        _emit_json(payload)
    else:
        print(f"census[{args.strategy}]: {census.summary()}")
        if args.census:
            print(f"  kind: {census.kind}")
            print(f"  count: {'infinite' if census.count is None else census.count}")
            print(f"  condensation: {census.condensation}")
            print(f"  certified: {'yes' if census.certified else 'no'}")
            if census.depth_examined is not None:
                print(f"  depth examined: {census.depth_examined}")
        if args.compare:
            other = build_minimal_diagram(diagram, _strategy(args.compare))
            verdict = compare_invariants(tree, other, args.depth)
            print(f"comparison[{args.strategy} vs {args.compare}]: {verdict}")
    if args.dot:
        depth = args.depth or _default_depth(diagram)
        _write_file(args.dot, write_tree_dot(tree, depth))
    return 0


def _chain_for(args, diagram, depth):
    if args.weight:
        return weight_scheme(diagram).chain(depth)
    return complete_chain(diagram, _hints(args), depth)


def cmd_k0_chain(args):
    diagram = _need_diagram(args.input, "k0 chain")
    depth = args.depth or _default_depth(diagram)
    chain = _chain_for(args, diagram, depth)
    sys.stdout.write(format_chain_dump(chain))
    return 0


def cmd_k0_phi(args):
    diagram = _need_diagram(args.input, "k0 phi")
    alpha = _parse_vector(args.alpha, "--alpha")
    tree = build_minimal_diagram(diagram, _strategy(args.strategy))
    if diagram.shape.kind == "type1":
        depth = args.depth or _default_depth(diagram)
        chain = _chain_for(args, diagram, depth)
        func = phi_type1(alpha, chain, tree)
    else:
        depth = max(len(alpha) - 1, 1)
        chain = _chain_for(args, diagram, depth)
        func = phi(alpha, chain, tree)
    print(f"func depth={func.depth}: {_fmt_vec(func.values)}")
    return 0


def cmd_k0_member(args):
    diagram = _need_diagram(args.input, "k0 member")
    func = _parse_func(args.func)
    tree = build_minimal_diagram(diagram, _strategy(args.strategy))
    if args.weight:
        verdict = weight_scheme(diagram).membership(func)
    else:
        chain = complete_chain(diagram, _hints(args), max(func.depth, 1))
        verdict = membership(func, chain, tree)
    if isinstance(verdict, K0Witness):
        if args.json:
            _emit_json(
                {
                    "depth": verdict.depth,
                    "member": True,
                    "witness": [str(x) for x in verdict.alpha],
                }
            )
        else:
            print(f"member: witness depth={verdict.depth}: {_fmt_vec(verdict.alpha)}")
        return 0
    if args.json:
        _emit_json({"depth": verdict.depth_checked, "member": False})
    else:
        print(f"NOT a member (checked exactly at depth {verdict.depth_checked})")
    return 1


def cmd_k0_positive(args):
    diagram = _need_diagram(args.input, "k0 positive")
    func = _parse_func(args.func)
    tree = build_minimal_diagram(diagram, _strategy(args.strategy))
    if args.weight:
        verdict = weight_scheme(diagram).positivity(func)
    else:
        depth = args.depth or max(func.depth, 1)
        chain = complete_chain(diagram, _hints(args), depth)
        verdict = positivity(func, chain, tree, bound=args.bound)
    if isinstance(verdict, Positive):
        if args.json:
            _emit_json(
                {
                    "level": verdict.level,
                    "positive": True,
                    "witness": [str(x) for x in verdict.witness],
                }
            )
        else:
            print(
                f"positive at level {verdict.level}: {_fmt_vec(verdict.witness)}"
            )
        return 0
    if isinstance(verdict, NotPositiveUpTo):
        if verdict.bound is None:
            msg = "not positive (definitive)"
        else:
            msg = f"no nonnegative pushforward up to level {verdict.bound}"
    else:
        msg = f"inconclusive after {verdict.checked} levels"
    if args.json:
        _emit_json({"positive": False, "detail": msg})
    else:
        print(msg)
    return 1


def _probe_theta(args, count):
    if args.perm:
        images = _parse_ints(args.perm, "--perm")
    elif args.swap:
        i, j = args.swap
        if not (1 <= i <= count and 1 <= j <= count):
            raise UsageError(f"--swap indices must lie in 1..{count}")
        images = list(range(1, count + 1))
        images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
        images = tuple(images)
    else:
        raise UsageError("k0 probe needs --swap I J or --perm LIST")
    if sorted(images) != list(range(1, count + 1)):
        raise UsageError(f"--perm must permute 1..{count}")
    return images


def cmd_k0_probe(args):
    diagram = _need_diagram(args.input, "k0 probe")
    depth = args.depth or 3
    if args.weight or args.column:
        if args.weight:
            realizer = weight_scheme(diagram)
            tree = realizer.tree
        else:
            realizer = complete_chain(diagram, _hints(args), depth)
            tree = build_minimal_diagram(diagram, _strategy(args.strategy))
    else:
        try:
            realizer = weight_scheme(diagram)
            # the scheme checks uniqueness lazily, so force it here
            realizer.weights(depth)
            tree = realizer.tree
        except NotUniqueMinimal:
            realizer = complete_chain(diagram, Auto(), depth)
            tree = build_minimal_diagram(diagram, _strategy(args.strategy))
    tree.ensure_depth(depth)
    theta = _probe_theta(args, tree.level_count(depth))
    verdict = automorphism_probe(theta, realizer, tree, depth, args.cap)
    if isinstance(verdict, Broken):
        if args.json:
            _emit_json(
                {
                    "broken": True,
                    "image": [str(x) for x in verdict.image.values],
                    "witness": [str(x) for x in verdict.witness.values],
                }
            )
        else:
            print("Broken:")
            print(f"  witness depth={verdict.witness.depth}: {_fmt_vec(verdict.witness.values)}")
            print(f"  image   depth={verdict.image.depth}: {_fmt_vec(verdict.image.values)}")
        return 1
    if args.json:
        _emit_json({"broken": False, "checked": verdict.checked})
    else:
        print(f"preserved across {verdict.checked} candidates")
    return 0


def cmd_corpus(args):
    entries = corpus_lib.entries()
    if args.name:
        entries = [e for e in entries if e.name == args.name]
        if not entries:
            raise UsageError(f"no corpus entry {args.name!r}")
    if args.list:
        for e in entries:
            print(f"{e.name}: {e.description} [{e.kind}]")
        return 0
    drift = 0
    rows = []
    for entry in entries:
        for field, tag, ok in corpus_lib.verify(entry):
            rows.append({"entry": entry.name, "field": field, "ok": ok, "tag": tag})
            if not ok:
                drift += 1
            if not args.json:
                mark = "ok   " if ok else "DRIFT"
                print(f"{mark} {entry.name:12s} {field:32s} [{tag}]")
    if args.json:
        _emit_json({"drift": drift, "records": rows})
    elif drift:
        print(f"{drift} record(s) drifted")
    else:
        print(f"all {len(rows)} records reproduced")
    return 1 if drift else 0


# ---------------------------------------------------------------------------
# wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="brattice",
        description="Exact-arithmetic toolkit for Bratteli diagrams.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def with_input(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="bdspec file, bare matrix file, or corpus:NAME")
        return p

    p = with_input("validate", "check diagram invariants")
    p.add_argument("--depth", type=int, help="levels to materialize")
    p.add_argument("--dot", metavar="FILE", help="write a DOT rendering")
    p.add_argument("--json", action="store_true")

    p = with_input("telescope", "recombine onto a subset of levels")
    p.add_argument("--levels", required=True, help="comma-separated, starting at 0")
    p.add_argument("--dot", metavar="FILE")

    p = with_input("dilate", "split tall steps into single-growth factors")
    p.add_argument("--level", type=int, help="dilate one matrix instead of normalizing")
    p.add_argument("--dot", metavar="FILE")

    p = with_input("reduce", "minimal reduction of a matrix or whole diagram")
    p.add_argument("--strategy", default="theorem")
    p.add_argument("--enumerate", type=int, metavar="N", help="list the first N valid maps")
    p.add_argument("--depth", type=int)
    p.add_argument("--dot", metavar="FILE")
    p.add_argument("--json", action="store_true")

    p = with_input("pathspace", "end census of the minimal sub-diagram boundary")
    p.add_argument("--strategy", default="theorem")
    p.add_argument("--census", action="store_true", help="print the full census record")
    p.add_argument("--compare", metavar="STRATEGY", help="census comparison verdict")
    p.add_argument("--depth", type=int)
    p.add_argument("--dot", metavar="FILE")
    p.add_argument("--json", action="store_true")

    k0 = sub.add_parser("k0", help="dimension group operations")
    k0sub = k0.add_subparsers(dest="action", required=True)

    def k0_parser(name, help_text):
        p = k0sub.add_parser(name, help=help_text)
        p.add_argument("input", help="bdspec file or corpus:NAME")
        p.add_argument("--depth", type=int)
        p.add_argument("--strategy", default="theorem")
        p.add_argument("--column", help="explicit level-0 completion column, e.g. '0,1'")
        p.add_argument("--weight", action="store_true", help="use the weight scheme")
        p.add_argument("--json", action="store_true")
        return p

    k0_parser("chain", "completed chain dump")
    p = k0_parser("phi", "realize a vector as a boundary function")
    p.add_argument("--alpha", required=True, help="vector, e.g. '1,2,3'")
    p = k0_parser("member", "exact membership test")
    p.add_argument("--func", required=True, help="'depth=N: v1 v2 ...'")
    p = k0_parser("positive", "positivity scan")
    p.add_argument("--func", required=True, help="'depth=N: v1 v2 ...'")
    p.add_argument("--bound", type=int, help="pushforward scan limit")
    p = k0_parser("probe", "vertex-relabeling automorphism probe")
    p.add_argument("--swap", type=int, nargs=2, metavar=("I", "J"))
    p.add_argument("--perm", help="full image list, e.g. '2,1,3'")
    p.add_argument("--cap", type=int, default=512, help="candidate budget")

    p = sub.add_parser("corpus", help="re-derive every frozen corpus record")
    p.add_argument("--name", help="run one entry")
    p.add_argument("--list", action="store_true", help="list entries instead")
    p.add_argument("--json", action="store_true")

    return parser


_DISPATCH = {
    "validate": cmd_validate,
    "telescope": cmd_telescope,
    "dilate": cmd_dilate,
    "reduce": cmd_reduce,
    "pathspace": cmd_pathspace,
    "corpus": cmd_corpus,
}

_K0_DISPATCH = {
    "chain": cmd_k0_chain,
    "phi": cmd_k0_phi,
    "member": cmd_k0_member,
    "positive": cmd_k0_positive,
    "probe": cmd_k0_probe,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "k0":
            return _K0_DISPATCH[args.action](args)
        return _DISPATCH[args.verb](args)
    except BdspecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BratticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
