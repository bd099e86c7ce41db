"""End-to-end CLI behavior: verbs, exit codes, message shapes, file IO."""

import json

import pytest

from brattice import corpus
from brattice.cli import main
from brattice.diagram import parse_bdspec


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- validate ----------------------------------------------------------------


def test_validate_ok(capsys):
    code, out, err = run(capsys, "validate", "corpus:gicar")
    assert code == 0
    assert out.strip() == "valid"
    assert err == ""


def test_validate_zero_row_matrix(tmp_path, capsys):
    path = tmp_path / "mat.txt"
    path.write_text("1 1\n0 0\n")
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    assert "violation: row 2 is zero" in out


def test_validate_parse_error_carries_line(tmp_path, capsys):
    path = tmp_path / "bad.bd"
    path.write_text("bdspec v1\nshape: type2\nmatrix 0:\n1\nx\n")
    code, out, err = run(capsys, "validate", str(path))
    assert code == 2
    assert "parse error: line 5" in err


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "validate", "/no/such/file.bd")
    assert code == 2
    assert err.startswith("usage error:")


def test_unknown_verb_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


# --- telescope / dilate ------------------------------------------------------


def test_telescope_folds_levels(capsys):
    code, out, _ = run(capsys, "telescope", "corpus:gicar", "--levels", "0,2")
    assert code == 0
    folded = parse_bdspec(out)
    assert folded.matrix(0).to_lists() == [[1], [2], [1]]
    assert folded.max_matrix_index() == 0


def test_telescope_bad_levels(capsys):
    code, _, err = run(capsys, "telescope", "corpus:gicar", "--levels", "2,0")
    assert code == 1
    assert err.startswith("error:")


def test_dilate_single_level(capsys):
    code, out, _ = run(capsys, "dilate", "corpus:gicar", "--level", "1")
    assert code == 0
    assert out.splitlines()[0].startswith("row order:")
    assert "factor 1:" in out


def test_dilate_normalizes_bootstrap(capsys):
    code, out, _ = run(capsys, "dilate", "corpus:threeline")
    assert code == 0
    folded = parse_bdspec(out)
    assert folded.shape.kind == "type2"


# --- reduce ------------------------------------------------------------------


def test_reduce_forced_matrix(capsys):
    code, out, _ = run(capsys, "reduce", "corpus:forced")
    assert code == 0
    assert "parents:" in out
    assert "method:" in out


def test_reduce_rank_deficient_message(capsys):
    code, out, _ = run(capsys, "reduce", "corpus:fan43")
    assert code == 1
    assert out.strip() == "rank deficient; brute force found 0 reductions"


def test_reduce_enumerate_json(capsys):
    code, out, _ = run(
        capsys, "reduce", "corpus:threebranch", "--enumerate", "10", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload == {"count": 3, "maps": [[1, 2, 1], [2, 1, 1], [2, 2, 1]]}


def test_reduce_diagram_dumps_tree(capsys):
    code, out, _ = run(
        capsys, "reduce", "corpus:propersub", "--strategy", "theorem", "--depth", "3"
    )
    assert code == 0
    assert out.startswith("tree v1")
    assert "level 3:" in out


def test_reduce_tree_dot(tmp_path, capsys):
    dot = tmp_path / "tree.dot"
    code, out, _ = run(
        capsys,
        "reduce",
        "corpus:propersub",
        "--depth",
        "3",
        "--dot",
        str(dot),
    )
    assert code == 0
    assert f"wrote {dot}" in out
    assert "digraph" in dot.read_text()


# --- pathspace ---------------------------------------------------------------


def test_pathspace_census_line(capsys):
    code, out, _ = run(
        capsys, "pathspace", "corpus:gicar", "--strategy", "rightmost"
    )
    assert code == 0
    assert out.startswith("census[rightmost]:")
    assert "countably infinite ends" in out


def test_pathspace_compare_distinct(capsys):
    code, out, _ = run(
        capsys,
        "pathspace",
        "corpus:gicar",
        "--strategy",
        "rightmost",
        "--compare",
        "alternating",
    )
    assert code == 0
    assert "comparison[rightmost vs alternating]: distinct" in out


def test_pathspace_unknown_strategy(capsys):
    code, _, err = run(capsys, "pathspace", "corpus:gicar", "--strategy", "bogus")
    assert code == 2
    assert err.startswith("usage error:")


def test_pathspace_json_round(capsys):
    code, out1, _ = run(
        capsys, "pathspace", "corpus:gicar", "--strategy", "leftmost", "--json"
    )
    assert code == 0
    code, out2, _ = run(
        capsys, "pathspace", "corpus:gicar", "--strategy", "leftmost", "--json"
    )
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["kind"] == "countably-infinite"
    assert payload["certified"] is True


# --- k0 ----------------------------------------------------------------------


def test_k0_chain_dump(capsys):
    code, out, _ = run(capsys, "k0", "chain", "corpus:uhf2", "--depth", "3")
    assert code == 0
    assert out.startswith("chain v1")
    assert out.count("det=2") == 3


def test_k0_phi_frozen(capsys):
    code, out, _ = run(
        capsys,
        "k0",
        "phi",
        "corpus:gicar",
        "--alpha",
        "1,2,3",
        "--strategy",
        "rightmost",
    )
    assert code == 0
    assert out.strip() == "func depth=2: 3 -1 1"


def test_k0_member_witness(capsys):
    code, out, _ = run(
        capsys, "k0", "member", "corpus:gicar", "--func", "depth=0: 1"
    )
    assert code == 0
    assert out.strip() == "member: witness depth=0: 1"


def test_k0_member_rejection(capsys):
    code, out, _ = run(
        capsys,
        "k0",
        "member",
        "corpus:propersub",
        "--column",
        "0,1",
        "--func",
        "depth=1: 0 1/2",
    )
    assert code == 1
    assert out.strip() == "NOT a member (checked exactly at depth 1)"


def test_k0_positive_order_unit(capsys):
    code, out, _ = run(
        capsys, "k0", "positive", "corpus:gicar", "--func", "depth=0: 1"
    )
    assert code == 0
    assert out.startswith("positive at level 0:")


def test_k0_positive_definitive(capsys):
    code, out, _ = run(
        capsys,
        "k0",
        "positive",
        "corpus:dyadic",
        "--weight",
        "--func",
        "depth=2: 1 -1/4 0",
    )
    assert code == 1
    assert out.strip() == "not positive (definitive)"


def test_k0_probe_broken(capsys):
    code, out, _ = run(
        capsys, "k0", "probe", "corpus:dyadic", "--swap", "1", "2", "--depth", "3"
    )
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "Broken:"
    assert lines[1] == "  witness depth=3: 1/2 1/4 0 0"
    assert lines[2] == "  image   depth=3: 1/4 1/2 0 0"


def test_k0_probe_preserved(capsys):
    code, out, _ = run(
        capsys, "k0", "probe", "corpus:gicar", "--swap", "1", "2", "--depth", "3"
    )
    assert code == 0
    assert "preserved across" in out


def test_k0_probe_bad_perm(capsys):
    code, _, err = run(
        capsys, "k0", "probe", "corpus:gicar", "--perm", "1,1,2,3", "--depth", "3"
    )
    assert code == 2
    assert "usage error" in err


# --- corpus ------------------------------------------------------------------


def test_corpus_all_green(capsys):
    total = sum(len(e.records) for e in corpus.ENTRIES)
    code, out, _ = run(capsys, "corpus")
    assert code == 0
    assert f"all {total} records reproduced" in out
    assert "DRIFT" not in out


def test_corpus_list(capsys):
    code, out, _ = run(capsys, "corpus", "--list")
    assert code == 0
    assert any(line.startswith("gicar:") for line in out.splitlines())


def test_corpus_single_entry_json(capsys):
    code, out, _ = run(capsys, "corpus", "--name", "uhf6", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["drift"] == 0
    assert all(row["entry"] == "uhf6" for row in payload["records"])


def test_corpus_unknown_name(capsys):
    code, _, err = run(capsys, "corpus", "--name", "nope")
    assert code == 2
    assert "usage error" in err
