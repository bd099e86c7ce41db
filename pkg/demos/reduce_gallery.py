"""Walk the bundled matrices and show what minimal reduction does to each."""

from brattice import corpus
from brattice.errors import RankDeficient, Singular
from brattice.reduction import (
    enumerate_minimal_reductions,
    is_unique_minimal,
    minimal_reduce,
    minimal_reduce_square,
)


def show(name):
    mat = corpus.get(name).matrix()
    print(f"== {name} ({mat.nrows}x{mat.ncols})")
    for row in mat.rows:
        print("   ", " ".join(str(x) for x in row))
    try:
        if mat.nrows == mat.ncols:
            outcome = minimal_reduce_square(mat)
        else:
            outcome = minimal_reduce(mat)
    except (RankDeficient, Singular) as exc:
        found = enumerate_minimal_reductions(mat)
        print(f"    no reduction: {exc} (brute force agrees, {len(found)} maps)")
        print()
        return
    print(f"    parents {outcome.parents} via {outcome.method}", end="")
    if outcome.branch_col is not None:
        print(f", branch column {outcome.branch_col}", end="")
    print()
    maps = enumerate_minimal_reductions(mat)
    flag, j = is_unique_minimal(mat)
    print(f"    {len(maps)} valid map(s) total; unique-by-shape: {flag}")
    for parents in maps[:6]:
        marker = "<-" if parents == outcome.parents else "  "
        print(f"      {parents} {marker}")
    print()


for name in ("forced", "twocol", "threebranch", "squareswap", "fan43"):
    show(name)
