"""Exact matrix arithmetic over the rationals.

Everything here works on plain sequences of sequences whose entries are
ints or fractions.Fraction; results come back as lists of lists (or lists)
of Fractions, except where an integer answer is guaranteed.  No floats
anywhere.  Pivoting is deterministic: the first nonzero candidate wins, so
repeated runs agree bit for bit.
"""

from fractions import Fraction

from .errors import Singular

Matrix = list  # list of rows; row = list of Fraction/int
Vector = list


def dims(m):
    """Return (rows, cols) and check the matrix is rectangular."""
    r = len(m)
    if r == 0:
        raise ValueError("empty matrix")
    c = len(m[0])
    for row in m:
        if len(row) != c:
            raise ValueError("ragged matrix")
    return r, c


def copy_frac(m):
    return [[Fraction(x) for x in row] for row in m]


def identity(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(m):
    r, c = dims(m)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def mat_mul(a, b):
    ra, ca = dims(a)
    rb, cb = dims(b)
    if ca != rb:
        raise ValueError(f"shape mismatch: {ra}x{ca} times {rb}x{cb}")
    out = zeros(ra, cb)
    for i in range(ra):
        arow = a[i]
        orow = out[i]
        for k in range(ca):
            aik = arow[k]
            if aik == 0:
                continue
            brow = b[k]
            for j in range(cb):
                orow[j] += aik * brow[j]
    return out


def mat_vec(a, v):
    r, c = dims(a)
    if len(v) != c:
        raise ValueError(f"shape mismatch: {r}x{c} times vector of length {len(v)}")
    return [sum((a[i][j] * v[j] for j in range(c)), Fraction(0)) for i in range(r)]


def mat_eq(a, b):
    ra, ca = dims(a)
    rb, cb = dims(b)
    return ra == rb and ca == cb and all(
        Fraction(a[i][j]) == Fraction(b[i][j]) for i in range(ra) for j in range(ca)
    )


def rank(m):
    """Row-reduce a copy and count pivots."""
    work = copy_frac(m)
    r, c = dims(work)
    piv = 0
    for col in range(c):
        row = next((i for i in range(piv, r) if work[i][col] != 0), None)
        if row is None:
            continue
        work[piv], work[row] = work[row], work[piv]
        lead = work[piv][col]
        for i in range(piv + 1, r):
            f = work[i][col] / lead
            if f == 0:
                continue
            for j in range(col, c):
                work[i][j] -= f * work[piv][j]
        piv += 1
        if piv == r:
            break
    return piv


def det(m):
    """Signed determinant as a Fraction."""
    work = copy_frac(m)
    r, c = dims(work)
    if r != c:
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    d = Fraction(1)
    for col in range(c):
        row = next((i for i in range(col, r) if work[i][col] != 0), None)
        if row is None:
            return Fraction(0)
        if row != col:
            work[col], work[row] = work[row], work[col]
            sign = -sign
        lead = work[col][col]
        d *= lead
        for i in range(col + 1, r):
            f = work[i][col] / lead
            if f == 0:
                continue
            for j in range(col, c):
                work[i][j] -= f * work[col][j]
    return sign * d


def inverse(m):
    """Gauss-Jordan inverse; raises Singular when there is none."""
    work = copy_frac(m)
    r, c = dims(work)
    if r != c:
        raise ValueError("inverse of a non-square matrix")
    aug = [work[i] + identity(r)[i] for i in range(r)]
    for col in range(r):
        row = next((i for i in range(col, r) if aug[i][col] != 0), None)
        if row is None:
            raise Singular("matrix is singular")
        aug[col], aug[row] = aug[row], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for i in range(r):
            if i == col:
                continue
            f = aug[i][col]
            if f == 0:
                continue
            aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[r:] for row in aug]


def solve(a, b):
    """Solve a square nonsingular system a·x = b exactly."""
    inv = inverse(a)
    return mat_vec(inv, b)


def adjugate(m):
    """Transposed cofactor matrix, by minors (exact, any square input)."""
    r, c = dims(m)
    if r != c:
        raise ValueError("adjugate of a non-square matrix")
    if r == 1:
        return [[Fraction(1)]]
    out = zeros(r, r)
    for i in range(r):
        for j in range(r):
            minor = [
                [m[p][q] for q in range(r) if q != j]
                for p in range(r) if p != i
            ]
            out[j][i] = (-1) ** (i + j) * det(minor)
    return out


def is_integral(m):
    return all(Fraction(x).denominator == 1 for row in m for x in row)


def vec_is_integral(v):
    return all(Fraction(x).denominator == 1 for x in v)


def scale(m, s):
    s = Fraction(s)
    return [[s * x for x in row] for row in m]


def frac_str(x):
    """Render a Fraction compactly: integers without the /1 tail."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(tok):
    return Fraction(tok)
