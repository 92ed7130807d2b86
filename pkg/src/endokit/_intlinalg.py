"""Exact linear algebra over Z and Q used by the lattice layer.

Everything here works on plain lists/tuples of Python ints or Fractions;
matrices are row-major.  All algorithms are classical fraction-free or
Euclidean eliminations, adequate for the small dense matrices (rank <= ~20)
this package manipulates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

IntRow = tuple[int, ...]
IntRows = tuple[IntRow, ...]


def _as_int_rows(rows: Iterable[Sequence[int]]) -> list[list[int]]:
    out = []
    for r in rows:
        if type(r) is list and (not r or type(r[0]) is int):
            out.append(r[:])
        else:
            out.append([int(x) for x in r])
    return out


def hnf_with_transform(rows: Iterable[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns (h, u) with u unimodular and u @ rows == h, where h is in
    canonical form: pivots positive, entries above a pivot reduced into
    [0, pivot), zero rows at the bottom.
    """
    a = _as_int_rows(rows)
    m = len(a)
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(ncols):
        if row == m:
            break
        while True:
            nz = [i for i in range(row, m) if a[i][col] != 0]
            if len(nz) <= 1:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][col]), i))
            for i in nz:
                if i == i0:
                    continue
                q = a[i][col] // a[i0][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[i0])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[i0])]
        nz = [i for i in range(row, m) if a[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        if i0 != row:
            a[row], a[i0] = a[i0], a[row]
            u[row], u[i0] = u[i0], u[row]
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
            u[row] = [-x for x in u[row]]
        p = a[row][col]
        for i in range(row):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
    return a, u


def hnf_rows(rows: Iterable[Sequence[int]], ncols: int) -> IntRows:
    """Canonical HNF basis (nonzero rows only) of the span of ``rows``."""
    h, _ = hnf_with_transform(rows, ncols)
    return tuple(tuple(r) for r in h if any(r))


def left_kernel(rows: Iterable[Sequence[int]], ncols: int) -> IntRows:
    """Basis (canonical HNF) of {x : x @ rows == 0} over Z."""
    a = _as_int_rows(rows)
    m = len(a)
    h, u = hnf_with_transform(a, ncols)
    ker = [u[i] for i in range(m) if not any(h[i])]
    return hnf_rows(ker, m)


def snf_with_transforms(
    rows: Iterable[Sequence[int]], ncols: int
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms.

    Returns (d, u, v) with u, v unimodular, u @ rows @ v diagonal with
    diagonal d, d[0] | d[1] | ..., nonnegative, zeros trailing.
    """
    a = _as_int_rows(rows)
    m = len(a)
    n = ncols
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i: int, j: int, q: int) -> None:  # row_i -= q*row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i: int, j: int, q: int) -> None:  # col_i -= q*col_j
        for r in range(m):
            a[r][i] -= q * a[r][j]
        for r in range(n):
            v[r][i] -= q * v[r][j]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(m, n):
        # locate a pivot of minimal absolute value in the trailing block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t]:
                        swap_rows(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(j, t)
                        dirty = True
            if not dirty:
                break
        # enforce divisibility of the remaining block by the pivot
        p = a[t][t]
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, -1)  # add row `bad` to row t, restart this pivot
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = [a[i][i] for i in range(min(m, n))]
    return d, u, v


def invariant_factors(rows: Iterable[Sequence[int]], ncols: int) -> tuple[int, ...]:
    d, _, _ = snf_with_transforms(rows, ncols)
    return tuple(x for x in d if x != 0)


def solve_int(basis: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Integer coordinates of ``target`` in the HNF basis, or None.

    ``basis`` must consist of HNF rows (as produced by :func:`hnf_rows`).
    """
    v = [int(x) for x in target]
    n = len(v)
    coords = [0] * len(basis)
    for idx, row in enumerate(basis):
        piv = next((c for c in range(n) if row[c] != 0), None)
        if piv is None:
            continue
        if v[piv] % row[piv] != 0:
            return None
        q = v[piv] // row[piv]
        coords[idx] = q
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        return None
    return coords


def solve_rat(basis: Sequence[Sequence[int]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Rational coordinates of ``target`` in the HNF basis, or None."""
    v = [Fraction(x) for x in target]
    n = len(v)
    coords = [Fraction(0)] * len(basis)
    for idx, row in enumerate(basis):
        piv = next((c for c in range(n) if row[c] != 0), None)
        if piv is None:
            continue
        q = v[piv] / row[piv]
        coords[idx] = q
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        return None
    return coords


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (exact, via Fractions)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    assert det.denominator == 1
    return det.numerator


# ---------------------------------------------------------------------------
# rational matrices

FracRow = tuple[Fraction, ...]


def rref(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[FracRow, ...]:
    """Reduced row echelon form over Q; returns the nonzero rows."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    row = 0
    for col in range(ncols):
        if row == m:
            break
        piv = next((i for i in range(row, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for i in range(m):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        row += 1
    return tuple(tuple(r) for r in a if any(r))


def rat_solve(rows: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve sum_i x_i * rows[i] == target over Q, or None if inconsistent."""
    if not rows:
        return [] if not any(target) else None
    n = len(target)
    aug = [[Fraction(rows[i][c]) for i in range(len(rows))] + [Fraction(target[c])] for c in range(n)]
    red = [list(r) for r in rref(aug, len(rows) + 1)]
    sol = [Fraction(0)] * len(rows)
    for r in red:
        piv = next((c for c in range(len(rows) + 1) if r[c] != 0), None)
        if piv is None:
            continue
        if piv == len(rows):
            return None
        sol[piv] = r[len(rows)]
        for c in range(piv + 1, len(rows)):
            if r[c] != 0:
                # free variables are set to zero, so fold nothing in
                pass
    # verify (guards against underdetermined bookkeeping errors)
    for c in range(n):
        acc = sum((sol[i] * rows[i][c] for i in range(len(rows))), Fraction(0))
        if acc != target[c]:
            return None
    return sol


def rat_kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[FracRow, ...]:
    """Basis of {x : x @ rows == 0} over Q (rows indexed by x)."""
    m = len(rows)
    if m == 0:
        return ()
    # kernel of the transpose-multiplication: solve sum x_i rows[i] = 0
    aug = [[Fraction(rows[i][c]) for i in range(m)] for c in range(ncols)]
    red = rref(aug, m)
    pivots = []
    for r in red:
        piv = next(c for c in range(m) if r[c] != 0)
        pivots.append(piv)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m
        vec[f] = Fraction(1)
        for r, piv in zip(red, pivots):
            vec[piv] = -r[f]
        basis.append(tuple(vec))
    return tuple(basis)
