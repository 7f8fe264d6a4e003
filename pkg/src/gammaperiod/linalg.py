"""Small exact linear algebra kernels over Z and Q.

Everything here works on plain lists of Python ints / Fractions; sizes
are tiny (matrices of toric ray data), so clarity beats asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _content(vec):
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    return g


def primitive_vector(vec):
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = _content(vec)
    if g == 0:
        return tuple(vec)
    return tuple(x // g for x in vec)


def row_hnf_transform(rows):
    """Row Hermite form of an integer matrix with its transform.

    Returns (H, U) with U unimodular and U * rows == H; H is in row
    echelon form with positive pivots and reduced entries above them.
    """
    H = [list(r) for r in rows]
    n = len(H)
    m = len(H[0]) if n else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivot_row = 0
    for col in range(m):
        if pivot_row >= n:
            break
        # Euclidean elimination below pivot_row in this column.
        while True:
            nonzero = [i for i in range(pivot_row, n) if H[i][col] != 0]
            if not nonzero:
                break
            i_min = min(nonzero, key=lambda i: abs(H[i][col]))
            if i_min != pivot_row:
                H[pivot_row], H[i_min] = H[i_min], H[pivot_row]
                U[pivot_row], U[i_min] = U[i_min], U[pivot_row]
            others = [i for i in range(pivot_row + 1, n) if H[i][col] != 0]
            if not others:
                break
            p = H[pivot_row][col]
            for i in others:
                q = H[i][col] // p
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[pivot_row])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[pivot_row])]
        if H[pivot_row][col] != 0:
            if H[pivot_row][col] < 0:
                H[pivot_row] = [-a for a in H[pivot_row]]
                U[pivot_row] = [-a for a in U[pivot_row]]
            p = H[pivot_row][col]
            for i in range(pivot_row):
                q = H[i][col] // p
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[pivot_row])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[pivot_row])]
            pivot_row += 1
    return H, U


def hnf_basis(vectors):
    """Canonical (HNF) basis of the lattice spanned by integer vectors."""
    if not vectors:
        return []
    H, _ = row_hnf_transform(vectors)
    return [tuple(r) for r in H if any(r)]


def integer_kernel(rows):
    """Z-basis of the right kernel {x : rows @ x = 0} of an integer matrix.

    The basis spans the full (saturated) kernel lattice, so each basis
    vector is primitive.
    """
    rows = [list(r) for r in rows]
    if not rows:
        raise ValueError("empty matrix")
    n = len(rows[0])
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(n)]
    H, U = row_hnf_transform(transposed)
    kernel = [tuple(U[i]) for i in range(n) if not any(H[i])]
    return kernel


def det_int(matrix) -> int:
    """Determinant of a square integer matrix (fraction-free Gauss)."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    assert det.denominator == 1
    return det.numerator


def invert_unimodular(matrix):
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = []
    for i in range(n):
        row = a[i][n:]
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return out


def solve_rational(rows, rhs):
    """One rational solution of rows @ x = rhs, or None if inconsistent.

    Free variables are set to zero; the elimination order is fixed, so
    the returned solution is deterministic.
    """
    m = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = a[i][n]
    return x


def rational_rank(rows) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return a[:r], pivots
