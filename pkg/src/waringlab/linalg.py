"""Dense linear algebra over the scalar domains.

Exact matrices (Fraction / QuadExt entries) use fraction-free Bareiss
elimination for rank and determinant, and Gauss-Jordan for kernels and
solutions.  Matrices holding approximate entries are embedded into the
complex numbers and reduced with partial pivoting; an entry counts as zero
when it is below ``eps`` times the largest entry of the input.
"""

from __future__ import annotations

from fractions import Fraction

from .field import default_tolerance, embed, field_of


def _is_exact_matrix(m) -> bool:
    # entries from two different quadratic fields are treated as approximate
    return field_of(x for row in m for x in row) != "C"


def _copy(m, exact: bool):
    if exact:
        return [[Fraction(x) if isinstance(x, int) else x for x in row] for row in m]
    return [[embed(x) for x in row] for row in m]


def _scale(m) -> float:
    return max((abs(embed(x)) for row in m for x in row), default=0.0)


def bareiss(m):
    """Fraction-free forward elimination of an exact matrix.

    Returns ``(echelon, pivot_columns, sign)``; ``sign`` tracks row swaps.
    """
    a = _copy(m, True)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    prev = Fraction(1)
    r = 0
    sign = 1
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            sign = -sign
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) / prev
            row_i[c] = Fraction(0)
        # rows above the pivot row are left untouched, rows below are scaled
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots, sign


def rank(m, eps: float | None = None) -> int:
    if not m or not m[0]:
        return 0
    if _is_exact_matrix(m):
        return len(bareiss(m)[1])
    return len(rref(m, eps)[1])


def det(m, eps: float | None = None):
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if _is_exact_matrix(m):
        a, pivots, sign = bareiss(m)
        if len(pivots) < n:
            return Fraction(0)
        return sign * a[n - 1][n - 1]
    a = _copy(m, False)
    d = complex(1.0)
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(a[i][c]))
        if a[p][c] == 0:
            return 0j
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            for j in range(c, n):
                a[i][j] -= f * a[c][j]
    return d


def rref(m, eps: float | None = None):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    exact = _is_exact_matrix(m)
    a = _copy(m, exact)
    if not exact:
        if eps is None:
            eps = default_tolerance()
        thresh = eps * max(_scale(m), 1e-300)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        if exact:
            p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        else:
            p = max(range(r, nrows), key=lambda i: abs(a[i][c]))
            if abs(a[p][c]) <= thresh:
                p = None
        if p is None:
            if not exact:
                for i in range(r, nrows):
                    a[i][c] = 0j
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if (exact and f != 0) or (not exact and f != 0):
                    row_r = a[r]
                    a[i] = [x - f * y for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
    return a, pivots


def kernel(m, ncols: int | None = None, eps: float | None = None):
    """Basis of the right kernel, one vector per free column.

    Each vector has a 1 at its free column and 0 at every other free column,
    so the basis is in reduced form with respect to the column order.
    """
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(m[0])
    red, pivots = rref(m, eps)
    exact = _is_exact_matrix(m)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, pc in enumerate(pivots):
            v[pc] = -red[row][f]
        basis.append(v)
    return basis


def solve(a, b, eps: float | None = None):
    """One solution of ``a x = b`` (free variables set to zero) or ``None``."""
    nrows = len(a)
    if nrows == 0:
        return []
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, eps)
    if n in pivots:
        return None
    exact = _is_exact_matrix(aug)
    zero = Fraction(0) if exact else 0j
    x = [zero] * n
    for row, pc in enumerate(pivots):
        x[pc] = red[row][n]
    return x


def inverse(m, eps: float | None = None):
    n = len(m)
    exact = _is_exact_matrix(m)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, eps)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def matmul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
