"""
Integer and rational matrix helpers.

Rows are plain lists. Integer routines (Hermite and Smith forms) work on
`int` entries; the elimination routines at the bottom accept any exact
field type supporting the arithmetic operators, which covers both
`fractions.Fraction` and :class:`hermgenus.field.FieldElement`.
"""
from fractions import Fraction
import math
import typing as t


__all__ = (
    "IntMatrix",
    "hnf",
    "hnf_with_transform",
    "solve_integer_combination",
    "snf_with_transform",
    "rational_hnf",
    "z_dual",
    "determinant",
    "inverse",
    "mat_mul",
    "transpose",
    "identity",
    "common_denominator",
)


IntMatrix = t.List[t.List[int]]
Row = t.List[t.Any]


def _xgcd(a: int, b: int) -> t.Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(rows: t.Sequence[Row]) -> t.List[Row]:
    return [list(col) for col in zip(*rows)]


def mat_mul(a: t.Sequence[Row], b: t.Sequence[Row]) -> t.List[Row]:
    cols = transpose(b)
    return [
        [sum((x * y for x, y in zip(row, col)), 0 * row[0]) for col in cols]
        for row in a
    ]


def common_denominator(values: t.Iterable[Fraction]) -> int:
    den = 1
    for value in values:
        den = den * value.denominator // math.gcd(den, value.denominator)
    return den


def hnf_with_transform(
    rows: t.Sequence[t.Sequence[int]],
) -> t.Tuple[IntMatrix, IntMatrix]:
    """
    Row Hermite normal form with its unimodular transform.

    Returns ``(H, U)`` with ``U * A = H``. Nonzero rows of ``H`` come first,
    each pivot is positive and strictly to the right of the previous one,
    and entries above a pivot are reduced into ``[0, pivot)``.
    """
    h = [list(map(int, row)) for row in rows]
    m = len(h)
    n = len(h[0]) if h else 0
    u = identity(m)
    pivot_row = 0
    for col in range(n):
        if pivot_row == m:
            break
        for k in range(pivot_row + 1, m):
            if h[k][col] == 0:
                continue
            a, b = h[pivot_row][col], h[k][col]
            g, x, y = _xgcd(a, b)
            if a == 0:
                g, x, y = abs(b), 0, (1 if b > 0 else -1)
            p, q = a // g, b // g
            h[pivot_row], h[k] = (
                [x * s + y * r for s, r in zip(h[pivot_row], h[k])],
                [-q * s + p * r for s, r in zip(h[pivot_row], h[k])],
            )
            u[pivot_row], u[k] = (
                [x * s + y * r for s, r in zip(u[pivot_row], u[k])],
                [-q * s + p * r for s, r in zip(u[pivot_row], u[k])],
            )
        pivot = h[pivot_row][col]
        if pivot == 0:
            continue
        if pivot < 0:
            h[pivot_row] = [-v for v in h[pivot_row]]
            u[pivot_row] = [-v for v in u[pivot_row]]
            pivot = -pivot
        for k in range(pivot_row):
            f = h[k][col] // pivot
            if f:
                h[k] = [s - f * r for s, r in zip(h[k], h[pivot_row])]
                u[k] = [s - f * r for s, r in zip(u[k], u[pivot_row])]
        pivot_row += 1
    return h, u


def hnf(rows: t.Sequence[t.Sequence[int]]) -> IntMatrix:
    """Nonzero rows of the row Hermite normal form."""
    h, _ = hnf_with_transform(rows)
    return [row for row in h if any(row)]


def solve_integer_combination(
    vectors: t.Sequence[t.Sequence[int]],
    target: t.Sequence[int],
) -> t.Optional[t.List[int]]:
    """
    Integer coefficients ``x`` with ``sum(x[i] * vectors[i]) == target``,
    or ``None`` when target is not in the Z-span.
    """
    h, u = hnf_with_transform(vectors)
    rest = list(map(int, target))
    coeffs = [0] * len(h)
    for k, row in enumerate(h):
        lead = next((c for c, v in enumerate(row) if v), None)
        if lead is None:
            break
        q, r = divmod(rest[lead], row[lead])
        if r:
            return None
        coeffs[k] = q
        rest = [a - q * b for a, b in zip(rest, row)]
    if any(rest):
        return None
    return [
        sum(c * u[k][i] for k, c in enumerate(coeffs))
        for i in range(len(vectors))
    ]


def snf_with_transform(
    rows: t.Sequence[t.Sequence[int]],
) -> t.Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form ``D = U * A * V`` with unimodular ``U`` and ``V``.

    Diagonal entries are nonnegative and each divides the next.
    """
    a = [list(map(int, row)) for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    u = identity(m)
    v = identity(n)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, f: int) -> None:
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for k in range(min(m, n)):
        while True:
            entries = [
                (abs(a[i][j]), i, j)
                for i in range(k, m) for j in range(k, n) if a[i][j]
            ]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(k, i)
            swap_cols(k, j)
            done = True
            for i in range(k + 1, m):
                if a[i][k]:
                    add_row(i, k, -(a[i][k] // a[k][k]))
                    if a[i][k]:
                        done = False
            for j in range(k + 1, n):
                if a[k][j]:
                    add_col(j, k, -(a[k][j] // a[k][k]))
                    if a[k][j]:
                        done = False
            if not done:
                continue
            bad = next(
                (i for i in range(k + 1, m)
                 for j in range(k + 1, n) if a[i][j] % a[k][k]),
                None,
            )
            if bad is None:
                break
            add_row(k, bad, 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
    return a, u, v


def rational_hnf(rows: t.Sequence[t.Sequence[Fraction]]) -> t.Tuple[int, IntMatrix]:
    """
    Canonical ``(den, H)`` of the Z-module spanned by rational rows:
    ``den`` is the least positive integer with ``den * M`` integral and
    ``H`` the Hermite form of ``den * M``.
    """
    den = common_denominator(Fraction(x) for row in rows for x in row)
    scaled = [[int(Fraction(x) * den) for x in row] for row in rows]
    return den, hnf(scaled)


def determinant(rows: t.Sequence[Row]) -> t.Any:
    n = len(rows)
    a = [list(row) for row in rows]
    zero = a[0][0] - a[0][0]
    result = zero + 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result = result * a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return result


def inverse(rows: t.Sequence[Row]) -> t.List[Row]:
    n = len(rows)
    zero = rows[0][0] - rows[0][0]
    one = zero + 1
    a = [
        list(row) + [one if i == j else zero for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("Matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def z_dual(rows: t.Sequence[t.Sequence[Fraction]]) -> t.List[t.List[Fraction]]:
    """Basis of {x : <b, x> in Z for all rows b} for a full-rank basis."""
    return transpose(inverse([[Fraction(x) for x in row] for row in rows]))
