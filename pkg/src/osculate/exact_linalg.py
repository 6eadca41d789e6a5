"""Exact integer linear algebra.

Everything here works on Python integers, so there is no overflow and no
rounding. Matrices are small (tens of rows), so simple cubic algorithms are
fast enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntegerMatrix",
    "rank",
    "kernel_basis",
    "row_hnf",
    "smith_diagonal",
    "lattice_index",
    "saturate",
    "solve_rational",
    "det",
]


class IntegerMatrix:
    """Immutable integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data: Iterable[Sequence[int]] | None = None, *, shape=None):
        if data is None:
            r, c = shape
            entries = (0,) * (r * c)
        else:
            rows = [tuple(int(x) for x in row) for row in data]
            if shape is not None:
                r, c = shape
            else:
                r = len(rows)
                c = len(rows[0]) if rows else 0
            if any(len(row) != c for row in rows):
                raise ValueError("ragged matrix")
            if len(rows) != r:
                raise ValueError("row count does not match shape")
            entries = tuple(x for row in rows for x in row)
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "cols", c)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntegerMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], shape=(n, n))

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntegerMatrix":
        return cls(shape=(r, c))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None):
        columns = [tuple(col) for col in columns]
        if not columns:
            return cls(shape=(nrows or 0, 0))
        r = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(r)], shape=(r, len(columns)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def T(self) -> "IntegerMatrix":
        if self.rows == 0:
            return IntegerMatrix(shape=(self.cols, 0))
        return IntegerMatrix([self.column(j) for j in range(self.cols)], shape=(self.cols, self.rows))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntegerMatrix(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in ocols] for i in range(self.rows)],
            shape=(self.rows, other.cols),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegerMatrix) and self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, self.entries))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.tolist()!r})"

    def is_zero(self) -> bool:
        return not any(self.entries)

    def hstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return IntegerMatrix([self.row(i) + other.row(i) for i in range(self.rows)], shape=(self.rows, self.cols + other.cols))

    def vstack(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return IntegerMatrix(self.tolist() + other.tolist(), shape=(self.rows + other.rows, self.cols))

    def select_rows(self, idx: Iterable[int]) -> "IntegerMatrix":
        idx = list(idx)
        return IntegerMatrix([self.row(i) for i in idx], shape=(len(idx), self.cols))

    def select_columns(self, idx: Iterable[int]) -> "IntegerMatrix":
        idx = list(idx)
        return IntegerMatrix([[self.row(i)[j] for j in idx] for i in range(self.rows)], shape=(self.rows, len(idx)))


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntegerMatrix):
        return M.tolist()
    return [[int(x) for x in row] for row in M]


def rank(M) -> int:
    """Rank by fraction-free (Bareiss) elimination."""
    a = _as_rows(M)
    if not a or not a[0]:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nr):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, nc):
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        prev = p
        r += 1
        if r == nr:
            break
    return r


def det(M) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    a = _as_rows(M)
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        for i in range(c + 1, n):
            f = a[i][c]
            for j in range(c + 1, n):
                a[i][j] = (p * a[i][j] - f * a[c][j]) // prev
            a[i][c] = 0
        prev = p
    return sign * a[n - 1][n - 1]


def row_hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form; zero rows dropped.

    Pivots are positive and entries above each pivot are reduced into
    [0, pivot).
    """
    a = [[int(x) for x in r] for r in rows]
    if not a:
        return []
    nc = len(a[0])
    r = 0
    for c in range(nc):
        # gcd-combine column c among rows r.. into row r
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            p = a[r][c]
            for i in range(r):
                q = a[i][c] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    return [row for row in a[:r] if any(row)]


def kernel_basis(M) -> IntegerMatrix:
    """Saturated integer basis of {x : M x = 0}, as the columns of the result.

    The basis is canonical: its transpose is in row Hermite normal form.
    """
    Mm = M if isinstance(M, IntegerMatrix) else IntegerMatrix(M)
    n = Mm.cols
    # row-reduce [M^T | I]; rows whose M^T-part vanishes span the kernel lattice
    aug = [list(Mm.column(j)) + [int(i == j) for i in range(n)] for j in range(n)]
    m = Mm.rows
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, n) if aug[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(aug[i][c]))
            aug[r], aug[i0] = aug[i0], aug[r]
            done = True
            for i in range(r + 1, n):
                if aug[i][c]:
                    q = aug[i][c] // aug[r][c]
                    aug[i] = [x - q * y for x, y in zip(aug[i], aug[r])]
                    if aug[i][c]:
                        done = False
            if done:
                break
        if r < n and aug[r][c]:
            r += 1
    kern = [row[m:] for row in aug[r:]]
    kern = row_hnf(kern)
    if not kern:
        return IntegerMatrix(shape=(n, 0))
    return IntegerMatrix.from_columns(kern)


def smith_diagonal(M) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = _as_rows(M)
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(nr, nc):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        while True:
            changed = False
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        changed = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        changed = True
            if not changed:
                # enforce divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc)
                  if a[i][j] and (i == t or j == t)]
            _, i0, j0 = min(nz)
            a[t], a[i0] = a[i0], a[t]
            for row in a:
                row[t], row[j0] = row[j0], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def saturate(gens) -> list[list[int]]:
    """Z-basis (rows, in HNF) of span_Q(gens) ∩ Z^n, for generator rows."""
    rows = _as_rows(gens)
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    n = len(rows[0])
    perp = kernel_basis(IntegerMatrix(rows, shape=(len(rows), n)))
    if perp.cols == 0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    back = kernel_basis(perp.T)
    return [list(c) for c in back.columns()]


def lattice_index(ambient_span, image_span) -> int:
    """[span(ambient) ∩ Z^n : Z-span(image)], generators given as rows.

    The two spans must agree over Q.
    """
    amb = [r for r in _as_rows(ambient_span) if any(r)]
    img = [r for r in _as_rows(image_span) if any(r)]
    ra, ri = rank(amb), rank(img)
    if ra != ri or (img and rank(amb + img) != ra):
        raise ValueError("image span differs from ambient span")
    if not img:
        return 1
    out = 1
    for d in smith_diagonal(img):
        out *= d
    return out


def solve_rational(M, b: Sequence) -> list[Fraction] | None:
    """Unique solution of the square system M x = b over Q, or None if singular."""
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(_as_rows(M), b)]
    n = len(a)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        rowc = [x / p for x in a[c]]
        a[c] = rowc
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], rowc)]
    return [a[i][n] for i in range(n)]
