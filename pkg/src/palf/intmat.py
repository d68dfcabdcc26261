"""Exact integer matrix routines: Smith normal form, kernels, cokernels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors d_1 | d_2 | ... of a ``rows`` x ``cols`` matrix.

    ``factors`` lists the diagonal of the normal form, including zeros up to
    min(rows, cols).
    """

    factors: tuple[int, ...]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.factors if d != 0)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d != 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)

    @property
    def free_rank(self) -> int:
        """Free rank of the cokernel Z^rows / image."""
        return self.rows - self.rank

    @property
    def cokernel(self) -> tuple[tuple[int, ...], int]:
        return self.torsion, self.free_rank

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def as_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    return [[int(v) for v in row] for row in m]


def smith_normal_form(m: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None) -> SnfResult:
    """Smith normal form by integer elimination.

    ``rows``/``cols`` give the shape when ``m`` has no rows or no columns.
    """
    a = as_matrix(m)
    r = len(a) if rows is None else rows
    c = (len(a[0]) if a else 0) if cols is None else cols
    if len(a) != r or any(len(row) != c for row in a):
        raise ValueError(f"matrix is not {r}x{c}")
    diag: list[int] = []
    t = 0
    while t < min(r, c):
        pivot = None
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, r):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, c):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # the pivot must divide every remaining entry
                bad = next(
                    ((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            best, pos = abs(p), (t, t)
            for i in range(t + 1, r):
                if a[i][t] and abs(a[i][t]) < best:
                    best, pos = abs(a[i][t]), (i, t)
            for j in range(t + 1, c):
                if a[t][j] and abs(a[t][j]) < best:
                    best, pos = abs(a[t][j]), (t, j)
            i, j = pos
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    diag.extend([0] * (min(r, c) - len(diag)))
    return SnfResult(tuple(diag), r, c)


def cokernel(m: Sequence[Sequence[int]], rows: int) -> tuple[tuple[int, ...], int]:
    """Torsion factors and free rank of Z^rows / (column span of m)."""
    a = as_matrix(m)
    cols = len(a[0]) if a else 0
    return smith_normal_form(a, rows, cols).cokernel


def integer_kernel(m: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Basis (as rows) of the integer kernel {x : m x = 0} in Z^cols."""
    a = as_matrix(m)
    rows = len(a)
    # column operations on a, tracked on an identity matrix
    u = [[int(i == j) for j in range(cols)] for i in range(cols)]  # columns of u
    cur = 0
    for i in range(rows):
        while True:
            nz = [j for j in range(cur, cols) if a[i][j]]
            if not nz:
                break
            j = min(nz, key=lambda k: abs(a[i][k]))
            _swap_cols(a, cur, j)
            _swap_cols(u, cur, j)
            rest = [k for k in range(cur + 1, cols) if a[i][k]]
            if not rest:
                cur += 1
                break
            for k in rest:
                q = a[i][k] // a[i][cur]
                _sub_col(a, k, cur, q)
                _sub_col(u, k, cur, q)
        if cur == cols:
            break
    return [[u[r][j] for r in range(cols)] for j in range(cur, cols)]


def _swap_cols(a: Matrix, i: int, j: int) -> None:
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]


def _sub_col(a: Matrix, k: int, j: int, q: int) -> None:
    if q:
        for row in a:
            row[k] -= q * row[j]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]
