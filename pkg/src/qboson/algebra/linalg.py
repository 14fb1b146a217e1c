"""Exact linear algebra over Q(q^(1/D)) on top of sympy's DomainMatrix."""

from __future__ import annotations

from math import lcm
from typing import Any

from sympy.polys.matrices import DomainMatrix

from qboson.algebra.scalars import DOMAIN, QRat
from qboson.errors import DivisionByZeroError

Matrix = list[list[QRat]]


def _root(rows: Matrix) -> int:
    return lcm(1, *(x.denominator_root for row in rows for x in row))


def _to_domain(rows: Matrix, ncols: int) -> tuple[DomainMatrix, int]:
    d = _root(rows)
    data = [[x.raw(d) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), DOMAIN), d


def _from_domain(matrix: DomainMatrix, d: int) -> Matrix:
    return [[QRat(_as_field(x), d) for x in row] for row in matrix.to_list()]


def _as_field(x: Any) -> Any:
    return DOMAIN.convert(x)


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[QRat.zero()] * ncols for _ in range(nrows)]


def identity(n: int) -> Matrix:
    return [[QRat.one() if i == j else QRat.zero() for j in range(n)] for i in range(n)]


def transpose(rows: Matrix, ncols: int | None = None) -> Matrix:
    ncols = len(rows[0]) if rows else (ncols or 0)
    return [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]


def matmul(left: Matrix, right: Matrix, inner: int | None = None) -> Matrix:
    """left (m x k) times right (k x n)."""
    k = len(right) if inner is None else inner
    n = len(right[0]) if right else 0
    result = zeros(len(left), n)
    for i, row in enumerate(left):
        for t in range(k):
            a = row[t]
            if not a:
                continue
            for j in range(n):
                b = right[t][j]
                if b:
                    result[i][j] = result[i][j] + a * b
    return result


def mat_vec(rows: Matrix, vector: list[QRat]) -> list[QRat]:
    result = []
    for row in rows:
        total = QRat.zero()
        for a, b in zip(row, vector, strict=True):
            if a and b:
                total = total + a * b
        result.append(total)
    return result


def rref(rows: Matrix, ncols: int) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    if not rows or ncols == 0:
        return [list(r) for r in rows], ()
    matrix, d = _to_domain(rows, ncols)
    reduced, pivots = matrix.rref()
    return _from_domain(reduced, d), tuple(pivots)


def rank(rows: Matrix, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Matrix, ncols: int) -> Matrix:
    """Basis vectors (as lists) of {v : rows * v = 0}."""
    if ncols == 0:
        return []
    if not rows:
        return identity(ncols)
    matrix, d = _to_domain(rows, ncols)
    kernel = matrix.nullspace()
    if kernel.shape[0] == 0:
        return []
    return _from_domain(kernel, d)


def inverse(rows: Matrix) -> Matrix:
    """Inverse of a square matrix.

    Raises:
        DivisionByZeroError: if the matrix is singular
    """
    n = len(rows)
    if n == 0:
        return []
    matrix, d = _to_domain(rows, n)
    if len(matrix.rref()[1]) < n:
        raise DivisionByZeroError(f"singular {n}x{n} matrix")
    return _from_domain(matrix.inv(), d)


def select(rows: Matrix, row_indices: tuple[int, ...], col_indices: tuple[int, ...]) -> Matrix:
    return [[rows[i][j] for j in col_indices] for i in row_indices]
