"""Exact matrices and ranks over Q or a prime field F_q.

Entries may be int or Fraction; in characteristic q they are reduced mod q
first (denominators are inverted mod q). Shapes are explicit because graded
pieces are frequently zero-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def reduce_scalar(c, char: int = 0):
    if char == 0:
        return Fraction(c)
    c = Fraction(c)
    if c.denominator % char == 0:
        raise ZeroDivisionError(f"denominator of {c} vanishes mod {char}")
    return c.numerator * pow(c.denominator, -1, char) % char


@dataclass
class Matrix:
    nrows: int
    ncols: int
    rows: list

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        mat = cls.zeros(n, n)
        for i in range(n):
            mat.rows[i][i] = 1
        return mat

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = Matrix.zeros(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            for k, a in enumerate(row):
                if a:
                    brow = other.rows[k]
                    orow = out.rows[i]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> "Matrix":
        return Matrix(
            self.ncols, self.nrows,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def reduced(self, char: int = 0) -> "Matrix":
        return Matrix(self.nrows, self.ncols,
                      [[reduce_scalar(c, char) for c in r] for r in self.rows])

    def equals(self, other: "Matrix", char: int = 0) -> bool:
        return self.shape == other.shape and self.reduced(char).rows == other.reduced(char).rows

    def is_permutation(self) -> bool:
        if self.nrows != self.ncols:
            return False
        cols = set()
        for r in self.rows:
            nz = [j for j, c in enumerate(r) if c != 0]
            if len(nz) != 1 or r[nz[0]] != 1:
                return False
            cols.add(nz[0])
        return len(cols) == self.ncols

    def rank(self, char: int = 0) -> int:
        return rank(self, char)


def rank(matrix: Matrix, char: int = 0) -> int:
    """Rank by Gaussian elimination, exact in either characteristic."""
    rows = [r for r in matrix.reduced(char).rows if any(r)]
    if not rows:
        return 0
    r = 0
    for col in range(matrix.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        inv = pow(p[col], -1, char) if char else 1 / p[col]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                f = f * inv
                if char:
                    rows[i] = [(a - f * b) % char for a, b in zip(rows[i], p)]
                else:
                    rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        r += 1
        if r == len(rows):
            break
    return r
