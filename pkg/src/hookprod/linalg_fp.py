"""Sparse column matrices over a prime field and their left-to-right reduction.

The reduction kernel comes from the compiled extension ``_reduce_ext`` when
it is importable, and from ``_reduce_py`` otherwise.  Setting the
environment variable ``HOOKPROD_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from . import _reduce_py

if os.environ.get("HOOKPROD_PURE_PYTHON", "") not in ("", "0"):
    _kernel = _reduce_py.reduce_columns
    BACKEND = "python"
else:
    try:
        from ._reduce_ext import reduce_columns as _kernel
        BACKEND = "compiled"
    except ImportError:  # extension not built
        _kernel = _reduce_py.reduce_columns
        BACKEND = "python"

DEFAULT_PRIME = 2


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _normalize_column(col, p: int) -> tuple:
    out = []
    last = -1
    for r, c in col:
        c %= p
        if r <= last:
            raise ValueError("row indices must be strictly increasing")
        last = r
        if c:
            out.append((int(r), int(c)))
    return tuple(out)


@dataclass(frozen=True)
class FpMatrix:
    """Columns are sorted tuples of ``(row, coefficient)`` with nonzero coefficients."""

    columns: tuple
    nrows: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        cols = tuple(_normalize_column(c, self.p) for c in self.columns)
        for c in cols:
            if c and (c[0][0] < 0 or c[-1][0] >= self.nrows):
                raise ValueError("row index out of range")
        object.__setattr__(self, "columns", cols)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @classmethod
    def from_dense(cls, rows, p: int = DEFAULT_PRIME) -> "FpMatrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [[(i, rows[i][j]) for i in range(nrows) if rows[i][j] % p] for j in range(ncols)]
        return cls(tuple(cols), nrows, p)

    def to_dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for r, c in col:
                out[r][j] = c
        return out


def reduce_with(kernel, matrix: FpMatrix):
    reduced, lows = kernel(matrix.columns, matrix.nrows, matrix.p)
    pivots: dict[int, Optional[int]] = {j: (lo if lo >= 0 else None) for j, lo in enumerate(lows)}
    return FpMatrix(tuple(tuple(c) for c in reduced), matrix.nrows, matrix.p), pivots


def reduce(matrix: FpMatrix):
    """Standard persistence reduction: ``(reduced, pivots)``.

    ``pivots`` maps every column index to its lowest nonzero row after
    reduction, or ``None`` for columns that vanished.
    """
    return reduce_with(_kernel, matrix)


def lows(columns, nrows: int, p: int) -> list:
    """Pivot rows only, skipping the FpMatrix wrapper (hot path)."""
    return _kernel(columns, nrows, p)[1]


def rank(matrix: FpMatrix) -> int:
    _, pivots = reduce(matrix)
    return sum(1 for v in pivots.values() if v is not None)
