"""Exact rank of sparse coefficient matrices."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .polyring import FieldSpec


def rank(rows: list[dict[int, object]], ncols: int, field: FieldSpec) -> int:
    """Rank of the matrix whose rows are given as ``{column: coefficient}``."""
    if not rows or ncols == 0:
        return 0
    p = field.modulus
    if p is not None and p < (1 << 31):
        return _rank_mod_p(rows, ncols, p)
    return _rank_sparse(rows, field)


def _rank_mod_p(rows, ncols, p) -> int:
    M = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, c in row.items():
            M[i, j] = c % p
    if M.shape[0] > M.shape[1]:
        M = np.ascontiguousarray(M.T)
    r = 0
    nrows, ncols = M.shape
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(M[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, col]), -1, p)
        M[r] = M[r] * inv % p
        below = M[r + 1:, col]
        idx = np.nonzero(below)[0]
        if idx.size:
            rows_ = r + 1 + idx
            M[rows_] = (M[rows_] - np.outer(M[rows_, col], M[r])) % p
        r += 1
    return r


def _rank_sparse(rows, field: FieldSpec) -> int:
    p = field.modulus
    pivots: dict[int, dict[int, object]] = {}
    for row in rows:
        row = {j: (Fraction(c) if p is None else c % p) for j, c in row.items() if c}
        while row:
            lead = min(row)
            if lead not in pivots:
                inv = field.inv(row[lead])
                pivots[lead] = {j: (c * inv if p is None else c * inv % p) for j, c in row.items()}
                break
            c = row[lead]
            for j, v in pivots[lead].items():
                nv = row.get(j, 0) - c * v
                if p is not None:
                    nv %= p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
    return len(pivots)
