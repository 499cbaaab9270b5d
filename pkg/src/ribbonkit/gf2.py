"""GF(2) rank with rows packed into Python integers."""

from __future__ import annotations


def rank(rows) -> int:
    """Rank over GF(2) of rows given as int bitmasks (bit k = column k)."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            pivot = pivots.get(top)
            if pivot is None:
                pivots[top] = row
                break
            row ^= pivot
    return len(pivots)


def pack_rows(n_rows, entries) -> list[int]:
    """Build bitmask rows from (row, column) pairs; repeated pairs cancel mod 2."""
    rows = [0] * n_rows
    for r, c in entries:
        rows[r] ^= 1 << c
    return rows
