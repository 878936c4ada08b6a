"""Pure-Python row reduction over GF(2); rows are int bitsets (bit j = column j)."""

from __future__ import annotations


def rref_rows(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of ``rows`` restricted to pivots in ``[0, ncols)``.

    Pivot choice is lowest column first, then lowest row.  Bits at positions
    ``>= ncols`` are carried along but never pivoted on.
    """
    work = list(rows)
    nrows = len(work)
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        mask = 1 << col
        piv = -1
        for r in range(rank, nrows):
            if work[r] & mask:
                piv = r
                break
        if piv < 0:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        for r in range(nrows):
            if r != rank and work[r] & mask:
                work[r] ^= prow
        pivots.append(col)
        rank += 1
    return work, pivots
