# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Word-level GF(2) row reduction on a C-contiguous uint64 matrix."""

from libc.stdint cimport uint64_t


def rref_words(uint64_t[:, ::1] M, Py_ssize_t ncols):
    """Reduce ``M`` in place; return the list of pivot columns.

    Column ``c`` lives in word ``c >> 6``, bit ``c & 63``.  Same pivot rule as
    the pure-Python path: lowest column, then lowest row.
    """
    cdef Py_ssize_t nrows = M.shape[0]
    cdef Py_ssize_t nwords = M.shape[1]
    cdef Py_ssize_t rank = 0, c, r, w, piv, word
    cdef uint64_t mask, tmp
    pivots = []
    for c in range(ncols):
        if rank == nrows:
            break
        word = c >> 6
        mask = (<uint64_t>1) << (c & 63)
        piv = -1
        for r in range(rank, nrows):
            if M[r, word] & mask:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for w in range(nwords):
                tmp = M[piv, w]
                M[piv, w] = M[rank, w]
                M[rank, w] = tmp
        # the pivot row is zero left of `word`
        for r in range(nrows):
            if r != rank and (M[r, word] & mask):
                for w in range(word, nwords):
                    M[r, w] ^= M[rank, w]
        pivots.append(c)
        rank += 1
    return pivots
