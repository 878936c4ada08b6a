"""Mod-2 combinatorics, permutations and dense GF(2) linear algebra.

Vectors over F2 are plain Python ints used as bitsets: bit ``j`` is the
``j``-th coordinate.  Matrices store one such int per row.  Row reduction is
dispatched to a compiled word-level kernel when it is available and falls back
to the pure-Python implementation otherwise (or when the environment variable
``ADEMCARTAN_PURE_PYTHON`` is set).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _gf2_py

try:
    if os.environ.get("ADEMCARTAN_PURE_PYTHON"):
        raise ImportError("pure python requested")
    from . import _gf2_kernel  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _gf2_kernel = None

BACKEND = "cython" if _gf2_kernel is not None else "python"


# ---------------------------------------------------------------------------
# binomials

def binom_may(i: int, j: int) -> int:
    """May's symbol ``(i, j) = C(i+j, i) mod 2``, zero off the first quadrant.

    By Lucas, the coefficient is odd exactly when the binary expansions of
    ``i`` and ``j`` share no set bit.
    """
    if i < 0 or j < 0:
        return 0
    return 0 if i & j else 1


def binom_c(n: int, k: int) -> int:
    """Ordinary ``C(n, k) mod 2``; zero when ``k < 0``, ``k > n`` or ``n < 0``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return binom_may(k, n - k)


def lemma51_failures(p: int) -> list[tuple[int, int]]:
    """Pairs ``0 <= i, j < 2^p`` violating the block rules for ``(i, j)``.

    The rules: ``(i, j) = 0`` once ``i + j >= 2^p``, and
    ``(i, j) = (2^p - i - j - 1, j)`` throughout.
    """
    N = 1 << p
    bad = []
    for i in range(N):
        for j in range(N):
            c = binom_may(i, j)
            if (i + j >= N and c) or c != binom_may(N - i - j - 1, j):
                bad.append((i, j))
    return bad


def pascal_holds(x: int, y: int) -> bool:
    """``(x, y-2) + (x-2, y) == (x, y)``."""
    return binom_may(x, y - 2) ^ binom_may(x - 2, y) == binom_may(x, y)


def doubling_holds(l: int, p: int) -> bool:
    """``(2l, 2p-4l+1) == (l, p-2l)``."""
    return binom_may(2 * l, 2 * p - 4 * l + 1) == binom_may(l, p - 2 * l)


# ---------------------------------------------------------------------------
# permutations

class Perm(tuple):
    """A permutation in one-line notation ``(sigma(1) ... sigma(n))``.

    The product follows function composition: ``(s * t)(i) == s(t(i))``.
    """

    __slots__ = ()

    def __new__(cls, images: Iterable[int]):
        images = tuple(int(v) for v in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Perm:
        return tuple.__new__(cls, images)

    @classmethod
    def parse(cls, text: str) -> Perm:
        """Parse ``"(3412)"``, ``"3412"`` or ``"3,4,1,2"``."""
        body = text.strip().strip("()").replace(" ", "")
        parts = body.split(",") if "," in body else list(body)
        return cls(int(p) for p in parts)

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls._trusted(tuple(range(1, n + 1)))

    @property
    def arity(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return tuple.__getitem__(self, i - 1)

    def __mul__(self, other: Perm) -> Perm:  # type: ignore[override]
        if not isinstance(other, Perm):
            return NotImplemented
        if len(self) != len(other):
            raise ValueError(f"arity mismatch: {len(self)} vs {len(other)}")
        return Perm._trusted(tuple(self[t - 1] for t in other))

    def inverse(self) -> Perm:
        inv = [0] * len(self)
        for pos, img in enumerate(self, start=1):
            inv[img - 1] = pos
        return Perm._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self, start=1))

    def __str__(self) -> str:
        sep = "," if len(self) > 9 else ""
        return "(" + sep.join(str(v) for v in self) + ")"

    def __repr__(self) -> str:
        return f"Perm{str(self)}"


def perm_compose(s: Perm, t: Perm) -> Perm:
    return s * t


def block_perm(s: Perm, sizes: Sequence[int]) -> Perm:
    """The block permutation ``s(i_1, ..., i_n)``: moves whole blocks as ``s`` moves points.

    Block ``k`` (of size ``sizes[k-1]``) is sent to the slot ``s(k)``.
    """
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if len(sizes) != len(s):
        raise ValueError("one size per point of s is required")
    if any(sz <= 0 for sz in sizes):
        raise ValueError("block sizes must be positive")
    inv = s.inverse()
    # starting offset of each target slot
    offset = {}
    pos = 0
    for slot in range(1, len(s) + 1):
        offset[slot] = pos
        pos += sizes[inv(slot) - 1]
    images = []
    for k, size in enumerate(sizes, start=1):
        start = offset[s(k)]
        images.extend(start + j + 1 for j in range(size))
    return Perm._trusted(tuple(images))


def cross_perm(*blocks: Perm) -> Perm:
    """``tau_1 x ... x tau_n``: each ``tau_k`` acts on its own consecutive block."""
    images: list[int] = []
    shift = 0
    for tau in blocks:
        images.extend(shift + v for v in tau)
        shift += len(tau)
    return Perm._trusted(tuple(images))


# ---------------------------------------------------------------------------
# bit vectors

def vec(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence into a bitset (first entry is bit 0)."""
    out = 0
    for j, b in enumerate(bits):
        if b & 1:
            out |= 1 << j
    return out


def unvec(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> j) & 1 for j in range(n))


def support(v: int) -> list[int]:
    """Indices of the set bits of ``v`` in increasing order."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def parity(v: int) -> int:
    return v.bit_count() & 1


# ---------------------------------------------------------------------------
# row reduction dispatch

def _rows_to_words(rows: Sequence[int], nbits: int) -> np.ndarray:
    nwords = max(1, (nbits + 63) // 64)
    nbytes = nwords * 8
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    return np.frombuffer(buf, dtype="<u8").reshape(len(rows), nwords).copy()


def _words_to_rows(words: np.ndarray) -> list[int]:
    return [int.from_bytes(words[r].tobytes(), "little") for r in range(words.shape[0])]


def rref(rows: Sequence[int], ncols: int, backend: str | None = None) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; pivots only in columns ``< ncols``.

    Returns ``(rows, pivots)`` where the first ``len(pivots)`` rows are the
    pivot rows in column order and the rest are zero on ``[0, ncols)``.
    """
    backend = backend or BACKEND
    if not rows:
        return [], []
    if backend == "python" or _gf2_kernel is None:
        return _gf2_py.rref_rows(list(rows), ncols)
    nbits = max(ncols, max(r.bit_length() for r in rows))
    words = _rows_to_words(rows, nbits)
    pivots = _gf2_kernel.rref_words(words, ncols)
    return _words_to_rows(words), list(pivots)


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class GF2Matrix:
    """Dense matrix over F2, row-major, one int bitset per row."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        limit = 1 << self.ncols
        if any(r < 0 or r >= limit for r in self.rows):
            raise ValueError("row has bits outside the column range")

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> GF2Matrix:
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> GF2Matrix:
        ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, tuple(vec(row) for row in entries))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> GF2Matrix:
        rows = [0] * nrows
        for j, col in enumerate(columns):
            for i in support(col):
                rows[i] |= 1 << j
        return cls(nrows, len(columns), tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> GF2Matrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    def to_lists(self) -> list[list[int]]:
        return [list(unvec(r, self.ncols)) for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def transpose(self) -> GF2Matrix:
        return GF2Matrix.from_columns(self.rows, self.ncols)

    def mul_vec(self, x: int) -> int:
        """``A @ x`` with ``x`` a bitset over columns; result is a bitset over rows."""
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & x):
                out |= 1 << i
        return out

    def row_reduce(self) -> tuple[GF2Matrix, list[int]]:
        reduced, pivots = rref(self.rows, self.ncols)
        return GF2Matrix(self.nrows, self.ncols, tuple(reduced)), pivots

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def kernel(self) -> list[int]:
        """Basis of ``{x : A x = 0}``, one vector per free column."""
        reduced, pivots = rref(self.rows, self.ncols)
        return _kernel_from_rref(reduced, pivots, self.ncols)


def _kernel_from_rref(reduced: Sequence[int], pivots: Sequence[int], ncols: int) -> list[int]:
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = 1 << free
        for row, pc in zip(reduced, pivots):
            if (row >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


class InconsistentSystem(ValueError):
    """Raised when ``A x = b`` has no solution; ``witness`` lists rows summing to ``0 = 1``."""

    def __init__(self, witness: list[int]):
        super().__init__(f"inconsistent system; rows {witness} sum to 0 = 1")
        self.witness = witness


@dataclass(frozen=True)
class AffineSolution:
    particular: int
    kernel: tuple[int, ...]

    def __iter__(self):
        yield self.particular
        yield list(self.kernel)


def solve_affine(A: GF2Matrix, b: int) -> AffineSolution | None:
    """Solve ``A x = b``; ``None`` iff ``b`` is outside the column span."""
    if b < 0 or b >> A.nrows:
        raise ValueError("right-hand side has the wrong dimension")
    n = A.ncols
    aug = [row | (((b >> i) & 1) << n) for i, row in enumerate(A.rows)]
    reduced, pivots = rref(aug, n)
    mask = (1 << n) - 1
    for row in reduced[len(pivots):]:
        if row >> n & 1:
            return None
    x = 0
    for row, pc in zip(reduced, pivots):
        if row >> n & 1:
            x |= 1 << pc
    kernel = _kernel_from_rref([r & mask for r in reduced], pivots, n)
    assert A.mul_vec(x) == b
    return AffineSolution(x, tuple(kernel))


def inconsistency_witness(A: GF2Matrix, b: int) -> list[int] | None:
    """Indices of original rows whose sum reads ``0 = 1``, or ``None`` if consistent."""
    n = A.ncols
    aug = [row | (((b >> i) & 1) << n) | (1 << (n + 1 + i)) for i, row in enumerate(A.rows)]
    reduced, pivots = rref(aug, n)
    for row in reduced[len(pivots):]:
        if row >> n & 1:
            return support(row >> (n + 1))
    return None


# ---------------------------------------------------------------------------
# subspaces and quotients

class Echelon:
    """Incremental echelon basis of a subspace; supports membership and reduction."""

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}  # pivot bit -> row with that lowest set bit
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        rows = self._rows
        while v:
            low = (v & -v).bit_length() - 1
            row = rows.get(low)
            if row is None:
                return v
            v ^= row
        return 0

    def _reduce_full(self, v: int) -> int:
        # reduce every bit that has a pivot, not only the lowest
        out = 0
        rows = self._rows
        while v:
            low = (v & -v).bit_length() - 1
            row = rows.get(low)
            if row is None:
                out |= 1 << low
                v ^= 1 << low
            else:
                v ^= row
        return out

    def add(self, v: int) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        self._rows[(r & -r).bit_length() - 1] = r
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> list[int]:
        return [self._rows[k] for k in sorted(self._rows)]


@dataclass
class Quotient:
    """A basis of ``V/W`` given by representatives in ``V``, plus the projection."""

    representatives: list[int]
    _pivots: dict[int, tuple[int, int]]  # pivot bit -> (row, coordinate mask)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def project(self, v: int) -> int:
        """Coordinates of the class of ``v`` as a bitset over representatives."""
        coords = 0
        while v:
            low = (v & -v).bit_length() - 1
            entry = self._pivots.get(low)
            if entry is None:
                raise ValueError("vector is not in the ambient subspace")
            row, c = entry
            v ^= row
            coords ^= c
        return coords

    def lift(self, coords: int) -> int:
        out = 0
        for k in support(coords):
            out ^= self.representatives[k]
        return out


def quotient_basis(V: Iterable[int], W: Iterable[int]) -> Quotient:
    """Representatives of a basis of ``span(V)/span(W)`` and the projection onto it.

    Representatives are chosen among the given spanning vectors of ``V`` in
    order, so the choice is deterministic.
    """
    V = list(V)
    W = list(W)
    ambient = Echelon(V)
    for w in W:
        if w not in ambient:
            raise ValueError("W is not contained in V")
    pivots: dict[int, tuple[int, int]] = {}

    def insert(v: int, c: int) -> bool:
        while v:
            low = (v & -v).bit_length() - 1
            entry = pivots.get(low)
            if entry is None:
                pivots[low] = (v, c)
                return True
            v ^= entry[0]
            c ^= entry[1]
        return False

    for w in W:
        insert(w, 0)
    reps: list[int] = []
    for v in V:
        # tentatively test independence modulo what is there already
        probe = v
        while probe:
            low = (probe & -probe).bit_length() - 1
            entry = pivots.get(low)
            if entry is None:
                break
            probe ^= entry[0]
        if probe:
            insert(v, 1 << len(reps))
            reps.append(v)
    return Quotient(reps, pivots)
