"""Bit-packed GF(2) matrices.

Rows are stored as little-endian packed ``uint64`` words: column ``j`` is
bit ``j % 64`` of word ``j // 64``. Pad bits past ``n_cols`` are always zero.
All operations return new matrices; callers' data is never mutated.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

WORD = 64


def _n_words(n_cols: int) -> int:
    return (n_cols + WORD - 1) // WORD


def _pack(dense: np.ndarray) -> np.ndarray:
    n_rows, n_cols = dense.shape
    n_words = _n_words(n_cols)
    padded = np.zeros((n_rows, n_words * WORD), dtype=np.uint8)
    padded[:, :n_cols] = dense != 0
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64, copy=False).reshape(n_rows, n_words)


class BitMatrix:
    """Dense GF(2) matrix with packed rows."""

    __slots__ = ("n_rows", "n_cols", "words")

    def __init__(self, n_rows: int, n_cols: int, words: np.ndarray | None = None):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        shape = (self.n_rows, _n_words(self.n_cols))
        if words is None:
            words = np.zeros(shape, dtype=np.uint64)
        elif words.shape != shape:
            raise ValueError(f"word array has shape {words.shape}, expected {shape}")
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self._clear_pad()

    def _clear_pad(self) -> None:
        extra = self.n_cols % WORD
        if extra and self.n_rows:
            self.words[:, -1] &= np.uint64((1 << extra) - 1)

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(dense.shape[0], dense.shape[1], _pack(dense))

    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int, entries: Iterable[tuple]) -> "BitMatrix":
        """Matrix with ones at the given ``(row, col)`` positions."""
        dense = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for i, j in entries:
            dense[i, j] = 1
        return cls.from_dense(dense)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        return cls(n_rows, n_cols)

    def to_dense(self) -> np.ndarray:
        """Unpack to a ``uint8`` array of 0/1 entries."""
        if self.n_rows == 0 or self.n_cols == 0:
            return np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        raw = self.words.astype("<u8").view(np.uint8).reshape(self.n_rows, -1)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.n_cols]

    @property
    def shape(self) -> tuple:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise IndexError(ij)
        return int((int(self.words[i, j // WORD]) >> (j % WORD)) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.words, other.words))

    def __repr__(self) -> str:
        return f"BitMatrix({self.n_rows}x{self.n_cols})"

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.n_rows, self.n_cols, self.words.copy())

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1, dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0, dtype=np.int64)

    def column(self, j: int) -> np.ndarray:
        return self.to_dense()[:, j]

    def select_cols(self, cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense()[:, list(cols)])

    def permute(self, row_perm: Sequence[int] | None = None, col_perm: Sequence[int] | None = None) -> "BitMatrix":
        """``result[i, j] = self[row_perm[i], col_perm[j]]``."""
        dense = self.to_dense()
        if row_perm is not None:
            dense = dense[np.asarray(row_perm, dtype=np.intp)]
        if col_perm is not None:
            dense = dense[:, np.asarray(col_perm, dtype=np.intp)]
        return BitMatrix.from_dense(dense)

    def rank(self) -> int:
        return rank(self)


def _rank_of_words(work: np.ndarray, n_cols: int) -> int:
    """Forward elimination in place on a scratch word array."""
    n_rows = work.shape[0]
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        w, b = divmod(c, WORD)
        mask = np.uint64(1 << b)
        hits = np.flatnonzero(work[r:, w] & mask)
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        below = r + hits[1:]
        # rows r.. are zero on every column < c, so only words w.. change
        if below.size:
            work[below, w:] ^= work[r, w:]
        r += 1
    return r


def rank(M: BitMatrix) -> int:
    """Exact rank over GF(2)."""
    if M.n_rows == 0 or M.n_cols == 0:
        return 0
    # eliminate along the shorter side
    if M.n_rows > M.n_cols:
        M = M.transpose()
    return _rank_of_words(M.words.copy(), M.n_cols)


def restrict_rows(M: BitMatrix, keep: Sequence[int]) -> BitMatrix:
    keep = np.asarray(list(keep), dtype=np.intp)
    if keep.size and (keep.min() < 0 or keep.max() >= M.n_rows):
        raise IndexError(f"row index out of range for {M!r}")
    return BitMatrix(keep.size, M.n_cols, M.words[keep].copy())


def stack_columns(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Column concatenation ``[A | B]``."""
    if A.n_rows != B.n_rows:
        raise ValueError(f"row counts differ: {A.n_rows} vs {B.n_rows}")
    return BitMatrix.from_dense(np.hstack([A.to_dense(), B.to_dense()]))


def stack_rows(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    if A.n_cols != B.n_cols:
        raise ValueError(f"column counts differ: {A.n_cols} vs {B.n_cols}")
    return BitMatrix(A.n_rows + B.n_rows, A.n_cols, np.vstack([A.words, B.words]))


def in_span(v, M: BitMatrix) -> bool:
    """True iff the 0/1 vector ``v`` lies in the column space of ``M``."""
    v = np.asarray(v, dtype=np.uint8).reshape(-1)
    if v.size != M.n_rows:
        raise ValueError(f"vector length {v.size} != {M.n_rows} rows")
    col = BitMatrix.from_dense(v.reshape(-1, 1))
    return rank(stack_columns(M, col)) == rank(M)


def vectors_rank(vectors: Sequence) -> int:
    """Rank of a list of equal-length 0/1 vectors."""
    if len(vectors) == 0:
        return 0
    return rank(BitMatrix.from_dense(np.asarray(vectors, dtype=np.uint8)))


def kernel_support_dim(M: BitMatrix, S: Iterable[int]) -> int:
    """Dimension of the part of colspace(M) vanishing off the row set S."""
    S = set(S)
    outside = [i for i in range(M.n_rows) if i not in S]
    full = rank(M)
    restricted = rank(restrict_rows(M, outside))
    dim = full - restricted
    assert dim + restricted == full and 0 <= dim <= len(S)
    return dim


class EchelonBasis:
    """Incremental GF(2) span, vectors held as Python int bitsets.

    ``add`` reports whether a vector enlarged the span, which is what greedy
    basis selection needs without recomputing full ranks.
    """

    def __init__(self):
        self._pivots: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    @staticmethod
    def as_int(v) -> int:
        if isinstance(v, int):
            return v
        bits = np.flatnonzero(np.asarray(v))
        return sum(1 << int(i) for i in bits)

    def reduce(self, v) -> int:
        x = self.as_int(v)
        while x:
            top = x.bit_length() - 1
            basis_vec = self._pivots.get(top)
            if basis_vec is None:
                return x
            x ^= basis_vec
        return 0

    def add(self, v) -> bool:
        x = self.reduce(v)
        if not x:
            return False
        self._pivots[x.bit_length() - 1] = x
        return True

    def contains(self, v) -> bool:
        return self.reduce(v) == 0


def naive_rank(dense) -> int:
    """Unpacked boolean elimination; reference for the packed engine."""
    A = np.array(dense, dtype=bool)
    n_rows, n_cols = A.shape
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        for i in range(r + 1, n_rows):
            if A[i, c]:
                A[i] ^= A[r]
        r += 1
        if r == n_rows:
            break
    return r
