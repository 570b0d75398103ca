"""Sparse binary matrices and GF(2) linear algebra.

All parity-check matrices, logical matrices and window views in this
package are ``SparseBitMatrix`` instances: an immutable dual-adjacency
(row-wise and column-wise) representation.  Elimination-based operations
(rank, solving, kernels) run on a dense bit-packed copy, which is fast
enough for window-sized matrices (a few thousand columns).

Tie-breaking is always by lowest index so results are identical across
runs and thread counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NotInSpan(Exception):
    """Raised when a syndrome is outside the span of the chosen columns."""


class DimensionMismatch(ValueError):
    """Operand shapes are inconsistent."""


class BitVector:
    """Binary vector stored as a sorted array of set positions."""

    __slots__ = ("length", "support")

    def __init__(self, length: int, support=()):
        sup = np.unique(np.asarray(support, dtype=np.int64))
        if sup.size and (sup[0] < 0 or sup[-1] >= length):
            raise ValueError("support index out of range")
        self.length = int(length)
        self.support = sup

    @classmethod
    def from_dense(cls, dense) -> "BitVector":
        dense = np.asarray(dense)
        v = cls.__new__(cls)
        v.length = int(dense.shape[0])
        v.support = np.flatnonzero(dense % 2).astype(np.int64)
        return v

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        out[self.support] = 1
        return out

    @property
    def weight(self) -> int:
        return int(self.support.size)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise DimensionMismatch("length mismatch in xor")
        merged = np.concatenate([self.support, other.support])
        vals, counts = np.unique(merged, return_counts=True)
        v = BitVector.__new__(BitVector)
        v.length = self.length
        v.support = vals[counts % 2 == 1]
        return v

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and np.array_equal(self.support, other.support)
        )

    def __hash__(self):
        return hash((self.length, self.support.tobytes()))

    def __repr__(self):
        return f"BitVector(length={self.length}, weight={self.weight})"


class SparseBitMatrix:
    """Immutable sparse GF(2) matrix with row and column adjacency."""

    __slots__ = ("n_rows", "n_cols", "rows", "cols", "_dense")

    def __init__(self, n_rows: int, n_cols: int, entries):
        """Build from an iterable of (row, col) pairs.  Duplicates cancel mod 2."""
        if isinstance(entries, np.ndarray):
            ent = entries.astype(np.int64).reshape(-1, 2)
        else:
            ent = np.asarray(list(entries), dtype=np.int64).reshape(-1, 2)
        if ent.size:
            if ent.min() < 0 or ent[:, 0].max() >= n_rows or ent[:, 1].max() >= n_cols:
                raise ValueError("entry index out of range")
            keys = ent[:, 0] * n_cols + ent[:, 1]
            vals, counts = np.unique(keys, return_counts=True)
            vals = vals[counts % 2 == 1]
            r, c = vals // n_cols, vals % n_cols
        else:
            r = c = np.zeros(0, dtype=np.int64)
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        # entries are sorted by (row, col) already; split into adjacency lists
        cuts = np.searchsorted(r, np.arange(n_rows + 1))
        c32 = c.astype(np.int32)
        self.rows = [c32[cuts[i]:cuts[i + 1]] for i in range(n_rows)]
        order = np.lexsort((r, c))
        rs, cs = r[order].astype(np.int32), c[order]
        ccuts = np.searchsorted(cs, np.arange(n_cols + 1))
        self.cols = [rs[ccuts[j]:ccuts[j + 1]] for j in range(n_cols)]
        self._dense = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_dense(cls, dense) -> "SparseBitMatrix":
        dense = np.asarray(dense) % 2
        r, c = np.nonzero(dense)
        return cls(dense.shape[0], dense.shape[1], zip(r.tolist(), c.tolist()))

    @classmethod
    def identity(cls, n: int) -> "SparseBitMatrix":
        return cls(n, n, ((i, i) for i in range(n)))

    @classmethod
    def hstack(cls, blocks) -> "SparseBitMatrix":
        n_rows = blocks[0].n_rows
        entries = []
        off = 0
        for b in blocks:
            if b.n_rows != n_rows:
                raise DimensionMismatch("hstack row mismatch")
            r, c = b.triplets()
            entries.extend(zip(r.tolist(), (c + off).tolist()))
            off += b.n_cols
        return cls(n_rows, off, entries)

    def triplets(self):
        """Return (row_indices, col_indices) in row-major sorted order."""
        if not any(len(r) for r in self.rows):
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        r = np.concatenate([np.full(len(cs), i, dtype=np.int64) for i, cs in enumerate(self.rows)])
        c = np.concatenate([cs.astype(np.int64) for cs in self.rows])
        return r, c

    def to_dense(self) -> np.ndarray:
        if self._dense is None:
            d = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
            for i, cs in enumerate(self.rows):
                d[i, cs] = 1
            self._dense = d
        return self._dense

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def row_weights(self) -> np.ndarray:
        return np.array([len(r) for r in self.rows], dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return np.array([len(c) for c in self.cols], dtype=np.int64)

    def transpose(self) -> "SparseBitMatrix":
        r, c = self.triplets()
        return SparseBitMatrix(self.n_cols, self.n_rows, zip(c.tolist(), r.tolist()))

    def submatrix(self, row_ids, col_ids) -> "SparseBitMatrix":
        """Submatrix on the given (ordered) row and column index lists."""
        row_ids = np.asarray(row_ids, dtype=np.int64)
        col_ids = np.asarray(col_ids, dtype=np.int64)
        rmap = {int(v): i for i, v in enumerate(row_ids)}
        entries = []
        for new_c, j in enumerate(col_ids):
            for i in self.cols[int(j)]:
                ni = rmap.get(int(i))
                if ni is not None:
                    entries.append((ni, new_c))
        return SparseBitMatrix(len(row_ids), len(col_ids), entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseBitMatrix)
            and self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and all(np.array_equal(a, b) for a, b in zip(self.rows, other.rows))
        )

    def __hash__(self):
        return hash((self.n_rows, self.n_cols, self.nnz))

    def __repr__(self):
        return f"SparseBitMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


# -- core operations ---------------------------------------------------------


def matvec(M: SparseBitMatrix, v) -> BitVector:
    """Evaluate M @ v over GF(2).  ``v`` is a BitVector or dense 0/1 array."""
    if isinstance(v, BitVector):
        if v.length != M.n_cols:
            raise DimensionMismatch("matvec dimension mismatch")
        sup = v.support
    else:
        v = np.asarray(v)
        if v.shape[0] != M.n_cols:
            raise DimensionMismatch("matvec dimension mismatch")
        sup = np.flatnonzero(v % 2)
    acc = np.zeros(M.n_rows, dtype=np.int64)
    for j in sup:
        acc[M.cols[int(j)]] += 1
    return BitVector.from_dense(acc % 2)


@dataclass
class EliminationRecord:
    """Result of Gauss-Jordan elimination under a column order.

    ``transform @ M[:, column_order] = rref`` over GF(2); pivot k sits at
    row k, column ``pivot_positions[k]`` (position within column_order).
    """

    column_order: np.ndarray
    pivot_positions: np.ndarray  # positions within column_order, scan order
    rref: np.ndarray             # dense uint8, permuted columns
    transform: np.ndarray        # dense uint8, n_rows x n_rows


def _pack(rows: np.ndarray) -> np.ndarray:
    return np.packbits(rows, axis=1)


def row_reduce(M: SparseBitMatrix, column_order=None):
    """Gauss-Jordan elimination scanning columns in ``column_order``.

    Returns (pivot_columns, record) where pivot_columns are original column
    indices of the first linearly independent columns in scan order.
    """
    if column_order is None:
        column_order = np.arange(M.n_cols)
    column_order = np.asarray(column_order, dtype=np.int64)
    if sorted(column_order.tolist()) != list(range(M.n_cols)):
        raise ValueError("column_order must be a permutation of all columns")
    m, n = M.n_rows, M.n_cols
    work = np.concatenate(
        [M.to_dense()[:, column_order], np.eye(m, dtype=np.uint8)], axis=1
    )
    packed = _pack(work)
    pivot_positions = []
    pivot_row = 0
    for pos in range(n):
        if pivot_row >= m:
            break
        byte, bit = pos >> 3, 7 - (pos & 7)
        colbits = (packed[pivot_row:, byte] >> bit) & 1
        hits = np.flatnonzero(colbits)
        if hits.size == 0:
            continue
        pr = pivot_row + int(hits[0])
        if pr != pivot_row:
            packed[[pivot_row, pr]] = packed[[pr, pivot_row]]
        mask = ((packed[:, byte] >> bit) & 1).astype(bool)
        mask[pivot_row] = False
        if mask.any():
            packed[mask] ^= packed[pivot_row]
        pivot_positions.append(pos)
        pivot_row += 1
    unpacked = np.unpackbits(packed, axis=1, count=n + m)
    record = EliminationRecord(
        column_order=column_order,
        pivot_positions=np.asarray(pivot_positions, dtype=np.int64),
        rref=unpacked[:, :n],
        transform=unpacked[:, n:],
    )
    pivot_columns = column_order[record.pivot_positions]
    return pivot_columns, record


def rank(M: SparseBitMatrix) -> int:
    pivots, _ = row_reduce(M)
    return len(pivots)


def kernel_basis(M: SparseBitMatrix):
    """Basis of the right null space of M, as BitVectors."""
    _, rec = row_reduce(M)
    r = len(rec.pivot_positions)
    pivot_set = set(rec.pivot_positions.tolist())
    basis = []
    inv = np.empty(M.n_cols, dtype=np.int64)
    inv[rec.column_order] = np.arange(M.n_cols)
    for pos in range(M.n_cols):
        if pos in pivot_set:
            continue
        x = np.zeros(M.n_cols, dtype=np.uint8)
        x[pos] = 1
        col = rec.rref[:r, pos]
        x[rec.pivot_positions[np.flatnonzero(col)]] = 1
        # map back from permuted positions to original columns
        dense = np.zeros(M.n_cols, dtype=np.uint8)
        dense[rec.column_order[np.flatnonzero(x)]] = 1
        basis.append(BitVector.from_dense(dense))
    return basis


def solve_in_span(M: SparseBitMatrix, s, pivot_columns, record: EliminationRecord) -> BitVector:
    """Solve M x = s with x supported on pivot columns.

    Raises NotInSpan when s is outside the span of the pivot columns.
    """
    if isinstance(s, BitVector):
        s = s.to_dense()
    s = np.asarray(s, dtype=np.uint8) % 2
    if s.shape[0] != M.n_rows:
        raise DimensionMismatch("syndrome length mismatch")
    y = record.transform @ s % 2
    r = len(record.pivot_positions)
    if np.any(y[r:]):
        raise NotInSpan("syndrome outside span of pivot columns")
    dense = np.zeros(M.n_cols, dtype=np.uint8)
    dense[np.asarray(pivot_columns)[np.flatnonzero(y[:r])]] = 1
    return BitVector.from_dense(dense)


# -- triplet text format -----------------------------------------------------


def write_triplets(M: SparseBitMatrix) -> str:
    """Serialize as 'rows cols nnz' header plus ascending 'r c' lines."""
    r, c = M.triplets()
    lines = [f"{M.n_rows} {M.n_cols} {M.nnz}"]
    lines += [f"{ri} {ci}" for ri, ci in zip(r.tolist(), c.tolist())]
    return "\n".join(lines) + "\n"


def read_triplets(text: str) -> SparseBitMatrix:
    lines = [ln for ln in (l.strip() for l in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty triplet stream")
    n_rows, n_cols, nnz = (int(x) for x in lines[0].split())
    entries = []
    for ln in lines[1:]:
        ri, ci = (int(x) for x in ln.split())
        entries.append((ri, ci))
    if len(entries) != nnz:
        raise ValueError(f"expected {nnz} entries, got {len(entries)}")
    return SparseBitMatrix(n_rows, n_cols, entries)
