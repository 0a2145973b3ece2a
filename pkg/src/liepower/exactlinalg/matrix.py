"""Sparse exact matrices over Z (arbitrary precision) or Z/p."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .ring import RingSpec

# int64 arithmetic is used only when every intermediate provably stays below this.
INT64_SAFE = 1 << 62


class DimensionMismatch(ValueError):
    pass


class RingMismatch(ValueError):
    pass


def _as_vals(vals) -> np.ndarray:
    """Return an int64 array when every entry fits, otherwise an object array."""
    arr = np.asarray(vals)
    if arr.dtype == object:
        if arr.size == 0:
            return np.zeros(0, dtype=np.int64)
        m = max(abs(int(v)) for v in arr)
        if m < INT64_SAFE:
            return arr.astype(np.int64)
        return np.array([int(v) for v in arr], dtype=object)
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64, copy=False)
    raise TypeError(f"non-integer matrix entries of dtype {arr.dtype}")


def _max_abs(vals: np.ndarray) -> int:
    if vals.size == 0:
        return 0
    if vals.dtype == object:
        return max(abs(int(v)) for v in vals)
    return int(np.abs(vals).max())


class ExactMatrix:
    """Immutable sparse matrix in canonical COO form.

    Entries are stored sorted row-major with duplicates summed and zeros removed.
    Over ``Z/p`` entries lie in ``1..p-1``.  Values are int64 when they fit and
    Python ints (object arrays) otherwise.
    """

    __slots__ = ("ring", "shape", "rows", "cols", "vals")

    def __init__(self, ring: RingSpec, shape, rows=(), cols=(), vals=(), *, canonical: bool = False):
        self.ring = ring
        self.shape = (int(shape[0]), int(shape[1]))
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        if not isinstance(vals, np.ndarray):
            vals = np.array([int(v) for v in vals], dtype=object)
        if vals.dtype != object:
            vals = vals.astype(np.int64, copy=False)
        vals = vals.reshape(-1)
        if not (len(rows) == len(cols) == len(vals)):
            raise ValueError("rows, cols, vals must have equal length")
        if canonical:
            self.rows, self.cols, self.vals = rows, cols, _as_vals(vals)
        else:
            self.rows, self.cols, self.vals = self._canonicalize(rows, cols, vals)
        for a in (self.rows, self.cols, self.vals):
            a.setflags(write=False)

    def _canonicalize(self, rows, cols, vals):
        n_r, n_c = self.shape
        if len(rows) and (rows.min() < 0 or rows.max() >= n_r or cols.min() < 0 or cols.max() >= n_c):
            raise IndexError("matrix entry out of range")
        if len(rows) == 0:
            e = np.zeros(0, dtype=np.int64)
            return e, e.copy(), e.copy()
        key = rows * max(n_c, 1) + cols
        order = np.argsort(key, kind="stable")
        key = key[order]
        vals = vals[order]
        starts = np.flatnonzero(np.concatenate(([True], key[1:] != key[:-1])))
        if len(starts) < len(key):
            if vals.dtype != object and _max_abs(vals) * len(key) >= INT64_SAFE:
                vals = vals.astype(object)
            vals = np.add.reduceat(vals, starts)
            key = key[starts]
        p = self.ring.characteristic
        if p:
            vals = vals % p
        nz = vals != 0
        key, vals = key[nz], vals[nz]
        vals = _as_vals(vals)
        return key // max(n_c, 1), key % max(n_c, 1), vals

    # construction

    @classmethod
    def zeros(cls, ring: RingSpec, n_rows: int, n_cols: int) -> ExactMatrix:
        return cls(ring, (n_rows, n_cols))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> ExactMatrix:
        r = np.arange(n, dtype=np.int64)
        return cls(ring, (n, n), r, r, np.ones(n, dtype=np.int64), canonical=True)

    @classmethod
    def from_dense(cls, ring: RingSpec, data, shape=None) -> ExactMatrix:
        data = [list(row) for row in data]
        if shape is None:
            shape = (len(data), len(data[0]) if data else 0)
        rows, cols, vals = [], [], []
        for i, row in enumerate(data):
            if len(row) != shape[1]:
                raise DimensionMismatch("ragged dense matrix")
            for j, v in enumerate(row):
                v = int(v)
                if v:
                    rows.append(i)
                    cols.append(j)
                    vals.append(v)
        return cls(ring, shape, rows, cols, np.array(vals, dtype=object))

    @classmethod
    def from_entries(cls, ring: RingSpec, shape, entries: Mapping[tuple[int, int], int]) -> ExactMatrix:
        items = list(entries.items())
        return cls(
            ring,
            shape,
            [k[0] for k, _ in items],
            [k[1] for k, _ in items],
            np.array([int(v) for _, v in items], dtype=object),
        )

    @classmethod
    def from_columns(cls, ring: RingSpec, n_rows: int, columns: Iterable[Mapping[int, int]]) -> ExactMatrix:
        rows, cols, vals = [], [], []
        n_cols = 0
        for j, col in enumerate(columns):
            n_cols = j + 1
            for i, v in col.items():
                rows.append(i)
                cols.append(j)
                vals.append(int(v))
        return cls(ring, (n_rows, n_cols), rows, cols, np.array(vals, dtype=object))

    @classmethod
    def from_scipy(cls, ring: RingSpec, m) -> ExactMatrix:
        m = sp.coo_matrix(m)
        return cls(ring, m.shape, m.row, m.col, m.data.astype(np.int64))

    # views

    @property
    def n_rows(self) -> int:
        return self.shape[0]

    @property
    def n_cols(self) -> int:
        return self.shape[1]

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def max_abs(self) -> int:
        return _max_abs(self.vals)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            out[r][c] = int(v)
        return out

    def to_numpy(self) -> np.ndarray:
        dt = object if self.vals.dtype == object else np.int64
        out = np.zeros(self.shape, dtype=dt)
        out[self.rows, self.cols] = self.vals
        return out

    def to_scipy(self) -> sp.csr_matrix:
        if self.vals.dtype == object:
            raise OverflowError("entries exceed int64")
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64)

    def entries(self) -> dict[tuple[int, int], int]:
        return {
            (r, c): int(v) for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist())
        }

    def row_dicts(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = defaultdict(dict)
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            out[r][c] = int(v)
        return out

    def column_dicts(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = defaultdict(dict)
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            out[c][r] = int(v)
        return out

    def column(self, j: int) -> dict[int, int]:
        sel = self.cols == j
        return {int(r): int(v) for r, v in zip(self.rows[sel], self.vals[sel])}

    def __getitem__(self, key) -> int:
        i, j = key
        sel = np.flatnonzero((self.rows == i) & (self.cols == j))
        return int(self.vals[sel[0]]) if len(sel) else 0

    # algebra

    def _check_ring(self, other: ExactMatrix):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.ring, (self.n_cols, self.n_rows), self.cols, self.rows, self.vals)

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_ring(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return ExactMatrix(
            self.ring,
            self.shape,
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols]),
            _concat_vals(self.vals, other.vals),
        )

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.shape, self.rows, self.cols, -self.vals)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self + (-other)

    def scale(self, c: int) -> ExactMatrix:
        c = int(c)
        vals = self.vals
        if vals.dtype != object and self.max_abs() * abs(c) >= INT64_SAFE:
            vals = vals.astype(object)
        return ExactMatrix(self.ring, self.shape, self.rows, self.cols, vals * c)

    def __rmul__(self, c: int) -> ExactMatrix:
        return self.scale(c)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_ring(other)
        if self.n_cols != other.n_rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        shape = (self.n_rows, other.n_cols)
        if self.nnz == 0 or other.nnz == 0:
            return ExactMatrix(self.ring, shape)
        bound = self.max_abs() * other.max_abs() * max(1, self.n_cols)
        if bound < INT64_SAFE and self.vals.dtype != object and other.vals.dtype != object:
            prod = (self.to_scipy() @ other.to_scipy()).tocoo()
            return ExactMatrix(self.ring, shape, prod.row, prod.col, prod.data.astype(np.int64))
        left = self.row_dicts()
        right = other.row_dicts()
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for i, row in left.items():
            for k, a in row.items():
                for j, b in right.get(k, {}).items():
                    acc[i, j] += a * b
        return ExactMatrix.from_entries(self.ring, shape, acc)

    def kron(self, other: ExactMatrix) -> ExactMatrix:
        self._check_ring(other)
        shape = (self.n_rows * other.n_rows, self.n_cols * other.n_cols)
        if self.nnz == 0 or other.nnz == 0:
            return ExactMatrix(self.ring, shape)
        rows = (self.rows[:, None] * other.n_rows + other.rows[None, :]).ravel()
        cols = (self.cols[:, None] * other.n_cols + other.cols[None, :]).ravel()
        a, b = self.vals, other.vals
        if self.max_abs() * other.max_abs() >= INT64_SAFE:
            a, b = a.astype(object), b.astype(object)
        vals = (a[:, None] * b[None, :]).ravel()
        return ExactMatrix(self.ring, shape, rows, cols, vals)

    def hstack(self, other: ExactMatrix) -> ExactMatrix:
        self._check_ring(other)
        if self.n_rows != other.n_rows:
            raise DimensionMismatch("hstack row counts differ")
        return ExactMatrix(
            self.ring,
            (self.n_rows, self.n_cols + other.n_cols),
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols + self.n_cols]),
            _concat_vals(self.vals, other.vals),
        )

    def vstack(self, other: ExactMatrix) -> ExactMatrix:
        return self.T.hstack(other.T).T

    def select_columns(self, idx) -> ExactMatrix:
        idx = np.asarray(idx, dtype=np.int64)
        lookup = np.full(self.n_cols, -1, dtype=np.int64)
        lookup[idx] = np.arange(len(idx))
        new = lookup[self.cols]
        keep = new >= 0
        return ExactMatrix(self.ring, (self.n_rows, len(idx)), self.rows[keep], new[keep], self.vals[keep])

    def select_rows(self, idx) -> ExactMatrix:
        return self.T.select_columns(idx).T

    def change_ring(self, ring: RingSpec) -> ExactMatrix:
        """Reduce an integer matrix into ``ring`` (only Z -> Z/p is meaningful)."""
        if ring == self.ring:
            return self
        if self.ring.is_field:
            raise RingMismatch("cannot lift from a prime field")
        return ExactMatrix(ring, self.shape, self.rows, self.cols, self.vals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.shape == other.shape
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and all(int(a) == int(b) for a, b in zip(self.vals, other.vals))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.n_rows * self.n_cols <= 64:
            return f"ExactMatrix({self.ring}, {self.to_dense()})"
        return f"ExactMatrix({self.ring}, shape={self.shape}, nnz={self.nnz})"


def _concat_vals(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return np.concatenate([a.astype(object), b.astype(object)])
    return np.concatenate([a, b])


def block_diag(ring: RingSpec, blocks: list[ExactMatrix]) -> ExactMatrix:
    rows, cols, vals = [], [], []
    r0 = c0 = 0
    for b in blocks:
        rows.append(b.rows + r0)
        cols.append(b.cols + c0)
        vals.append(b.vals.astype(object) if any(x.vals.dtype == object for x in blocks) else b.vals)
        r0 += b.n_rows
        c0 += b.n_cols
    if not blocks:
        return ExactMatrix(ring, (0, 0))
    return ExactMatrix(ring, (r0, c0), np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))


def column_vector(ring: RingSpec, n: int, entries: Mapping[int, int]) -> ExactMatrix:
    return ExactMatrix.from_columns(ring, n, [entries])
