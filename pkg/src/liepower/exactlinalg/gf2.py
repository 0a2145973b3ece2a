"""Bit-packed Gaussian elimination over F2."""

from __future__ import annotations

import numpy as np

from .matrix import ExactMatrix


def pack_rows(m: ExactMatrix) -> np.ndarray:
    """Dense uint64 bit rows; bit ``c % 64`` of word ``c // 64`` holds entry (r, c)."""
    n_words = max(1, (m.n_cols + 63) // 64)
    out = np.zeros((m.n_rows, n_words), dtype=np.uint64)
    if m.nnz:
        words = m.cols // 64
        bits = np.left_shift(np.uint64(1), (m.cols % 64).astype(np.uint64))
        np.bitwise_xor.at(out, (m.rows, words), bits)
    return out


def gf2_rank(m: ExactMatrix) -> int:
    if m.nnz == 0:
        return 0
    # fewer rows means fewer rows touched per pivot
    if m.n_rows > m.n_cols:
        m = m.T
    return _rank_packed(pack_rows(m), m.n_cols)


def _rank_packed(a: np.ndarray, n_cols: int) -> int:
    a = a[np.any(a != 0, axis=1)].copy()
    n_rows = a.shape[0]
    rank = 0
    for c in range(n_cols):
        if rank == n_rows:
            break
        w = c // 64
        bit = np.uint64(1) << np.uint64(c % 64)
        hits = np.flatnonzero(a[rank:, w] & bit) + rank
        if len(hits) == 0:
            continue
        piv = hits[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        others = hits[1:]
        if len(others):
            a[others, w:] ^= a[rank, w:]
        rank += 1
    return rank
