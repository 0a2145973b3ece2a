"""Lie powers realized inside tensor powers.

Words of length ``n`` over ``d`` letters are encoded as base-``d`` integers,
most significant letter first, so numeric order is lexicographic order and
concatenation is ``code(u) * d**len(v) + code(v)``.

Every basis element ``b`` has a *key* word ``kappa(b)`` such that the tensor
expansion of ``b`` is ``kappa(b)`` plus words strictly larger than it.  For the
Lyndon basis the key of ``P_w`` is ``w``; for the restricted basis over F2 the
key of ``P_w^(2^j)`` is ``w`` repeated ``2^j`` times.  The matrix of key
coordinates is therefore unitriangular, and any element of the span is
recovered from its key coordinates alone by one triangular solve.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..exactlinalg import ExactMatrix, RingSpec, ZZ
from ..exactlinalg.matrix import INT64_SAFE
from .words import Bracketing, Word, lyndon_words, standard_bracketing, standard_factorization


class UnsupportedRing(ValueError):
    pass


class NotInSpan(ArithmeticError):
    pass


def encode(w: Word, d: int) -> int:
    c = 0
    for a in w:
        c = c * d + a
    return c


def decode_codes(codes: np.ndarray, d: int, n: int) -> np.ndarray:
    """Letter matrix of shape ``(len(codes), n)``."""
    out = np.empty((len(codes), n), dtype=np.int64)
    c = codes.copy()
    for j in range(n - 1, -1, -1):
        out[:, j] = c % d
        c //= d
    return out


def _combine(codes: np.ndarray, coefs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(codes) == 0:
        return codes, coefs
    order = np.argsort(codes, kind="stable")
    codes, coefs = codes[order], coefs[order]
    starts = np.flatnonzero(np.concatenate(([True], codes[1:] != codes[:-1])))
    coefs = np.add.reduceat(coefs, starts)
    codes = codes[starts]
    nz = coefs != 0
    return codes[nz], coefs[nz]


def _poly_mul(a, b, d: int):
    (ca, xa, la), (cb, xb, lb) = a, b
    codes = (ca[:, None] * d**lb + cb[None, :]).ravel()
    coefs = (xa[:, None] * xb[None, :]).ravel()
    return codes, coefs


@lru_cache(maxsize=None)
def lyndon_polynomial(w: Word, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor expansion (codes, coefficients) of the standard bracketing of ``w``."""
    if len(w) == 1:
        return np.array([w[0]], dtype=np.int64), np.ones(1, dtype=np.int64)
    u, v = standard_factorization(w)
    pu = (*lyndon_polynomial(u, d), len(u))
    pv = (*lyndon_polynomial(v, d), len(v))
    c1, x1 = _poly_mul(pu, pv, d)
    c2, x2 = _poly_mul(pv, pu, d)
    return _combine(np.concatenate([c1, c2]), np.concatenate([x1, -x2]))


def _mod2_power(codes, coefs, length: int, e: int, d: int):
    """``x^e`` in the tensor algebra over F2 (``e`` a power of two)."""
    coefs = coefs % 2
    codes, coefs = codes[coefs != 0], coefs[coefs != 0]
    while e > 1:
        c, x = _poly_mul((codes, coefs, length), (codes, coefs, length), d)
        codes, coefs = _combine(c, x % 2)
        coefs %= 2
        codes, coefs = codes[coefs != 0], coefs[coefs != 0]
        length *= 2
        e //= 2
    return codes, coefs


@dataclass(frozen=True)
class LieBasisElement:
    """Standard bracketing of a Lyndon word with its tensor expansion."""

    word: Word
    bracketing: Bracketing
    tensor_expansion: dict[Word, int]


@dataclass(frozen=True)
class RestrictedBasisElement:
    """``b^(2^j)`` for a Lyndon basis element ``b`` (over F2)."""

    word: Word
    exponent: int
    tensor_expansion: dict[Word, int]

    @property
    def key(self) -> Word:
        return self.word * self.exponent


class TensorVectors:
    """A batch of tensors of fixed degree: one sparse column per vector."""

    __slots__ = ("codes", "coefs", "cols", "n_vectors", "d", "n")

    def __init__(self, codes, coefs, cols, n_vectors: int, d: int, n: int):
        self.codes = np.asarray(codes, dtype=np.int64)
        self.coefs = np.asarray(coefs) if np.asarray(coefs).dtype == object else np.asarray(coefs, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.n_vectors = n_vectors
        self.d = d
        self.n = n

    def max_abs(self) -> int:
        if len(self.coefs) == 0:
            return 0
        if self.coefs.dtype == object:
            return max(abs(int(x)) for x in self.coefs)
        return int(np.abs(self.coefs).max())

    def as_matrix(self, ring: RingSpec, code_index: dict[int, int] | np.ndarray) -> ExactMatrix:
        """Coefficient matrix with rows indexed through sorted unique ``code_index`` codes."""
        idx = np.searchsorted(code_index, self.codes)
        if len(self.codes) and not np.array_equal(np.asarray(code_index)[idx], self.codes):
            raise KeyError("code outside index")
        return ExactMatrix(ring, (len(code_index), self.n_vectors), idx, self.cols, self.coefs)

    def apply_linear(self, f: ExactMatrix) -> TensorVectors:
        """Apply ``T^n(f)`` letter by letter; ``f`` maps R^d to R^(f.n_rows)."""
        if f.n_cols != self.d:
            raise ValueError(f"map of shape {f.shape} cannot act on tensors over {self.d} letters")
        d_t = f.n_rows
        if self.n > 0 and d_t ** self.n >= INT64_SAFE:
            raise OverflowError("tensor power too large to encode")
        csc = np.lexsort((f.rows, f.cols))
        tgt = f.rows[csc]
        val = f.vals[csc]
        ptr = np.zeros(self.d + 1, dtype=np.int64)
        np.add.at(ptr, f.cols + 1, 1)
        ptr = np.cumsum(ptr)
        coefs = self.coefs
        if coefs.dtype != object and self.max_abs() * max(1, f.max_abs()) ** self.n >= INT64_SAFE:
            coefs = coefs.astype(object)
        if coefs.dtype == object:
            val = val.astype(object)
        letters = decode_codes(self.codes, self.d, self.n)
        codes = np.zeros(len(self.codes), dtype=np.int64)
        cols = self.cols
        for j in range(self.n):
            lj = letters[:, j]
            cnt = ptr[lj + 1] - ptr[lj]
            rep = np.repeat(np.arange(len(lj)), cnt)
            within = np.arange(len(rep)) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            idx = ptr[lj][rep] + within
            letters = letters[rep]
            codes = codes[rep] * d_t + tgt[idx]
            coefs = coefs[rep] * val[idx]
            cols = cols[rep]
        return TensorVectors(codes, coefs, cols, self.n_vectors, d_t, self.n)

    @staticmethod
    def product(x: TensorVectors, y: TensorVectors) -> TensorVectors:
        """Columnwise tensor product ``x_c (x) y_c`` (same number of columns)."""
        if x.d != y.d or x.n_vectors != y.n_vectors:
            raise ValueError("incompatible tensor batches")
        d = x.d
        codes, coefs, cols = [], [], []
        by_col_y = defaultdict(list)
        for i, c in enumerate(y.cols.tolist()):
            by_col_y[c].append(i)
        for c in range(x.n_vectors):
            ix = np.flatnonzero(x.cols == c)
            iy = np.asarray(by_col_y.get(c, []), dtype=np.int64)
            if len(ix) == 0 or len(iy) == 0:
                continue
            codes.append((x.codes[ix][:, None] * d**y.n + y.codes[iy][None, :]).ravel())
            coefs.append((x.coefs[ix][:, None] * y.coefs[iy][None, :]).ravel())
            cols.append(np.full(len(ix) * len(iy), c, dtype=np.int64))
        if not codes:
            return TensorVectors([], [], [], x.n_vectors, d, x.n + y.n)
        return TensorVectors(
            np.concatenate(codes), np.concatenate(coefs), np.concatenate(cols), x.n_vectors, d, x.n + y.n
        )

    def __sub__(self, other: TensorVectors) -> TensorVectors:
        coefs = np.concatenate([self.coefs.astype(object), -other.coefs.astype(object)]) if (
            self.coefs.dtype == object or other.coefs.dtype == object
        ) else np.concatenate([self.coefs, -other.coefs])
        return TensorVectors(
            np.concatenate([self.codes, other.codes]),
            coefs,
            np.concatenate([self.cols, other.cols]),
            self.n_vectors,
            self.d,
            self.n,
        )


class LieBasis:
    """Basis of ``L^n(R^d)`` (or of the restricted power over F2) inside ``T^n(R^d)``."""

    def __init__(self, d: int, n: int, restricted: bool = False):
        if n < 1 or d < 0:
            raise ValueError("need d >= 0, n >= 1")
        self.d, self.n, self.restricted = d, n, restricted
        entries = []  # (key code, base word, exponent, codes, coefs)
        e = 1
        while n % e == 0 and (e == 1 or restricted):
            m = n // e
            for w in lyndon_words(d, m):
                codes, coefs = lyndon_polynomial(w, d)
                if e > 1:
                    codes, coefs = _mod2_power(codes, coefs, m, e, d)
                elif restricted:
                    coefs = coefs % 2
                    codes, coefs = codes[coefs != 0], coefs[coefs != 0]
                entries.append((encode(w * e, d), w, e, codes, coefs))
            e *= 2
        entries.sort(key=lambda t: t[0])
        self.keys = np.array([t[0] for t in entries], dtype=np.int64)
        self.words = [t[1] for t in entries]
        self.exponents = [t[2] for t in entries]
        lens = np.array([len(t[3]) for t in entries], dtype=np.int64)
        self.ptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        self.exp_codes = np.concatenate([t[3] for t in entries]) if entries else np.zeros(0, np.int64)
        self.exp_coefs = np.concatenate([t[4] for t in entries]) if entries else np.zeros(0, np.int64)
        self._minv: dict[RingSpec, ExactMatrix] = {}
        self._expansion: dict[RingSpec, ExactMatrix] = {}
        self._all_codes: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.keys)

    def key_words(self) -> list[Word]:
        return [w * e for w, e in zip(self.words, self.exponents)]

    def element(self, i: int) -> TensorVectors:
        s, t = self.ptr[i], self.ptr[i + 1]
        return TensorVectors(self.exp_codes[s:t], self.exp_coefs[s:t], np.zeros(t - s), 1, self.d, self.n)

    def expand(self, x: ExactMatrix | None = None) -> TensorVectors:
        """Tensor expansions of the columns of the coordinate matrix ``x`` (default: identity)."""
        if x is None:
            cols = np.repeat(np.arange(self.dim), np.diff(self.ptr))
            return TensorVectors(self.exp_codes, self.exp_coefs, cols, self.dim, self.d, self.n)
        if x.n_rows != self.dim:
            raise ValueError("coordinate vector length mismatch")
        b, c, v = x.rows, x.cols, x.vals
        cnt = self.ptr[b + 1] - self.ptr[b]
        rep = np.repeat(np.arange(len(b)), cnt)
        within = np.arange(len(rep)) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        idx = self.ptr[b][rep] + within
        coefs = self.exp_coefs[idx]
        vv = v[rep]
        if vv.dtype == object or int(np.abs(coefs).max(initial=0)) * x.max_abs() >= INT64_SAFE:
            coefs = coefs.astype(object)
            vv = vv.astype(object)
        return TensorVectors(self.exp_codes[idx], coefs * vv, c[rep], x.n_cols, self.d, self.n)

    def minv(self, ring: RingSpec) -> ExactMatrix:
        """Inverse of the unitriangular key-coordinate matrix, reduced into ``ring``."""
        if ring not in self._minv:
            if self.restricted and ring.characteristic != 2:
                raise UnsupportedRing("restricted Lie powers are only defined over F2")
            base = self._minv_integral()
            self._minv[ring] = base.change_ring(ring) if ring.is_field else base
        return self._minv[ring]

    def _content_blocks(self) -> list[np.ndarray]:
        letters = decode_codes(self.keys, max(self.d, 1), self.n)
        counts = np.zeros((self.dim, max(self.d, 1)), dtype=np.int64)
        for j in range(self.n):
            np.add.at(counts, (np.arange(self.dim), letters[:, j]), 1)
        groups: dict[bytes, list[int]] = defaultdict(list)
        for i, row in enumerate(counts):
            groups[row.tobytes()].append(i)
        return [np.array(g, dtype=np.int64) for g in groups.values()]

    def _minv_integral(self) -> ExactMatrix:
        ring = ZZ
        dim = self.dim
        if dim == 0:
            return ExactMatrix.zeros(ring, 0, 0)
        cols = np.repeat(np.arange(dim), np.diff(self.ptr))
        pos = np.searchsorted(self.keys, self.exp_codes)
        pos_c = np.minimum(pos, dim - 1)
        hit = self.keys[pos_c] == self.exp_codes
        m_rows, m_cols, m_vals = pos_c[hit], cols[hit], self.exp_coefs[hit]
        if np.any(m_rows < m_cols):
            raise AssertionError("key-coordinate matrix is not lower triangular")
        out_r, out_c, out_v = [], [], []
        block_of = np.empty(dim, dtype=np.int64)
        local = np.empty(dim, dtype=np.int64)
        blocks = self._content_blocks()
        for bi, blk in enumerate(blocks):
            block_of[blk] = bi
            local[blk] = np.arange(len(blk))
        per_block = defaultdict(list)
        for r, c, v in zip(m_rows.tolist(), m_cols.tolist(), m_vals.tolist()):
            if block_of[r] != block_of[c]:
                raise AssertionError("tensor expansion leaves its content block")
            per_block[block_of[r]].append((local[r], local[c], v))
        for bi, blk in enumerate(blocks):
            b = len(blk)
            lo = np.zeros((b, b), dtype=np.int64)
            for r, c, v in per_block[bi]:
                lo[r, c] = v
            inv = _unitriangular_inverse(lo)
            rr, cc = np.nonzero(inv if inv.dtype != object else inv != 0)
            out_r.append(blk[rr])
            out_c.append(blk[cc])
            out_v.append(inv[rr, cc])
        vals = np.concatenate(out_v)
        return ExactMatrix(ring, (dim, dim), np.concatenate(out_r), np.concatenate(out_c), vals)

    def express(self, t: TensorVectors, ring: RingSpec, check: bool = False) -> ExactMatrix:
        """Coordinates of tensors that lie in the span of this basis."""
        if t.d != self.d or t.n != self.n:
            raise ValueError("tensor degree or alphabet mismatch")
        if self.dim == 0:
            if check and not t.as_matrix(ring, np.unique(t.codes)).is_zero():
                raise NotInSpan("nonzero tensor in a zero Lie power")
            return ExactMatrix.zeros(ring, 0, t.n_vectors)
        pos = np.minimum(np.searchsorted(self.keys, t.codes), self.dim - 1)
        hit = self.keys[pos] == t.codes
        y = ExactMatrix(ring, (self.dim, t.n_vectors), pos[hit], t.cols[hit], t.coefs[hit])
        a = self.minv(ring) @ y
        if check:
            self.verify_expression(t, a, ring)
        return a

    def verify_expression(self, t: TensorVectors, a: ExactMatrix, ring: RingSpec) -> None:
        back = self.expand(a)
        codes = np.unique(np.concatenate([back.codes, t.codes]))
        if back.as_matrix(ring, codes) != t.as_matrix(ring, codes):
            raise NotInSpan("tensor does not lie in the Lie span")

    def map(self, f: ExactMatrix, target: LieBasis, x: ExactMatrix | None = None, check: bool = False) -> ExactMatrix:
        """Matrix of the induced map on the columns of ``x`` (default: the whole basis)."""
        if self.restricted != target.restricted or self.n != target.n:
            raise ValueError("source and target bases differ in kind")
        if f.n_cols != self.d or f.n_rows != target.d:
            raise ValueError(f"map {f.shape} does not go from rank {self.d} to rank {target.d}")
        n_out = self.dim if x is None else x.n_cols
        if target.dim == 0 or n_out == 0:
            return ExactMatrix.zeros(f.ring, target.dim, n_out)
        if self.dim == 0:
            return ExactMatrix.zeros(f.ring, target.dim, n_out)
        t = self.expand(x).apply_linear(f)
        return target.express(t, f.ring, check=check)


def _unitriangular_inverse(lo: np.ndarray) -> np.ndarray:
    """Exact inverse of a lower unitriangular integer matrix."""
    b = lo.shape[0]
    if b == 1:
        return np.ones((1, 1), dtype=np.int64)
    inv = np.zeros((b, b), dtype=np.int64)
    for r in range(b):
        inv[r] = -(lo[r, :r] @ inv[:r])
        inv[r, r] = 1
    bound = int(np.abs(lo).max()) * int(np.abs(inv).max()) * b
    if bound < INT64_SAFE and np.array_equal(lo @ inv, np.eye(b, dtype=np.int64)):
        return inv
    lo_o = lo.astype(object)
    inv = np.zeros((b, b), dtype=object)
    for r in range(b):
        inv[r] = -(lo_o[r, :r] @ inv[:r]) if r else inv[r]
        inv[r, r] = 1
    return inv


@lru_cache(maxsize=256)
def lie_basis_cached(d: int, n: int, restricted: bool = False) -> LieBasis:
    return LieBasis(d, n, restricted)


def _expansion_dict(codes, coefs, d: int, n: int, ring: RingSpec) -> dict[Word, int]:
    out = {}
    letters = decode_codes(np.asarray(codes, dtype=np.int64), max(d, 1), n)
    for row, c in zip(letters.tolist(), coefs.tolist()):
        c = ring.reduce(int(c))
        if c:
            out[tuple(row)] = c
    return out


def lie_basis(d: int, n: int, ring: RingSpec = ZZ) -> list[LieBasisElement]:
    """Lyndon basis of ``L^n(R^d)`` with standard bracketings and tensor expansions."""
    basis = lie_basis_cached(d, n)
    out = []
    for i, w in enumerate(basis.words):
        s, t = basis.ptr[i], basis.ptr[i + 1]
        out.append(
            LieBasisElement(w, standard_bracketing(w), _expansion_dict(basis.exp_codes[s:t], basis.exp_coefs[s:t], d, n, ring))
        )
    return out


def restricted_lie_basis(d: int, n: int) -> list[RestrictedBasisElement]:
    """Basis ``{b^(2^j)}`` of the restricted Lie power over F2, ordered by key word."""
    from ..exactlinalg import GF2

    basis = lie_basis_cached(d, n, True)
    out = []
    for i, (w, e) in enumerate(zip(basis.words, basis.exponents)):
        s, t = basis.ptr[i], basis.ptr[i + 1]
        out.append(RestrictedBasisElement(w, e, _expansion_dict(basis.exp_codes[s:t], basis.exp_coefs[s:t], d, n, GF2)))
    return out
