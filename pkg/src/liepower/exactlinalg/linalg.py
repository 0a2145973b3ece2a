"""Rank, kernels, Smith normal form and homology over Z and Z/p."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import NamedTuple

from .gf2 import gf2_rank
from .matrix import DimensionMismatch, ExactMatrix
from .ring import RingSpec


class CompositionNotZero(ValueError):
    pass


class NotSolvable(ValueError):
    pass


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated module: ``R^free_rank`` plus torsion ``Z/d1 + Z/d2 + ...``."""

    ring: RingSpec
    free_rank: int
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.ring.is_field and self.torsion:
            raise ValueError("torsion over a field")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("invariant factors must be >= 2")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def dimension(self) -> int:
        return self.free_rank

    def __str__(self) -> str:
        base = "Z" if self.ring.characteristic == 0 else f"F{self.ring.characteristic}"
        parts = []
        if self.free_rank == 1:
            parts.append(base)
        elif self.free_rank > 1:
            parts.append(f"{base}^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.name,
            "free_rank": self.free_rank,
            "torsion": [str(t) for t in self.torsion],
            "trivial": self.is_trivial,
            "text": str(self),
        }


# sparse unit-pivot elimination


def _eliminate_units(m: ExactMatrix) -> tuple[int, dict[int, dict[int, int]]]:
    """Eliminate unit pivots, returning their count and the non-unit remainder.

    Eliminating a unit pivot removes one row and one column and preserves the
    cokernel up to a summand of rank one, so invariant factors and rank carry
    over unchanged.  Over a field the remainder is always empty.
    """
    ring = m.ring
    p = ring.characteristic
    rows = {r: dict(d) for r, d in m.row_dicts().items()}
    cols: dict[int, set[int]] = {}
    for r, d in rows.items():
        for c in d:
            cols.setdefault(c, set()).add(r)
    pivots = 0
    while cols:
        best = None
        for c, rs in sorted(cols.items(), key=lambda kv: len(kv[1])):
            cand = [r for r in rs if ring.is_unit(rows[r][c])]
            if cand:
                best = (min(cand, key=lambda r: len(rows[r])), c)
                break
            if p:
                break
        if best is None:
            break
        r, c = best
        prow = rows.pop(r)
        inv = ring.inverse(prow[c])
        for c2 in prow:
            cols[c2].discard(r)
        for r2 in list(cols.pop(c)):
            row2 = rows[r2]
            f = row2[c] * inv
            for c2, v in prow.items():
                nv = row2.get(c2, 0) - f * v
                if p:
                    nv %= p
                if nv:
                    if c2 not in row2 and c2 != c:
                        cols[c2].add(r2)
                    row2[c2] = nv
                else:
                    if c2 in row2:
                        del row2[c2]
                        if c2 != c:
                            cols[c2].discard(r2)
            row2.pop(c, None)
            if not row2:
                del rows[r2]
        for c2 in [c2 for c2 in prow if c2 in cols and not cols[c2]]:
            del cols[c2]
        pivots += 1
    return pivots, {r: d for r, d in rows.items() if d}


def _dense_diagonal(rows: dict[int, dict[int, int]]) -> list[int]:
    """Invariant factors of a small dense integer remainder (no transforms)."""
    if not rows:
        return []
    col_ids = sorted({c for d in rows.values() for c in d})
    cidx = {c: j for j, c in enumerate(col_ids)}
    a = []
    for d in rows.values():
        row = [0] * len(col_ids)
        for c, v in d.items():
            row[cidx[c]] = v
        a.append(row)
    diag, _, _, _ = _snf_dense(a, track=False)
    return _normalize_diagonal([x for x in diag if x])


def _normalize_diagonal(diag: list[int]) -> list[int]:
    """Turn any nonzero diagonal into the invariant-factor chain via gcd/lcm swaps."""
    d = sorted(abs(x) for x in diag)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return sorted(d)


def invariant_factors(m: ExactMatrix) -> list[int]:
    """Nonzero invariant factors ``d1 | d2 | ...`` (over a field: ``[1] * rank``)."""
    if m.ring.characteristic == 2 and m.nnz > 4096:
        return [1] * gf2_rank(m)
    n_units, rest = _eliminate_units(m)
    return [1] * n_units + _dense_diagonal(rest)


def rank(m: ExactMatrix) -> int:
    """Rank over the fraction field (Q for Z)."""
    if m.nnz == 0:
        return 0
    if m.ring.characteristic == 2:
        return gf2_rank(m)
    return len(invariant_factors(m))


# dense Smith normal form with transforms


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_dense(a: list[list[int]], track: bool = True):
    """Smith form ``U A V = D`` on a dense list-of-lists (modified in place).

    Pivots on the entry of minimal absolute value to limit coefficient growth.
    Returns ``(diag, U, V, V_inv)``; transforms are ``None`` when ``track`` is false.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    U = _identity(m) if track else None
    V = _identity(n) if track else None
    Vi = _identity(n) if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rs, rd = a[src], a[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if track:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            vs, vd = Vi[src], Vi[dst]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            piv = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    if a[t][j]:
                        clean = False
            if not clean:
                cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                U[t] = [-x for x in U[t]]
        diag.append(a[t][t])
    return diag, U, V, Vi


class SmithForm(NamedTuple):
    factors: list[int]
    U: ExactMatrix
    V: ExactMatrix
    V_inv: ExactMatrix


def smith_normal_form(m: ExactMatrix) -> SmithForm:
    """Invariant factors and unimodular ``U, V`` with ``U @ m @ V`` diagonal."""
    if m.ring.is_field:
        raise ValueError("smith_normal_form is defined over Z only")
    a = m.to_dense()
    if m.n_rows == 0 or m.n_cols == 0:
        diag: list[int] = []
        U, V, Vi = _identity(m.n_rows), _identity(m.n_cols), _identity(m.n_cols)
    else:
        diag, U, V, Vi = _snf_dense(a, track=True)
    ring = m.ring
    return SmithForm(
        [d for d in diag if d],
        ExactMatrix.from_dense(ring, U, (m.n_rows, m.n_rows)),
        ExactMatrix.from_dense(ring, V, (m.n_cols, m.n_cols)),
        ExactMatrix.from_dense(ring, Vi, (m.n_cols, m.n_cols)),
    )


# fields


def _rref_field(m: ExactMatrix) -> tuple[list[int], list[list[int]]]:
    """Reduced row echelon form over Z/p as dense rows; returns (pivot columns, rows)."""
    p = m.ring.characteristic
    a = [[x % p for x in row] for row in m.to_dense()]
    n = m.n_cols
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return pivots, a[:r]


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns spanning ``ker m``; over Z a basis of the (saturated) kernel lattice."""
    ring = m.ring
    n = m.n_cols
    if m.nnz == 0:
        return ExactMatrix.identity(ring, n)
    if ring.is_field:
        p = ring.characteristic
        pivots, rref = _rref_field(m)
        pivset = set(pivots)
        cols = []
        for f in (c for c in range(n) if c not in pivset):
            vec = {f: 1}
            for row, pc in zip(rref, pivots):
                if row[f]:
                    vec[pc] = (-row[f]) % p
            cols.append(vec)
        return ExactMatrix.from_columns(ring, n, cols) if cols else ExactMatrix.zeros(ring, n, 0)
    snf = smith_normal_form(m)
    r = len(snf.factors)
    return snf.V.select_columns(range(r, n))


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Some exact ``x`` with ``a @ x == b``; raises :class:`NotSolvable` otherwise."""
    if a.n_rows != b.n_rows:
        raise DimensionMismatch(f"solve: {a.shape} vs {b.shape}")
    ring = a.ring
    if ring.is_field:
        p = ring.characteristic
        aug = a.hstack(b)
        pivots, rref = _rref_field(aug)
        if any(pc >= a.n_cols for pc in pivots):
            raise NotSolvable("right-hand side outside the column space")
        cols = []
        for j in range(b.n_cols):
            cols.append({pc: row[a.n_cols + j] % p for row, pc in zip(rref, pivots) if row[a.n_cols + j] % p})
        return ExactMatrix.from_columns(ring, a.n_cols, cols) if cols else ExactMatrix.zeros(ring, a.n_cols, 0)
    snf = smith_normal_form(a)
    y = (snf.U @ b).to_dense()
    r = len(snf.factors)
    z = [[0] * b.n_cols for _ in range(a.n_cols)]
    for i, row in enumerate(y):
        for j, v in enumerate(row):
            if not v:
                continue
            if i >= r or v % snf.factors[i]:
                raise NotSolvable("right-hand side outside the image lattice")
            z[i][j] = v // snf.factors[i]
    return snf.V @ ExactMatrix.from_dense(ring, z, (a.n_cols, b.n_cols))


def in_image(a: ExactMatrix, v: ExactMatrix) -> bool:
    """Whether every column of ``v`` lies in the image (lattice) of ``a``."""
    if a.ring.is_field:
        return rank(a.hstack(v)) == rank(a)
    try:
        solve(a, v)
    except NotSolvable:
        return False
    return True


# homology


def _check_pair(d_in: ExactMatrix, d_out: ExactMatrix, check: bool):
    if d_in.ring != d_out.ring:
        raise ValueError("ring mismatch")
    if d_in.n_rows != d_out.n_cols:
        raise DimensionMismatch(f"d_in {d_in.shape} does not compose with d_out {d_out.shape}")
    if check and not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out @ d_in != 0")


def homology_at(d_in: ExactMatrix, d_out: ExactMatrix, check: bool = True) -> HomologyGroup:
    """``ker(d_out) / im(d_in)``.

    Over Z the torsion of the homology equals the torsion of ``coker(d_in)``
    (the rest of that cokernel embeds in a free module), so only the invariant
    factors of ``d_in`` and the rank of ``d_out`` are needed.
    """
    _check_pair(d_in, d_out, check)
    ring = d_in.ring
    n = d_in.n_rows
    if ring.is_field:
        return HomologyGroup(ring, n - rank(d_out) - rank(d_in))
    f_in = invariant_factors(d_in)
    free = n - rank(d_out) - len(f_in)
    return HomologyGroup(ring, free, tuple(f for f in f_in if f > 1))


def homology_via_kernel_lattice(d_in: ExactMatrix, d_out: ExactMatrix) -> HomologyGroup:
    """Independent route: SNF of ``d_in`` written in a kernel-lattice basis of ``d_out``."""
    _check_pair(d_in, d_out, True)
    ring = d_in.ring
    k = kernel_basis(d_out)
    if k.n_cols == 0:
        return HomologyGroup(ring, 0)
    x = solve(k, d_in)
    if ring.is_field:
        return HomologyGroup(ring, k.n_cols - rank(x))
    f = smith_normal_form(x).factors if x.nnz else []
    return HomologyGroup(ring, k.n_cols - len(f), tuple(v for v in f if v > 1))
