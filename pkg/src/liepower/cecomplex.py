"""Weight-graded Chevalley-Eilenberg complex of the free Lie algebra on ``R^d``.

A basis element of ``C_i^(n)`` is a wedge ``x_1 ^ ... ^ x_i`` of Lyndon basis
elements with weights summing to ``n``.  Internally it is a sorted tuple of
``(weight, index)`` pairs; sorting by weight realizes the isomorphism with
``Lambda^{k_1} L^1 (x) ... (x) Lambda^{k_n} L^n``.
"""

from __future__ import annotations

from bisect import bisect_left
from functools import lru_cache
from itertools import combinations, product
from math import comb

import numpy as np

from .chain import ChainComplex
from .exactlinalg import ExactMatrix, HomologyGroup, RingSpec, ZZ
from .functors import BasedModule, LieLabel, SummandLabel, TensorLabel, WedgeLabel, lie_basis_cached, witt_dimension
from .functors.lie import TensorVectors
from .functors.modules import bracket_over, letter_labels
from .functors.words import standard_bracketing

CEKey = tuple[tuple[int, int], ...]


class DegreeOutOfRange(ValueError):
    pass


def graded_indices(n: int, i: int) -> list[tuple[int, ...]]:
    """Tuples ``(k_1..k_n)`` with ``sum k_j = i`` and ``sum j k_j = n``, lexicographic."""
    out = []

    def rec(j: int, left_count: int, left_weight: int, acc: list[int]):
        if j > n:
            if left_count == 0 and left_weight == 0:
                out.append(tuple(acc))
            return
        for k in range(min(left_count, left_weight // j) + 1):
            acc.append(k)
            rec(j + 1, left_count - k, left_weight - j * k, acc)
            acc.pop()

    if n >= 1 and i >= 0:
        rec(1, i, n, [])
    return out


def ce_dimension(n: int, i: int, d: int) -> int:
    total = 0
    for ks in graded_indices(n, i):
        term = 1
        for j, k in enumerate(ks, start=1):
            if k:
                term *= comb(witt_dimension(d, j) if d else 0, k)
        total += term
    return total


@lru_cache(maxsize=None)
def _ce_keys(n: int, i: int, d: int) -> tuple[tuple[tuple[int, ...], CEKey], ...]:
    keys = []
    for ks in graded_indices(n, i):
        parts = []
        for j, k in enumerate(ks, start=1):
            if k:
                size = witt_dimension(d, j) if d else 0
                parts.append([tuple((j, x) for x in c) for c in combinations(range(size), k)])
        for choice in product(*parts):
            keys.append((ks, tuple(p for part in choice for p in part)))
    return tuple(keys)


@lru_cache(maxsize=None)
def _ce_index(n: int, i: int, d: int) -> dict[CEKey, int]:
    return {key: pos for pos, (_, key) in enumerate(_ce_keys(n, i, d))}


def _ce_label(ks: tuple[int, ...], key: CEKey, d: int):
    leaves = letter_labels(d)
    groups = []
    for j, k in enumerate(ks, start=1):
        if k:
            words = lie_basis_cached(d, j).words
            groups.append(
                WedgeLabel(tuple(LieLabel(bracket_over(standard_bracketing(words[x]), leaves)) for (w, x) in key if w == j))
            )
    return SummandLabel(ks, TensorLabel(tuple(groups)) if len(groups) > 1 else groups[0])


def ce_components(n: int, d: int, ring: RingSpec = ZZ) -> dict[int, BasedModule]:
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    out = {}
    for i in range(1, n + 1):
        keys = _ce_keys(n, i, d)
        out[i] = BasedModule(ring, len(keys), lambda keys=keys: [_ce_label(ks, key, d) for ks, key in keys])
    return out


@lru_cache(maxsize=None)
def bracket_table(d: int, a: int, b: int) -> tuple[tuple[dict[int, int], ...], ...]:
    """``table[u][v]``: coordinates over Z of ``[P_u, P_v]`` in the weight ``a+b`` Lyndon basis."""
    ba, bb, bt = lie_basis_cached(d, a), lie_basis_cached(d, b), lie_basis_cached(d, a + b)
    na, nb = ba.dim, bb.dim
    if na == 0 or nb == 0:
        return tuple(tuple({} for _ in range(nb)) for _ in range(na))
    ea, eb = ba.expand(), bb.expand()
    ia = np.repeat(np.arange(len(ea.codes)), len(eb.codes))
    ib = np.tile(np.arange(len(eb.codes)), len(ea.codes))
    cols = ea.cols[ia] * nb + eb.cols[ib]
    coefs = ea.coefs[ia] * eb.coefs[ib]
    uv = ea.codes[ia] * d**b + eb.codes[ib]
    vu = eb.codes[ib] * d**a + ea.codes[ia]
    t = TensorVectors(
        np.concatenate([uv, vu]), np.concatenate([coefs, -coefs]), np.concatenate([cols, cols]), na * nb, d, a + b
    )
    m = bt.express(t, ZZ)
    colmap = m.column_dicts()
    return tuple(tuple(dict(colmap.get(u * nb + v, {})) for v in range(nb)) for u in range(na))


def ce_differential(n: int, d: int, i: int, ring: RingSpec = ZZ) -> ExactMatrix:
    """Matrix of ``C_i^(n) -> C_{i-1}^(n)`` given by
    ``x_1^...^x_i -> sum_{s<t} (-1)^(s+t) [x_s,x_t] ^ x_1 ^ ..^x_s^..^x_t^.. ^ x_i``
    with 1-based positions, wedges re-sorted with the permutation sign.
    """
    if not 2 <= i <= n:
        raise DegreeOutOfRange(f"differential d_{i} undefined for weight {n}")
    src = _ce_keys(n, i, d)
    tgt_index = _ce_index(n, i - 1, d)
    rows, cols, vals = [], [], []
    for col, (_, key) in enumerate(src):
        for s, t in combinations(range(i), 2):
            (a, u), (b, v) = key[s], key[t]
            br = bracket_table(d, a, b)[u][v]
            if not br:
                continue
            sign = -1 if (s + t) % 2 else 1  # (s+1)+(t+1) has the parity of s+t
            rest = key[:s] + key[s + 1 : t] + key[t + 1 :]
            for y, c in br.items():
                yk = (a + b, y)
                pos = bisect_left(rest, yk)
                if pos < len(rest) and rest[pos] == yk:
                    continue
                new = rest[:pos] + (yk,) + rest[pos:]
                rows.append(tgt_index[new])
                cols.append(col)
                vals.append(sign * c * (-1 if pos % 2 else 1))
    return ExactMatrix(ring, (len(tgt_index), len(src)), rows, cols, np.array(vals, dtype=object))


def ce_complex(n: int, d: int, ring: RingSpec = ZZ) -> ChainComplex:
    comps = ce_components(n, d, ring)
    diffs = {i: ce_differential(n, d, i, ring) for i in range(2, n + 1)}
    return ChainComplex(ring, comps, diffs)


def ce_homology(n: int, d: int, ring: RingSpec = ZZ) -> dict[int, HomologyGroup]:
    """Homology in degrees ``0..n+1`` (zero components padded)."""
    cx = ce_complex(n, d, ring)
    return {q: cx.homology(q) for q in range(0, n + 2)}
