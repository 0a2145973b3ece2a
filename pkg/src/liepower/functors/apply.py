"""Object and morphism action of functor expressions on free modules."""

from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from functools import lru_cache
from itertools import combinations, product

from ..exactlinalg import ExactMatrix, RingSpec, block_diag
from .expr import (
    Compose,
    DirectSum,
    ExteriorPower,
    FunctorExpr,
    Id,
    LiePower,
    RestrictedLiePower,
    Tensor,
    TensorPower,
)
from .lie import UnsupportedRing, lie_basis_cached
from .modules import (
    BasedModule,
    LieLabel,
    PowerLabel,
    SummandLabel,
    TensorLabel,
    WedgeLabel,
    bracket_over,
    letter_labels,
)
from .words import standard_bracketing


def check_ring(F: FunctorExpr, ring: RingSpec) -> None:
    if F.uses_restricted() and ring.characteristic != 2:
        raise UnsupportedRing("restricted Lie powers are only defined over F2")


def apply_on_object(F: FunctorExpr, d: int, ring: RingSpec) -> BasedModule:
    check_ring(F, ring)
    return BasedModule(ring, F.dim(d), lambda: functor_labels(F, letter_labels(d)))


def functor_labels(F: FunctorExpr, leaves: tuple) -> list:
    """Basis labels of ``F`` applied to a module with the given basis labels."""
    d = len(leaves)
    if isinstance(F, Id):
        return list(leaves)
    if isinstance(F, LiePower):
        basis = lie_basis_cached(d, F.n)
        return [LieLabel(bracket_over(standard_bracketing(w), leaves)) for w in basis.words]
    if isinstance(F, RestrictedLiePower):
        basis = lie_basis_cached(d, F.n, True)
        out = []
        for w, e in zip(basis.words, basis.exponents):
            b = bracket_over(standard_bracketing(w), leaves)
            out.append(LieLabel(b) if e == 1 else PowerLabel(b, e))
        return out
    if isinstance(F, ExteriorPower):
        return [WedgeLabel(tuple(leaves[i] for i in c)) for c in combinations(range(d), F.k)]
    if isinstance(F, TensorPower):
        return [TensorLabel(t) for t in product(leaves, repeat=F.n)]
    if isinstance(F, Compose):
        return functor_labels(F.outer, tuple(functor_labels(F.inner, leaves)))
    if isinstance(F, Tensor):
        return [TensorLabel(t) for t in product(*(functor_labels(f, leaves) for f in F.factors))]
    if isinstance(F, DirectSum):
        return [SummandLabel(i, lab) for i, s in enumerate(F.summands) for lab in functor_labels(s, leaves)]
    raise TypeError(f"not a functor expression: {F!r}")


def apply_on_morphism(F: FunctorExpr, f: ExactMatrix, check: bool = False) -> ExactMatrix:
    """Matrix of ``F(f)`` in the canonical bases of ``F(source)`` and ``F(target)``.

    With ``check`` set, every Lie-power re-expression is verified by expanding
    the result back into the tensor algebra.
    """
    ring = f.ring
    check_ring(F, ring)
    if isinstance(F, Id):
        return f
    if isinstance(F, (LiePower, RestrictedLiePower)):
        restricted = isinstance(F, RestrictedLiePower)
        src = lie_basis_cached(f.n_cols, F.n, restricted)
        tgt = lie_basis_cached(f.n_rows, F.n, restricted)
        return src.map(f, tgt, check=check)
    if isinstance(F, ExteriorPower):
        return exterior_power_matrix(f, F.k)
    if isinstance(F, TensorPower):
        out = f
        for _ in range(F.n - 1):
            out = out.kron(f)
        return out
    if isinstance(F, Compose):
        return apply_on_morphism(F.outer, apply_on_morphism(F.inner, f, check), check)
    if isinstance(F, Tensor):
        mats = [apply_on_morphism(g, f, check) for g in F.factors]
        out = mats[0]
        for m in mats[1:]:
            out = out.kron(m)
        return out
    if isinstance(F, DirectSum):
        return block_diag(ring, [apply_on_morphism(s, f, check) for s in F.summands])
    raise TypeError(f"not a functor expression: {F!r}")


@lru_cache(maxsize=64)
def _subset_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {c: i for i, c in enumerate(combinations(range(n), k))}


def wedge_columns(columns: list[dict[int, int]], ring: RingSpec) -> dict[tuple[int, ...], int]:
    """Expand ``v_1 ^ ... ^ v_k`` in the basis of increasing index tuples."""
    acc: dict[tuple[int, ...], int] = {(): 1}
    for col in columns:
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for t, c in acc.items():
            for i, a in col.items():
                pos = bisect_left(t, i)
                if pos < len(t) and t[pos] == i:
                    continue
                sign = -1 if (len(t) - pos) % 2 else 1
                nxt[t[:pos] + (i,) + t[pos:]] += sign * c * a
        acc = {t: ring.reduce(c) for t, c in nxt.items() if ring.reduce(c)}
        if not acc:
            break
    return acc


def exterior_power_matrix(f: ExactMatrix, k: int) -> ExactMatrix:
    """``Lambda^k(f)``: entries are the ``k x k`` minors of ``f``."""
    ring = f.ring
    if k == 0:
        return ExactMatrix.identity(ring, 1)
    rows_idx = _subset_index(f.n_rows, k)
    cols = f.column_dicts()
    out_cols = []
    for subset in combinations(range(f.n_cols), k):
        w = wedge_columns([cols.get(j, {}) for j in subset], ring)
        out_cols.append({rows_idx[t]: c for t, c in w.items()})
    n_rows = len(rows_idx)
    if not out_cols:
        return ExactMatrix.zeros(ring, n_rows, 0)
    return ExactMatrix.from_columns(ring, n_rows, out_cols)
