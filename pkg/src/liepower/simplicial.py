"""Truncated degreewise-free simplicial modules and their homotopy groups."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from .chain import ChainComplex
from .exactlinalg import ExactMatrix, HomologyGroup, RingMismatch, RingSpec, kernel_basis, solve
from .functors import BasedModule, FunctorExpr, TensorLabel, apply_on_morphism, apply_on_object
from .functors.apply import check_ring


class TruncationTooShallow(ValueError):
    pass


class ResourceCap(RuntimeError):
    pass


@dataclass(frozen=True)
class Surjection:
    """Monotone surjection ``[q] -> [m]`` recorded by the positions where it steps up."""

    jumps: tuple[int, ...]

    def __str__(self) -> str:
        return "s{" + ",".join(map(str, self.jumps)) + "}"


@dataclass(frozen=True)
class SimplicialElement:
    degree: int
    vector: ExactMatrix  # dim A_q x 1

    def __post_init__(self):
        if self.vector.n_cols != 1:
            raise ValueError("a simplicial element is a single column")

    def is_zero(self) -> bool:
        return self.vector.is_zero()


class SimplicialModule:
    """Simplicial module known in degrees ``0..truncation``.

    Faces ``d_i: A_q -> A_{q-1}`` exist for ``1 <= q <= N``; degeneracies
    ``s_i: A_q -> A_{q+1}`` for ``q < N``.  Maps are built lazily and cached.
    """

    def __init__(
        self,
        ring: RingSpec,
        truncation: int,
        module: Callable[[int], BasedModule],
        face: Callable[[int, int], ExactMatrix],
        degeneracy: Callable[[int, int], ExactMatrix],
        name: str = "",
    ):
        self.ring = ring
        self.truncation = truncation
        self.name = name
        self._module_fn, self._face_fn, self._degen_fn = module, face, degeneracy
        self._modules: dict[int, BasedModule] = {}
        self._faces: dict[tuple[int, int], ExactMatrix] = {}
        self._degens: dict[tuple[int, int], ExactMatrix] = {}

    def __repr__(self) -> str:
        return f"SimplicialModule({self.name or '?'}, {self.ring}, N={self.truncation})"

    def _check_degree(self, q: int):
        if not 0 <= q <= self.truncation:
            raise TruncationTooShallow(f"degree {q} outside truncation {self.truncation}")

    def module(self, q: int) -> BasedModule:
        self._check_degree(q)
        if q not in self._modules:
            self._modules[q] = self._module_fn(q)
        return self._modules[q]

    def dim(self, q: int) -> int:
        return self.module(q).dim

    def dims(self) -> list[int]:
        return [self.dim(q) for q in range(self.truncation + 1)]

    def face(self, q: int, i: int) -> ExactMatrix:
        self._check_degree(q)
        if not (q >= 1 and 0 <= i <= q):
            raise ValueError(f"no face d_{i} in degree {q}")
        if (q, i) not in self._faces:
            m = self._face_fn(q, i)
            assert m.shape == (self.dim(q - 1), self.dim(q))
            self._faces[q, i] = m
        return self._faces[q, i]

    def degeneracy(self, q: int, i: int) -> ExactMatrix:
        self._check_degree(q + 1)
        if not 0 <= i <= q:
            raise ValueError(f"no degeneracy s_{i} in degree {q}")
        if (q, i) not in self._degens:
            m = self._degen_fn(q, i)
            assert m.shape == (self.dim(q + 1), self.dim(q))
            self._degens[q, i] = m
        return self._degens[q, i]

    def identity_failures(self) -> list[str]:
        """Every simplicial identity that fails within the truncation (empty when all hold)."""
        bad = []
        N = self.truncation
        for q in range(2, N + 1):
            for j in range(q + 1):
                for i in range(j):
                    if self.face(q - 1, i) @ self.face(q, j) != self.face(q - 1, j - 1) @ self.face(q, i):
                        bad.append(f"d{i} d{j} = d{j - 1} d{i} at q={q}")
        for q in range(0, N - 1):
            for j in range(q + 1):
                for i in range(j + 1):
                    if self.degeneracy(q + 1, i) @ self.degeneracy(q, j) != self.degeneracy(q + 1, j + 1) @ self.degeneracy(q, i):
                        bad.append(f"s{i} s{j} = s{j + 1} s{i} at q={q}")
        for q in range(0, N):
            ident = ExactMatrix.identity(self.ring, self.dim(q))
            for j in range(q + 1):
                s = self.degeneracy(q, j)
                for i in range(q + 2):
                    lhs = self.face(q + 1, i) @ s
                    if i < j:
                        rhs = self.degeneracy(q - 1, j - 1) @ self.face(q, i)
                    elif i in (j, j + 1):
                        rhs = ident
                    else:
                        rhs = self.degeneracy(q - 1, j) @ self.face(q, i - 1)
                    if lhs != rhs:
                        bad.append(f"d{i} s{j} at q={q}")
        return bad


# Eilenberg-MacLane objects


def _jump_sets(q: int, m: int) -> list[tuple[int, ...]]:
    return list(combinations(range(1, q + 1), m))


def _values(jumps: tuple[int, ...], q: int) -> list[int]:
    vals, level, js = [], 0, set(jumps)
    for t in range(q + 1):
        if t in js:
            level += 1
        vals.append(level)
    return vals


def _jumps_of(vals: list[int], m: int) -> tuple[int, ...] | None:
    """Jump set of a monotone map given by its values, or None if not onto ``[m]``."""
    if not vals or vals[0] != 0 or vals[-1] != m:
        return None
    jumps = []
    for t in range(1, len(vals)):
        step = vals[t] - vals[t - 1]
        if step == 1:
            jumps.append(t)
        elif step != 0:
            return None
    return tuple(jumps)


def eilenberg_maclane(ring: RingSpec, m: int, truncation: int) -> SimplicialModule:
    """``K(R, m)``: degree ``q`` is free on monotone surjections ``[q] -> [m]``.

    Faces and degeneracies precompose with cofaces and codegeneracies; a
    composite that is no longer onto maps to zero.
    """
    if m < 1:
        raise ValueError("m >= 1")
    if truncation < m:
        raise TruncationTooShallow(f"K(R,{m}) needs truncation >= {m}")

    def module(q):
        return BasedModule(ring, len(_jump_sets(q, m)), lambda: [Surjection(j) for j in _jump_sets(q, m)])

    def reindex(q_src, q_tgt, transform):
        index = {j: k for k, j in enumerate(_jump_sets(q_tgt, m))}
        rows, cols = [], []
        for c, j in enumerate(_jump_sets(q_src, m)):
            new = _jumps_of(transform(_values(j, q_src)), m)
            if new is not None:
                rows.append(index[new])
                cols.append(c)
        return ExactMatrix(ring, (len(index), len(_jump_sets(q_src, m))), rows, cols, [1] * len(rows))

    def face(q, i):
        return reindex(q, q - 1, lambda v: v[:i] + v[i + 1 :])

    def degeneracy(q, i):
        return reindex(q, q + 1, lambda v: v[: i + 1] + v[i:])

    return SimplicialModule(ring, truncation, module, face, degeneracy, name=f"K({ring},{m})")


def apply_functor(F: FunctorExpr, A: SimplicialModule, max_dim: int | None = None, check: bool = False) -> SimplicialModule:
    """Degreewise ``F(A)``; raises :class:`ResourceCap` if a component exceeds ``max_dim``."""
    check_ring(F, A.ring)
    if max_dim is not None:
        for q in range(A.truncation + 1):
            if F.dim(A.dim(q)) > max_dim:
                raise ResourceCap(f"{F}({A.name}) has rank {F.dim(A.dim(q))} in degree {q} > cap {max_dim}")
    return SimplicialModule(
        A.ring,
        A.truncation,
        lambda q: apply_on_object(F, A.dim(q), A.ring),
        lambda q, i: apply_on_morphism(F, A.face(q, i), check),
        lambda q, i: apply_on_morphism(F, A.degeneracy(q, i), check),
        name=f"({F})({A.name})",
    )


def tensor_simplicial(A: SimplicialModule, B: SimplicialModule) -> SimplicialModule:
    if A.ring != B.ring:
        raise RingMismatch(f"{A.ring} vs {B.ring}")
    if A.truncation != B.truncation:
        raise TruncationTooShallow("tensor factors must share a truncation")

    def module(q):
        ma, mb = A.module(q), B.module(q)
        return BasedModule(A.ring, ma.dim * mb.dim, lambda: [TensorLabel((x, y)) for x in ma.labels for y in mb.labels])

    return SimplicialModule(
        A.ring,
        A.truncation,
        module,
        lambda q, i: A.face(q, i).kron(B.face(q, i)),
        lambda q, i: A.degeneracy(q, i).kron(B.degeneracy(q, i)),
        name=f"{A.name}(x){B.name}",
    )


def zero_simplicial(ring: RingSpec, truncation: int) -> SimplicialModule:
    return SimplicialModule(
        ring,
        truncation,
        lambda q: BasedModule(ring, 0),
        lambda q, i: ExactMatrix.zeros(ring, 0, 0),
        lambda q, i: ExactMatrix.zeros(ring, 0, 0),
        name="0",
    )


# chain complexes


def boundary(A: SimplicialModule, q: int) -> ExactMatrix:
    """Alternating face sum ``A_q -> A_{q-1}``."""
    out = ExactMatrix.zeros(A.ring, A.dim(q - 1), A.dim(q))
    for i in range(q + 1):
        f = A.face(q, i)
        out = out + (f if i % 2 == 0 else -f)
    return out


def unnormalized_complex(A: SimplicialModule) -> ChainComplex:
    comps = {q: A.module(q) for q in range(A.truncation + 1)}
    diffs = {q: boundary(A, q) for q in range(1, A.truncation + 1)}
    return ChainComplex(A.ring, comps, diffs)


def moore_complex(A: SimplicialModule) -> ChainComplex:
    """``N_q = ker d_1 ∩ ... ∩ ker d_q`` with differential ``d_0``, in explicit bases."""
    ring = A.ring
    bases: dict[int, ExactMatrix] = {0: ExactMatrix.identity(ring, A.dim(0))}
    for q in range(1, A.truncation + 1):
        stacked = None
        for i in range(1, q + 1):
            f = A.face(q, i)
            stacked = f if stacked is None else stacked.vstack(f)
        bases[q] = kernel_basis(stacked)
    comps = {q: BasedModule(ring, b.n_cols, lambda q=q, b=b: [f"N{q}.{j}" for j in range(b.n_cols)]) for q, b in bases.items()}
    diffs = {}
    for q in range(1, A.truncation + 1):
        image = A.face(q, 0) @ bases[q]
        if bases[q - 1].n_cols == 0 or bases[q].n_cols == 0:
            diffs[q] = ExactMatrix.zeros(ring, bases[q - 1].n_cols, bases[q].n_cols)
        else:
            diffs[q] = solve(bases[q - 1], image)
    return ChainComplex(ring, comps, diffs)


def homotopy_groups(A: SimplicialModule, up_to: int) -> list[HomologyGroup]:
    """``pi_0 .. pi_up_to`` from the unnormalized complex (needs truncation >= up_to + 1)."""
    if A.truncation < up_to + 1:
        raise TruncationTooShallow(f"pi_{up_to} needs truncation >= {up_to + 1}, have {A.truncation}")
    cache: dict[int, ExactMatrix] = {}

    def d(q):
        if q not in cache:
            cache[q] = boundary(A, q) if q >= 1 else ExactMatrix.zeros(A.ring, 0, A.dim(0))
        return cache[q]

    from .exactlinalg import homology_at

    return [homology_at(d(q + 1), d(q)) for q in range(up_to + 1)]
