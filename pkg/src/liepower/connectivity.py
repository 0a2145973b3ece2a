"""Instance-level verification of connectivity bounds for Lie and exterior powers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactlinalg import ExactMatrix, HomologyGroup, RingSpec, ZZ, GF2, in_image
from .functors import ExteriorPower, FunctorExpr, LiePower, RestrictedLiePower, lie_basis_cached
from .functors.lie import TensorVectors
from .simplicial import (
    ResourceCap,
    SimplicialElement,
    SimplicialModule,
    TruncationTooShallow,
    apply_functor,
    boundary,
    eilenberg_maclane,
    homotopy_groups,
)

VERIFIED = "Verified"
VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"

DEFAULT_MAX_DIM_FIELD = 200_000
DEFAULT_MAX_DIM_Z = 3_000


def default_max_dim(ring: RingSpec) -> int:
    return DEFAULT_MAX_DIM_FIELD if ring.is_field else DEFAULT_MAX_DIM_Z


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("n >= 1")
    return (n - 1).bit_length()


@dataclass
class ConnectivityReport:
    functor: FunctorExpr
    ring: RingSpec
    k: int
    bound: int
    truncation: int
    groups: list[HomologyGroup] = field(default_factory=list)
    verdict: str = INCONCLUSIVE
    violated_degree: int | None = None
    reason: str | None = None

    @property
    def last_degree(self) -> int:
        """Highest degree whose vanishing is claimed: ``k + bound``."""
        return self.k + self.bound

    def to_json(self) -> dict:
        return {
            "functor": str(self.functor),
            "ring": self.ring.name,
            "k": self.k,
            "bound": self.bound,
            "claimed_vanishing_through": self.last_degree,
            "truncation": self.truncation,
            "pi": {str(i): g.to_json() for i, g in enumerate(self.groups)},
            "verdict": self.verdict,
            "violated_degree": self.violated_degree,
            "reason": self.reason,
        }


def verify_functor_connectivity(
    F: FunctorExpr,
    bound: int,
    k: int,
    ring: RingSpec,
    truncation: int | None = None,
    max_dim: int | None = None,
    extra_degree: bool = False,
) -> ConnectivityReport:
    """Check ``pi_i F(K(R, k+1)) = 0`` for ``i <= k + bound``.

    With ``extra_degree`` the group one above the bound is also computed, if
    the truncation reaches it; it never affects the verdict.
    """
    last = k + bound
    N = truncation if truncation is not None else last + 1 + int(extra_degree)
    if N < last + 1:
        raise TruncationTooShallow(f"vanishing through pi_{last} needs truncation >= {last + 1}, got {N}")
    report = ConnectivityReport(F, ring, k, bound, N)
    cap = default_max_dim(ring) if max_dim is None else max_dim
    try:
        X = apply_functor(F, eilenberg_maclane(ring, k + 1, N), max_dim=cap)
        top = last + 1 if extra_degree and N >= last + 2 else last
        report.groups = homotopy_groups(X, top)
    except ResourceCap as exc:
        report.reason = str(exc)
        return report
    for i, g in enumerate(report.groups[: last + 1]):
        if not g.is_trivial:
            report.verdict = VIOLATED
            report.violated_degree = i
            return report
    report.verdict = VERIFIED
    return report


def verify_lie_connectivity(n: int, k: int, ring: RingSpec, truncation: int | None = None, max_dim: int | None = None) -> ConnectivityReport:
    """``L^n`` raises connectivity by ``ceil(log2 n)`` on ``K(R, k+1)``."""
    return verify_functor_connectivity(LiePower(n), ceil_log2(n), k, ring, truncation, max_dim)


def verify_exterior_connectivity(
    n: int, k: int, ring: RingSpec, truncation: int | None = None, max_dim: int | None = None, extra_degree: bool = True
) -> ConnectivityReport:
    """``Lambda^n`` raises connectivity by ``n - 1``; also reports ``pi_{k+n}`` when reachable."""
    return verify_functor_connectivity(ExteriorPower(n), n - 1, k, ring, truncation, max_dim, extra_degree)


# sharpness


def lambda_tilde_1(x: SimplicialElement, A: SimplicialModule, weight: int) -> SimplicialElement:
    """``x -> [s_0 x, s_1 x]`` from ``L^weight(A)_q`` to ``L^(2 weight)(A)_(q+1)``."""
    q = x.degree
    if q < 1:
        raise ValueError("lambda_tilde_1 needs degree >= 1 (two degeneracies)")
    if q + 1 > A.truncation:
        raise TruncationTooShallow(f"degree {q + 1} beyond truncation {A.truncation}")
    ring = A.ring
    src = lie_basis_cached(A.dim(q), weight)
    tgt = lie_basis_cached(A.dim(q + 1), weight)
    out = lie_basis_cached(A.dim(q + 1), 2 * weight)
    if x.vector.n_rows != src.dim:
        raise ValueError("element is not in the stated Lie weight")
    if x.is_zero():
        return SimplicialElement(q + 1, ExactMatrix.zeros(ring, out.dim, 1))
    y0 = tgt.expand(src.map(A.degeneracy(q, 0), tgt, x.vector))
    y1 = tgt.expand(src.map(A.degeneracy(q, 1), tgt, x.vector))
    bracket = TensorVectors.product(y0, y1) - TensorVectors.product(y1, y0)
    return SimplicialElement(q + 1, out.express(bracket, ring, check=True))


@dataclass
class SharpnessResult:
    n: int
    k: int
    ring: RingSpec
    truncation: int
    witness: SimplicialElement | None
    is_cycle: bool | None = None
    is_boundary: bool | None = None
    group: HomologyGroup | None = None
    verdict: str = INCONCLUSIVE
    reason: str | None = None

    @property
    def degree(self) -> int:
        return self.n + 1 + self.k

    def to_json(self) -> dict:
        w = self.witness
        return {
            "functor": f"L^{2 ** self.n}",
            "ring": self.ring.name,
            "n": self.n,
            "k": self.k,
            "degree": self.degree,
            "truncation": self.truncation,
            "witness_support": None if w is None else int(w.vector.nnz),
            "witness_is_cycle": self.is_cycle,
            "witness_is_boundary": self.is_boundary,
            "pi": None if self.group is None else self.group.to_json(),
            "verdict": self.verdict,
            "reason": self.reason,
        }


def sharpness_witness(
    n: int, k: int, ring: RingSpec, truncation: int | None = None, max_dim: int | None = None
) -> SharpnessResult:
    """Build ``lambda_tilde_1^n(i_{k+1})`` in ``L^(2^n)(K(R,k+1))`` and certify it.

    The element must be a cycle and not a boundary in degree ``n+1+k`` of the
    unnormalized complex; ``pi_{n+1+k}`` is computed in full as well.
    """
    if ring not in (ZZ, GF2):
        raise ValueError("sharpness is stated over Z and F2")
    top = n + k + 1
    N = truncation if truncation is not None else top + 1
    if N < top + 1:
        raise TruncationTooShallow(f"pi_{top} needs truncation >= {top + 1}")
    res = SharpnessResult(n, k, ring, N, None)
    cap = default_max_dim(ring) if max_dim is None else max_dim
    A = eilenberg_maclane(ring, k + 1, N)
    try:
        X = apply_functor(LiePower(2**n), A, max_dim=cap)
    except ResourceCap as exc:
        res.reason = str(exc)
        return res
    x = SimplicialElement(k + 1, ExactMatrix.identity(ring, 1))
    for step in range(n):
        x = lambda_tilde_1(x, A, 2**step)
    res.witness = x
    res.is_cycle = (boundary(X, top) @ x.vector).is_zero()
    res.is_boundary = in_image(boundary(X, top + 1), x.vector)
    res.group = homotopy_groups(X, top)[top]
    ok = res.is_cycle and not res.is_boundary and not res.group.is_trivial
    res.verdict = VERIFIED if ok else VIOLATED
    return res


# lambda-algebra combinatorics


@dataclass(frozen=True, order=True)
class LambdaMonomial:
    indices: tuple[int, ...]

    def __post_init__(self):
        if any(i < 0 for i in self.indices):
            raise ValueError("lambda indices are nonnegative")
        if any(b > 2 * a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"{self.indices} violates i_(s+1) <= 2 i_s")

    def __str__(self) -> str:
        return "".join(f"λ{i}" for i in self.indices)


def lambda_basis(i: int, n: int, b: int, min_index: int = 1) -> list[LambdaMonomial]:
    """Monomials ``λ_{i_1}...λ_{i_n}`` with ``sum = i``, ``i_{s+1} <= 2 i_s``, ``i_1 <= b``.

    Indices start at ``min_index``; ``min_index=0`` admits ``λ_0``.
    """
    out: list[LambdaMonomial] = []

    def rec(acc: list[int], remaining: int, cap: int):
        slots = n - len(acc)
        if slots == 0:
            if remaining == 0:
                out.append(LambdaMonomial(tuple(acc)))
            return
        for v in range(min_index, min(cap, remaining - (slots - 1) * min_index) + 1):
            acc.append(v)
            rec(acc, remaining - v, 2 * v)
            acc.pop()

    if min_index not in (0, 1):
        raise ValueError("min_index is 0 or 1")
    if i >= 0 and n >= 1 and b >= min_index:
        rec([], i, b)
    return out


@dataclass
class RestrictedIsoRow:
    i: int
    degree: int
    computed_dim: int
    lambda_count: int

    @property
    def match(self) -> bool:
        return self.computed_dim == self.lambda_count


@dataclass
class RestrictedIsoReport:
    n: int
    k: int
    truncation: int
    rows: list[RestrictedIsoRow]
    convention: str = "printed"
    reason: str | None = None

    @property
    def verdict(self) -> str:
        if self.reason is not None:
            return INCONCLUSIVE
        return VERIFIED if all(r.match for r in self.rows) else VIOLATED

    def to_json(self) -> dict:
        return {
            "functor": f"Lres^{2 ** self.n}",
            "ring": "F2",
            "n": self.n,
            "k": self.k,
            "truncation": self.truncation,
            "convention": self.convention,
            "rows": [
                {"i": r.i, "degree": r.degree, "pi_dim": r.computed_dim, "lambda_count": r.lambda_count, "match": r.match}
                for r in self.rows
            ],
            "verdict": self.verdict,
            "reason": self.reason,
        }


LAMBDA_CONVENTIONS = ("printed", "lambda0")


def lambda_count(i: int, n: int, k: int, convention: str = "printed") -> int:
    """Predicted ``dim pi_{i+k+1} Lres^(2^n)(K(F2,k+1))``.

    ``printed``: indices ``>= 1`` with ``i_1 <= k+2``.
    ``lambda0``: indices ``>= 0`` with ``i_1 <= k+1`` (``λ_0`` admitted).
    """
    if convention == "printed":
        return len(lambda_basis(i, n, k + 2))
    if convention == "lambda0":
        return len(lambda_basis(i, n, k + 1, min_index=0))
    raise ValueError(f"unknown convention {convention!r}; expected one of {LAMBDA_CONVENTIONS}")


def verify_restricted_iso(
    n: int,
    k: int,
    i_values: Iterable[int],
    truncation: int | None = None,
    max_dim: int | None = None,
    convention: str = "printed",
) -> RestrictedIsoReport:
    """Compare ``dim pi_{i+k+1} Lres^(2^n)(K(F2,k+1))`` with a lambda-monomial count."""
    if convention not in LAMBDA_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    i_values = sorted(set(i_values))
    top = max(i_values) + k + 1
    N = truncation if truncation is not None else top + 1
    if N < top + 1:
        raise TruncationTooShallow(f"pi_{top} needs truncation >= {top + 1}")
    report = RestrictedIsoReport(n, k, N, [], convention)
    cap = default_max_dim(GF2) if max_dim is None else max_dim
    try:
        X = apply_functor(RestrictedLiePower(2**n), eilenberg_maclane(GF2, k + 1, N), max_dim=cap)
    except ResourceCap as exc:
        report.reason = str(exc)
        return report
    groups = homotopy_groups(X, top)
    for i in i_values:
        deg = i + k + 1
        report.rows.append(RestrictedIsoRow(i, deg, groups[deg].dimension, lambda_count(i, n, k, convention)))
    return report


def check_log_inequality(u: Sequence[int], v: Sequence[int]) -> bool:
    """Integer form ``prod 2^u_s v_s >= 2 sum u_s v_s`` of the logarithmic inequality."""
    if len(u) != len(v) or not u:
        raise ValueError("u and v must be nonempty and of equal length")
    if any(x < 1 for x in list(u) + list(v)):
        raise ValueError("entries must be positive")
    prod = 1
    for a, b in zip(u, v):
        prod *= (1 << a) * b
    return prod >= 2 * sum(a * b for a, b in zip(u, v))
