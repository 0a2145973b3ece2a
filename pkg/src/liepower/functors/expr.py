"""Abstract syntax of polynomial functor expressions.

Text form (also what ``str`` produces): ``Id``, ``L^n``, ``Lres^n``, ``Ext^k``,
``T^n``, ``o`` for composition (left is outer), ``*`` for tensor product and
``+`` for direct sum.  ``o`` binds tightest, then ``*``, then ``+``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .words import witt_dimension


class FunctorExpr:
    __slots__ = ()

    @property
    def degree(self) -> int:
        raise NotImplementedError

    def dim(self, d: int) -> int:
        """Rank of the functor evaluated on a free module of rank ``d``."""
        raise NotImplementedError

    def uses_restricted(self) -> bool:
        return False

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Id(FunctorExpr):
    @property
    def degree(self) -> int:
        return 1

    def dim(self, d: int) -> int:
        return d


def _check_power(n: int, minimum: int = 1):
    if not isinstance(n, int) or n < minimum:
        raise ValueError(f"functor exponent must be an integer >= {minimum}, got {n!r}")


@dataclass(frozen=True)
class LiePower(FunctorExpr):
    n: int

    def __post_init__(self):
        _check_power(self.n)

    @property
    def degree(self) -> int:
        return self.n

    def dim(self, d: int) -> int:
        return witt_dimension(d, self.n) if d else 0


@dataclass(frozen=True)
class RestrictedLiePower(FunctorExpr):
    n: int

    def __post_init__(self):
        _check_power(self.n)

    @property
    def degree(self) -> int:
        return self.n

    def dim(self, d: int) -> int:
        total, e = 0, 1
        while self.n % e == 0:
            total += witt_dimension(d, self.n // e) if d else 0
            e *= 2
        return total

    def uses_restricted(self) -> bool:
        return True


@dataclass(frozen=True)
class ExteriorPower(FunctorExpr):
    k: int

    def __post_init__(self):
        _check_power(self.k, 0)

    @property
    def degree(self) -> int:
        return self.k

    def dim(self, d: int) -> int:
        return comb(d, self.k)


@dataclass(frozen=True)
class TensorPower(FunctorExpr):
    n: int

    def __post_init__(self):
        _check_power(self.n)

    @property
    def degree(self) -> int:
        return self.n

    def dim(self, d: int) -> int:
        return d**self.n


@dataclass(frozen=True)
class Compose(FunctorExpr):
    outer: FunctorExpr
    inner: FunctorExpr

    @property
    def degree(self) -> int:
        return self.outer.degree * self.inner.degree

    def dim(self, d: int) -> int:
        return self.outer.dim(self.inner.dim(d))

    def uses_restricted(self) -> bool:
        return self.outer.uses_restricted() or self.inner.uses_restricted()


@dataclass(frozen=True)
class Tensor(FunctorExpr):
    factors: tuple[FunctorExpr, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a tensor product needs at least two factors")
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    def dim(self, d: int) -> int:
        out = 1
        for f in self.factors:
            out *= f.dim(d)
        return out

    def uses_restricted(self) -> bool:
        return any(f.uses_restricted() for f in self.factors)


@dataclass(frozen=True)
class DirectSum(FunctorExpr):
    summands: tuple[FunctorExpr, ...]

    def __post_init__(self):
        if len(self.summands) < 2:
            raise ValueError("a direct sum needs at least two summands")
        object.__setattr__(self, "summands", tuple(self.summands))

    @property
    def degree(self) -> int:
        return max(s.degree for s in self.summands)

    def dim(self, d: int) -> int:
        return sum(s.dim(d) for s in self.summands)

    def uses_restricted(self) -> bool:
        return any(s.uses_restricted() for s in self.summands)


# precedence: sum < tensor < compose < atom
_PREC = {DirectSum: 0, Tensor: 1, Compose: 2}


def _prec(e: FunctorExpr) -> int:
    return _PREC.get(type(e), 3)


def to_text(e: FunctorExpr) -> str:
    """Pretty-print with the fewest parentheses that still re-parse to ``e``."""
    if isinstance(e, Id):
        return "Id"
    if isinstance(e, LiePower):
        return f"L^{e.n}"
    if isinstance(e, RestrictedLiePower):
        return f"Lres^{e.n}"
    if isinstance(e, ExteriorPower):
        return f"Ext^{e.k}"
    if isinstance(e, TensorPower):
        return f"T^{e.n}"
    if isinstance(e, Compose):
        left = to_text(e.outer) if _prec(e.outer) >= 2 else f"({to_text(e.outer)})"
        # composition is left-associative, so a composite on the right needs brackets
        right = to_text(e.inner) if _prec(e.inner) > 2 else f"({to_text(e.inner)})"
        return f"{left} o {right}"
    if isinstance(e, Tensor):
        return " * ".join(to_text(f) if _prec(f) > 1 else f"({to_text(f)})" for f in e.factors)
    if isinstance(e, DirectSum):
        return " + ".join(to_text(s) if _prec(s) > 0 else f"({to_text(s)})" for s in e.summands)
    raise TypeError(f"not a functor expression: {e!r}")
