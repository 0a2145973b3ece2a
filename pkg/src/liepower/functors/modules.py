"""Free modules with structured basis labels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

from ..exactlinalg import RingSpec


@dataclass(frozen=True)
class Letter:
    index: int

    def __str__(self) -> str:
        return f"e{self.index + 1}"


@dataclass(frozen=True)
class LieLabel:
    """A bracketing whose leaves are labels of the underlying module."""

    bracketing: Any

    def __str__(self) -> str:
        return _fmt_bracket(self.bracketing)


@dataclass(frozen=True)
class PowerLabel:
    bracketing: Any
    exponent: int

    def __str__(self) -> str:
        return f"{_fmt_bracket(self.bracketing)}^{self.exponent}"


@dataclass(frozen=True)
class WedgeLabel:
    factors: tuple

    def __str__(self) -> str:
        return " ^ ".join(map(str, self.factors)) if self.factors else "1"


@dataclass(frozen=True)
class TensorLabel:
    factors: tuple

    def __str__(self) -> str:
        return "(" + " (x) ".join(map(str, self.factors)) + ")"


@dataclass(frozen=True)
class SummandLabel:
    tag: Any
    label: Any

    def __str__(self) -> str:
        return f"{self.tag}:{self.label}"


def _fmt_bracket(b) -> str:
    if isinstance(b, tuple) and len(b) == 2:
        return f"[{_fmt_bracket(b[0])},{_fmt_bracket(b[1])}]"
    return str(b)


def bracket_over(bracketing, leaves: Sequence) -> Any:
    """Replace integer leaves of a bracketing by the given labels."""
    if isinstance(bracketing, int):
        return leaves[bracketing]
    return (bracket_over(bracketing[0], leaves), bracket_over(bracketing[1], leaves))


class BasedModule:
    """A free module with an explicit ordered basis; labels are built on demand."""

    def __init__(self, ring: RingSpec, dim: int, labels: Sequence | Callable[[], Sequence] | None = None):
        self.ring = ring
        self.dim = int(dim)
        self._labels = labels

    @property
    def labels(self) -> tuple:
        if callable(self._labels):
            self._labels = tuple(self._labels())
        elif self._labels is None:
            self._labels = tuple(Letter(i) for i in range(self.dim))
        else:
            self._labels = tuple(self._labels)
        if len(self._labels) != self.dim:
            raise AssertionError(f"{len(self._labels)} labels for a rank-{self.dim} module")
        return self._labels

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"BasedModule({self.ring}, dim={self.dim})"

    def describe(self, limit: int = 20) -> list[str]:
        return [str(x) for x in self.labels[:limit]]


def letter_labels(d: int) -> tuple[Letter, ...]:
    return tuple(Letter(i) for i in range(d))


__all__ = [
    "BasedModule",
    "Letter",
    "LieLabel",
    "PowerLabel",
    "SummandLabel",
    "TensorLabel",
    "WedgeLabel",
    "bracket_over",
    "letter_labels",
]
