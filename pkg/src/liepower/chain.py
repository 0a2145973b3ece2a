from __future__ import annotations

from dataclasses import dataclass, field

from .exactlinalg import DimensionMismatch, ExactMatrix, HomologyGroup, RingSpec, homology_at
from .functors import BasedModule


@dataclass
class ChainComplex:
    """Bounded chain complex; ``differentials[i]`` maps degree ``i`` to ``i - 1``.

    Missing components are zero modules and missing differentials zero maps.
    """

    ring: RingSpec
    components: dict[int, BasedModule]
    differentials: dict[int, ExactMatrix] = field(default_factory=dict)

    def __post_init__(self):
        for i, m in self.differentials.items():
            if m.shape != (self.dim(i - 1), self.dim(i)):
                raise DimensionMismatch(f"d_{i} has shape {m.shape}, expected {(self.dim(i - 1), self.dim(i))}")

    def dim(self, i: int) -> int:
        c = self.components.get(i)
        return c.dim if c is not None else 0

    def d(self, i: int) -> ExactMatrix:
        m = self.differentials.get(i)
        if m is None:
            return ExactMatrix.zeros(self.ring, self.dim(i - 1), self.dim(i))
        return m

    @property
    def degrees(self) -> list[int]:
        return sorted(self.components)

    def check_d_squared(self) -> bool:
        return all((self.d(i - 1) @ self.d(i)).is_zero() for i in self.differentials)

    def homology(self, i: int, check: bool = True) -> HomologyGroup:
        return homology_at(self.d(i + 1), self.d(i), check=check)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.components)
