from __future__ import annotations

from dataclasses import dataclass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """Ground ring: the integers (``characteristic == 0``) or a prime field."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic {self.characteristic} is not prime")

    @classmethod
    def integers(cls) -> RingSpec:
        return cls(0)

    @classmethod
    def prime_field(cls, p: int) -> RingSpec:
        return cls(p)

    @property
    def is_field(self) -> bool:
        return self.characteristic != 0

    @property
    def name(self) -> str:
        return "Z" if self.characteristic == 0 else f"F{self.characteristic}"

    def reduce(self, x: int) -> int:
        return x % self.characteristic if self.characteristic else x

    def inverse(self, x: int) -> int:
        if self.characteristic:
            return pow(x % self.characteristic, -1, self.characteristic)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def is_unit(self, x: int) -> bool:
        if self.characteristic:
            return x % self.characteristic != 0
        return x in (1, -1)

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        """Parse ``z``, ``f2``, ``f3`` or ``fp:<p>``."""
        t = text.strip().lower()
        if t in ("z", "zz", "integers"):
            return cls(0)
        if t.startswith("fp:"):
            return cls(int(t[3:]))
        if t.startswith("f") and t[1:].isdigit():
            return cls(int(t[1:]))
        raise ValueError(f"unknown ring {text!r}")

    def __str__(self) -> str:
        return self.name


ZZ = RingSpec(0)
GF2 = RingSpec(2)
GF3 = RingSpec(3)
