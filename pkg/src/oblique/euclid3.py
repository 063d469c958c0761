"""Fixed-arity 3-vector algebra.

``Vec3`` checks finiteness once, at construction; ``dot``, ``cross`` and
``triple`` are plain arithmetic with no further validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DimensionMismatch, NonFinite

__all__ = ["Vec3", "dot", "cross", "triple", "norm", "ZERO", "I_HAT", "J_HAT", "K_HAT"]


@dataclass(frozen=True, slots=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise NonFinite(f"Vec3.{name} is not finite: {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, values: Sequence[float]) -> Vec3:
        if len(values) != 3:
            raise DimensionMismatch(f"expected 3 components, got {len(values)}")
        return cls(values[0], values[1], values[2])

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y
        yield self.z

    def __add__(self, other: Vec3) -> Vec3:
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: Vec3) -> Vec3:
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> Vec3:
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, s: float) -> Vec3:
        return Vec3(self.x * s, self.y * s, self.z * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> Vec3:
        return Vec3(self.x / s, self.y / s, self.z / s)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


ZERO = Vec3(0.0, 0.0, 0.0)
I_HAT = Vec3(1.0, 0.0, 0.0)
J_HAT = Vec3(0.0, 1.0, 0.0)
K_HAT = Vec3(0.0, 0.0, 1.0)


def dot(u: Vec3, v: Vec3) -> float:
    return u.x * v.x + u.y * v.y + u.z * v.z


def cross(u: Vec3, v: Vec3) -> Vec3:
    return Vec3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )


def triple(a: Vec3, b: Vec3, c: Vec3) -> float:
    """Signed volume ``a . (b x c)`` of the parallelepiped spanned by a, b, c."""
    return dot(a, cross(b, c))


def norm(v: Vec3) -> float:
    return math.sqrt(dot(v, v))
