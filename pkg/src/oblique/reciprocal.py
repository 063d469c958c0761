"""Reciprocal (dual) bases in three dimensions and the two component types.

For a basis ``(a, b, c)`` the reciprocal set is::

    a' = (b x c) / V,   b' = (c x a) / V,   c' = (a x b) / V,   V = a . (b x c)

so that ``e_i . e'_j = delta_ij``. A vector then expands either way round:

* contravariant components ``v . e'_i`` are coefficients over ``e_i``;
* covariant components ``v . e_i`` are coefficients over ``e'_i``.

``components_via_gram`` reaches the contravariant components by a second,
independent route (solving the Gram system) so the two can be compared.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import gram as _gram
from .errors import DimensionMismatch, FingerprintMismatch, VarianceMismatch, DegenerateBasis
from .euclid3 import Vec3, cross, dot, norm, triple
from .variance import Role, Variance

__all__ = [
    "Basis3",
    "Components3",
    "DEGENERACY_EPS",
    "reciprocal_basis",
    "duality_defect",
    "contravariant_components",
    "covariant_components",
    "components_via_gram",
    "reconstruct",
    "completeness_defect",
    "scalar_product_mixed",
]

DEGENERACY_EPS = 1e-12


@dataclass(frozen=True)
class Basis3:
    """Three non-coplanar vectors.

    Construction rejects ``|a . (b x c)| <= 1e-12 * max_norm**3``.
    Left-handed triads are accepted. A dual basis uses the squared threshold:
    its relative triple product is roughly the square of the original's, so
    the dual of every accepted basis is itself accepted.
    """

    e1: Vec3
    e2: Vec3
    e3: Vec3
    role: Role = Role.ORIGINAL

    def __post_init__(self) -> None:
        t = triple(self.e1, self.e2, self.e3)
        max_norm = max(norm(self.e1), norm(self.e2), norm(self.e3))
        eps = DEGENERACY_EPS if self.role is Role.ORIGINAL else DEGENERACY_EPS**2
        if not abs(t) > eps * max_norm**3:
            raise DegenerateBasis(f"degenerate basis: |triple| = {abs(t):.17g}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], role: Role = Role.ORIGINAL) -> Basis3:
        if len(rows) != 3:
            raise DimensionMismatch(f"a 3-D basis needs 3 vectors, got {len(rows)}")
        return cls(Vec3.of(rows[0]), Vec3.of(rows[1]), Vec3.of(rows[2]), role)

    @property
    def vectors(self) -> tuple[Vec3, Vec3, Vec3]:
        return (self.e1, self.e2, self.e3)

    @property
    def rows(self) -> np.ndarray:
        return np.array([v.as_tuple() for v in self.vectors])

    @property
    def volume(self) -> float:
        return triple(self.e1, self.e2, self.e3)

    @cached_property
    def fingerprint(self) -> str:
        packed = struct.pack("<9d", *(c for v in self.vectors for c in v))
        return hashlib.sha256(packed).hexdigest()[:16]


@dataclass(frozen=True)
class Components3:
    values: tuple[float, float, float]
    variance: Variance
    basis_fingerprint: str = field(repr=False)

    @property
    def c1(self) -> float:
        return self.values[0]

    @property
    def c2(self) -> float:
        return self.values[1]

    @property
    def c3(self) -> float:
        return self.values[2]


def reciprocal_basis(basis: Basis3) -> Basis3:
    a, b, c = basis.vectors
    v = basis.volume
    return Basis3(cross(b, c) / v, cross(c, a) / v, cross(a, b) / v, basis.role.flipped())


def duality_defect(basis: Basis3, dual: Basis3) -> np.ndarray:
    """``(i, j) -> e_i . e'_j - delta_ij``."""
    out = np.empty((3, 3))
    for i, ei in enumerate(basis.vectors):
        for j, ej in enumerate(dual.vectors):
            out[i, j] = dot(ei, ej) - (1.0 if i == j else 0.0)
    return out


def _require_original(basis: Basis3) -> None:
    if basis.role is not Role.ORIGINAL:
        raise VarianceMismatch("components are defined against an original (non-dual) basis")


def contravariant_components(v: Vec3, basis: Basis3) -> Components3:
    _require_original(basis)
    dual = reciprocal_basis(basis)
    values = tuple(dot(v, e) for e in dual.vectors)
    return Components3(values, Variance.CONTRAVARIANT, basis.fingerprint)


def covariant_components(v: Vec3, basis: Basis3) -> Components3:
    _require_original(basis)
    values = tuple(dot(v, e) for e in basis.vectors)
    return Components3(values, Variance.COVARIANT, basis.fingerprint)


def components_via_gram(v: Vec3, basis: Basis3) -> Components3:
    """Contravariant components by solving ``G x = (v . e_i)``.

    Uses the general pivoted inverse, never the cross-product construction.
    Since det G = triple**2, forming G squares the conditioning: bases with
    ``|triple| / max_norm**3`` below about 1e-6 construct fine but raise
    ``SingularGram`` here rather than return inaccurate components.
    """
    _require_original(basis)
    inv = _gram.invert(_gram.gram_matrix(basis))
    rhs = np.array([dot(v, e) for e in basis.vectors])
    x = inv.entries @ rhs
    return Components3((float(x[0]), float(x[1]), float(x[2])), Variance.CONTRAVARIANT, basis.fingerprint)


def reconstruct(comps: Components3, basis: Basis3) -> Vec3:
    if comps.basis_fingerprint != basis.fingerprint:
        raise FingerprintMismatch(
            f"components belong to basis {comps.basis_fingerprint}, not {basis.fingerprint}"
        )
    frame = basis if comps.variance is Variance.CONTRAVARIANT else reciprocal_basis(basis)
    e1, e2, e3 = frame.vectors
    c1, c2, c3 = comps.values
    return e1 * c1 + e2 * c2 + e3 * c3


def completeness_defect(basis: Basis3) -> np.ndarray:
    """``sum_i outer(e_i, e'_i) - I``; zero when the pair resolves the identity."""
    dual = reciprocal_basis(basis)
    total = np.zeros((3, 3))
    for e, f in zip(basis.vectors, dual.vectors):
        total += np.outer(e.as_tuple(), f.as_tuple())
    return total - np.eye(3)


def scalar_product_mixed(u: Vec3, v: Vec3, basis: Basis3) -> float:
    """``u . v`` assembled from covariant components of v and contravariant of u."""
    dual = reciprocal_basis(basis)
    return sum(dot(v, e) * dot(u, f) for e, f in zip(basis.vectors, dual.vectors))
