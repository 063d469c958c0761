"""Metric tensors and index gymnastics in n dimensions.

Only positive-definite (Riemannian) metrics are admitted. A ``MetricTensor``
is either ``Lower`` (``g_{mu nu}``) or ``Upper`` (``g^{mu nu}``); the two are
conjugate inverses. ``ComponentVector`` carries its variance tag so that
raising and lowering can refuse the wrong input.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import linalg

from . import gram as _gram
from .errors import (
    DegenerateBasis,
    DimensionMismatch,
    NonFinite,
    NotPositiveDefinite,
    NotSymmetric,
    SingularGram,
    VarianceMismatch,
    ZeroTangent,
)
from .reciprocal import Basis3
from .variance import Role, Variance

__all__ = [
    "BasisN",
    "MetricTensor",
    "MetricKind",
    "ComponentVector",
    "SYMMETRY_TOL",
    "metric_from_basis",
    "inverse_metric",
    "lower_index",
    "raise_index",
    "line_element",
    "tangent_normalization_defect",
    "contract",
]

# relative to the largest entry
SYMMETRY_TOL = 1e-14


def _frozen_array(values, ndim: int) -> np.ndarray:
    a = np.array(values, dtype=np.float64)
    if a.ndim != ndim:
        raise DimensionMismatch(f"expected a {ndim}-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("array contains NaN or Inf")
    a.setflags(write=False)
    return a


class MetricKind(str, Enum):
    LOWER = "lower"
    UPPER = "upper"

    def flipped(self) -> MetricKind:
        return MetricKind.UPPER if self is MetricKind.LOWER else MetricKind.LOWER


@dataclass(frozen=True, eq=False)
class BasisN:
    """n linearly independent vectors of length n, stored as rows."""

    vectors: np.ndarray
    role: Role = Role.ORIGINAL

    def __post_init__(self) -> None:
        e = _frozen_array(self.vectors, 2)
        if e.shape[0] != e.shape[1] or e.shape[0] == 0:
            raise DimensionMismatch(f"need n vectors of length n, got shape {e.shape}")
        object.__setattr__(self, "vectors", e)
        try:
            _gram.invert(_gram.gram_matrix(e))
        except SingularGram as exc:
            raise DegenerateBasis(f"degenerate basis: {exc}") from exc

    @classmethod
    def from_basis3(cls, basis: Basis3) -> BasisN:
        return cls(basis.rows, basis.role)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def rows(self) -> np.ndarray:
        return self.vectors


@dataclass(frozen=True, eq=False)
class MetricTensor:
    g: np.ndarray
    kind: MetricKind = MetricKind.LOWER

    def __post_init__(self) -> None:
        g = _frozen_array(self.g, 2)
        if g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise DimensionMismatch(f"metric must be square, got shape {g.shape}")
        scale = float(np.max(np.abs(g)))
        if np.max(np.abs(g - g.T)) > SYMMETRY_TOL * scale:
            raise NotSymmetric("metric must be symmetric")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "kind", MetricKind(self.kind))
        self._cholesky  # validates positive-definiteness

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @cached_property
    def _cholesky(self):
        try:
            return linalg.cho_factor(self.g, lower=True, check_finite=False)
        except linalg.LinAlgError as exc:
            raise NotPositiveDefinite(f"metric is not positive-definite: {exc}") from None

    @cached_property
    def conjugate(self) -> MetricTensor:
        """The inverse metric, computed once per instance."""
        inv = linalg.cho_solve(self._cholesky, np.eye(self.n), check_finite=False)
        inv = _gram.refine_inverse(self.g, inv)
        out = MetricTensor(0.5 * (inv + inv.T), self.kind.flipped())
        out.__dict__["conjugate"] = self
        return out


@dataclass(frozen=True, eq=False)
class ComponentVector:
    components: np.ndarray
    variance: Variance

    def __post_init__(self) -> None:
        c = _frozen_array(self.components, 1)
        object.__setattr__(self, "components", c)
        object.__setattr__(self, "variance", Variance(self.variance))

    @classmethod
    def contravariant(cls, values: Sequence[float]) -> ComponentVector:
        return cls(values, Variance.CONTRAVARIANT)

    @classmethod
    def covariant(cls, values: Sequence[float]) -> ComponentVector:
        return cls(values, Variance.COVARIANT)

    @property
    def n(self) -> int:
        return self.components.shape[0]


def _check(v: ComponentVector, variance: Variance, g: MetricTensor | None = None) -> None:
    if v.variance is not variance:
        raise VarianceMismatch(f"expected {variance.value} components, got {v.variance.value}")
    if g is not None:
        if g.kind is not MetricKind.LOWER:
            raise VarianceMismatch("expected a lower-index metric g_{mu nu}")
        if g.n != v.n:
            raise DimensionMismatch(f"metric is {g.n}-dimensional, vector has {v.n} components")


def metric_from_basis(basis: BasisN | Basis3) -> MetricTensor:
    """``g_{mu nu} = e_mu . e_nu``; numerically the same array as ``gram_matrix``."""
    if isinstance(basis, Basis3):
        basis = BasisN.from_basis3(basis)
    return MetricTensor(_gram.gram_matrix(basis).entries, MetricKind.LOWER)


def inverse_metric(g: MetricTensor) -> MetricTensor:
    return g.conjugate


def lower_index(v: ComponentVector, g: MetricTensor) -> ComponentVector:
    _check(v, Variance.CONTRAVARIANT, g)
    return ComponentVector(g.g @ v.components, Variance.COVARIANT)


def raise_index(v: ComponentVector, g: MetricTensor) -> ComponentVector:
    _check(v, Variance.COVARIANT, g)
    return ComponentVector(g.conjugate.g @ v.components, Variance.CONTRAVARIANT)


def line_element(dx: ComponentVector, g: MetricTensor) -> float:
    """Squared length ``ds^2 = g_{mu nu} dx^mu dx^nu``."""
    _check(dx, Variance.CONTRAVARIANT, g)
    return float(dx.components @ g.g @ dx.components)


def tangent_normalization_defect(t: ComponentVector, g: MetricTensor) -> float:
    """How far ``(dx_mu/ds)(dx^mu/ds)`` is from 1 for the tangent ``t``."""
    _check(t, Variance.CONTRAVARIANT, g)
    if not np.any(t.components):
        raise ZeroTangent("tangent vector is zero")
    return line_element(t, g) - 1.0


def contract(a: ComponentVector, b: ComponentVector) -> float:
    """``sum_i a_i b^i`` for one covariant and one contravariant vector."""
    if {a.variance, b.variance} != {Variance.COVARIANT, Variance.CONTRAVARIANT}:
        raise VarianceMismatch("contraction pairs a covariant with a contravariant vector")
    if a.n != b.n:
        raise DimensionMismatch(f"cannot contract {a.n} with {b.n} components")
    return float(a.components @ b.components)
