"""Coordinate charts, Jacobians and the component transformation laws.

A chart is a map ``x -> x'``. Its Jacobian ``J[i, j] = dx'^i / dx^j``
carries contravariant components forward (``A' = J A``), and covariant
components go through the inverse transpose (``A'_i = (dx^j/dx'^i) A_j``).
The contraction ``A_i B^i`` is unchanged by the pair.

Built-in charts ship with analytic Jacobians; anything else falls back to
central differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InputError,
    NonFinite,
    OutOfDomain,
    RankDeficient,
    SingularJacobian,
    VarianceMismatch,
)
from .metric import ComponentVector, MetricKind, MetricTensor, contract
from .variance import Variance

__all__ = [
    "Chart",
    "Jacobian",
    "ScalarField",
    "SINGULAR_EPS",
    "fd_step",
    "finite_difference_jacobian",
    "jacobian",
    "push_contravariant",
    "pull_covariant",
    "gradient",
    "directional_increment",
    "pullback_metric",
    "identity_chart",
    "linear_chart",
    "polar_chart",
    "spherical_chart",
    "compose",
    "builtin_chart",
    "BUILTIN_CHARTS",
]

SINGULAR_EPS = 1e-12
_CBRT_EPS = np.finfo(np.float64).eps ** (1.0 / 3.0)

Point = Sequence[float]


@dataclass(frozen=True)
class Chart:
    """A differentiable coordinate map ``R^n_in -> R^n_out``.

    ``forward`` and ``analytic_jacobian`` must be pure functions of the
    point; charts are shared freely across threads.
    """

    name: str
    n_in: int
    n_out: int
    forward: Callable[[np.ndarray], np.ndarray]
    analytic_jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    domain_guard: Optional[Callable[[np.ndarray], bool]] = None

    def __call__(self, point: Point) -> np.ndarray:
        x = self._point(point)
        return _finite(np.asarray(self.forward(x), dtype=np.float64), self.name)

    def _point(self, point: Point) -> np.ndarray:
        x = np.asarray(point, dtype=np.float64)
        if x.shape != (self.n_in,):
            raise DimensionMismatch(f"chart {self.name!r} takes {self.n_in} coordinates, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise NonFinite(f"point {x.tolist()} is not finite")
        if self.domain_guard is not None and not self.domain_guard(x):
            raise OutOfDomain(f"point {x.tolist()} is outside the domain of chart {self.name!r}")
        return x


@dataclass(frozen=True, eq=False)
class Jacobian:
    """``matrix[i, j] = dx'^i / dx^j`` evaluated at ``base_point``."""

    matrix: np.ndarray
    base_point: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2:
            raise DimensionMismatch(f"Jacobian must be 2-D, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NonFinite("Jacobian has non-finite entries")
        m.setflags(write=False)
        p = np.array(self.base_point, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "base_point", p)

    @property
    def is_square(self) -> bool:
        return self.matrix.shape[0] == self.matrix.shape[1]

    @property
    def determinant(self) -> Optional[float]:
        return float(np.linalg.det(self.matrix)) if self.is_square else None


@dataclass(frozen=True)
class ScalarField:
    n: int
    eval: Callable[[np.ndarray], float]


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFinite(f"{what} produced non-finite values")
    return values


def fd_step(x: float) -> float:
    return _CBRT_EPS * max(1.0, abs(x))


def finite_difference_jacobian(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """Central-difference Jacobian of ``f`` at ``x`` (rows: outputs, cols: inputs)."""
    x = np.asarray(x, dtype=np.float64)
    columns = []
    for j in range(x.size):
        h = fd_step(x[j])
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        span = xp[j] - xm[j]  # the step actually representable in floating point
        fp = np.atleast_1d(np.asarray(f(xp), dtype=np.float64))
        fm = np.atleast_1d(np.asarray(f(xm), dtype=np.float64))
        columns.append((fp - fm) / span)
    return np.column_stack(columns)


def jacobian(chart: Chart, point: Point, method: str = "auto") -> Jacobian:
    """Jacobian of ``chart`` at ``point``.

    ``method`` is ``"auto"`` (analytic when available), ``"analytic"`` or
    ``"fd"`` (central differences, step ``eps**(1/3) * max(1, |x_j|)``).
    """
    x = chart._point(point)
    if method not in ("auto", "analytic", "fd"):
        raise ValueError(f"unknown Jacobian method {method!r}")
    if method == "analytic" and chart.analytic_jacobian is None:
        raise InputError(f"chart {chart.name!r} has no analytic Jacobian")
    if method != "fd" and chart.analytic_jacobian is not None:
        m = np.asarray(chart.analytic_jacobian(x), dtype=np.float64)
    else:
        m = finite_difference_jacobian(chart.forward, x)
    m = _finite(np.atleast_2d(m), f"Jacobian of chart {chart.name!r}")
    if m.shape != (chart.n_out, chart.n_in):
        raise DimensionMismatch(f"Jacobian shape {m.shape} != ({chart.n_out}, {chart.n_in})")
    return Jacobian(m, x)


def _check_invertible(J: Jacobian, v: ComponentVector, variance: Variance) -> None:
    if v.variance is not variance:
        raise VarianceMismatch(f"expected {variance.value} components, got {v.variance.value}")
    if not J.is_square:
        raise DimensionMismatch(f"transformation law needs a square Jacobian, got {J.matrix.shape}")
    n = J.matrix.shape[0]
    if v.n != n:
        raise DimensionMismatch(f"Jacobian is {n}x{n}, vector has {v.n} components")
    scale = float(np.max(np.abs(J.matrix)))
    det = J.determinant
    if not abs(det) > SINGULAR_EPS * scale**n:
        raise SingularJacobian(f"singular Jacobian: |det| = {abs(det):.17g}")


def push_contravariant(J: Jacobian, v: ComponentVector) -> ComponentVector:
    """``A'^i = (dx'^i/dx^j) A^j``."""
    _check_invertible(J, v, Variance.CONTRAVARIANT)
    return ComponentVector(J.matrix @ v.components, Variance.CONTRAVARIANT)


def pull_covariant(J: Jacobian, v: ComponentVector) -> ComponentVector:
    """``A'_i = (dx^j/dx'^i) A_j``, i.e. solve ``J^T A' = A``."""
    _check_invertible(J, v, Variance.COVARIANT)
    return ComponentVector(np.linalg.solve(J.matrix.T, v.components), Variance.COVARIANT)


def gradient(field: ScalarField, point: Point) -> ComponentVector:
    x = np.asarray(point, dtype=np.float64)
    if x.shape != (field.n,):
        raise DimensionMismatch(f"field takes {field.n} coordinates, got shape {x.shape}")
    grad = finite_difference_jacobian(lambda p: np.array([field.eval(p)]), x)[0]
    return ComponentVector(_finite(grad, "scalar field"), Variance.COVARIANT)


def directional_increment(grad: ComponentVector, dx: ComponentVector) -> float:
    """First-order change ``df = (df/dx^i) dx^i``."""
    if grad.variance is not Variance.COVARIANT or dx.variance is not Variance.CONTRAVARIANT:
        raise VarianceMismatch("df pairs a covariant gradient with a contravariant displacement")
    return contract(grad, dx)


def pullback_metric(chart: Chart, point: Point, method: str = "auto") -> MetricTensor:
    """Induced metric ``J^T J`` of a chart into flat Euclidean space."""
    J = jacobian(chart, point, method).matrix
    if J.shape[0] < J.shape[1]:
        raise RankDeficient(f"chart {chart.name!r} maps into fewer dimensions than it has coordinates")
    sigma = np.linalg.svd(J, compute_uv=False)
    if sigma[0] == 0.0 or sigma[-1] <= SINGULAR_EPS * sigma[0]:
        raise RankDeficient(
            f"Jacobian of chart {chart.name!r} is rank-deficient at {list(map(float, point))}"
            f" (singular values {sigma.tolist()})"
        )
    g = J.T @ J
    return MetricTensor(0.5 * (g + g.T), MetricKind.LOWER)


# -- built-in charts ---------------------------------------------------------


def identity_chart(n: int) -> Chart:
    eye = np.eye(n)
    return Chart("identity", n, n, lambda x: np.array(x, dtype=np.float64), lambda x: eye)


def linear_chart(matrix: Sequence[Sequence[float]]) -> Chart:
    A = np.array(matrix, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionMismatch(f"linear chart matrix must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFinite("linear chart matrix is not finite")
    A.setflags(write=False)
    return Chart("linear", A.shape[1], A.shape[0], lambda x: A @ x, lambda x: A)


def _polar(p: np.ndarray) -> np.ndarray:
    r, theta = p
    return np.array([r * np.cos(theta), r * np.sin(theta)])


def _polar_jac(p: np.ndarray) -> np.ndarray:
    r, theta = p
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -r * s], [s, r * c]])


def polar_chart() -> Chart:
    """``(r, theta) -> (r cos theta, r sin theta)`` for ``r >= 0``."""
    return Chart("polar", 2, 2, _polar, _polar_jac, lambda p: p[0] >= 0.0)


def _spherical(p: np.ndarray) -> np.ndarray:
    r, theta, phi = p
    st = np.sin(theta)
    return np.array([r * st * np.cos(phi), r * st * np.sin(phi), r * np.cos(theta)])


def _spherical_jac(p: np.ndarray) -> np.ndarray:
    r, theta, phi = p
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    return np.array(
        [
            [st * cp, r * ct * cp, -r * st * sp],
            [st * sp, r * ct * sp, r * st * cp],
            [ct, -r * st, 0.0],
        ]
    )


def spherical_chart() -> Chart:
    """``(r, theta, phi) -> Cartesian`` with polar angle ``theta`` in ``[0, pi]``."""
    return Chart(
        "spherical",
        3,
        3,
        _spherical,
        _spherical_jac,
        lambda p: p[0] >= 0.0 and 0.0 <= p[1] <= np.pi,
    )


def compose(outer: Chart, inner: Chart) -> Chart:
    """``outer o inner``; the Jacobian of the result is finite-difference only."""
    if inner.n_out != outer.n_in:
        raise DimensionMismatch(f"cannot compose {outer.name!r} after {inner.name!r}")

    def guard(x: np.ndarray) -> bool:
        if inner.domain_guard is not None and not inner.domain_guard(x):
            return False
        return outer.domain_guard is None or bool(outer.domain_guard(inner.forward(x)))

    return Chart(
        f"{outer.name}∘{inner.name}",
        inner.n_in,
        outer.n_out,
        lambda x: outer.forward(inner.forward(x)),
        None,
        guard,
    )


BUILTIN_CHARTS = ("identity", "linear", "polar", "spherical")


def builtin_chart(name: str, matrix: Optional[Sequence[Sequence[float]]] = None, n: Optional[int] = None) -> Chart:
    """Look up a built-in chart by name; ``linear`` needs ``matrix``, ``identity`` needs ``n``."""
    if name == "polar":
        return polar_chart()
    if name == "spherical":
        return spherical_chart()
    if name == "linear":
        if matrix is None:
            raise InputError("linear chart needs a matrix")
        return linear_chart(matrix)
    if name == "identity":
        if n is None:
            raise InputError("identity chart needs a dimension")
        return identity_chart(n)
    raise InputError(f"unknown chart {name!r}; expected one of {', '.join(BUILTIN_CHARTS)}")
