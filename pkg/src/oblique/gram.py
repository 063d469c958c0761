"""Gram matrices and their inverses.

Two routes to the inverse of a Gram matrix live here:

* ``invert`` -- Gauss-Jordan elimination with partial pivoting, any n,
  polished by iterative refinement.
* ``closed_form_inverse_unit3`` -- explicit cofactor formulas for a 3x3
  Gram matrix of *unit* vectors, written in terms of the three pairwise
  dot products ``a.b``, ``a.c``, ``b.c``.

The unit-diagonal formulas (``determinant_unit3`` and the closed form) are
only valid when every basis vector has length one; ``gram_matrix`` itself
always stores the true squared norms on the diagonal.

Indices are 0-based: the usual ``A_13`` is ``entries[0, 2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import DegenerateBasis, DimensionMismatch, NotSymmetric, NotUnitBasis, SingularGram

__all__ = [
    "GramMatrix",
    "InverseGram",
    "SINGULAR_EPS",
    "UNIT_DIAGONAL_TOL",
    "gram_matrix",
    "determinant",
    "determinant_unit3",
    "invert",
    "closed_form_inverse_unit3",
    "is_unit_diagonal",
    "identity_residual",
    "refine_inverse",
]

SINGULAR_EPS = 1e-12
UNIT_DIAGONAL_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Symmetric matrix of pairwise dot products ``g_ij = e_i . e_j``."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.entries, dtype=np.float64)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise DimensionMismatch(f"Gram matrix must be square and non-empty, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise DegenerateBasis("Gram matrix has non-finite entries")
        if not np.array_equal(g, g.T):
            raise NotSymmetric("Gram matrix must be exactly symmetric")
        if np.any(np.diag(g) <= 0.0):
            raise DegenerateBasis("Gram matrix diagonal must be positive (zero-length basis vector)")
        object.__setattr__(self, "entries", _frozen(g))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True, eq=False)
class InverseGram:
    entries: np.ndarray
    determinant: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))
        object.__setattr__(self, "determinant", float(self.determinant))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _rows(basis) -> np.ndarray:
    if hasattr(basis, "rows"):
        return np.asarray(basis.rows, dtype=np.float64)
    vectors = [list(map(float, v)) for v in basis]
    if not vectors:
        raise DimensionMismatch("basis is empty")
    width = len(vectors[0])
    if any(len(v) != width for v in vectors):
        raise DimensionMismatch("basis vectors have different lengths")
    return np.array(vectors, dtype=np.float64)


def gram_matrix(basis: Iterable) -> GramMatrix:
    """Pairwise dot products of the basis vectors.

    ``basis`` may be a ``Basis3``/``BasisN`` or any sequence of equal-length
    vectors. The lower triangle is a mirror of the upper one, so the result
    is symmetric bit for bit.
    """
    e = _rows(basis)
    n = e.shape[0]
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = float(np.dot(e[i], e[j]))
    return GramMatrix(g)


def _gauss_jordan(a: np.ndarray) -> np.ndarray | None:
    """Inverse by Gauss-Jordan with partial pivoting; ``None`` on an exactly zero pivot column."""
    n = a.shape[0]
    m = np.hstack([np.array(a, dtype=np.float64), np.eye(n)])
    for k in range(n):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        if m[p, k] == 0.0:
            return None
        if p != k:
            m[[k, p]] = m[[p, k]]
        m[k] /= m[k, k]
        for i in range(n):
            if i != k and m[i, k] != 0.0:
                m[i] -= m[i, k] * m[k]
    return m[:, n:]


def _exact_determinant(a: np.ndarray) -> float:
    """Determinant by elimination over the rationals, rounded once at the end."""
    m = [[Fraction(float(v)) for v in row] for row in a]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return 0.0
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        pivot = m[k][k]
        det *= pivot
        for i in range(k + 1, n):
            f = m[i][k] / pivot
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return float(det)


_SPLITTER = 2.0**27 + 1.0


def _split(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def identity_residual(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``I - a @ x`` with every entry correctly rounded.

    Each product ``a_ik * x_kj`` is split into its rounded value and exact
    rounding error (Dekker's algorithm), then all terms of an entry are
    summed exactly with ``math.fsum``.
    """
    n = a.shape[0]
    aa = a[:, :, None]
    xx = x[None, :, :]
    p = aa * xx
    ah, al = _split(np.broadcast_to(aa, p.shape))
    xh, xl = _split(np.broadcast_to(xx, p.shape))
    err = ((ah * xh - p) + ah * xl + al * xh) + al * xl
    out = np.empty((n, x.shape[1]))
    for i in range(n):
        for j in range(x.shape[1]):
            terms = [-t for t in p[i, :, j]] + [-t for t in err[i, :, j]]
            if i == j:
                terms.append(1.0)
            out[i, j] = math.fsum(terms)
    return out


def refine_inverse(a: np.ndarray, x: np.ndarray, steps: int = 2) -> np.ndarray:
    """Newton refinement ``x <- x + x (I - a x)`` with an exact residual."""
    for _ in range(steps):
        x = x + x @ identity_residual(a, x)
    return x


def _check_nonsingular(det: float, scale: float, n: int) -> None:
    if not abs(det) > SINGULAR_EPS * scale**n:
        raise SingularGram(
            f"Gram matrix is singular: |det| = {abs(det):.3g} <= {SINGULAR_EPS:g} * scale^{n}"
            " (basis vectors are linearly dependent)"
        )


def determinant(gram: GramMatrix) -> float:
    """Correctly rounded determinant of the stored entries (no singularity check)."""
    return _exact_determinant(gram.entries)


def invert(gram: GramMatrix) -> InverseGram:
    """Inverse and determinant of a nonsingular Gram matrix.

    The inverse comes from floating-point Gauss-Jordan followed by two
    refinement steps whose residuals are computed exactly, which brings it
    to within a few ulps of the true inverse for condition numbers up to
    about 1e10. The determinant is exact up to one final rounding.
    Raises ``SingularGram`` when ``|det| <= 1e-12 * max|g_ij|**n``.
    """
    det = _exact_determinant(gram.entries)
    _check_nonsingular(det, gram.scale, gram.n)
    inverse = _gauss_jordan(gram.entries)
    if inverse is None:
        raise SingularGram("Gram matrix is singular: zero pivot column")
    inverse = refine_inverse(gram.entries, inverse)
    return InverseGram(0.5 * (inverse + inverse.T), det)


def is_unit_diagonal(gram: GramMatrix, tol: float = UNIT_DIAGONAL_TOL) -> bool:
    return bool(np.all(np.abs(np.diag(gram.entries) - 1.0) <= tol))


def _unit3_dots(gram: GramMatrix) -> tuple[float, float, float]:
    if gram.n != 3:
        raise DimensionMismatch(f"unit-basis formulas need a 3x3 Gram matrix, got {gram.n}x{gram.n}")
    if not is_unit_diagonal(gram):
        raise NotUnitBasis(
            f"diagonal {np.diag(gram.entries).tolist()} deviates from 1 by more than {UNIT_DIAGONAL_TOL:g}"
        )
    g = gram.entries
    return float(g[0, 1]), float(g[0, 2]), float(g[1, 2])


def _exact_unit3(gram: GramMatrix) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    ab, ac, bc = (Fraction(d) for d in _unit3_dots(gram))
    d = 1 + 2 * ab * ac * bc - ac**2 - ab**2 - bc**2
    return ab, ac, bc, d


def determinant_unit3(gram: GramMatrix) -> float:
    """``1 + 2(a.b)(a.c)(b.c) - (a.c)^2 - (a.b)^2 - (b.c)^2`` for a unit basis.

    Evaluated in exact rational arithmetic on the stored dot products and
    rounded once, so cancellation near a coplanar basis costs nothing.
    """
    return float(_exact_unit3(gram)[3])


def closed_form_inverse_unit3(gram: GramMatrix) -> InverseGram:
    """Inverse of a unit-diagonal 3x3 Gram matrix from its cofactors.

    The (1,3) entry is the cofactor ``(a.b)(b.c) - (a.c)``. Copying the
    (1,2) formula ``(a.c)(b.c) - (a.b)`` there instead is wrong whenever
    ``a.b != a.c``; the tests pin this against ``invert``. Entries are
    computed exactly and rounded once.
    """
    ab, ac, bc, d = _exact_unit3(gram)
    _check_nonsingular(float(d), 1.0, 3)
    a11 = (1 - bc**2) / d
    a22 = (1 - ac**2) / d
    a33 = (1 - ab**2) / d
    a12 = (ac * bc - ab) / d
    a13 = (ab * bc - ac) / d
    a23 = (ab * ac - bc) / d
    entries = np.array(
        [
            [a11, a12, a13],
            [a12, a22, a23],
            [a13, a23, a33],
        ],
        dtype=np.float64,
    )
    return InverseGram(entries, float(d))
