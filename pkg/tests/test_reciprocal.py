import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oblique import gram
from oblique.errors import DegenerateBasis, FingerprintMismatch, SingularGram, VarianceMismatch
from oblique.euclid3 import ZERO, Vec3, dot
from oblique.reciprocal import (
    Basis3,
    completeness_defect,
    components_via_gram,
    contravariant_components,
    covariant_components,
    duality_defect,
    reciprocal_basis,
    reconstruct,
    scalar_product_mixed,
)
from oblique.variance import Role, Variance

from conftest import B1_ROWS, bases, rel_err, vec3s


def dual_by_linear_solve(rows):
    """Rows e^j with e_i . e^j = delta_ij, i.e. the inverse transpose of the row matrix."""
    m = np.asarray(rows, dtype=np.float64)
    return np.linalg.solve(m, np.eye(3)).T


V = Vec3(2, 3, 4)


def test_reciprocal_examples(b1, orthonormal):
    assert reciprocal_basis(orthonormal).vectors == orthonormal.vectors

    oracle = dual_by_linear_solve(B1_ROWS)
    np.testing.assert_allclose(oracle, [[1, -1, 0], [0, 1, -1], [0, 0, 1]], atol=1e-15)
    dual = reciprocal_basis(b1)
    np.testing.assert_array_equal(dual.rows, [[1, -1, 0], [0, 1, -1], [0, 0, 1]])
    assert dual.role is Role.DUAL

    with pytest.raises(DegenerateBasis, match=r"\|triple\| = 0"):
        Basis3.from_rows([[1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_near_coplanar_rejected():
    with pytest.raises(DegenerateBasis):
        Basis3.from_rows([[1, 0, 0], [0, 1, 0], [1, 1, 1e-13]])


def test_degeneracy_threshold_is_scale_invariant():
    rows = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 1e-6]])
    for s in (1e-8, 1.0, 1e8):
        Basis3.from_rows((s * rows).tolist())


def test_duality_defect_examples(b1, orthonormal):
    assert np.max(np.abs(duality_defect(b1, reciprocal_basis(b1)))) <= 1e-12
    np.testing.assert_array_equal(duality_defect(orthonormal, orthonormal), np.zeros((3, 3)))
    d = duality_defect(b1, b1)
    expected = np.array([[dot(u, v) for v in b1.vectors] for u in b1.vectors]) - np.eye(3)
    np.testing.assert_array_equal(d, expected)
    assert d[0, 1] == 1.0


def test_contravariant_examples(b1, orthonormal):
    c = contravariant_components(V, b1)
    assert c.values == (-1.0, -1.0, 4.0)
    assert c.variance is Variance.CONTRAVARIANT
    a, b, cc = b1.vectors
    assert a * -1 + b * -1 + cc * 4 == V
    assert contravariant_components(V, orthonormal).values == (2.0, 3.0, 4.0)
    for basis in (b1, Basis3.from_rows([[2, 0.1, 0], [0.3, -1, 0.2], [0.5, 0.5, 3]])):
        for i, e in enumerate(basis.vectors):
            expected = [0.0, 0.0, 0.0]
            expected[i] = 1.0
            np.testing.assert_allclose(contravariant_components(e, basis).values, expected, atol=1e-15)


def test_covariant_examples(b1, orthonormal):
    c = covariant_components(V, b1)
    assert c.values == tuple(float(sum(x * y for x, y in zip(V, e))) for e in B1_ROWS) == (2.0, 5.0, 9.0)
    assert c.variance is Variance.COVARIANT
    dual = reciprocal_basis(b1)
    assert dual.e1 * 2 + dual.e2 * 5 + dual.e3 * 9 == V
    assert covariant_components(V, orthonormal).values == (2.0, 3.0, 4.0)
    assert covariant_components(ZERO, b1).values == (0.0, 0.0, 0.0)


def test_components_via_gram_examples(b1, orthonormal):
    assert components_via_gram(V, b1).values == pytest.approx((-1, -1, 4), abs=1e-14)
    assert components_via_gram(V, orthonormal).values == (2.0, 3.0, 4.0)
    np.testing.assert_array_equal(gram.gram_matrix(orthonormal).entries, np.eye(3))

    s = math.sqrt(3) / 2
    half = Basis3.from_rows([[1, 0, 0], [0.5, s, 0], [0, 0, 1]])
    v = half.e1 + half.e2
    rhs = np.array([dot(v, e) for e in half.vectors])
    np.testing.assert_allclose(rhs, [1.5, 1.5, 0], atol=1e-15)
    closed_form = np.array([[4 / 3, -2 / 3, 0], [-2 / 3, 4 / 3, 0], [0, 0, 1]])
    np.testing.assert_allclose(closed_form @ rhs, [1, 1, 0], atol=1e-15)
    assert components_via_gram(v, half).values == pytest.approx((1, 1, 0), abs=1e-14)


def test_components_need_original_basis(b1):
    with pytest.raises(VarianceMismatch):
        contravariant_components(V, reciprocal_basis(b1))


def test_reconstruct_examples(b1, orthonormal):
    assert reconstruct(contravariant_components(V, b1), b1) == V
    assert reconstruct(covariant_components(V, b1), b1) == V
    assert reconstruct(contravariant_components(ZERO, b1), b1) == ZERO
    assert reconstruct(covariant_components(ZERO, orthonormal), orthonormal) == ZERO


def test_reconstruct_rejects_wrong_basis(b1, orthonormal):
    with pytest.raises(FingerprintMismatch):
        reconstruct(contravariant_components(V, b1), orthonormal)


def test_fingerprint_is_content_based(b1):
    assert Basis3.from_rows(B1_ROWS).fingerprint == b1.fingerprint
    nudged = Basis3.from_rows([[1, 0, 0], [1, 1, 0], [1, 1, 1 + 2**-52]])
    assert nudged.fingerprint != b1.fingerprint


def test_completeness_examples(b1, orthonormal):
    np.testing.assert_array_equal(completeness_defect(orthonormal), np.zeros((3, 3)))
    dual = reciprocal_basis(b1)
    dyadic = sum(np.outer(e.as_tuple(), f.as_tuple()) for e, f in zip(b1.vectors, dual.vectors))
    assert np.max(np.abs(dyadic - np.eye(3))) <= 1e-12
    assert np.max(np.abs(completeness_defect(b1))) <= 1e-12


def test_scalar_product_examples(b1, orthonormal):
    u = Vec3(1, 1, 1)
    assert contravariant_components(u, b1).values == (0.0, 0.0, 1.0)
    assert scalar_product_mixed(u, V, b1) == dot(u, V) == 9.0
    assert scalar_product_mixed(u, V, orthonormal) == sum(x * y for x, y in zip(u, V))
    p, q = Vec3(1, 2, 0), Vec3(-2, 1, 5)
    assert dot(p, q) == 0.0
    assert abs(scalar_product_mixed(p, q, b1)) <= 1e-12


@given(bases())
def test_reciprocal_matches_linear_solve(basis):
    np.testing.assert_allclose(
        reciprocal_basis(basis).rows, dual_by_linear_solve(basis.rows), rtol=0, atol=1e-10
    )


@given(bases())
def test_double_dual(basis):
    assert rel_err(reciprocal_basis(reciprocal_basis(basis)).rows, basis.rows) <= 1e-10


@given(bases())
def test_duality_and_completeness(basis):
    dual = reciprocal_basis(basis)
    scale = np.max(np.abs(basis.rows)) * np.max(np.abs(dual.rows))
    assert np.max(np.abs(duality_defect(basis, dual))) <= 1e-12 * scale
    assert np.max(np.abs(completeness_defect(basis))) <= 1e-10


@given(bases(), vec3s(scale=3.0))
def test_routes_agree_and_round_trip(basis, v):
    contra = contravariant_components(v, basis)
    via = components_via_gram(v, basis)
    assert np.max(np.abs(np.subtract(contra.values, via.values))) <= 1e-9 * np.max(np.abs(contra.values))
    for comps in (contra, covariant_components(v, basis)):
        back = reconstruct(comps, basis)
        assert np.max(np.abs(np.subtract(back.as_tuple(), v.as_tuple()))) <= 1e-9 * np.max(np.abs(v.as_tuple()))


@given(vec3s(scale=10.0))
def test_self_duality_of_orthonormal_triad(v):
    triad = Basis3.from_rows(np.eye(3).tolist())
    assert contravariant_components(v, triad).values == v.as_tuple()
    assert covariant_components(v, triad).values == v.as_tuple()


def test_left_handed_basis_accepted():
    lh = Basis3.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert lh.volume == -1.0
    assert np.max(np.abs(duality_defect(lh, reciprocal_basis(lh)))) == 0.0
    # orthonormal triads are self-reciprocal whatever their handedness
    assert reciprocal_basis(lh).vectors == lh.vectors


@given(bases(), vec3s(scale=3.0), st.floats(0.1, 10.0))
def test_scale_duality(basis, v, s):
    scaled = Basis3(basis.e1 * s, basis.e2, basis.e3)
    c0, c1 = contravariant_components(v, basis), contravariant_components(v, scaled)
    k0, k1 = covariant_components(v, basis), covariant_components(v, scaled)
    assert c1.c1 == pytest.approx(c0.c1 / s, rel=1e-9, abs=1e-12)
    assert k1.c1 == pytest.approx(k0.c1 * s, rel=1e-12, abs=1e-14)
    assert c1.values[1:] == pytest.approx(c0.values[1:], rel=1e-9, abs=1e-12)


@given(vec3s(scale=3.0), vec3s(scale=3.0), bases(), bases())
def test_scalar_product_independent_of_basis(u, v, b, c):
    ref = dot(u, v)
    tol = 1e-9 * max(abs(ref), math.sqrt(dot(u, u) * dot(v, v)), 1e-300)
    assert abs(scalar_product_mixed(u, v, b) - ref) <= tol
    assert abs(scalar_product_mixed(u, v, b) - scalar_product_mixed(u, v, c)) <= tol


@pytest.mark.parametrize("flatness", [1e-4, 1e-7, 1e-10, 1e-11])
def test_dual_of_every_constructible_basis_is_constructible(flatness):
    b = Basis3.from_rows([[1, 0, 0], [0, 1, 0], [1, 1, flatness]])
    dual = reciprocal_basis(b)
    assert np.max(np.abs(duality_defect(b, dual))) <= 1e-12 * np.max(np.abs(dual.rows))
    assert rel_err(reciprocal_basis(dual).rows, b.rows) <= 1e-10


def test_gram_route_rejects_what_it_cannot_resolve():
    v = Vec3(0.5, -1.0, 2.0)
    fine = Basis3.from_rows([[1, 0, 0], [0, 1, 0], [1, 1, 1e-4]])
    assert rel_err(components_via_gram(v, fine).values, contravariant_components(v, fine).values) <= 1e-6
    flat = Basis3.from_rows([[1, 0, 0], [0, 1, 0], [1, 1, 1e-8]])
    assert contravariant_components(v, flat).values == pytest.approx((-199999999.5, -200000001.0, 2e8), rel=1e-8)
    with pytest.raises(SingularGram):
        components_via_gram(v, flat)
