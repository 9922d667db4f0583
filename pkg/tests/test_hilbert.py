import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from charmat.hilbert import (
    GraphPair,
    adjoint,
    eig_hermitian,
    inner_product,
    matfunc_hermitian,
    norm,
    pair_inner,
    pair_norm,
    polarization,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def complex_vectors(n):
    return st.tuples(
        arrays(float, n, elements=finite), arrays(float, n, elements=finite)
    ).map(lambda p: p[0] + 1j * p[1])


@given(complex_vectors(5), complex_vectors(5))
def test_inner_product_conjugate_symmetry(f, g):
    assert np.isclose(inner_product(f, g), np.conj(inner_product(g, f)))


@given(complex_vectors(4), complex_vectors(4), st.complex_numbers(max_magnitude=1e3))
def test_inner_product_linear_in_second_argument(f, g, a):
    lhs = inner_product(f, a * g)
    rhs = a * inner_product(f, g)
    assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(rhs))


def test_inner_product_convention():
    # conjugation sits on the first argument
    assert inner_product([1j], [1.0]) == -1j
    assert inner_product([1.0], [1j]) == 1j


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        inner_product([1.0, 2.0], [1.0])


def test_inner_product_rejects_nan():
    with pytest.raises(ValueError, match="finite"):
        inner_product([np.nan], [1.0])


def test_norm_positive_definite():
    assert norm([0.0, 0.0]) == 0.0
    assert norm([3.0, 4.0]) == pytest.approx(5.0)


def test_pair_inner_pinned_example():
    p = GraphPair(np.array([1j]), np.array([1.0]))
    q = GraphPair(np.array([1.0]), np.array([1j]))
    assert pair_inner(p, q) == pytest.approx(0.0)


def test_pair_inner_matches_direct_sum_embedding():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a, b, c, d = (rng.standard_normal(6) + 1j * rng.standard_normal(6) for _ in range(4))
        p, q = GraphPair(a, b), GraphPair(c, d)
        embedded = inner_product(np.concatenate([a, b]), np.concatenate([c, d]))
        assert pair_inner(p, q) == pytest.approx(embedded)
        assert pair_norm(p) == pytest.approx(norm(np.concatenate([a, b])))


def test_adjoint_is_conjugate_transpose():
    A = np.array([[1 + 2j, 3.0], [0.0, -1j]])
    assert_allclose(adjoint(A), A.conj().T)
    assert_allclose(adjoint(adjoint(A)), A)


def test_eig_hermitian_reconstructs():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    A = (A + A.conj().T) / 2
    w, V = eig_hermitian(A)
    assert np.all(np.diff(w) >= 0)
    assert_allclose(V.conj().T @ V, np.eye(8), atol=1e-12)
    assert_allclose((V * w) @ V.conj().T, A, atol=1e-12)


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_hermitian_symmetrizes_tiny_skew():
    A = np.array([[1.0, 0.5], [0.5 + 1e-15, 2.0]])
    w, V = eig_hermitian(A)
    assert_allclose((V * w) @ V.conj().T, (A + A.conj().T) / 2, atol=1e-12)


def test_matfunc_square_matches_matrix_product():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    A = (A + A.conj().T) / 2
    assert_allclose(matfunc_hermitian(A, lambda w: w**2), A @ A, atol=1e-10)


def test_matfunc_accepts_scalar_only_function():
    A = np.diag([1.0, 4.0])
    F = lambda x: float(x) ** 0.5  # not vectorized
    assert_allclose(matfunc_hermitian(A, F), np.diag([1.0, 2.0]), atol=1e-12)


def test_polarization_pinned_scalar():
    # quadratic form of multiplication by 0.2
    q = lambda k: 0.2 * inner_product(k, k)
    assert polarization(q, np.array([1.0]), np.array([1.0])) == pytest.approx(0.2)


def test_polarization_recovers_matrix_elements():
    rng = np.random.default_rng(11)
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    q = lambda k: inner_product(k, A @ k)
    for _ in range(10):
        k1 = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        k2 = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        expected = inner_product(k1, A @ k2)
        assert abs(polarization(q, k1, k2) - expected) <= 1e-10 * (1 + abs(expected))


@settings(max_examples=25)
@given(complex_vectors(3), complex_vectors(3))
def test_polarization_identity_operator(k1, k2):
    q = lambda k: inner_product(k, k)
    expected = inner_product(k1, k2)
    # the four quadratic terms are O(max-norm squared), so cancellation
    # error scales the same way
    scale = max(np.linalg.norm(k1), np.linalg.norm(k2)) ** 2
    assert abs(polarization(q, k1, k2) - expected) <= 1e-12 * (1.0 + scale)
