"""Core Hilbert-space helpers on dense complex vectors and matrices.

All routines work on finite ``numpy`` arrays with ``complex128`` (or real)
dtype.  The inner product is linear in the *second* argument and conjugate
linear in the first, so ``inner_product(f, g) == np.vdot(f, g)``.  Unless a
docstring says otherwise, matrix tolerances are relative to the Frobenius
norm of the input.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "GraphPair",
    "HermitianEigen",
    "inner_product",
    "norm",
    "pair_inner",
    "pair_norm",
    "adjoint",
    "eig_hermitian",
    "matfunc_hermitian",
    "polarization",
]

#: Relative Frobenius tolerance up to which a matrix counts as Hermitian.
HERMITIAN_TOL = 1e-12


def _as_vector(f) -> np.ndarray:
    f = np.asarray(f)
    if f.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("vector contains non-finite entries")
    return f


def _as_square_matrix(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def inner_product(f, g) -> complex:
    """Complex inner product, conjugate linear in ``f`` and linear in ``g``.

    Parameters
    ----------
    f, g : array_like
        Vectors of equal length.

    Returns
    -------
    complex
        ``sum(conj(f) * g)``.
    """
    f = _as_vector(f)
    g = _as_vector(g)
    if f.shape != g.shape:
        raise ValueError(f"dimension mismatch: {f.shape} vs {g.shape}")
    return complex(np.vdot(f, g))


def norm(f) -> float:
    """Euclidean norm induced by :func:`inner_product`."""
    return float(np.linalg.norm(_as_vector(f)))


class GraphPair(NamedTuple):
    """A pair ``(first, second)`` of vectors of equal length.

    Models an element of the direct sum of two copies of the same space,
    e.g. a point ``(f, T f)`` on the graph of an operator ``T``.
    """

    first: np.ndarray
    second: np.ndarray


def pair_inner(p: GraphPair, q: GraphPair) -> complex:
    """Inner product on pairs: ``(p1, q1) + (p2, q2)``.

    Equals the plain inner product of the concatenated vectors, i.e. the
    direct-sum embedding is isometric.
    """
    return inner_product(p.first, q.first) + inner_product(p.second, q.second)


def pair_norm(p: GraphPair) -> float:
    """Norm induced by :func:`pair_inner`."""
    return float(np.sqrt(norm(p.first) ** 2 + norm(p.second) ** 2))


def adjoint(A) -> np.ndarray:
    """Conjugate transpose of a matrix."""
    A = np.asarray(A)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    return A.conj().T


class HermitianEigen(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` has orthonormal
    columns with ``A == eigenvectors @ diag(eigenvalues) @ eigenvectors*``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def require_hermitian(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return the symmetrized matrix ``(A + A*)/2`` or raise.

    The input must be Hermitian up to a relative Frobenius deviation of
    ``tol``; the tiny skew part is silently discarded.
    """
    A = _as_square_matrix(A)
    scale = np.linalg.norm(A, "fro")
    dev = np.linalg.norm(A - A.conj().T, "fro")
    if dev > tol * max(scale, 1.0):
        raise ValueError(
            f"matrix is not Hermitian: relative deviation {dev / max(scale, 1.0):.3e} "
            f"exceeds {tol:.1e}"
        )
    return (A + A.conj().T) / 2.0


def eig_hermitian(A, tol: float = HERMITIAN_TOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    A : array_like
        Square matrix, Hermitian within relative tolerance ``tol``.  The
        matrix is symmetrized before factorization.
    tol : float, optional
        Hermitian tolerance (relative Frobenius).

    Returns
    -------
    HermitianEigen
        Real ascending eigenvalues and orthonormal eigenvectors.

    Raises
    ------
    ValueError
        If ``A`` is not Hermitian within ``tol``.
    numpy.linalg.LinAlgError
        If the eigensolver fails to converge.
    """
    H = require_hermitian(A, tol)
    w, V = np.linalg.eigh(H)
    return HermitianEigen(w, V)


def matfunc_hermitian(A, F: Callable, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Parameters
    ----------
    A : array_like
        Hermitian matrix.
    F : callable
        Scalar function; applied to the (real) eigenvalue array.  May be
        vectorized or act on scalars.

    Returns
    -------
    numpy.ndarray
        ``V @ diag(F(w)) @ V*`` for the eigendecomposition ``(w, V)``.
    """
    w, V = eig_hermitian(A, tol)
    fw = _apply_scalar_function(F, w)
    return (V * fw) @ V.conj().T


def _apply_scalar_function(F: Callable, w: np.ndarray) -> np.ndarray:
    """Evaluate ``F`` on an eigenvalue array, vectorized or element by element."""
    try:
        fw = np.asarray(F(w))
        if fw.shape == w.shape:
            return fw
    except (TypeError, ValueError):
        pass
    return np.array([F(x) for x in w])


def polarization(q: Callable[[np.ndarray], complex], k1, k2) -> complex:
    """Recover the sesquilinear form ``(k1, A k2)`` from its quadratic form.

    Parameters
    ----------
    q : callable
        Quadratic form ``q(k) = (k, A k)`` of a linear operator ``A``.
    k1, k2 : array_like
        Vectors of equal length.

    Returns
    -------
    complex
        ``(q(k1+k2) - q(k1-k2) + 1j*q(k1-1j*k2) - 1j*q(k1+1j*k2)) / 4``,
        which equals ``(k1, A k2)`` for the inner-product convention used
        throughout (linear in the second argument).
    """
    k1 = _as_vector(k1).astype(complex)
    k2 = _as_vector(k2).astype(complex)
    if k1.shape != k2.shape:
        raise ValueError(f"dimension mismatch: {k1.shape} vs {k2.shape}")
    return (
        q(k1 + k2)
        - q(k1 - k2)
        + 1j * q(k1 - 1j * k2)
        - 1j * q(k1 + 1j * k2)
    ) / 4.0
