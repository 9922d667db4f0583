"""Characteristic matrices: orthogonal projections onto operator graphs.

For a square matrix ``T`` acting on ``C^n``, the graph ``{(f, T f)}`` is a
closed subspace of ``C^n (+) C^n``.  The orthogonal projection onto it is a
2x2 block matrix -- the *characteristic matrix* of ``T`` -- with blocks

    p11 = (T* T + I)^-1          p12 = T* (T T* + I)^-1
    p21 = T (T* T + I)^-1        p22 = I - (T T* + I)^-1

The block structure satisfies a family of algebraic identities (block
symmetry, idempotency, trivial kernels, factorization through ``T``) that
are checked by :func:`verify_identities`, and it transforms simply under
taking adjoints and inverses of ``T``.  Every operation here is a pure
function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .hilbert import _as_square_matrix, adjoint

__all__ = [
    "CharacteristicMatrix",
    "IdentityReport",
    "char_matrix",
    "char_matrix_oracle",
    "verify_identities",
    "adjoint_char_matrix",
    "inverse_char_matrix",
    "operator_from_char_matrix",
]

#: Default residual tolerance for the identity suite (absolute Frobenius;
#: every block of a projection has norm at most 1).
IDENTITY_TOL = 1e-10

#: Default scale factor for kernel-triviality thresholds: a smallest
#: singular value sigma_min(M) counts as nonzero when it exceeds
#: ``KERNEL_TOL * (1 + ||M||_2)``.
KERNEL_TOL = 1e-10


@dataclass(frozen=True)
class CharacteristicMatrix:
    """The four blocks of the projection onto an operator graph."""

    p11: np.ndarray
    p12: np.ndarray
    p21: np.ndarray
    p22: np.ndarray

    def __post_init__(self):
        n = _as_square_matrix(self.p11).shape[0]
        for name in ("p12", "p21", "p22"):
            if _as_square_matrix(getattr(self, name)).shape != (n, n):
                raise ValueError("all blocks must share one square shape")

    @property
    def n(self) -> int:
        """Dimension of the underlying space."""
        return self.p11.shape[0]

    def assemble(self) -> np.ndarray:
        """The full ``2n x 2n`` projection ``[[p11, p12], [p21, p22]]``."""
        return np.block([[self.p11, self.p12], [self.p21, self.p22]])

    def blockwise_distance(self, other: "CharacteristicMatrix") -> float:
        """Largest Frobenius distance between corresponding blocks."""
        return max(
            float(np.linalg.norm(getattr(self, b) - getattr(other, b), "fro"))
            for b in ("p11", "p12", "p21", "p22")
        )


def _solve_hpd(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # Cholesky-based solve; A is Hermitian positive definite by construction.
    return scipy.linalg.solve(A, B, assume_a="pos")


def char_matrix(T) -> CharacteristicMatrix:
    """Characteristic matrix of ``T`` from its closed-form blocks.

    The two Gram matrices ``T* T + I`` and ``T T* + I`` are Hermitian
    positive definite, so the blocks are obtained from Cholesky solves
    rather than explicit inversion.

    Parameters
    ----------
    T : array_like
        Square complex matrix.

    Returns
    -------
    CharacteristicMatrix

    Raises
    ------
    numpy.linalg.LinAlgError
        If a solve breaks down numerically (possible only for extreme
        ``||T||``, where ``T* T + I`` overflows its conditioning).
    """
    T = _as_square_matrix(T).astype(complex)
    n = T.shape[0]
    I = np.eye(n)
    Th = adjoint(T)
    p11 = _solve_hpd(Th @ T + I, I)
    q = _solve_hpd(T @ Th + I, I)
    return CharacteristicMatrix(p11=p11, p12=Th @ q, p21=T @ p11, p22=I - q)


def char_matrix_oracle(T) -> CharacteristicMatrix:
    """Characteristic matrix of ``T`` by orthonormalizing a graph basis.

    Stacks ``[I; T]`` columnwise (its columns span the graph), orthonormalizes
    them with a Householder QR factorization -- which keeps the basis
    orthonormal to machine precision regardless of the conditioning of the
    stacked matrix -- and forms ``Q Q*``.  Entirely independent of the
    closed-form route in :func:`char_matrix`, which makes the two usable as
    cross-checks of one another.
    """
    T = _as_square_matrix(T).astype(complex)
    n = T.shape[0]
    S = np.vstack([np.eye(n), T])
    Q, _ = np.linalg.qr(S)  # reduced: Q is 2n x n with orthonormal columns
    P = Q @ Q.conj().T
    return CharacteristicMatrix(
        p11=P[:n, :n], p12=P[:n, n:], p21=P[n:, :n], p22=P[n:, n:]
    )


@dataclass
class IdentityReport:
    """Residuals of the block-identity suite for one characteristic matrix.

    ``residuals`` maps an identity label to a nonnegative number:

    ======  ==========================================================
    label   meaning
    ======  ==========================================================
    A6      block symmetry: ``p21 == p12*`` and Hermitian diagonal
            blocks (largest Frobenius deviation)
    A7      idempotency of the assembled projection ``||P^2 - P||_F``
    A8      kernel triviality: smallest singular value of ``p11`` and
            of ``I - p22`` (the *minimum* of the two; passes when it
            exceeds the kernel threshold, unlike the other labels)
    A12     factorization ``p21 == T p11`` and ``p22 == T p12``
    A13     factorization ``I - p11 == T* p21`` and ``p12 == T* (I - p22)``
    ======  ==========================================================
    """

    residuals: dict = field(default_factory=dict)
    passes: dict = field(default_factory=dict)
    tol: float = IDENTITY_TOL
    kernel_threshold: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(self.passes.values())


def verify_identities(
    T, P: CharacteristicMatrix, tol: float = IDENTITY_TOL, kernel_tol: float = KERNEL_TOL
) -> IdentityReport:
    """Check the block-identity suite of a characteristic matrix.

    Parameters
    ----------
    T : array_like
        The operator that ``P`` is claimed to belong to.
    P : CharacteristicMatrix
        Candidate projection blocks.
    tol : float, optional
        Absolute Frobenius tolerance for the residual labels.
    kernel_tol : float, optional
        Scale factor for the kernel-triviality threshold of label ``A8``.
        Since ``sigma_min(p11) = 1/(1 + ||T||_2^2)`` exactly, the rule can
        only certify operators with ``||T||_2`` below roughly
        ``1/sqrt(kernel_tol)``; beyond that A8 reports a (spurious)
        failure even for perfectly healthy ``T``.

    Returns
    -------
    IdentityReport
        Residual and pass/fail per label; see :class:`IdentityReport` for
        the label key.
    """
    T = _as_square_matrix(T).astype(complex)
    if T.shape[0] != P.n:
        raise ValueError(f"operator is {T.shape[0]}-dimensional but blocks are {P.n}")
    Th = adjoint(T)
    I = np.eye(P.n)

    r = {}
    r["A6"] = max(
        np.linalg.norm(P.p21 - adjoint(P.p12), "fro"),
        np.linalg.norm(P.p11 - adjoint(P.p11), "fro"),
        np.linalg.norm(P.p22 - adjoint(P.p22), "fro"),
    )
    full = P.assemble()
    r["A7"] = np.linalg.norm(full @ full - full, "fro")
    sig_p11 = np.linalg.svd(P.p11, compute_uv=False)[-1]
    sig_c22 = np.linalg.svd(I - P.p22, compute_uv=False)[-1]
    r["A8"] = min(float(sig_p11), float(sig_c22))
    r["A12"] = max(
        np.linalg.norm(P.p21 - T @ P.p11, "fro"),
        np.linalg.norm(P.p22 - T @ P.p12, "fro"),
    )
    r["A13"] = max(
        np.linalg.norm((I - P.p11) - Th @ P.p21, "fro"),
        np.linalg.norm(P.p12 - Th @ (I - P.p22), "fro"),
    )
    r = {k: float(v) for k, v in r.items()}

    threshold = kernel_tol * (1.0 + max(np.linalg.norm(P.p11, 2), np.linalg.norm(I - P.p22, 2)))
    passes = {k: (v <= tol) for k, v in r.items() if k != "A8"}
    passes["A8"] = r["A8"] > threshold
    return IdentityReport(residuals=r, passes=passes, tol=tol, kernel_threshold=threshold)


def adjoint_char_matrix(P: CharacteristicMatrix) -> CharacteristicMatrix:
    """Characteristic matrix of the adjoint operator.

    If ``P`` projects onto the graph of ``T``, the returned blocks
    ``(I - p22, p21, p12, I - p11)`` project onto the graph of ``T*``.
    Involutive: applying it twice returns the original blocks.
    """
    I = np.eye(P.n)
    return CharacteristicMatrix(
        p11=I - P.p22, p12=P.p21, p21=P.p12, p22=I - P.p11
    )


def _kernel_trivial(M: np.ndarray, kernel_tol: float) -> tuple[bool, float, float]:
    sig = float(np.linalg.svd(M, compute_uv=False)[-1])
    threshold = kernel_tol * (1.0 + float(np.linalg.norm(M, 2)))
    return sig > threshold, sig, threshold


def inverse_char_matrix(
    P: CharacteristicMatrix, kernel_tol: float = KERNEL_TOL
) -> CharacteristicMatrix:
    """Characteristic matrix of the inverse operator.

    The operator ``T`` behind ``P`` is injective exactly when ``I - p11``
    has trivial kernel; in that case the blocks ``(p22, p21, p12, p11)``
    (diagonal blocks swapped, off-diagonal blocks exchanged) project onto
    the graph of ``T^-1``.

    Raises
    ------
    ValueError
        If the injectivity gate fails, i.e. the smallest singular value of
        ``I - p11`` is at or below ``kernel_tol * (1 + ||I - p11||_2)``.
    """
    ok, sig, threshold = _kernel_trivial(np.eye(P.n) - P.p11, kernel_tol)
    if not ok:
        raise ValueError(
            f"operator has a nontrivial kernel: sigma_min(I - p11) = {sig:.3e} "
            f"<= threshold {threshold:.3e}; no inverse graph exists"
        )
    return CharacteristicMatrix(p11=P.p22, p12=P.p21, p21=P.p12, p22=P.p11)


def operator_from_char_matrix(P: CharacteristicMatrix) -> np.ndarray:
    """Recover ``T`` from its characteristic matrix via ``T = p21 p11^-1``.

    Raises
    ------
    numpy.linalg.LinAlgError
        If ``p11`` is not positive definite to working precision (it always
        is for a genuine characteristic matrix).
    """
    # T p11 = p21 and p11* = p11, so T* solves p11 X = p21*.
    try:
        c, low = scipy.linalg.cho_factor(P.p11)
        Th = scipy.linalg.cho_solve((c, low), adjoint(P.p21))
    except scipy.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"p11 block is numerically singular: {exc}") from exc
    return adjoint(Th)
