"""Functional calculus checks for Hermitian matrices.

Spectral projections, resolvents and the unitary one-parameter group of a
Hermitian matrix, together with quadrature verifications of the classical
integral identities that link them: the half-line Fourier transform of the
unitary group reproduces the resolvent, the limiting absorption integral of
resolvent jumps reproduces the spectral projection, and the spectral sum
reproduces the group.  Each ``*_check`` function returns the absolute
deviation between the two routes; nothing is asserted here, so callers can
pin their own tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    _apply_scalar_function,
    _as_square_matrix,
    _as_vector,
    eig_hermitian,
    inner_product,
    matfunc_hermitian,
)

__all__ = [
    "SpectralDecomposition",
    "spectral_decomposition",
    "spectral_projection",
    "resolvent",
    "unitary_group",
    "fourier_resolvent_check",
    "stone_formula_check",
    "spectral_transform_check",
    "bounded_calculus_step_check",
]

#: Relative width (of spectral radius + 1) below which eigenvalues are
#: merged into a single eigenspace.
CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct (clustered) eigenvalues of a Hermitian matrix.

    ``projectors[k]`` is the orthogonal projection onto the eigenspace of
    ``eigenvalues[k]``; multiplicities sum to the dimension; the projectors
    are mutually orthogonal and resolve the identity.
    """

    eigenvalues: np.ndarray
    projectors: np.ndarray
    multiplicities: np.ndarray

    @property
    def dim(self) -> int:
        return self.projectors.shape[1]


def spectral_decomposition(T, cluster_tol: float | None = None) -> SpectralDecomposition:
    """Eigenvalues and eigenprojections of a Hermitian matrix.

    Eigenvalues closer than ``cluster_tol`` (default: ``1e-8`` times the
    spectral radius plus one) are merged into a single eigenspace, so that
    true degeneracies split only by rounding come out as one projector.
    """
    w, V = eig_hermitian(T)
    if cluster_tol is None:
        cluster_tol = CLUSTER_TOL * (float(np.abs(w).max(initial=0.0)) + 1.0)

    values, projectors, mults = [], [], []
    start = 0
    for stop in range(1, len(w) + 1):
        if stop == len(w) or w[stop] - w[stop - 1] > cluster_tol:
            block = V[:, start:stop]
            values.append(w[start:stop].mean())
            projectors.append(block @ block.conj().T)
            mults.append(stop - start)
            start = stop
    return SpectralDecomposition(
        eigenvalues=np.array(values),
        projectors=np.stack(projectors),
        multiplicities=np.array(mults),
    )


def spectral_projection(T, lam: float) -> np.ndarray:
    """Right-continuous spectral projection of ``T`` at height ``lam``.

    Sums the eigenprojections of all eigenvalues less than or equal to
    ``lam`` (an eigenvalue equal to ``lam`` is *included*).  Below the
    spectrum the result is the zero matrix; at or above the top of the
    spectrum it is the identity.
    """
    dec = spectral_decomposition(T)
    out = np.zeros((dec.dim, dec.dim), dtype=complex)
    for value, proj in zip(dec.eigenvalues, dec.projectors):
        if value <= lam:
            out += proj
    return out


def resolvent(T, z: complex) -> np.ndarray:
    """The matrix ``(T - z I)^-1``.

    ``z`` must not be an eigenvalue of ``T``; for a Hermitian ``T`` any
    ``z`` with nonzero imaginary part is safe.

    Raises
    ------
    numpy.linalg.LinAlgError
        If ``T - z I`` is numerically singular.
    """
    T = _as_square_matrix(T)
    return np.linalg.solve(T - z * np.eye(T.shape[0]), np.eye(T.shape[0]))


def unitary_group(T, s: float) -> np.ndarray:
    """The unitary ``exp(i s T)`` of a Hermitian matrix ``T``."""
    return matfunc_hermitian(T, lambda w: np.exp(1j * s * w))


def _trapezoid(vals: np.ndarray, h: float) -> complex:
    return h * (0.5 * (vals[0] + vals[-1]) + vals[1:-1].sum())


def fourier_resolvent_check(
    T, z: complex, f, g, smax: float, steps: int = 40_000
) -> float:
    """Deviation of the half-line group transform from the resolvent.

    For Hermitian ``T`` and ``Im z > 0``,

        (f, (T - z)^-1 g) = i * integral_0^inf e^(i z s) (f, e^(-i s T) g) ds,

    and the integrand decays like ``e^(-Im z * s)``.  The integral is
    truncated at ``smax`` and evaluated with the trapezoid rule on ``steps``
    uniform subintervals, so the returned deviation is dominated by the
    truncation tail ``~ e^(-Im z * smax)`` once the quadrature resolves the
    oscillation.

    Returns
    -------
    float
        Absolute difference between the quadrature and the direct
        resolvent matrix element.
    """
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half plane")
    if smax <= 0 or steps < 1:
        raise ValueError("smax must be positive and steps at least 1")
    f = _as_vector(f)
    g = _as_vector(g)
    w, V = eig_hermitian(T)
    c = np.conj(V.conj().T @ f) * (V.conj().T @ g)
    s = np.linspace(0.0, smax, steps + 1)
    vals = 1j * (np.exp(1j * np.outer(s, z - w)) @ c)
    quad = _trapezoid(vals, s[1] - s[0])
    exact = inner_product(f, resolvent(T, z) @ g)
    return float(abs(quad - exact))


def stone_formula_check(
    T, lam: float, f, g, epsilon: float, delta: float, steps: int = 40_000
) -> float:
    """Deviation of the resolvent-jump integral from the spectral projection.

    Approximates

        (f, E(lam) g) ~ (2 pi i)^-1 * integral_Lambda^(lam+delta)
                        (f, [R(u + i eps) - R(u - i eps)] g) du

    where ``E`` is the right-continuous spectral projection, ``R`` the
    resolvent, and ``Lambda`` sits strictly below the spectrum.  The
    integrand collapses to a sum of Poisson kernels of width ``epsilon``
    centered at the eigenvalues, so the deviation sinks to zero as
    ``epsilon`` and then ``delta`` decrease (order ``epsilon`` for fixed
    well-separated spectrum).

    Parameters
    ----------
    epsilon : float
        Imaginary offset of the two resolvents; positive.
    delta : float
        Overshoot of the integration endpoint past ``lam``; positive, and
        ``lam + delta`` must stay at least ``epsilon`` away from every
        eigenvalue so no endpoint mass is cut in half.
    steps : int, optional
        Trapezoid subintervals; the default resolves Poisson kernels of
        width down to roughly the spectral diameter divided by ``steps``.

    Returns
    -------
    float
        Absolute difference between the quadrature and
        ``(f, spectral_projection(T, lam) g)``.
    """
    if epsilon <= 0 or delta <= 0:
        raise ValueError("epsilon and delta must be positive")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    f = _as_vector(f)
    g = _as_vector(g)
    w, V = eig_hermitian(T)
    endpoint = lam + delta
    if np.min(np.abs(w - endpoint)) <= epsilon:
        raise ValueError(
            f"integration endpoint {endpoint} is within epsilon of an eigenvalue; "
            "shift delta"
        )
    c = np.conj(V.conj().T @ f) * (V.conj().T @ g)
    lo = float(w.min()) - 1.0
    u = np.linspace(lo, endpoint, steps + 1)
    # (2 pi i)^-1 [R(u+ie) - R(u-ie)] has the Poisson kernel as its symbol
    kernel = (epsilon / np.pi) / ((w[None, :] - u[:, None]) ** 2 + epsilon**2)
    quad = _trapezoid(kernel @ c, u[1] - u[0])
    exact = inner_product(f, spectral_projection(T, lam) @ g)
    return float(abs(quad - exact))


def spectral_transform_check(T, s: float, f, g) -> float:
    """Deviation of the spectral sum from the unitary group element.

    Compares ``sum_k e^(i s w_k) (f, P_k g)`` over the spectral
    decomposition with ``(f, e^(i s T) g)``.  The sum is finite and exact,
    so the deviation is pure rounding (at most ``~1e-10`` for sane scales).
    """
    f = _as_vector(f)
    g = _as_vector(g)
    dec = spectral_decomposition(T)
    lhs = sum(
        np.exp(1j * s * value) * inner_product(f, proj @ g)
        for value, proj in zip(dec.eigenvalues, dec.projectors)
    )
    rhs = inner_product(f, unitary_group(T, s) @ g)
    return float(abs(lhs - rhs))


def bounded_calculus_step_check(T, F, Fsteps) -> dict:
    """Compare step-function approximations of ``F(T)`` with ``F(T)``.

    For each approximant ``F_n`` in ``Fsteps``, records the operator
    deviation ``||F_n(T) - F(T)||_2`` and the supremum deviation
    ``max_k |F_n(w_k) - F(w_k)|`` over the eigenvalues.  The spectral
    mapping theorem makes the two equal for Hermitian ``T``, so operator
    convergence follows the scalar sup-distances.

    Returns
    -------
    dict
        ``op_errors`` and ``sup_distances`` as aligned 1-d arrays.
    """
    w, V = eig_hermitian(T)

    def apply(fn):
        fw = _apply_scalar_function(fn, w)
        return (V * fw) @ V.conj().T, fw

    FT, Fw = apply(F)
    op_errors, sup_distances = [], []
    for Fn in Fsteps:
        FnT, Fnw = apply(Fn)
        op_errors.append(float(np.linalg.norm(FnT - FT, 2)))
        sup_distances.append(float(np.abs(Fnw - Fw).max()))
    return {
        "op_errors": np.array(op_errors),
        "sup_distances": np.array(sup_distances),
    }
