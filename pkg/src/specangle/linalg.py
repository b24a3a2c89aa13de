"""Dense numerical kernels: symmetric and symmetric-definite eigendecompositions
and least-squares solves.

All functions are pure and operate on float64 numpy arrays. Eigenvectors are
returned as matrix columns, unit norm (or B-orthonormal for the generalized
problem), ordered by descending eigenvalue, with a deterministic sign
convention: the largest-magnitude entry of each eigenvector is positive.
"""

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NonFiniteError,
    NotSquareError,
    RankDeficientError,
    SingularBError,
    SpecAngleError,
)

__all__ = ["sym_eig_desc", "gen_eig_desc", "least_squares", "regularized"]

# Relative symmetry defect tolerated before an input is rejected outright.
_SYM_DEFECT_TOL = 1e-8


def _as_matrix(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return A


def _as_symmetric(A, name="matrix"):
    """Validate shape and symmetry defect, then return the symmetrized matrix."""
    A = _as_matrix(A, name)
    if A.shape[0] != A.shape[1]:
        raise NotSquareError(f"{name} must be square, got shape {A.shape}")
    scale = np.max(np.abs(A)) if A.size else 0.0
    defect = np.max(np.abs(A - A.T)) if A.size else 0.0
    if defect > _SYM_DEFECT_TOL * max(scale, 1e-300):
        raise SpecAngleError(
            f"{name} is not symmetric (defect {defect:.3e} vs scale {scale:.3e})"
        )
    return 0.5 * (A + A.T)


def _fix_signs(V):
    """Flip eigenvector signs so the largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(V), axis=0)
    flip = V[idx, np.arange(V.shape[1])] < 0
    V[:, flip] *= -1.0
    return V


def _descending(w, V):
    """Sort eigenpairs by descending eigenvalue, ties keeping original order."""
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def sym_eig_desc(A):
    """Full eigendecomposition of a symmetric matrix, descending eigenvalues.

    Parameters
    ----------
    A : (n, n) array_like, symmetric
        Symmetrized internally as (A + A^t)/2; inputs whose symmetry defect
        exceeds 1e-8 relative to the largest entry are rejected.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in descending order.
    V : (n, n) ndarray
        Orthonormal eigenvectors as columns, V[:, i] matching w[i]. Sign is
        fixed by making the largest-magnitude entry of each column positive.
    """
    A = _as_symmetric(A, "A")
    w, V = np.linalg.eigh(A)
    w, V = _descending(w, V)
    return w, _fix_signs(V)


def regularized(B, ridge):
    """Return B + ridge * (trace(B)/n) * I, the ridge used by gen_eig_desc."""
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    if ridge < 0:
        raise SpecAngleError("ridge must be nonnegative")
    if ridge == 0 or n == 0:
        return B.copy()
    return B + (ridge * np.trace(B) / n) * np.eye(n)


def gen_eig_desc(A, B, ridge=0.0):
    """Generalized symmetric-definite eigendecomposition A v = lambda B' v.

    B is regularized to B' = B + ridge * (trace(B)/n) * I, Cholesky-factored,
    and the pencil reduced to a standard symmetric problem. Eigenvectors are
    B'-orthonormal: v_i^t B' v_j = delta_ij.

    Parameters
    ----------
    A, B : (n, n) array_like, symmetric
        B must be positive semidefinite; positive definite after the ridge.
    ridge : float
        Relative ridge, scaled by the mean diagonal of B.

    Returns
    -------
    w : (n,) ndarray
        Generalized eigenvalues in descending order.
    V : (n, n) ndarray
        B'-orthonormal eigenvectors as columns, sign-fixed.

    Raises
    ------
    SingularBError
        If the regularized B fails Cholesky factorization.
    """
    A = _as_symmetric(A, "A")
    B = _as_symmetric(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatchError(
            f"A and B must share shape, got {A.shape} and {B.shape}"
        )
    B_reg = regularized(B, ridge)
    try:
        L = np.linalg.cholesky(B_reg)
    except np.linalg.LinAlgError as exc:
        raise SingularBError(
            "regularized B is not positive definite; increase ridge"
        ) from exc
    # Reduce to the standard problem C u = lambda u with C = L^-1 A L^-t.
    half = scipy.linalg.solve_triangular(L, A, lower=True)
    C = scipy.linalg.solve_triangular(L, half.T, lower=True).T
    C = 0.5 * (C + C.T)
    w, U = np.linalg.eigh(C)
    w, U = _descending(w, U)
    V = scipy.linalg.solve_triangular(L.T, U, lower=False)
    return w, _fix_signs(V)


def least_squares(A, B):
    """Minimize ||B - A C||_F for C via column-pivoted QR.

    Parameters
    ----------
    A : (m, k) array_like
        Design matrix, required to have full column rank.
    B : (m, p) array_like
        Right-hand sides, one per column.

    Returns
    -------
    C : (k, p) ndarray

    Raises
    ------
    RankDeficientError
        If pivoted factorization detects linearly dependent columns, e.g.
        duplicate atoms selected by a pursuit.
    """
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatchError(
            f"row counts differ: A has {A.shape[0]}, B has {B.shape[0]}"
        )
    m, k = A.shape
    Q, R, piv = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(m, k) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    if k > 0 and (diag.size < k or diag[0] == 0.0 or np.any(diag <= tol)):
        raise RankDeficientError("design matrix has linearly dependent columns")
    C_piv = scipy.linalg.solve_triangular(R[:k, :k], Q.T[:k] @ B, lower=False)
    C = np.empty_like(C_piv)
    C[piv] = C_piv
    return C
