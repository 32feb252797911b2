"""Dense complex linear algebra primitives shared by every solver.

Matrices are 2-d ``numpy`` arrays (complex or real), vectors are 1-d arrays.
All functions are pure and never mutate their arguments.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

# Columns whose pivoted-QR diagonal falls below this fraction of the leading
# diagonal are treated as rank-deficient (adjacent DFT atoms are ~0.90
# correlated, so merged supports routinely lose rank).
RANK_RCOND = 1e-10


def _check_matrix(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {M.ndim}")
    return M


def _check_vector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got array of ndim {v.ndim}")
    return v


def matvec(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product M @ v with explicit dimension checking."""
    M, v = _check_matrix(M), _check_vector(v)
    if M.shape[1] != v.shape[0]:
        raise ValueError(f"matvec dimension mismatch: {M.shape} @ {v.shape}")
    return M @ v


def adjoint_matvec(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Conjugate-transpose apply M* @ v (the proxy/correlation operation)."""
    M, v = _check_matrix(M), _check_vector(v)
    if M.shape[0] != v.shape[0]:
        raise ValueError(f"adjoint_matvec dimension mismatch: {M.shape}* @ {v.shape}")
    return M.conj().T @ v


def select_columns(M: np.ndarray, support: np.ndarray) -> np.ndarray:
    """Submatrix of the columns indexed by ``support`` (ascending order)."""
    M = _check_matrix(M)
    support = np.asarray(support, dtype=np.intp)
    if support.size:
        if support.min() < 0 or support.max() >= M.shape[1]:
            raise ValueError(
                f"column index out of range for matrix with {M.shape[1]} columns"
            )
    return M[:, support]


def lstsq(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Least-squares solution of M @ beta ~ b.

    Uses column-pivoted Householder QR (LAPACK xGELSY) with rank threshold
    ``RANK_RCOND``; rank-deficient systems get the minimum-norm solution.
    """
    M, b = _check_matrix(M), _check_vector(b)
    if M.shape[0] == 0 or M.shape[1] == 0:
        raise ValueError("lstsq requires a nonempty matrix")
    if M.shape[0] != b.shape[0]:
        raise ValueError(f"lstsq dimension mismatch: {M.shape} vs {b.shape}")
    beta, _, _, _ = scipy.linalg.lstsq(M, b, cond=RANK_RCOND, lapack_driver="gelsy")
    return beta


def project_onto_span(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of v onto the column span of M."""
    return matvec(M, lstsq(M, v))
