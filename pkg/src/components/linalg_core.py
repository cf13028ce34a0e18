"""
Dense linear-algebra helpers shared by the samplers, estimators and designs.

Everything here is a pure function of its inputs. No routine inverts XᵀX:
solves go through an economic QR factorization and quadratic-form quantities
come from the singular spectrum.
"""
from typing import Optional

import numpy as np
import scipy.linalg as sla

from src.constants import RANK_TOLERANCE
from src.exception import RankDeficient


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    return A


def singular_values(A) -> np.ndarray:
    """Singular values s_1 >= ... >= s_min(rows, cols) >= 0."""
    return sla.svdvals(as_matrix(A), check_finite=True)


def rank_cutoff(s: np.ndarray, shape: tuple) -> float:
    return max(shape) * (s[0] if s.size else 0.0) * RANK_TOLERANCE


def is_rank_deficient(s: np.ndarray, shape: tuple) -> bool:
    rows, cols = shape
    if rows < cols or s.size == 0 or s[0] == 0.0:
        return True
    return bool(s[-1] < rank_cutoff(s, shape))


def check_full_rank(A: np.ndarray) -> np.ndarray:
    """Return the spectrum of A, raising RankDeficient when rank(A) < cols."""
    s = singular_values(A)
    if is_rank_deficient(s, A.shape):
        smallest = s[-1] if s.size else 0.0
        raise RankDeficient(
            f"matrix of shape {A.shape} is rank deficient (s_min={smallest:.3e}, cutoff={rank_cutoff(s, A.shape):.3e})"
        )
    return s


def row_scale(X: np.ndarray, y: Optional[np.ndarray], weights: Optional[np.ndarray]):
    """Fold weights into the rows: sqrt(w_i) x_i, sqrt(w_i) y_i."""
    if weights is None:
        return X, y
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.shape[0] != X.shape[0]:
        raise ValueError(f"got {weights.shape[0]} weights for {X.shape[0]} rows")
    if np.any(~np.isfinite(weights)) or np.any(weights <= 0):
        raise ValueError("weights must be positive and finite")
    root = np.sqrt(weights)
    return X * root[:, None], (None if y is None else y * root)


def least_squares(X, y, weights=None) -> np.ndarray:
    """
    arg min_beta sum_i w_i (y_i - x_i' beta)^2 by economic QR.

    Raises RankDeficient when the (row-scaled) X has numerical rank below its
    column count.
    """
    X = as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != X.shape[0]:
        raise ValueError(f"y has {y.shape[0]} entries for {X.shape[0]} rows")
    Xw, yw = row_scale(X, y, weights)
    check_full_rank(Xw)
    Q, R = sla.qr(Xw, mode="economic")
    return sla.solve_triangular(R, Q.T @ yw, lower=False)


def condition_number_info(X) -> float:
    """
    kappa(XᵀX) = (s_1 / s_p)^2.

    Returns +inf when X has fewer rows than columns or s_p falls below the rank
    cutoff; infinity is a valid diagnostic, not an error.
    """
    X = as_matrix(X)
    s = singular_values(X)
    if is_rank_deficient(s, X.shape):
        return float("inf")
    return float((s[0] / s[-1]) ** 2)


def leverage_scores(X) -> np.ndarray:
    """Hat-matrix diagonal h_ii = ||row i of the thin Q factor||^2."""
    X = as_matrix(X)
    check_full_rank(X)
    Q, _ = sla.qr(X, mode="economic")
    return np.einsum("ij,ij->i", Q, Q)


def trace_inverse_gram(s: np.ndarray) -> float:
    """tr[(XᵀX)^-1] from the singular spectrum of X."""
    return float(np.sum(1.0 / s ** 2))
