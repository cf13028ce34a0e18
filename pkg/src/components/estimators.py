"""
Subsample least squares and its diagnostics.

Covers the MSE decomposition E||beta~ - beta0||^2 = sigma^2 tr[(X*ᵀX*)^-1] + hᵀQᵀQh
(Q = (X*ᵀX*)^-1 X*ᵀ), the worst case of that MSE over all misspecification
vectors with ||h||^2 <= alpha^2 tr(X*ᵀX*), and the perturbation bounds for a
subsample written as a design plus a gap, X*_L = L + D.
"""
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla
from scipy.stats import median_abs_deviation

from src.components.designs import rescale_design
from src.components.linalg_core import (
    as_matrix,
    check_full_rank,
    least_squares,
    row_scale,
    singular_values,
    trace_inverse_gram,
)
from src.constants import HUBER_MAX_ITER, HUBER_TOL, HUBER_TUNING
from src.entity.artifact_entity import (
    Box,
    DesignMatrix,
    FitResult,
    MEstimate,
    MseReport,
    WorstCase,
)
from src.exception import AssumptionViolated, NonConvergence
from src.logger import get_logger
logger = get_logger(__name__)


def fit_sls(X_sub, y_sub, weights: Optional[np.ndarray] = None, method: str = "SLS") -> FitResult:
    """Subsample (weighted) least squares with kappa and trace diagnostics of the weighted X_sub."""
    X_sub = as_matrix(X_sub)
    Xw, _ = row_scale(X_sub, None, weights)
    s = check_full_rank(Xw)
    beta = least_squares(X_sub, y_sub, weights)
    return FitResult(
        beta=beta,
        kappa_sub=float((s[0] / s[-1]) ** 2),
        trace_inv=trace_inverse_gram(s),
        method=method,
    )


def mse_decompose(X_sub, h_sub, sigma2: float) -> MseReport:
    """Variance term sigma^2 * sum_j s_j^-2 plus bias term ||Q h||^2 (Q h by a least-squares solve)."""
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2}")
    X_sub = as_matrix(X_sub)
    s = check_full_rank(X_sub)
    bias = least_squares(X_sub, h_sub)
    return MseReport.from_terms(sigma2 * trace_inverse_gram(s), float(bias @ bias))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(np.abs(v) > 1e-12 * np.abs(v).max())
    if nonzero.size and v[nonzero[0]] < 0:
        return -v
    return v


def worst_case_mse(X_sub, sigma2: float, alpha: float) -> WorstCase:
    """
    sigma^2 tr[(XᵀX)^-1] + alpha^2 tr(XᵀX) / lambda_min(XᵀX), attained by
    h* = sqrt(alpha^2 tr(XᵀX)) u_p with u_p the left singular vector of s_p.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    X_sub = as_matrix(X_sub)
    check_full_rank(X_sub)
    U, s, _ = sla.svd(X_sub, full_matrices=False)
    trace_gram = float(np.sum(s ** 2))
    variance = sigma2 * trace_inverse_gram(s)
    bias = alpha ** 2 * trace_gram / s[-1] ** 2
    h_star = np.sqrt(alpha ** 2 * trace_gram) * _fix_sign(U[:, -1])
    return WorstCase(alpha=alpha, bound=variance + bias, h_star=h_star, variance_term=variance, bias_term=bias)


def _design_and_gap(L, D) -> Tuple[np.ndarray, float]:
    L = as_matrix(L)
    D = as_matrix(D)
    if L.shape != D.shape:
        raise ValueError(f"L {L.shape} and D {D.shape} must share a shape")
    s_L = singular_values(L)
    s1_D = float(singular_values(D)[0])
    if s_L.size < L.shape[1] or s_L[-1] <= s1_D:
        raise AssumptionViolated(
            f"perturbation bound needs s_p(L) > s_1(D), got s_p(L)={s_L[-1]:.6g}, s_1(D)={s1_D:.6g}"
        )
    return s_L, s1_D


def weyl_kappa_bound(L, D) -> float:
    """kappa((L + D)ᵀ(L + D)) <= ((s_1(L) + s_1(D)) / (s_p(L) - s_1(D)))^2."""
    s_L, s1_D = _design_and_gap(L, D)
    return float(((s_L[0] + s1_D) / (s_L[-1] - s1_D)) ** 2)


def trace_inv_bound(L, D) -> float:
    """tr[((L + D)ᵀ(L + D))^-1] <= p / (s_p(L) - s_1(D))^2."""
    s_L, s1_D = _design_and_gap(L, D)
    p = as_matrix(L).shape[1]
    return float(p / (s_L[-1] - s1_D) ** 2)


def theorem_bound(L, sigma2: float, alpha: float) -> float:
    """
    Leading terms sigma^2 p^2 kappa(LᵀL) / tr(LᵀL) + alpha^2 p kappa(LᵀL) of the
    design-based MSE bound. The O(s_1(D)) remainder is not estimated.
    """
    L = as_matrix(L)
    s = check_full_rank(L)
    p = L.shape[1]
    kappa = (s[0] / s[-1]) ** 2
    trace_gram = float(np.sum(s ** 2))
    return float(sigma2 * p ** 2 * kappa / trace_gram + alpha ** 2 * p * kappa)


def theta_adjusted_bound(L: DesignMatrix, box: Box, sigma2: float, alpha: float) -> float:
    """theorem_bound for the design moved into a trimmed box; shrinking the box raises the variance part."""
    return theorem_bound(rescale_design(L, box).points, sigma2, alpha)


def condition_perturbation_ratio(X_sub, y_sub, delta_Xty) -> Tuple[float, float]:
    """
    (||delta beta|| / ||beta||, kappa * ||delta|| / ||Xᵀy||) when Xᵀy is moved by delta.
    The first never exceeds the second.
    """
    X_sub = as_matrix(X_sub)
    y_sub = np.asarray(y_sub, dtype=float).ravel()
    delta = np.asarray(delta_Xty, dtype=float).ravel()
    check_full_rank(X_sub)
    Xty = X_sub.T @ y_sub
    if not np.any(Xty):
        raise ValueError("Xᵀy is zero, the relative perturbation is undefined")
    _, s, Vt = sla.svd(X_sub, full_matrices=False)
    beta = least_squares(X_sub, y_sub)
    delta_beta = Vt.T @ ((Vt @ delta) / s ** 2)
    kappa = (s[0] / s[-1]) ** 2
    lhs = float(np.linalg.norm(delta_beta) / np.linalg.norm(beta))
    rhs = float(kappa * np.linalg.norm(delta) / np.linalg.norm(Xty))
    return lhs, rhs


def fit_huber_m(
    X,
    y,
    tuning: float = HUBER_TUNING,
    max_iter: int = HUBER_MAX_ITER,
    tol: float = HUBER_TOL,
    raise_on_failure: bool = False,
) -> MEstimate:
    """
    Huber M-estimate by iteratively reweighted least squares.

    Starts from OLS. Each pass re-estimates the scale by the normalized MAD of
    the residuals, sets w_i = min(1, tuning * scale / |resid_i|) and refits.
    Stops when the largest coefficient change relative to the largest
    coefficient drops below tol.
    """
    X = as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    beta = least_squares(X, y)
    exact_fit = 1e3 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(y))))
    scale = 0.0

    for iteration in range(1, max_iter + 1):
        resid = y - X @ beta
        scale = float(median_abs_deviation(resid, scale="normal"))
        if scale <= exact_fit:
            # residuals are at rounding level: nothing to downweight
            return MEstimate(beta=beta, scale=scale, iterations=iteration, converged=True)

        abs_resid = np.abs(resid)
        weights = np.ones_like(abs_resid)
        large = abs_resid > tuning * scale
        weights[large] = tuning * scale / abs_resid[large]

        beta_new = least_squares(X, y, weights)
        change = np.max(np.abs(beta_new - beta)) / max(float(np.max(np.abs(beta))), np.finfo(float).tiny)
        beta = beta_new
        if change < tol:
            return MEstimate(beta=beta, scale=scale, iterations=iteration, converged=True)

    message = f"Huber IRLS did not converge in {max_iter} iterations (tol={tol})"
    if raise_on_failure:
        raise NonConvergence(message)
    logger.warning(message)
    return MEstimate(beta=beta, scale=scale, iterations=max_iter, converged=False)
