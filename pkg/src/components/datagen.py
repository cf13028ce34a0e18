"""
Synthetic data for the misspecified-model simulation study.

Predictors follow D1 (multivariate normal), D2 (two-component normal mixture)
or D3 (multivariate t with 10 degrees of freedom); responses add a
misspecification term h(x) from H1..H5 and Gaussian noise to x'beta0.
Coordinates in the H formulas are 1-based: x3 is column index 2.
"""
import numpy as np
import scipy.linalg as sla
from scipy.stats import cauchy

from src.constants import (
    BETA_LARGE,
    BETA_SMALL,
    COV_DECAY,
    COV_SCALE,
    DISTRIBUTIONS,
    MISSPEC_MAX_ABS,
    MISSPECIFICATIONS,
    T_DF,
    TOY_SCALE,
    TOY_TRUNCATION,
)
from src.entity.artifact_entity import BetaSpec, CovarianceSpec, MisspecTerm
from src.exception import ConfigError, DegenerateSample, DimensionTooSmall
from src.logger import get_logger
logger = get_logger(__name__)

# highest 1-based coordinate each term reads
_REQUIRED_DIM = {"H1": 0, "H2": 3, "H3": 8, "H4": 8, "H5": 3}


def covariance_spec(p: int) -> CovarianceSpec:
    """Toeplitz covariance 10 * 0.6^|i-j|, checked positive-definite by its Cholesky factor."""
    sigma = COV_SCALE * sla.toeplitz(COV_DECAY ** np.arange(p))
    factor = sla.cholesky(sigma, lower=True)
    return CovarianceSpec(p=p, sigma_matrix=sigma, factor=factor)


def beta_spec(p: int) -> BetaSpec:
    """First and last ceil(0.2 p) entries are 1, the rest 0.1."""
    edge = -(-p // 5)
    beta0 = np.full(p, BETA_SMALL)
    beta0[:edge] = BETA_LARGE
    beta0[p - edge:] = BETA_LARGE
    return BetaSpec(p=p, beta0=beta0)


def gen_predictors(dist: str, n: int, p: int, rng: np.random.Generator, df: float = T_DF) -> np.ndarray:
    """
    D1: N(1, Sigma)
    D2: fair-coin mixture of N(0, 2 Sigma) and N(1, Sigma)
    D3: t_df(1, Sigma) as 1 + N(0, Sigma) / sqrt(chi2_df / df), one chi2 draw per row
    """
    if dist not in DISTRIBUTIONS:
        raise ConfigError(f"unknown predictor distribution {dist!r}; choose from {DISTRIBUTIONS}")
    if n < 1 or p < 1:
        raise ConfigError(f"n and p must be positive, got n={n}, p={p}")
    factor = covariance_spec(p).factor
    Z = rng.standard_normal((n, p)) @ factor.T

    if dist == "D1":
        return 1.0 + Z
    if dist == "D2":
        first = rng.random(n) < 0.5
        return np.where(first[:, None], np.sqrt(2.0) * Z, 1.0 + Z)
    mixing = np.sqrt(rng.chisquare(df, size=n) / df)
    return 1.0 + Z / mixing[:, None]


def _raw_term(kind: str, X: np.ndarray) -> np.ndarray:
    """h(x) with its constant set to 1."""
    if kind == "H1":
        return np.zeros(X.shape[0])
    if kind == "H2":
        return np.sin(X[:, 2])
    if kind == "H3":
        return X[:, 2] * X[:, 7]
    if kind == "H4":
        return X[:, 2] * np.sin(X[:, 7])
    return X[:, 2] ** 2


def _check_kind(kind: str, p: int) -> None:
    if kind not in MISSPECIFICATIONS:
        raise ConfigError(f"unknown misspecification {kind!r}; choose from {MISSPECIFICATIONS}")
    if p < _REQUIRED_DIM[kind]:
        raise DimensionTooSmall(f"{kind} reads coordinate {_REQUIRED_DIM[kind]} but p={p}")


def misspec_values(kind: str, X, constant: float) -> np.ndarray:
    """h(x_i) for every row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    _check_kind(kind, X.shape[1])
    return constant * _raw_term(kind, X)


def misspec_value(kind: str, x, constant: float) -> float:
    return float(misspec_values(kind, np.asarray(x, dtype=float).reshape(1, -1), constant)[0])


def calibrate_constant(kind: str, X) -> float:
    """c = 10 / max_i |g(x_i)|, g the term with unit constant, so that max_i |h(x_i)| = 10."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if kind not in ("H3", "H4", "H5"):
        raise ConfigError(f"only H3, H4 and H5 carry a calibrated constant, got {kind!r}")
    _check_kind(kind, X.shape[1])
    peak = float(np.max(np.abs(_raw_term(kind, X))))
    if peak == 0.0:
        raise DegenerateSample(f"{kind} vanishes on every sample row; cannot calibrate")
    return MISSPEC_MAX_ABS / peak


def misspec_term(kind: str, X) -> MisspecTerm:
    """The term for this sample: H1 -> 0, H2 -> fixed 10, H3..H5 calibrated on X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    _check_kind(kind, X.shape[1])
    if kind == "H1":
        return MisspecTerm(kind, 0.0)
    if kind == "H2":
        return MisspecTerm(kind, MISSPEC_MAX_ABS)
    return MisspecTerm(kind, calibrate_constant(kind, X))


def gen_response(X, beta0, misspec: MisspecTerm, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """y_i = x_i'beta0 + h(x_i) + sigma z_i with z_i standard normal."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    beta0 = np.asarray(beta0, dtype=float).ravel()
    if beta0.shape[0] != X.shape[1]:
        raise DimensionTooSmall(f"beta0 has {beta0.shape[0]} entries for {X.shape[1]} predictors")
    if sigma2 < 0:
        raise ConfigError(f"sigma2 must be >= 0, got {sigma2}")
    z = rng.standard_normal(X.shape[0])
    return X @ beta0 + misspec_values(misspec.kind, X, misspec.constant) + np.sqrt(sigma2) * z


def toy_example(
    n: int,
    rng: np.random.Generator,
    noise_scale: float = 1.0,
    scale: float = TOY_SCALE,
    truncation: float = TOY_TRUNCATION,
):
    """
    x ~ Cauchy(0, scale) truncated to [-truncation, truncation]; y = x + sin(x^2) / 2 + noise_scale * eps.

    Most x sit within a few multiples of `scale` of zero and a handful reach
    towards the truncation points, so the leverage of the 1-d design is very
    uneven.
    """
    if n < 1:
        raise ConfigError(f"toy example needs n >= 1, got {n}")
    lower, upper = cauchy.cdf([-truncation, truncation], scale=scale)
    x = cauchy.ppf(rng.uniform(lower, upper, size=n), scale=scale)
    eps = rng.standard_normal(n)
    y = x + np.sin(x ** 2) / 2.0 + noise_scale * eps
    return x, y
