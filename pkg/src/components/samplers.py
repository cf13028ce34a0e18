"""
Subsamplers for measurement-constrained regression.

Every sampler sees the full predictor matrix X (n x p) and returns a
SubsampleSelection of exactly r rows. Only LowCon and IBOSS are designed for
misspecified models; UNIF, BLEV, SLEV and LEVUNW are the baselines.
"""
from typing import Callable, Dict, Tuple

import numpy as np

from src.components.designs import generate_olhd, rescale_design
from src.components.linalg_core import as_matrix, condition_number_info, leverage_scores
from src.components.spatial_index import build_index
from src.constants import KAPPA_TARGET, MAX_RESTARTS, SLEV_ALPHA, THETA
from src.entity.artifact_entity import (
    Box,
    ScalingSpec,
    SelectionDiagnostics,
    SubsampleSelection,
)
from src.exception import ConfigError, ConstantColumn, InfeasibleDesign
from src.logger import get_logger
logger = get_logger(__name__)


def _check_size(n: int, r: int, method: str) -> None:
    if r < 1 or r > n:
        raise ConfigError(f"{method}: subsample size r={r} must lie in [1, n={n}]")


def _selection(X, indices, method, weights=None, **diagnostics) -> SubsampleSelection:
    indices = np.asarray(indices, dtype=int)
    return SubsampleSelection(
        indices=indices,
        method=method,
        weights=weights,
        diagnostics=SelectionDiagnostics(kappa_sub=condition_number_info(X[indices]), **diagnostics),
    )


def scale_to_cube(X) -> Tuple[np.ndarray, ScalingSpec]:
    """Map every column affinely onto [-1, 1]; the column min goes to -1 and the max to 1."""
    X = as_matrix(X)
    spec = ScalingSpec(col_min=X.min(axis=0), col_max=X.max(axis=0))
    constant = np.flatnonzero(spec.col_max == spec.col_min)
    if constant.size:
        raise ConstantColumn(f"columns {constant.tolist()} are constant and cannot be scaled")
    return spec.apply(X), spec


def theta_box(X_scaled, theta: float) -> Box:
    """[theta-percentile, (100 - theta)-percentile] of each scaled column, linear interpolation."""
    if not (0.0 <= theta < 50.0):
        raise ConfigError(f"theta must lie in [0, 50), got {theta}")
    X_scaled = as_matrix(X_scaled)
    p = X_scaled.shape[1]
    if theta == 0.0:
        return Box.cube(p)
    lower, upper = np.percentile(X_scaled, [theta, 100.0 - theta], axis=0)
    return Box(lower, upper)


def lowcon(
    X,
    r: int,
    theta: float = THETA,
    rng: np.random.Generator = None,
    kappa_target: float = KAPPA_TARGET,
    max_restarts: int = MAX_RESTARTS,
    allow_duplicates: bool = False,
) -> SubsampleSelection:
    """
    Low condition number pursuit.

    Scale X to [-1, 1]^p, trim to the theta box, lay an OLHD of r points over the
    box and let each design point, in design order, claim its nearest sample
    row. Claimed rows are excluded from later queries unless allow_duplicates.
    """
    X = as_matrix(X)
    n, p = X.shape
    rng = rng if rng is not None else np.random.default_rng()
    if r < p + 1:
        raise InfeasibleDesign(f"LOWCON needs r >= p + 1, got r={r}, p={p}")
    if not allow_duplicates:
        _check_size(n, r, "LOWCON")

    X_scaled, _ = scale_to_cube(X)
    box = theta_box(X_scaled, theta)
    design = rescale_design(generate_olhd(r, p, rng, kappa_target, max_restarts), box)
    index = build_index(X_scaled)

    claimed = np.zeros(n, dtype=bool)
    indices = np.empty(r, dtype=int)
    distances = np.empty(r)
    for i, point in enumerate(design.points):
        row, distance = index.nearest(point, None if allow_duplicates else claimed)
        claimed[row] = True
        indices[i] = row
        distances[i] = distance

    logger.debug(f"LOWCON r={r} theta={theta}: design kappa={design.kappa:.4f}, mean NN distance={distances.mean():.4f}")
    return _selection(
        X,
        indices,
        "LOWCON",
        mean_nn_distance=float(distances.mean()),
        nn_distances=distances,
        design=design,
        perturbation=X_scaled[indices] - design.points,
    )


def unif(X, r: int, rng: np.random.Generator) -> SubsampleSelection:
    """Simple random subsample without replacement."""
    X = as_matrix(X)
    _check_size(X.shape[0], r, "UNIF")
    return _selection(X, rng.choice(X.shape[0], size=r, replace=False), "UNIF")


def leverage_probabilities(X, alpha: float = 1.0) -> np.ndarray:
    """pi_i = alpha * h_ii / p + (1 - alpha) / n."""
    if not (0.0 < alpha <= 1.0):
        raise ConfigError(f"shrinkage alpha must lie in (0, 1], got {alpha}")
    X = as_matrix(X)
    n, p = X.shape
    return alpha * leverage_scores(X) / p + (1.0 - alpha) / n


def _leverage_draw(X, r, rng, alpha, method):
    X = as_matrix(X)
    _check_size(X.shape[0], r, method)
    pi = leverage_probabilities(X, alpha)
    indices = rng.choice(X.shape[0], size=r, replace=True, p=pi / pi.sum())
    return X, indices, pi


def blev(X, r: int, rng: np.random.Generator) -> SubsampleSelection:
    """Basic leverage sampling with replacement, weights 1 / (r pi_i)."""
    X, indices, pi = _leverage_draw(X, r, rng, 1.0, "BLEV")
    return _selection(X, indices, "BLEV", weights=1.0 / (r * pi[indices]))


def slev(X, r: int, rng: np.random.Generator, alpha: float = SLEV_ALPHA) -> SubsampleSelection:
    """Shrinkage leverage sampling: leverage mixed with the uniform distribution."""
    X, indices, pi = _leverage_draw(X, r, rng, alpha, "SLEV")
    return _selection(X, indices, "SLEV", weights=1.0 / (r * pi[indices]))


def levunw(X, r: int, rng: np.random.Generator) -> SubsampleSelection:
    """The BLEV draw fitted by plain OLS (no weights)."""
    X, indices, _ = _leverage_draw(X, r, rng, 1.0, "LEVUNW")
    return _selection(X, indices, "LEVUNW")


def iboss(X, r: int) -> SubsampleSelection:
    """
    Information-based optimal subset selection (deterministic).

    Column by column, take the floor(r / 2p) smallest and then the floor(r / 2p)
    largest values among rows not yet taken. Any remainder comes from column 1,
    alternating smallest / largest. Equal values go to the lower row index.
    """
    X = as_matrix(X)
    n, p = X.shape
    _check_size(n, r, "IBOSS")
    if r < 2 * p:
        raise ConfigError(f"IBOSS needs r >= 2p, got r={r}, p={p}")
    k = r // (2 * p)
    available = np.ones(n, dtype=bool)
    chosen = []

    def take(column: int, count: int, largest: bool) -> None:
        pool = np.flatnonzero(available)
        values = X[pool, column]
        order = np.argsort(-values if largest else values, kind="stable")[:count]
        rows = pool[order]
        available[rows] = False
        chosen.extend(rows.tolist())

    for j in range(p):
        take(j, k, largest=False)
        take(j, k, largest=True)
    for t in range(r - 2 * p * k):
        take(0, 1, largest=bool(t % 2))

    return _selection(X, chosen, "IBOSS")


def select(
    method: str,
    X,
    r: int,
    rng: np.random.Generator,
    theta: float = THETA,
    slev_alpha: float = SLEV_ALPHA,
    kappa_target: float = KAPPA_TARGET,
    max_restarts: int = MAX_RESTARTS,
    allow_duplicates: bool = False,
) -> SubsampleSelection:
    """Dispatch to a sampler by its method tag."""
    samplers: Dict[str, Callable[[], SubsampleSelection]] = {
        "UNIF": lambda: unif(X, r, rng),
        "BLEV": lambda: blev(X, r, rng),
        "SLEV": lambda: slev(X, r, rng, slev_alpha),
        "LEVUNW": lambda: levunw(X, r, rng),
        "IBOSS": lambda: iboss(X, r),
        "LOWCON": lambda: lowcon(X, r, theta, rng, kappa_target, max_restarts, allow_duplicates),
    }
    if method not in samplers:
        raise ConfigError(f"unknown subsampling method {method!r}; choose from {sorted(samplers)}")
    return samplers[method]()
