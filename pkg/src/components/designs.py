"""
Latin hypercube designs (LHD) and low-correlation ("orthogonal") LHDs.

Canonical designs live in [-1, 1]^p with every column a permutation of the r
equispaced levels (2k - 1 - r) / r. `rescale_design` moves a design into any
other box.
"""
import numpy as np

from src.components.linalg_core import condition_number_info
from src.constants import KAPPA_TARGET, MAX_RESTARTS, SWAP_BUDGET_FACTOR
from src.entity.artifact_entity import Box, DesignMatrix
from src.exception import InfeasibleDesign
from src.logger import get_logger
logger = get_logger(__name__)


def lhd_levels(r: int) -> np.ndarray:
    """Ascending LHD levels ((2k - 1 - r) / r) for k = 1..r."""
    if r < 1:
        raise InfeasibleDesign(f"an LHD needs at least one run, got r={r}")
    k = np.arange(1, r + 1, dtype=float)
    return (2.0 * k - 1.0 - r) / r


def max_abs_offdiag(G: np.ndarray) -> float:
    if G.shape[0] < 2:
        return 0.0
    off = np.abs(G - np.diag(np.diag(G)))
    return float(off.max())


def _design(points: np.ndarray, box: Box, restarts: int = 0, target_met: bool = True) -> DesignMatrix:
    max_abs_corr = 0.0
    if points.shape[1] > 1:
        max_abs_corr = max_abs_offdiag(np.corrcoef(points, rowvar=False))
    return DesignMatrix(
        points=points,
        box=box,
        kappa=condition_number_info(points),
        max_abs_corr=max_abs_corr,
        restarts=restarts,
        target_met=target_met,
    )


def _random_lhd(r: int, p: int, rng: np.random.Generator) -> np.ndarray:
    levels = lhd_levels(r)
    return np.column_stack([rng.permutation(levels) for _ in range(p)])


def generate_lhd(r: int, p: int, rng: np.random.Generator) -> DesignMatrix:
    """Plain LHD: each column an independent uniform permutation of the levels."""
    if r < 2 or p < 1:
        raise InfeasibleDesign(f"generate_lhd needs r >= 2 and p >= 1, got r={r}, p={p}")
    return _design(_random_lhd(r, p, rng), Box.cube(p))


def _gram_kappa(G: np.ndarray) -> float:
    eig = np.linalg.eigvalsh(G)
    if eig[0] <= 0:
        return float("inf")
    return float(eig[-1] / eig[0])


def _reduce_correlation(L, rng, budget, kappa_target):
    """
    Swap search on one start. Each proposal fixes a column j and a row a and
    scores every swap partner b at once; the best partner is accepted iff it
    lowers the largest |off-diagonal| of LᵀL, ties going to the lower kappa.
    """
    r, p = L.shape
    G = L.T @ L
    off = np.abs(G - np.diag(np.diag(G)))
    cur_max = float(off.max())
    cur_kappa = _gram_kappa(G)
    stall, stall_limit = 0, r * p

    for _ in range(budget):
        if cur_kappa <= kappa_target or stall > stall_limit:
            break

        if rng.random() < 0.5:
            worst = np.unravel_index(np.argmax(off), off.shape)
            j = int(worst[rng.integers(2)])
        else:
            j = int(rng.integers(p))
        a = int(rng.integers(r))

        # swapping L[a, j] <-> L[b, j] moves G[j, k] by (L[b,j] - L[a,j]) * (L[a,k] - L[b,k])
        shift = L[:, j] - L[a, j]
        new_rows = np.abs(G[j, :] + shift[:, None] * (L[a, :] - L))
        new_rows[:, j] = 0.0
        row_max = new_rows.max(axis=1)

        rest = off.copy()
        rest[j, :] = 0.0
        rest[:, j] = 0.0
        new_max = np.maximum(row_max, rest.max())
        new_max[a] = np.inf

        b = int(np.lexsort((row_max, new_max))[0])
        accept = False
        if new_max[b] < cur_max:
            accept = True
        elif new_max[b] == cur_max:
            trial = L[:, j].copy()
            trial[[a, b]] = trial[[b, a]]
            g = trial @ L
            g[j] = G[j, j]
            G_trial = G.copy()
            G_trial[j, :] = g
            G_trial[:, j] = g
            accept = _gram_kappa(G_trial) < cur_kappa

        if not accept:
            stall += 1
            continue

        L[[a, b], j] = L[[b, a], j]
        g = L[:, j] @ L
        G[j, :] = g
        G[:, j] = g
        off = np.abs(G - np.diag(np.diag(G)))
        cur_max = float(off.max())
        cur_kappa = _gram_kappa(G)
        stall = 0

    return L


def generate_olhd(
    r: int,
    p: int,
    rng: np.random.Generator,
    kappa_target: float = KAPPA_TARGET,
    max_restarts: int = MAX_RESTARTS,
    swap_budget: int = None,
) -> DesignMatrix:
    """
    Low-correlation LHD with kappa(LᵀL) <= kappa_target when the search reaches
    it; otherwise the lowest-kappa start is returned with target_met=False.
    """
    if r < 2 or r <= p:
        raise InfeasibleDesign(f"an OLHD needs r >= max(2, p + 1), got r={r}, p={p}: LᵀL is singular")
    if p == 1:
        return _design(_random_lhd(r, 1, rng), Box.cube(1))

    budget = swap_budget if swap_budget is not None else SWAP_BUDGET_FACTOR * r * p
    best = None
    for restart in range(max_restarts):
        L = _reduce_correlation(_random_lhd(r, p, rng), rng, budget, kappa_target)
        candidate = _design(L, Box.cube(p), restarts=restart)
        logger.debug(f"OLHD r={r} p={p} restart {restart}: kappa={candidate.kappa:.5f}, max|corr|={candidate.max_abs_corr:.5f}")
        if best is None or candidate.kappa < best.kappa:
            best = candidate
        if best.kappa <= kappa_target:
            break

    best.target_met = bool(best.kappa <= kappa_target)
    if not best.target_met:
        logger.warning(f"OLHD r={r} p={p}: kappa target {kappa_target} missed after {max_restarts} restarts, best kappa={best.kappa:.5f}")
    return best


def rescale_design(L: DesignMatrix, box: Box) -> DesignMatrix:
    """Per-column affine map from L's box onto `box`; row order and level ranks are kept."""
    if box.p != L.p:
        raise InfeasibleDesign(f"box dimension {box.p} does not match design dimension {L.p}")
    if np.array_equal(box.lower, L.box.lower) and np.array_equal(box.upper, L.box.upper):
        return _design(L.points.copy(), box, L.restarts, L.target_met)
    unit = (L.points - L.box.lower) / (L.box.upper - L.box.lower)
    points = box.lower + unit * (box.upper - box.lower)
    return _design(points, box, L.restarts, L.target_met)


def design_trace(points: np.ndarray) -> float:
    """tr(LᵀL), the sum of squared entries."""
    return float(np.sum(np.asarray(points) ** 2))
