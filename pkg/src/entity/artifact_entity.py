from dataclasses import dataclass, field, fields
from typing import List, Optional

import numpy as np

from src.exception import DegenerateBox


@dataclass
class Box:
    """Per-dimension design space [lower_j, upper_j]."""
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float).ravel()
        self.upper = np.asarray(self.upper, dtype=float).ravel()
        if self.lower.shape != self.upper.shape:
            raise DegenerateBox(f"box bounds differ in length: {self.lower.size} vs {self.upper.size}")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise DegenerateBox("box bounds must be finite")
        if np.any(self.lower >= self.upper):
            bad = np.flatnonzero(self.lower >= self.upper).tolist()
            raise DegenerateBox(f"box has empty extent in dimensions {bad}")

    @classmethod
    def cube(cls, p: int) -> "Box":
        return cls(-np.ones(p), np.ones(p))

    @property
    def p(self) -> int:
        return self.lower.size

    def contains(self, points: np.ndarray) -> bool:
        points = np.atleast_2d(points)
        return bool(np.all(points >= self.lower) and np.all(points <= self.upper))


@dataclass
class DesignMatrix:
    points: np.ndarray
    box: Box
    kappa: float
    max_abs_corr: float
    restarts: int = 0
    target_met: bool = True

    @property
    def r(self) -> int:
        return self.points.shape[0]

    @property
    def p(self) -> int:
        return self.points.shape[1]


@dataclass
class ScalingSpec:
    """Raw per-column range used to map the sample onto [-1, 1]^p."""
    col_min: np.ndarray
    col_max: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        return 2.0 * (X - self.col_min) / (self.col_max - self.col_min) - 1.0

    def inverse(self, X_scaled: np.ndarray) -> np.ndarray:
        return (X_scaled + 1.0) / 2.0 * (self.col_max - self.col_min) + self.col_min


@dataclass
class SelectionDiagnostics:
    kappa_sub: float
    mean_nn_distance: Optional[float] = None
    nn_distances: Optional[np.ndarray] = None
    # LowCon only: the rescaled design L and the gap D = X*_L - L in scaled coordinates
    design: Optional[DesignMatrix] = None
    perturbation: Optional[np.ndarray] = None


@dataclass
class SubsampleSelection:
    indices: np.ndarray
    method: str
    weights: Optional[np.ndarray] = None
    diagnostics: Optional[SelectionDiagnostics] = None

    @property
    def r(self) -> int:
        return len(self.indices)


@dataclass
class FitResult:
    beta: np.ndarray
    kappa_sub: float
    trace_inv: float
    method: str = "SLS"


@dataclass
class MseReport:
    variance_term: float
    bias_sq_term: float
    total: float

    @classmethod
    def from_terms(cls, variance_term: float, bias_sq_term: float) -> "MseReport":
        return cls(variance_term, bias_sq_term, variance_term + bias_sq_term)


@dataclass
class WorstCase:
    alpha: float
    bound: float
    h_star: np.ndarray
    variance_term: float
    bias_term: float


@dataclass
class MEstimate:
    beta: np.ndarray
    scale: float
    iterations: int
    converged: bool


@dataclass
class CovarianceSpec:
    p: int
    sigma_matrix: np.ndarray
    factor: np.ndarray          # lower Cholesky factor, sigma_matrix = factor @ factor.T


@dataclass
class BetaSpec:
    p: int
    beta0: np.ndarray


@dataclass
class MisspecTerm:
    kind: str
    constant: float


@dataclass
class Dataset:
    name: str
    X_raw: np.ndarray
    y: Optional[np.ndarray]
    column_names: List[str]
    response_name: Optional[str] = None
    has_intercept: bool = True
    dropped_rows: int = 0

    @property
    def n(self) -> int:
        return self.X_raw.shape[0]

    @property
    def p(self) -> int:
        return self.X_raw.shape[1]


@dataclass
class ResultRow:
    method: str
    dist: str
    misspec: str
    n: int
    p: int
    r: int
    theta: float
    replicate_count: int
    mse: float
    log_mse: float
    median_kappa: float
    mean_runtime_ms: float
    response_reads: int
    status: str = "ok"


@dataclass
class EmseRow:
    method: str
    dataset: str
    n: int
    p: int
    r: int
    theta: float
    replicate_count: int
    emse_ols: float
    emse_m: float
    log_emse_ols: float
    log_emse_m: float
    median_kappa: float
    mean_runtime_ms: float
    response_reads: int
    status: str = "ok"


@dataclass
class DiagnosticRow:
    method: str
    r: int
    replicate: int
    kappa_sub: float
    worst_case_mse: float
    s1_D: float = float("nan")
    sp_L: float = float("nan")
    assumption_holds: Optional[bool] = None
    kappa_bound: float = float("nan")
    kappa_bound_slack: float = float("nan")
    trace_inv: float = float("nan")
    trace_inv_bound: float = float("nan")
    trace_inv_bound_slack: float = float("nan")


@dataclass
class PipelineArtifact:
    results_path: str
    n_rows: int
    failed_cells: int = 0
    rows: list = field(default_factory=list, repr=False)


def column_names(row_type) -> List[str]:
    """CSV header for a row dataclass, in field order."""
    return [f.name for f in fields(row_type)]
