"""
Monte Carlo harness for the subsampling comparisons.

A *cell* is one (method, r, theta) combination; a *replicate* is one draw of
the data. Replicate i always uses the streams derived from (seed, i, ...), so
the result does not depend on the order in which replicates run, nor on
whether they run concurrently.

The harness is measurement-constrained: responses are held by a
ResponseOracle and only the selected rows are ever revealed to the estimator.
"""
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.components.datagen import beta_spec, gen_predictors, gen_response, misspec_term, toy_example
from src.components.estimators import fit_huber_m, fit_sls
from src.components.linalg_core import check_full_rank, least_squares, row_scale
from src.components.samplers import select
from src.constants import MAX_RETRIES, METHODS, TOY_METHODS, TOY_THETA
from src.entity.artifact_entity import Dataset, EmseRow, ResultRow
from src.entity.config_entity import ExperimentConfig
from src.exception import ConfigError, RankDeficient, srcException
from src.logger import get_logger
from src.utils.main_utils import derive_rng
logger = get_logger(__name__)

LEVERAGE_METHODS = ("BLEV", "SLEV", "LEVUNW")

# stream tags keep data draws and sampler draws apart
STREAM_DATA = 0
STREAM_SAMPLER = 1


class ResponseOracle:
    """Holds the response vector; every revealed entry is counted."""

    def __init__(self, y: np.ndarray):
        self._y = np.asarray(y, dtype=float)
        self.reads = 0

    def reveal(self, indices) -> np.ndarray:
        indices = np.asarray(indices, dtype=int)
        self.reads += indices.size
        return self._y[indices].copy()


@dataclass
class ReplicateData:
    X_sample: np.ndarray            # what the samplers see
    X_model: np.ndarray             # the regression design (intercept column added when modelled)
    y: np.ndarray
    targets: Tuple[np.ndarray, ...]  # beta0, or the full-sample surrogates


@dataclass
class Cell:
    method: str
    r: int
    theta: float


@dataclass
class Outcome:
    errors: Tuple[float, ...]
    kappa: float
    runtime_ms: float
    reads: int
    failed: bool = False


def _stream_code(method: str) -> int:
    # LEVUNW fits the very subsample BLEV draws
    return METHODS.index("BLEV" if method == "LEVUNW" else method)


def _theta_code(theta: float) -> int:
    return int(round(theta * 1000))


def _safe_log(value: float) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        return float(np.log(value))


class ExperimentHarness:
    def __init__(self, experiment_config: ExperimentConfig):
        try:
            self.experiment_config = experiment_config
        except Exception as e:
            raise srcException(e, sys)

    def select_and_fit(self, cell: Cell, data: ReplicateData, rng: np.random.Generator) -> Outcome:
        """Subsample, check the subsample is estimable, reveal its responses and fit."""
        config = self.experiment_config
        start = time.perf_counter()
        X_for_sampler = data.X_model if cell.method in LEVERAGE_METHODS else data.X_sample
        selection = select(
            cell.method,
            X_for_sampler,
            cell.r,
            rng,
            theta=cell.theta,
            slev_alpha=config.slev_alpha,
            kappa_target=config.kappa_target,
            max_restarts=config.max_restarts,
            allow_duplicates=config.allow_duplicates,
        )
        X_sub = data.X_model[selection.indices]
        # a rank-deficient draw is retried before any response is revealed
        check_full_rank(row_scale(X_sub, None, selection.weights)[0])

        oracle = ResponseOracle(data.y)
        y_sub = oracle.reveal(selection.indices)
        fit = fit_sls(X_sub, y_sub, selection.weights, cell.method)
        runtime_ms = (time.perf_counter() - start) * 1e3

        errors = tuple(float(np.sum((fit.beta - target) ** 2)) for target in data.targets)
        return Outcome(errors, selection.diagnostics.kappa_sub, runtime_ms, oracle.reads)

    def run_replicate(self, replicate: int, cells: Sequence[Cell], data_factory: Callable[[int, int], ReplicateData]) -> List[Outcome]:
        seed = self.experiment_config.seed
        datasets: Dict[int, ReplicateData] = {}
        outcomes = []
        for cell in cells:
            outcome = None
            for attempt in range(MAX_RETRIES + 1):
                if attempt not in datasets:
                    datasets[attempt] = data_factory(replicate, attempt)
                rng = derive_rng(seed, STREAM_SAMPLER, replicate, _stream_code(cell.method), cell.r, _theta_code(cell.theta), attempt)
                try:
                    outcome = self.select_and_fit(cell, datasets[attempt], rng)
                    break
                except RankDeficient as e:
                    logger.debug(f"replicate {replicate} {cell.method} r={cell.r}: attempt {attempt} rank deficient ({e.message}), redrawing")
            if outcome is None:
                logger.warning(f"replicate {replicate} {cell.method} r={cell.r}: rank deficient after {MAX_RETRIES} retries")
                outcome = Outcome(errors=(), kappa=float("nan"), runtime_ms=float("nan"), reads=0, failed=True)
            outcomes.append(outcome)
        return outcomes

    def run_cells(
        self,
        cells: Sequence[Cell],
        data_factory: Callable[[int, int], ReplicateData],
        order: Optional[Sequence[int]] = None,
    ) -> List[List[Outcome]]:
        """
        Run every replicate and return outcomes[cell][replicate] in replicate order.
        `order` only changes the execution order.
        """
        replicates = self.experiment_config.replicates
        order = list(range(replicates)) if order is None else list(order)
        if sorted(order) != list(range(replicates)):
            raise ConfigError(f"replicate order must be a permutation of range({replicates})")

        results: Dict[int, List[Outcome]] = {}
        if self.experiment_config.n_jobs > 1:
            with ThreadPoolExecutor(max_workers=self.experiment_config.n_jobs) as executor:
                futures = {i: executor.submit(self.run_replicate, i, cells, data_factory) for i in order}
                for i, future in futures.items():
                    results[i] = future.result()
        else:
            for i in order:
                results[i] = self.run_replicate(i, cells, data_factory)

        return [[results[i][c] for i in range(replicates)] for c in range(len(cells))]

    def _summarize(self, outcomes: List[Outcome]) -> dict:
        ok = [o for o in outcomes if not o.failed]
        n_errors = len(ok[0].errors) if ok else 0
        means = [float(np.mean([o.errors[k] for o in ok])) for k in range(n_errors)]
        return {
            "replicate_count": len(ok),
            "errors": means,
            "median_kappa": float(np.median([o.kappa for o in ok])) if ok else float("nan"),
            "mean_runtime_ms": float(np.mean([o.runtime_ms for o in ok])) if ok and self.experiment_config.record_timing else float("nan"),
            "response_reads": int(sum(o.reads for o in outcomes)),
            "status": "ok" if len(ok) == len(outcomes) else "failed",
        }

    def _result_rows(self, cells, per_cell, dist, misspec, n, p) -> List[ResultRow]:
        rows = []
        for cell, outcomes in zip(cells, per_cell):
            summary = self._summarize(outcomes)
            mse = summary["errors"][0] if summary["errors"] else float("nan")
            rows.append(ResultRow(
                method=cell.method, dist=dist, misspec=misspec, n=n, p=p, r=cell.r, theta=cell.theta,
                replicate_count=summary["replicate_count"], mse=mse, log_mse=_safe_log(mse),
                median_kappa=summary["median_kappa"], mean_runtime_ms=summary["mean_runtime_ms"],
                response_reads=summary["response_reads"], status=summary["status"],
            ))
            if summary["status"] != "ok":
                logger.warning(f"cell {cell.method} r={cell.r} theta={cell.theta} failed on {len(outcomes) - summary['replicate_count']} replicates")
        return sorted(rows, key=lambda row: (row.method, row.dist, row.misspec, row.r, row.theta))

    def simulation_data(self, replicate: int, attempt: int) -> ReplicateData:
        """Fresh X (and fresh calibration constant) for every replicate."""
        config = self.experiment_config
        rng = derive_rng(config.seed, STREAM_DATA, replicate, attempt)
        X = gen_predictors(config.dist, config.n, config.p, rng)
        beta0 = beta_spec(config.p).beta0
        y = gen_response(X, beta0, misspec_term(config.misspec, X), config.sigma2, rng)
        return ReplicateData(X_sample=X, X_model=X, y=y, targets=(beta0,))

    def toy_data(self, replicate: int, attempt: int) -> ReplicateData:
        config = self.experiment_config
        rng = derive_rng(config.seed, STREAM_DATA, replicate, attempt)
        x, y = toy_example(config.toy_n, rng)
        X = x.reshape(-1, 1)
        return ReplicateData(X_sample=X, X_model=X, y=y, targets=(np.ones(1),))

    def run_simulation(self, order: Optional[Sequence[int]] = None) -> List[ResultRow]:
        """MSE = mean over replicates of ||beta_hat - beta0||^2 for every (method, r) cell."""
        config = self.experiment_config
        cells = [Cell(m, r, config.theta) for m in config.methods for r in config.r_list]
        logger.info(f"Simulation started: {config.dist}/{config.misspec}, n={config.n}, p={config.p}, r={config.r_list}, "
                    f"{config.replicates} replicates, methods={config.methods}")
        per_cell = self.run_cells(cells, self.simulation_data, order)
        rows = self._result_rows(cells, per_cell, config.dist, config.misspec, config.n, config.p)
        logger.info(f"Simulation completed: {len(rows)} cells")
        return rows

    def run_toy(self, order: Optional[Sequence[int]] = None) -> List[ResultRow]:
        """Slope-only fit of y = x + sin(x^2)/2 + eps; beta0 = 1."""
        config = self.experiment_config
        bad = [r for r in config.r_list if not (2 <= r < config.toy_n)]
        if bad:
            raise ConfigError(f"toy r values must satisfy 2 <= r < toy_n={config.toy_n}: {bad}")
        cells = [Cell(m, r, config.theta) for m in config.methods for r in config.r_list]
        logger.info(f"Toy example started: r={config.r_list}, methods={config.methods}, theta={config.theta}")
        per_cell = self.run_cells(cells, self.toy_data, order)
        return self._result_rows(cells, per_cell, "TOY", "SIN", config.toy_n, 1)

    def theta_sweep(self) -> List[ResultRow]:
        """LowCon at every theta in theta_list next to the UNIF baseline."""
        config = self.experiment_config
        cells = [Cell("UNIF", r, config.theta) for r in config.r_list]
        cells += [Cell("LOWCON", r, theta) for theta in config.theta_list for r in config.r_list]
        logger.info(f"Theta sweep started: thetas={config.theta_list}, r={config.r_list}")
        per_cell = self.run_cells(cells, self.simulation_data)
        return self._result_rows(cells, per_cell, config.dist, config.misspec, config.n, config.p)

    def run_emse(self, dataset: Dataset, order: Optional[Sequence[int]] = None) -> List[EmseRow]:
        """
        Empirical MSE against the full-sample OLS and Huber-M fits.

        Samplers see the raw predictors (leverage samplers see the model matrix);
        the intercept column is appended to the regression design only.
        """
        config = self.experiment_config
        if dataset.y is None:
            raise ConfigError(f"dataset {dataset.name} has no response column")
        bad = [r for r in config.r_list if not (dataset.p < r <= dataset.n)]
        if bad:
            raise ConfigError(f"r_list entries must satisfy p < r <= n (p={dataset.p}, n={dataset.n}): {bad}")

        X_model = dataset.X_raw
        if dataset.has_intercept:
            X_model = np.column_stack([np.ones(dataset.n), dataset.X_raw])
        beta_ols = least_squares(X_model, dataset.y)
        m_fit = fit_huber_m(X_model, dataset.y)
        logger.info(f"EMSE surrogates for {dataset.name}: OLS={np.round(beta_ols, 6).tolist()}, "
                    f"M={np.round(m_fit.beta, 6).tolist()} (converged={m_fit.converged})")

        data = ReplicateData(X_sample=dataset.X_raw, X_model=X_model, y=dataset.y, targets=(beta_ols, m_fit.beta))
        cells = [Cell(m, r, config.theta) for m in config.methods for r in config.r_list]
        per_cell = self.run_cells(cells, lambda replicate, attempt: data, order)

        rows = []
        for cell, outcomes in zip(cells, per_cell):
            summary = self._summarize(outcomes)
            emse_ols, emse_m = summary["errors"] if summary["errors"] else (float("nan"), float("nan"))
            rows.append(EmseRow(
                method=cell.method, dataset=dataset.name, n=dataset.n, p=dataset.p, r=cell.r, theta=cell.theta,
                replicate_count=summary["replicate_count"], emse_ols=emse_ols, emse_m=emse_m,
                log_emse_ols=_safe_log(emse_ols), log_emse_m=_safe_log(emse_m),
                median_kappa=summary["median_kappa"], mean_runtime_ms=summary["mean_runtime_ms"],
                response_reads=summary["response_reads"], status=summary["status"],
            ))
        return sorted(rows, key=lambda row: (row.method, row.r))


def run_simulation(config: ExperimentConfig) -> List[ResultRow]:
    return ExperimentHarness(config).run_simulation()


def run_toy(config: ExperimentConfig) -> List[ResultRow]:
    return ExperimentHarness(config).run_toy()


def theta_sweep(config: ExperimentConfig) -> List[ResultRow]:
    return ExperimentHarness(config).theta_sweep()


def run_emse(dataset: Dataset, config: ExperimentConfig) -> List[EmseRow]:
    return ExperimentHarness(config).run_emse(dataset)


def toy_config(r_list: Sequence[int], seed: int, **overrides) -> ExperimentConfig:
    """Config for the toy example: UNIF / BLEV / LOWCON on the 1-d sample, theta 0 by default."""
    values = dict(mode="toy", p=1, r_list=list(r_list), seed=seed, methods=list(TOY_METHODS), theta=TOY_THETA)
    values.update(overrides)
    return ExperimentConfig.from_dict(values)
