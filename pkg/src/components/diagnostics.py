"""
Per-subsample diagnostics: condition number, worst-case MSE and, for LowCon,
how the perturbation bounds compare with the realized subsample.
"""
import sys
from typing import List, Optional

import numpy as np

from src.components.estimators import trace_inv_bound, weyl_kappa_bound, worst_case_mse
from src.components.experiment_harness import STREAM_SAMPLER, ExperimentHarness, _stream_code, _theta_code
from src.components.linalg_core import condition_number_info, singular_values, trace_inverse_gram
from src.components.samplers import select
from src.entity.artifact_entity import DiagnosticRow, SubsampleSelection
from src.entity.config_entity import ExperimentConfig
from src.exception import NumericalError, srcException
from src.logger import get_logger
from src.utils.main_utils import derive_rng
logger = get_logger(__name__)


class SubsampleDiagnostics:
    def __init__(self, experiment_config: ExperimentConfig):
        try:
            self.experiment_config = experiment_config
            self.harness = ExperimentHarness(experiment_config)
        except Exception as e:
            raise srcException(e, sys)

    def lowcon_fields(self, selection: SubsampleSelection) -> dict:
        """Split X*_L = L + D in scaled coordinates and compare both bounds with the realized values."""
        L = selection.diagnostics.design.points
        D = selection.diagnostics.perturbation
        X_L = L + D
        s1_D = float(singular_values(D)[0])
        sp_L = float(singular_values(L)[-1])
        holds = sp_L > s1_D
        realized_kappa = condition_number_info(X_L)
        realized_trace = trace_inverse_gram(singular_values(X_L))
        values = dict(s1_D=s1_D, sp_L=sp_L, assumption_holds=holds, trace_inv=realized_trace)
        if holds:
            kappa_bound = weyl_kappa_bound(L, D)
            trace_bound = trace_inv_bound(L, D)
            values.update(
                kappa_bound=kappa_bound,
                kappa_bound_slack=kappa_bound - realized_kappa,
                trace_inv_bound=trace_bound,
                trace_inv_bound_slack=trace_bound - realized_trace,
            )
        else:
            logger.info(f"s_p(L)={sp_L:.4f} <= s_1(D)={s1_D:.4f}: perturbation bounds not applicable")
        return values

    def diagnose_replicate(self, replicate: int, sigma2: float, alpha: float) -> List[DiagnosticRow]:
        config = self.experiment_config
        data = self.harness.simulation_data(replicate, 0)
        rows = []
        for method in config.methods:
            for r in config.r_list:
                rng = derive_rng(config.seed, STREAM_SAMPLER, replicate, _stream_code(method), r, _theta_code(config.theta), 0)
                selection = select(
                    method, data.X_sample, r, rng,
                    theta=config.theta,
                    slev_alpha=config.slev_alpha,
                    kappa_target=config.kappa_target,
                    max_restarts=config.max_restarts,
                    allow_duplicates=config.allow_duplicates,
                )
                try:
                    worst = worst_case_mse(data.X_sample[selection.indices], sigma2, alpha).bound
                except NumericalError as e:
                    logger.warning(f"{method} r={r} replicate {replicate}: {e.message}")
                    worst = float("inf")
                extra = self.lowcon_fields(selection) if method == "LOWCON" else {}
                rows.append(DiagnosticRow(
                    method=method, r=r, replicate=replicate,
                    kappa_sub=selection.diagnostics.kappa_sub, worst_case_mse=worst, **extra,
                ))
        return rows

    def diagnose(self, sigma2: Optional[float] = None, alpha: Optional[float] = None) -> List[DiagnosticRow]:
        config = self.experiment_config
        sigma2 = config.sigma2 if sigma2 is None else sigma2
        alpha = config.alpha if alpha is None else alpha
        logger.info(f"Diagnostics started: {config.dist}/{config.misspec}, r={config.r_list}, "
                    f"{config.replicates} replicates, sigma2={sigma2}, alpha={alpha}")
        rows = []
        for replicate in range(config.replicates):
            rows.extend(self.diagnose_replicate(replicate, sigma2, alpha))
        return sorted(rows, key=lambda row: (row.method, row.r, row.replicate))


def diagnose(config: ExperimentConfig, sigma2: Optional[float] = None, alpha: Optional[float] = None) -> List[DiagnosticRow]:
    return SubsampleDiagnostics(config).diagnose(sigma2, alpha)


def median_kappa(rows: List[DiagnosticRow], method: str, r: int) -> float:
    return float(np.median([row.kappa_sub for row in rows if row.method == method and row.r == r]))
