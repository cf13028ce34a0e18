import os
import sys
from typing import Optional

from src.components.data_ingestion import DataIngestion
from src.components.designs import generate_olhd
from src.components.diagnostics import SubsampleDiagnostics
from src.components.experiment_harness import ExperimentHarness

from src.constants import (
    DIAGNOSE_RESULTS_FILE,
    EMSE_RESULTS_FILE,
    KAPPA_TARGET,
    MAX_RESTARTS,
    SIMULATION_RESULTS_FILE,
    SWEEP_RESULTS_FILE,
    TOY_RESULTS_FILE,
)
from src.entity.artifact_entity import *
from src.entity.config_entity import *
from src.utils.main_utils import derive_rng, write_rows_csv

from src.logger import get_logger
logger = get_logger(__name__)
from src.exception import ConfigError, srcException


class pipeline:
    def __init__(self, experiment_config: Optional[ExperimentConfig] = None,
                 data_ingestion_config: Optional[DataIngestionConfig] = None):
        self.pipeline_config = pipeline_config
        self.experiment_config = experiment_config if experiment_config is not None else ExperimentConfig()
        self.data_ingestion_config = data_ingestion_config

    def results_path(self, file_name: str) -> str:
        """output_path from the config wins; otherwise the file goes under the results directory"""
        if self.experiment_config.output_path:
            return self.experiment_config.output_path
        return os.path.join(self.pipeline_config.results_dir, file_name)

    def write_results(self, rows: list, row_type, file_name: str) -> PipelineArtifact:
        results_path = write_rows_csv(rows, row_type, self.results_path(file_name))
        failed = sum(1 for row in rows if getattr(row, "status", "ok") != "ok")
        return PipelineArtifact(results_path=results_path, n_rows=len(rows), failed_cells=failed, rows=rows)

    def start_simulation(self) -> PipelineArtifact:
        """
        This method of Pipeline class is responsible for running the simulation grid
        """
        try:
            logger.info("Entered the start_simulation method of Pipeline class")
            rows = ExperimentHarness(experiment_config=self.experiment_config).run_simulation()
            artifact = self.write_results(rows, ResultRow, SIMULATION_RESULTS_FILE)
            logger.info(f"Simulation is complete: {artifact.results_path}")
            return artifact
        except srcException:
            logger.error("Error occurred in start_simulation", exc_info=True)
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def start_toy(self) -> PipelineArtifact:
        """
        This method of Pipeline class is responsible for the one-dimensional toy example
        """
        try:
            logger.info("Entered the start_toy method of Pipeline class")
            rows = ExperimentHarness(experiment_config=self.experiment_config).run_toy()
            artifact = self.write_results(rows, ResultRow, TOY_RESULTS_FILE)
            logger.info("Toy example is complete")
            return artifact
        except srcException:
            logger.error("Error occurred in start_toy", exc_info=True)
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def start_sweep(self) -> PipelineArtifact:
        """
        This method of Pipeline class is responsible for the theta sensitivity sweep
        """
        try:
            logger.info("Entered the start_sweep method of Pipeline class")
            rows = ExperimentHarness(experiment_config=self.experiment_config).theta_sweep()
            artifact = self.write_results(rows, ResultRow, SWEEP_RESULTS_FILE)
            logger.info("Theta sweep is complete")
            return artifact
        except srcException:
            logger.error("Error occurred in start_sweep", exc_info=True)
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def start_data_ingestion(self) -> Dataset:
        """
        This method of Pipeline class is responsible for reading the real-data CSV
        """
        try:
            logger.info("Entered the start_data_ingestion method of Pipeline class")
            if self.data_ingestion_config is None:
                raise ConfigError("realdata mode needs a data file, a response column and predictor columns")
            dataset = DataIngestion(data_ingestion_config=self.data_ingestion_config).ingest_csv()
            logger.info("Data Ingestion is complete")
            return dataset
        except srcException:
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def start_emse(self, dataset: Dataset) -> PipelineArtifact:
        """
        This method of Pipeline class is responsible for the EMSE comparison on real data
        """
        try:
            logger.info("Entered the start_emse method of Pipeline class")
            rows = ExperimentHarness(experiment_config=self.experiment_config).run_emse(dataset)
            artifact = self.write_results(rows, EmseRow, EMSE_RESULTS_FILE)
            logger.info("EMSE is complete")
            return artifact
        except srcException:
            logger.error("Error occurred in start_emse", exc_info=True)
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def start_diagnose(self, sigma2: Optional[float] = None, alpha: Optional[float] = None) -> PipelineArtifact:
        """
        This method of Pipeline class is responsible for the per-subsample diagnostics report
        """
        try:
            logger.info("Entered the start_diagnose method of Pipeline class")
            rows = SubsampleDiagnostics(experiment_config=self.experiment_config).diagnose(sigma2, alpha)
            artifact = self.write_results(rows, DiagnosticRow, DIAGNOSE_RESULTS_FILE)
            logger.info("Diagnostics are complete")
            return artifact
        except srcException:
            logger.error("Error occurred in start_diagnose", exc_info=True)
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def start_olhd(self, r: int, p: int, seed: int,
                   kappa_target: float = KAPPA_TARGET, max_restarts: int = MAX_RESTARTS) -> DesignMatrix:
        try:
            logger.info(f"Entered the start_olhd method of Pipeline class, r={r}, p={p}, seed={seed}")
            return generate_olhd(r, p, derive_rng(seed), kappa_target, max_restarts)
        except srcException:
            raise
        except Exception as e:
            raise srcException(e, sys) from e

    def run_pipeline(self) -> PipelineArtifact:
        """
        This method of Pipeline class is responsible for running the stage the config's mode names
        """
        try:
            mode = self.experiment_config.mode
            if mode == "simulate":
                return self.start_simulation()
            if mode == "toy":
                return self.start_toy()
            if mode == "sweep":
                return self.start_sweep()
            if mode == "diagnose":
                return self.start_diagnose()
            dataset = self.start_data_ingestion()
            return self.start_emse(dataset)

        except srcException:
            raise
        except Exception as e:
            raise srcException(e, sys) from e
