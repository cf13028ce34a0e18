import os
from src.constants import *
from dataclasses import dataclass, field, fields
from datetime import datetime
from typing import List, Optional

from src.exception import ConfigError
from src.utils.main_utils import read_json_config

TIMESTAMP: str = datetime.now().strftime("%m_%d_%Y_%H_%M_%S")

MODES: tuple = ("simulate", "realdata", "toy", "diagnose", "sweep")

# expected JSON types per ExperimentConfig field
INT_FIELDS: tuple = ("n", "p", "replicates", "seed", "max_restarts", "toy_n", "n_jobs")
REAL_FIELDS: tuple = ("theta", "sigma2", "slev_alpha", "alpha", "kappa_target")
BOOL_FIELDS: tuple = ("allow_duplicates", "record_timing")
TEXT_FIELDS: tuple = ("mode", "dist", "misspec")


@dataclass
class PipelineConfig:
    pipeline_name: str = PIPELINE_NAME
    artifact_dir: str = ARTIFACT_DIR
    timestamp: str = TIMESTAMP

    @property
    def results_dir(self) -> str:
        # LOWCON_OUTPUT_DIR (from the environment or .env) replaces the artifact tree
        override = os.getenv(OUTPUT_DIR_ENV)
        return override if override else os.path.join(self.artifact_dir, RESULTS_FOLDER)

pipeline_config: PipelineConfig = PipelineConfig()


def default_r_list(p: int) -> List[int]:
    return [k * p for k in (2, 4, 6, 8, 10)]


@dataclass
class ExperimentConfig:
    mode: str = "simulate"
    dist: str = "D1"
    misspec: str = "H1"
    n: int = SIM_N
    p: int = SIM_P
    r_list: List[int] = field(default_factory=lambda: default_r_list(SIM_P))
    theta: float = THETA
    sigma2: float = SIM_SIGMA2
    replicates: int = SIM_REPLICATES
    seed: int = SIM_SEED
    methods: List[str] = field(default_factory=lambda: list(METHODS))
    slev_alpha: float = SLEV_ALPHA
    output_path: Optional[str] = None
    # extensions
    alpha: float = DIAGNOSE_ALPHA
    kappa_target: float = KAPPA_TARGET
    max_restarts: int = MAX_RESTARTS
    allow_duplicates: bool = False
    theta_list: List[float] = field(default_factory=lambda: list(THETA_LIST))
    toy_n: int = TOY_N
    n_jobs: int = 1
    record_timing: bool = False

    @classmethod
    def from_dict(cls, values: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        config = cls(**values).check_types()
        if "r_list" not in values and "p" in values:
            config.r_list = default_r_list(config.p)
        config.validate()
        return config

    @classmethod
    def from_json(cls, path: str, **overrides) -> "ExperimentConfig":
        """Config file values, with any non-None override on top."""
        values = read_json_config(path)
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls.from_dict(values)

    def check_types(self) -> "ExperimentConfig":
        def is_int(value):
            return isinstance(value, int) and not isinstance(value, bool)

        def is_real(value):
            return isinstance(value, (int, float)) and not isinstance(value, bool)

        bad = [name for name in INT_FIELDS if not is_int(getattr(self, name))]
        bad += [name for name in REAL_FIELDS if not is_real(getattr(self, name))]
        bad += [name for name in BOOL_FIELDS if not isinstance(getattr(self, name), bool)]
        bad += [name for name in TEXT_FIELDS if not isinstance(getattr(self, name), str)]
        if self.output_path is not None and not isinstance(self.output_path, str):
            bad.append("output_path")
        for name, check in (("r_list", is_int), ("theta_list", is_real), ("methods", lambda v: isinstance(v, str))):
            value = getattr(self, name)
            if not isinstance(value, (list, tuple)) or not all(check(item) for item in value):
                bad.append(name)
        if bad:
            raise ConfigError(f"config values have the wrong type: {bad}")
        return self

    def validate(self) -> "ExperimentConfig":
        self.check_types()
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.dist not in DISTRIBUTIONS:
            raise ConfigError(f"dist must be one of {DISTRIBUTIONS}, got {self.dist!r}")
        if self.misspec not in MISSPECIFICATIONS:
            raise ConfigError(f"misspec must be one of {MISSPECIFICATIONS}, got {self.misspec!r}")
        bad_methods = [m for m in self.methods if m not in METHODS]
        if bad_methods or not self.methods:
            raise ConfigError(f"methods must be a non-empty subset of {METHODS}, got {self.methods}")
        if self.n < 1 or self.p < 1:
            raise ConfigError(f"n and p must be positive, got n={self.n}, p={self.p}")
        if not self.r_list:
            raise ConfigError("r_list must not be empty")
        # toy and realdata take their n and p from the data
        if self.mode in ("simulate", "diagnose", "sweep"):
            bad_r = [r for r in self.r_list if not (self.p < r < self.n)]
            if bad_r:
                raise ConfigError(f"r_list entries must satisfy p < r < n (p={self.p}, n={self.n}): {bad_r}")
        if self.replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {self.replicates}")
        for theta in [self.theta, *self.theta_list]:
            if not (0.0 <= theta < 50.0):
                raise ConfigError(f"theta must lie in [0, 50), got {theta}")
        if self.sigma2 < 0:
            raise ConfigError(f"sigma2 must be >= 0, got {self.sigma2}")
        if not (0.0 < self.slev_alpha <= 1.0):
            raise ConfigError(f"slev_alpha must lie in (0, 1], got {self.slev_alpha}")
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if self.kappa_target < 1.0 or self.max_restarts < 1:
            raise ConfigError("kappa_target must be >= 1 and max_restarts >= 1")
        if self.n_jobs < 1:
            raise ConfigError(f"n_jobs must be >= 1, got {self.n_jobs}")
        return self


@dataclass
class DataIngestionConfig:
    data_path: str
    response_column: str
    predictor_columns: List[str]
    has_intercept: bool = True
