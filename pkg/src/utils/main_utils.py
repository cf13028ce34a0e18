import json
import os
import sys
from dataclasses import asdict
from typing import Iterable, List

import numpy as np
import pandas as pd

from src.entity.artifact_entity import column_names
from src.exception import ConfigError, srcException
from src.logger import get_logger
logger = get_logger(__name__)


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Child generator for a (master seed, key...) tuple.

    Streams depend only on the key tuple, never on the order in which tasks run,
    so replicates can be executed in any order or concurrently.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(k) for k in keys]]))


def read_json_config(path: str) -> dict:
    """Read a flat JSON object of ExperimentConfig fields."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "r") as file:
            values = json.load(file)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(values, dict):
        raise ConfigError(f"config file {path} must hold a flat JSON object")
    logger.info(f"Read config {path}: {sorted(values)}")
    return values


def write_rows_csv(rows: Iterable, row_type, file_path: str) -> str:
    """
    Write result dataclasses as CSV with a fixed header in field order
    Parameters:
        - rows: ResultRow / EmseRow / DiagnosticRow instances
        - row_type: the dataclass type, used for the header when rows is empty
        - file_path(str): destination
    Returns:
        - str: the path written
    """
    try:
        header = column_names(row_type)
        frame = pd.DataFrame([asdict(row) for row in rows], columns=header)
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        frame.to_csv(file_path, index=False, lineterminator="\n")
        logger.info(f"Wrote {len(frame)} rows to {file_path}")
        return file_path
    except Exception as e:
        raise srcException(e, sys) from e


def format_matrix(points: np.ndarray, precision: int = 6) -> List[str]:
    """Fixed-width text lines for printing a design."""
    return [" ".join(f"{value: .{precision}f}" for value in row) for row in np.atleast_2d(points)]
