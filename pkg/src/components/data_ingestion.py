import os
import sys
from typing import List, Optional

import numpy as np
import pandas as pd

from src.entity.artifact_entity import Dataset
from src.entity.config_entity import DataIngestionConfig
from src.logger import get_logger
logger = get_logger(__name__)
from src.exception import (
    ColumnMissing,
    DataFileNotFound,
    EmptyAfterFiltering,
    srcException,
)


class DataIngestion:
    def __init__(self, data_ingestion_config: DataIngestionConfig):
        try:
            self.data_ingestion_config = data_ingestion_config
        except Exception as e:
            raise srcException(e, sys)

    def read_table(self, data_path: str, columns: List[str]) -> pd.DataFrame:
        """
        Read the selected columns of a CSV file as numbers.
        Non-numeric cells become NaN so that they are dropped with the missing ones.
        """
        if not os.path.exists(data_path):
            raise DataFileNotFound(f"data file not found: {data_path}")

        # round_trip keeps every float bit-identical to what was written
        frame = pd.read_csv(data_path, float_precision="round_trip")
        missing = [c for c in columns if c not in frame.columns]
        if missing:
            raise ColumnMissing(f"columns {missing} not found in {data_path}; available: {list(frame.columns)}")

        return frame[columns].apply(pd.to_numeric, errors="coerce")

    def ingest_csv(self) -> Dataset:
        """
        Load the response and predictor columns into a Dataset.
        Rows with a missing or non-numeric value in any selected column are dropped and counted.
        """
        try:
            data_path = self.data_ingestion_config.data_path
            response = self.data_ingestion_config.response_column
            predictors = list(self.data_ingestion_config.predictor_columns)

            logger.info(f"Data ingestion started, data_path: {data_path}, response: {response}, predictors: {predictors}")

            frame = self.read_table(data_path, [response, *predictors])
            n_read = len(frame)
            frame = frame.dropna(axis=0, how="any")
            dropped = n_read - len(frame)
            if dropped:
                logger.warning(f"Dropped {dropped} of {n_read} rows with missing or non-numeric values")
            if frame.empty:
                raise EmptyAfterFiltering(f"no complete rows left in {data_path} after dropping {dropped}")

            dataset = Dataset(
                name=os.path.splitext(os.path.basename(data_path))[0],
                X_raw=frame[predictors].to_numpy(dtype=float),
                y=frame[response].to_numpy(dtype=float),
                column_names=predictors,
                response_name=response,
                has_intercept=self.data_ingestion_config.has_intercept,
                dropped_rows=dropped,
            )
            logger.info(f"Data ingestion completed, n={dataset.n}, p={dataset.p}, dropped={dropped}")
            return dataset

        except srcException:
            raise
        except Exception as e:
            logger.error(f"Error during data ingestion: {e}")
            raise srcException(e, sys) from e


def ingest_csv(path: str, response_column: str, predictor_columns: List[str], has_intercept: bool = True) -> Dataset:
    config = DataIngestionConfig(
        data_path=path,
        response_column=response_column,
        predictor_columns=list(predictor_columns),
        has_intercept=has_intercept,
    )
    return DataIngestion(data_ingestion_config=config).ingest_csv()


def write_dataset_csv(X: np.ndarray, y: Optional[np.ndarray], column_names: List[str], path: str, response_name: str = "y") -> str:
    """Write predictors (and response) as CSV readable by ingest_csv."""
    frame = pd.DataFrame(np.asarray(X, dtype=float), columns=column_names)
    if y is not None:
        frame.insert(0, response_name, np.asarray(y, dtype=float))
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path
