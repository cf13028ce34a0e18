import json

import numpy as np
import pandas as pd
import pytest

from app import main
from src.components.data_ingestion import write_dataset_csv
from src.constants import EXIT_CONFIG_ERROR, EXIT_DATA_ERROR, EXIT_NUMERICAL_ERROR, EXIT_OK
from src.entity.artifact_entity import PipelineArtifact
from src.pipeline.pipeline import pipeline


@pytest.fixture
def sim_config(tmp_path):
    path = tmp_path / "sim.json"
    path.write_text(json.dumps({
        "dist": "D2", "misspec": "H5", "n": 300, "p": 3, "r_list": [6, 12],
        "replicates": 3, "seed": 4, "methods": ["UNIF", "IBOSS", "LOWCON"],
    }))
    return str(path)


@pytest.fixture
def data_file(tmp_path):
    rng = np.random.default_rng(6)
    X = rng.standard_normal((80, 2))
    y = 0.5 + X @ np.array([1.0, 2.0]) + rng.standard_normal(80)
    return write_dataset_csv(X, y, ["a", "b"], str(tmp_path / "data.csv"))


@pytest.fixture
def emse_config(tmp_path):
    path = tmp_path / "emse.json"
    path.write_text(json.dumps({"r_list": [12], "replicates": 3, "seed": 1, "methods": ["UNIF", "LOWCON"]}))
    return str(path)


def test_olhd(capsys):
    assert main(["olhd", "--r", "9", "--p", "2", "--seed", "1"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 11
    assert out[-2].startswith("kappa")


def test_olhd_infeasible():
    assert main(["olhd", "--r", "3", "--p", "3", "--seed", "1"]) == EXIT_NUMERICAL_ERROR


def test_simulate(sim_config, tmp_path):
    out = tmp_path / "out.csv"
    assert main(["simulate", "--config", sim_config, "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert len(frame) == 6
    assert set(frame["status"]) == {"ok"}
    assert (frame["response_reads"] == frame["r"] * 3).all()


def test_simulate_twice_is_byte_identical(sim_config, tmp_path):
    first, second = tmp_path / "1.csv", tmp_path / "2.csv"
    main(["simulate", "--config", sim_config, "--out", str(first)])
    main(["simulate", "--config", sim_config, "--out", str(second)])
    assert first.read_bytes() == second.read_bytes()


def test_unknown_key_is_a_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"replicas": 3}))
    assert main(["simulate", "--config", str(path)]) == EXIT_CONFIG_ERROR


def test_toy(tmp_path):
    out = tmp_path / "toy.csv"
    assert main(["toy", "--r", "10", "--seed", "3", "--replicates", "4", "--out", str(out)]) == EXIT_OK
    assert pd.read_csv(out)["method"].tolist() == ["BLEV", "LOWCON", "UNIF"]


def test_diagnose(sim_config, tmp_path):
    out = tmp_path / "diag.csv"
    assert main(["diagnose", "--config", sim_config, "--alpha", "0.5", "--sigma2", "2", "--out", str(out)]) == EXIT_OK
    assert len(pd.read_csv(out)) == 3 * 2 * 3


def test_sweep(sim_config, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", sim_config, "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert sorted(frame.loc[frame["method"] == "LOWCON", "theta"].unique()) == [0, 1, 5, 10]


def test_emse(emse_config, data_file, tmp_path):
    out = tmp_path / "emse.csv"
    code = main(["emse", "--config", emse_config, "--data", data_file, "--response", "y",
                 "--predictors", "a,b", "--out", str(out)])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert frame["dataset"].unique().tolist() == ["data"]
    assert (frame["p"] == 2).all()


def test_emse_missing_file(emse_config, tmp_path):
    code = main(["emse", "--config", emse_config, "--data", str(tmp_path / "none.csv"),
                 "--response", "y", "--predictors", "a"])
    assert code == EXIT_DATA_ERROR


def test_emse_missing_column(emse_config, data_file):
    code = main(["emse", "--config", emse_config, "--data", data_file, "--response", "y", "--predictors", "a,zz"])
    assert code == EXIT_DATA_ERROR


def test_emse_collinear_predictors(emse_config, tmp_path):
    rng = np.random.default_rng(2)
    x = rng.standard_normal(50)
    path = write_dataset_csv(np.column_stack([x, 2 * x]), x + rng.standard_normal(50), ["a", "b"],
                             str(tmp_path / "collinear.csv"))
    code = main(["emse", "--config", emse_config, "--data", path, "--response", "y", "--predictors", "a,b"])
    assert code == EXIT_NUMERICAL_ERROR


@pytest.mark.parametrize("override", [{"n": "2000"}, {"r_list": 40}, {"sigma2": None}])
def test_wrongly_typed_config_is_a_config_error(tmp_path, override):
    values = {"dist": "D1", "misspec": "H1", "n": 300, "p": 3, "r_list": [6], "replicates": 2}
    values.update(override)
    path = tmp_path / "typed.json"
    path.write_text(json.dumps(values))
    assert main(["simulate", "--config", str(path)]) == EXIT_CONFIG_ERROR


def test_failed_cells_exit_numerical(sim_config, tmp_path, monkeypatch, capsys):
    out = tmp_path / "out.csv"

    def run_with_failures(self):
        return PipelineArtifact(results_path=str(out), n_rows=6, failed_cells=2, rows=[])

    monkeypatch.setattr(pipeline, "run_pipeline", run_with_failures)
    assert main(["simulate", "--config", sim_config, "--out", str(out)]) == EXIT_NUMERICAL_ERROR
    assert "2 cells" in capsys.readouterr().err
