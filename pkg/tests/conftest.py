import numpy as np
import pytest

from src.entity.config_entity import ExperimentConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def results_dir(tmp_path, monkeypatch):
    """Point LOWCON_OUTPUT_DIR at a temporary directory."""
    out = tmp_path / "results"
    monkeypatch.setenv("LOWCON_OUTPUT_DIR", str(out))
    return out


@pytest.fixture
def small_config():
    """A desk-sized simulation cell: every method, two subsample sizes."""
    return ExperimentConfig.from_dict(dict(
        mode="simulate", dist="D1", misspec="H2", n=400, p=4, r_list=[8, 16],
        replicates=4, seed=7, sigma2=1.0, kappa_target=1.3, max_restarts=3,
    ))
