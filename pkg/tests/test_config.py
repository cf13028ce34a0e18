import json

import pytest

from src.entity.config_entity import ExperimentConfig, default_r_list
from src.exception import ConfigError, RankDeficient, srcException


def test_defaults():
    config = ExperimentConfig()
    assert (config.n, config.p, config.replicates, config.theta, config.slev_alpha) == (10000, 10, 100, 1.0, 0.9)
    assert config.r_list == [20, 40, 60, 80, 100]
    assert config.methods == ["UNIF", "BLEV", "SLEV", "LEVUNW", "IBOSS", "LOWCON"]


def test_r_list_follows_p():
    assert ExperimentConfig.from_dict({"p": 20}).r_list == default_r_list(20) == [40, 80, 120, 160, 200]


@pytest.mark.parametrize("values", [
    {"colour": "red"},
    {"n": 50, "p": 10, "r_list": [50]},
    {"r_list": [10]},
    {"theta": 50},
    {"replicates": 0},
    {"methods": ["UNIF", "KMEANS"]},
    {"dist": "D9"},
    {"sigma2": -1.0},
    {"n": "2000"},
    {"r_list": 40},
    {"r_list": [20, "40"]},
    {"theta": "1"},
    {"replicates": 2.5},
    {"methods": "UNIF"},
    {"allow_duplicates": "yes"},
])
def test_invalid_values(values):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(values)


def test_realdata_skips_the_grid_check():
    config = ExperimentConfig.from_dict({"mode": "realdata", "r_list": [5]})
    assert config.r_list == [5]


def test_from_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"dist": "D2", "n": 500, "p": 5, "replicates": 3}))
    config = ExperimentConfig.from_json(str(path), seed=9, output_path=None)
    assert (config.dist, config.seed, config.r_list) == ("D2", 9, [10, 20, 30, 40, 50])


@pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
def test_from_json_bad_content(tmp_path, text):
    path = tmp_path / "c.json"
    path.write_text(text)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json(str(path))


def test_from_json_missing(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json(str(tmp_path / "none.json"))


def test_exception_message_carries_location():
    error = RankDeficient("singular subsample")
    assert isinstance(error, srcException)
    assert error.message == "singular subsample"
    assert "line number" in str(error)
    assert "test_config.py" in str(error)
