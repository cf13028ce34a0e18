import math

import numpy as np
import pytest

from src.components.diagnostics import SubsampleDiagnostics, diagnose, median_kappa
from src.components.samplers import lowcon
from src.entity.config_entity import ExperimentConfig


@pytest.fixture
def config():
    return ExperimentConfig.from_dict(dict(
        mode="diagnose", dist="D1", misspec="H1", n=600, p=3, r_list=[12],
        replicates=2, seed=5, methods=["UNIF", "IBOSS", "LOWCON"],
    ))


def test_report_fields(config):
    rows = diagnose(config, sigma2=1.0, alpha=0.5)
    assert [(row.method, row.replicate) for row in rows] == [
        ("IBOSS", 0), ("IBOSS", 1), ("LOWCON", 0), ("LOWCON", 1), ("UNIF", 0), ("UNIF", 1),
    ]
    for row in rows:
        assert math.isfinite(row.kappa_sub)
        assert math.isfinite(row.worst_case_mse)
        if row.method == "LOWCON":
            assert row.assumption_holds == (row.sp_L > row.s1_D)
            assert math.isfinite(row.trace_inv)
        else:
            assert row.assumption_holds is None
            assert math.isnan(row.s1_D)


def test_bounds_hold_on_dense_data():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1.0, 1.0, size=(20000, 2))
    selection = lowcon(X, 20, theta=0.0, rng=rng)
    config = ExperimentConfig.from_dict(dict(mode="diagnose", p=2, n=20000, r_list=[20]))
    values = SubsampleDiagnostics(config).lowcon_fields(selection)
    assert values["assumption_holds"]
    assert values["kappa_bound_slack"] >= 0
    assert values["trace_inv_bound_slack"] >= 0


def test_defaults_come_from_config(config):
    rows = diagnose(config)
    again = diagnose(config, sigma2=config.sigma2, alpha=config.alpha)
    assert [row.worst_case_mse for row in rows] == [row.worst_case_mse for row in again]


@pytest.mark.slow
def test_lowcon_condition_number_is_smaller_on_heavy_tails():
    config = ExperimentConfig.from_dict(dict(
        mode="diagnose", dist="D3", misspec="H1", n=10_000, p=10, r_list=[40],
        replicates=50, seed=2020, methods=["UNIF", "LOWCON"],
    ))
    rows = diagnose(config)
    assert median_kappa(rows, "LOWCON", 40) < median_kappa(rows, "UNIF", 40)
