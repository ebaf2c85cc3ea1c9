"""Tests for the Monte-Carlo experiment service."""

import math

import numpy as np
import pytest

from larchfit.exceptions import ArgumentError
from larchfit.presets import preset, published_rmse
from larchfit.schemas.estimate import ContrastKind, FitOptions
from larchfit.schemas.experiment import ExperimentConfig
from larchfit.schemas.model import ModelDefinition
from larchfit.schemas.trajectory import SimConfig
from larchfit.services import mc_service
from larchfit.services.mc_service import (
    REPORT_COLUMNS,
    comparison_frame,
    config_hash,
    fit_seed,
    report_frame,
    rmse,
    run_experiment,
)

PINNED = FitOptions(fixed={0: 5.0, 1: -0.2, 2: 0.4})


def _config(**overrides) -> ExperimentConfig:
    values = {
        "model": ModelDefinition(family="larch", p=2, theta=[5.0, -0.2, 0.4]),
        "n_list": [200],
        "reps": 3,
        "estimators": [ContrastKind.lav()],
        "master_seed": 1,
        "sim_cfg": SimConfig(burn_in=200, trunc_K=5),
        "fit_opts": FitOptions(starts=2),
    }
    return ExperimentConfig(**(values | overrides))


def test_rmse_single_row():
    np.testing.assert_array_equal(rmse([[3.0, 4.0]]), [3.0, 4.0])


def test_rmse_sign_does_not_cancel():
    np.testing.assert_array_equal(rmse([[1.0, 0.0], [-1.0, 0.0]]), [1.0, 0.0])


def test_rmse_against_two_pass_oracle(rng):
    errors = rng.normal(size=(1000, 3))
    expected = [math.sqrt(sum(e * e for e in errors[:, i]) / 1000) for i in range(3)]
    np.testing.assert_allclose(rmse(errors), expected, rtol=0, atol=1e-12)


def test_rmse_needs_rows():
    with pytest.raises(ArgumentError):
        rmse(np.empty((0, 3)))


def test_intercept_only_experiment():
    cfg = _config(
        model=ModelDefinition(family="larch", p=1, theta=[1.0, 0.0]),
        reps=1,
        fit_opts=FitOptions(starts=2, fixed={1: 0.0}),
    )
    report = run_experiment(cfg)
    a0 = report.cell("lav", 200, "a0")
    assert a0.failures == 0
    assert a0.reps_used == 1
    assert a0.rmse == pytest.approx(abs(a0.mean_bias))
    assert report.cell("lav", 200, "a1").rmse == 0.0


def test_pinned_truth_scores_zero_for_lav_and_rescales_wls():
    cfg = _config(estimators=[ContrastKind.lav(), ContrastKind.wls()], fit_opts=PINNED)
    report = run_experiment(cfg)
    assert report.rmse_vector("lav", 200) == [0.0, 0.0, 0.0]
    # wls estimates live in the ||xi||_2 = 1 units and are divided by sqrt(pi/2)
    shrink = 1.0 / math.sqrt(math.pi / 2) - 1.0
    np.testing.assert_allclose(
        report.rmse_vector("wls", 200), np.abs(np.array([5.0, -0.2, 0.4]) * shrink), rtol=1e-12
    )
    raw = run_experiment(cfg.model_copy(update={"rescale": False}))
    assert raw.rmse_vector("wls", 200) == [0.0, 0.0, 0.0]


def test_failed_fits_are_counted_and_excluded():
    cfg = _config(fit_opts=FitOptions(starts=1, max_iter=1))
    report = run_experiment(cfg)
    for cell in report.cells:
        assert cell.failures == 3
        assert cell.reps_used == 0
        assert cell.rmse is None


def test_report_invariants():
    report = run_experiment(_config(n_list=[100, 200]))
    assert len(report.cells) == 2 * 3
    for cell in report.cells:
        assert cell.reps_used + cell.failures == report.reps
        if cell.rmse is not None:
            assert cell.rmse >= abs(cell.mean_bias) - 1e-15
    assert report.provenance.master_seed == 1
    assert report.provenance.config_hash == config_hash(_config(n_list=[100, 200]))


def test_worker_count_does_not_change_the_report():
    cfg = _config(reps=4)
    assert run_experiment(cfg, workers=1) == run_experiment(cfg, workers=2)


def test_workers_default_to_settings(monkeypatch):
    jobs: list[int] = []

    class SerialParallel:
        def __init__(self, n_jobs: int) -> None:
            jobs.append(n_jobs)

        def __call__(self, tasks):
            return [func(*args, **kwargs) for func, args, kwargs in tasks]

    monkeypatch.setenv("MC_WORKERS", "3")
    monkeypatch.setattr(mc_service, "Parallel", SerialParallel)
    cfg = _config(reps=2, fit_opts=PINNED)
    assert run_experiment(cfg) == run_experiment(cfg, workers=1)
    assert jobs == [3]


def test_seeds_depend_on_every_key():
    seeds = {fit_seed(0, r, n, e) for r in range(3) for n in range(2) for e in range(2)}
    assert len(seeds) == 12
    assert fit_seed(0, 1, 0, 0) == fit_seed(0, 1, 0, 0)


def test_config_hash_tracks_the_seed():
    assert config_hash(_config()) == config_hash(_config())
    assert config_hash(_config()) != config_hash(_config(master_seed=2))


def test_reference_values_attached():
    cfg = _config(n_list=[1000], reps=1, fit_opts=PINNED, reference_table="table1_gauss")
    report = run_experiment(cfg)
    assert [c.reference for c in report.cells] == list(published_rmse("table1_gauss", "lav", 1000))
    table = comparison_frame(report)
    assert table.loc[("lav", 1000), ("reference", "a0")] == 0.145
    assert "qml_reference" not in table.columns.get_level_values(0)


def test_long_memory_comparison_carries_qml_memory_reference():
    cfg = _config(
        model=ModelDefinition(family="longmemory", theta=[1.0, 0.2, 0.1]),
        n_list=[1000],
        reps=1,
        sim_cfg=SimConfig(burn_in=100, trunc_K=50),
        fit_opts=FitOptions(fixed={0: 1.0, 1: 0.2, 2: 0.1}, trunc_K=50),
        reference_table="table3_d01",
    )
    report = run_experiment(cfg)
    assert report.reference_table == "table3_d01"
    table = comparison_frame(report)
    assert table.loc[("lav", 1000), ("qml_reference", "d")] == 0.357
    assert table.loc[("lav", 1000), ("reference", "d")] == 0.089


def test_report_frame_columns():
    report = run_experiment(_config(fit_opts=PINNED))
    frame = report_frame(report)
    assert list(frame.columns) == REPORT_COLUMNS
    assert frame["coordinate"].tolist() == ["a0", "a1", "a2"]


def test_presets():
    cfg = preset("table2_gauss", reps=10)
    assert cfg.model.family == "glarch"
    assert [k.label for k in cfg.estimators] == ["lav", "wls", "sqml(1)", "sqml(0.5)"]
    assert preset("table3_d02").model.theta == [1.0, 0.2, 0.2]
    assert published_rmse("table1_gauss", "lav", 123) is None
    with pytest.raises(KeyError):
        preset("table9")


def test_config_validation():
    with pytest.raises(ValueError):
        _config(n_list=[200, 100])
    with pytest.raises(ValueError):
        _config(reps=0)
    with pytest.raises(ValueError):
        _config(model=ModelDefinition(family="larch", p=2))
