"""Service for replicated simulate -> fit experiments and their RMSE tables."""

import hashlib
import logging

import numpy as np
import numpy.typing as npt
import pandas as pd
from joblib import Parallel, delayed

from larchfit.config import get_settings
from larchfit.exceptions import ArgumentError, LarchError
from larchfit.presets import (
    PUBLISHED_LONG_MEMORY_QML_D,
    published_long_memory_qml_d,
    published_rmse,
)
from larchfit.schemas.estimate import ContrastKind, ContrastMethod
from larchfit.schemas.experiment import ExperimentConfig, McCell, McReport, Provenance
from larchfit.services.estimate_service import fit
from larchfit.services.infer_service import default_mask, theta_to_l1
from larchfit.services.model_service import coordinate_names, validate_theta
from larchfit.services.noise_service import noise_variance
from larchfit.services.simulate_service import simulate

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["estimator", "n", "coordinate", "rmse", "bias", "failures"]


def rmse(errors: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Per-coordinate sqrt(mean of squared errors) over the rows of a reps x d matrix."""
    arr = np.atleast_2d(np.asarray(errors, dtype=np.float64))
    if arr.size == 0 or arr.shape[0] == 0:
        raise ArgumentError("rmse needs at least one row of errors")
    return np.sqrt(np.mean(arr**2, axis=0))


def config_hash(cfg: ExperimentConfig) -> str:
    return hashlib.sha256(cfg.model_dump_json().encode("utf-8")).hexdigest()


def fit_seed(master_seed: int, r: int, n_index: int, e_index: int) -> int:
    """Multi-start seed of one (replication, sample size, estimator) fit."""
    state = np.random.SeedSequence([master_seed, r, n_index, e_index]).generate_state(1)
    return int(state[0])


def _needs_rescale(kind: ContrastKind) -> bool:
    # LAV already estimates the E|xi| = 1 parametrisation
    return kind.method != ContrastMethod.LAV


def _replicate(cfg: ExperimentConfig, r: int) -> npt.NDArray[np.float64]:
    """Errors theta_hat - theta_star of replication r, shape (len(n_list), estimators, d).

    Non-converged or failed fits are NaN rows.
    """
    spec = cfg.model.spec
    theta_star = validate_theta(spec, cfg.model.params)
    l2_norm = float(np.sqrt(noise_variance(cfg.noise)))
    mask = default_mask(spec)
    out = np.full((len(cfg.n_list), len(cfg.estimators), spec.d), np.nan)
    for n_index, n in enumerate(cfg.n_list):
        trajectory = simulate(cfg.model, cfg.noise, n, cfg.sim_cfg, (cfg.master_seed, r, n_index))
        for e_index, kind in enumerate(cfg.estimators):
            seed = fit_seed(cfg.master_seed, r, n_index, e_index)
            try:
                result = fit(spec, trajectory, kind, cfg.fit_opts, seed)
            except LarchError as exc:
                logger.warning(f"replication {r} n={n} {kind.label}: {exc}")
                continue
            if not result.converged:
                continue
            theta_hat = np.asarray(result.theta_hat)
            if cfg.rescale and _needs_rescale(kind):
                theta_hat = theta_to_l1(theta_hat, l2_norm, mask)
            out[n_index, e_index] = theta_hat - theta_star
    return out


def _aggregate(cfg: ExperimentConfig, errors: npt.NDArray[np.float64]) -> list[McCell]:
    spec = cfg.model.spec
    names = coordinate_names(spec)
    theta_star = validate_theta(spec, cfg.model.params)
    cells: list[McCell] = []
    for e_index, kind in enumerate(cfg.estimators):
        for n_index, n in enumerate(cfg.n_list):
            block = errors[:, n_index, e_index, :]
            used = block[~np.isnan(block).any(axis=1)]
            reference = (
                published_rmse(cfg.reference_table, kind.label, n) if cfg.reference_table else None
            )
            for i, name in enumerate(names):
                value: float | None = None
                bias: float | None = None
                estimate: float | None = None
                if used.shape[0]:
                    value = float(rmse(used[:, i : i + 1])[0])
                    bias = float(np.mean(used[:, i]))
                    estimate = float(theta_star[i] + bias)
                cells.append(
                    McCell(
                        estimator=kind.label,
                        n=n,
                        coordinate=name,
                        rmse=value,
                        mean_bias=bias,
                        mean_estimate=estimate,
                        reps_used=int(used.shape[0]),
                        failures=cfg.reps - int(used.shape[0]),
                        reference=reference[i] if reference is not None else None,
                    )
                )
    return cells


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> McReport:
    """Simulate cfg.reps independent trajectories per sample size and score every estimator.

    Replication r draws its noise from the stream (master_seed, r, n_index), so the report is
    identical for any worker count.

    Args:
        cfg: Model, noise, sample sizes, estimators, seeds and fit options
        workers: Worker processes; None falls back to MC_WORKERS

    Returns:
        An McReport with one cell per (estimator, n, coordinate)
    """
    settings = get_settings()
    workers = workers or settings.MC_WORKERS
    if workers < 1:
        raise ArgumentError(f"workers must be >= 1, got {workers}")
    digest = config_hash(cfg)
    logger.info(
        f"Monte-Carlo: {cfg.reps} reps x n={cfg.n_list} x "
        f"{[k.label for k in cfg.estimators]} on {workers} worker(s), config {digest[:12]}"
    )
    if workers == 1:
        per_rep = [_replicate(cfg, r) for r in range(cfg.reps)]
    else:
        per_rep = Parallel(n_jobs=workers)(delayed(_replicate)(cfg, r) for r in range(cfg.reps))
    errors = np.stack(per_rep)

    cells = _aggregate(cfg, errors)
    failures = int(np.isnan(errors).any(axis=-1).sum())
    if failures:
        logger.warning(f"{failures} fit(s) failed and were excluded from the RMSE")
    return McReport(
        schema_version=settings.SCHEMA_VERSION,
        reps=cfg.reps,
        theta_star=list(cfg.model.theta or []),
        cells=cells,
        provenance=Provenance(master_seed=cfg.master_seed, config_hash=digest),
        reference_table=cfg.reference_table,
    )


def report_frame(report: McReport) -> pd.DataFrame:
    """Long table with one row per (estimator, n, coordinate)."""
    rows = [
        {
            "estimator": c.estimator,
            "n": c.n,
            "coordinate": c.coordinate,
            "rmse": c.rmse,
            "bias": c.mean_bias,
            "failures": c.failures,
        }
        for c in report.cells
    ]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def comparison_frame(report: McReport) -> pd.DataFrame:
    """Simulated RMSE next to the published value, pivoted to one row per (estimator, n).

    Long-memory tables also carry the published memory-parameter RMSE of the QML competitor
    under ("qml_reference", "d").
    """
    frame = pd.DataFrame(
        [
            {
                "estimator": c.estimator,
                "n": c.n,
                "coordinate": c.coordinate,
                "rmse": c.rmse,
                "reference": c.reference,
            }
            for c in report.cells
        ]
    )
    table = frame.pivot_table(
        index=["estimator", "n"],
        columns="coordinate",
        values=["rmse", "reference"],
        sort=False,
    )
    name = report.reference_table
    if name is not None and name in PUBLISHED_LONG_MEMORY_QML_D:
        ns = table.index.get_level_values("n")
        table[("qml_reference", "d")] = [published_long_memory_qml_d(name, int(n)) for n in ns]
    return table
