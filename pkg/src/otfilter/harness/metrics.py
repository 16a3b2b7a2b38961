"""Twin-experiment metrics: parameter error, state RMSE, resampling summary."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..filtering import RunRecord
from .tables import format_value


@dataclass
class MetricsReport:
    times: np.ndarray
    param_abs_error: np.ndarray  # |c_mean - c_true| per step (NaN when no parameter)
    param_rel_error: np.ndarray
    state_rmse: np.ndarray
    ess: np.ndarray
    resample_times: np.ndarray
    # summary
    c_true: float | None
    time_to_10pct: float  # NaN when the 10% band is never entered for good
    terminal_abs_error: float
    terminal_rel_error: float
    terminal_rmse: float
    n_resamples: int

    def summary_lines(self) -> list[str]:
        items = [
            ("c_true", self.c_true if self.c_true is not None else float("nan")),
            ("time_to_10pct_rel_error", self.time_to_10pct),
            ("terminal_abs_error", self.terminal_abs_error),
            ("terminal_rel_error", self.terminal_rel_error),
            ("terminal_state_rmse", self.terminal_rmse),
            ("n_resamples", self.n_resamples),
            ("n_steps", len(self.times)),
        ]
        return [f"{name} = {format_value(value)}" for name, value in items]

    def write_summary(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(self.summary_lines()) + "\n")
        return path


def entry_time_into_band(times: np.ndarray, rel_error: np.ndarray, band: float = 0.1) -> float:
    """Earliest time after which the relative error stays within the band."""
    inside = rel_error <= band
    if not inside[-1]:
        return float("nan")
    # last index where we are outside; entry is the step after it
    outside = np.nonzero(~inside)[0]
    entry_idx = 0 if outside.size == 0 else outside[-1] + 1
    return float(times[entry_idx])


def compute_metrics(record: RunRecord, truth: np.ndarray, c_true: float | None) -> MetricsReport:
    """Metrics of one run against the reference trajectory.

    ``truth`` is the (n_steps + 1, state_dim) reference path; row n + 1 is
    compared against the filter state after assimilating increment n.
    """
    truth = np.atleast_2d(np.asarray(truth, dtype=float))
    if truth.shape[0] != record.n_steps + 1:
        raise ValueError(
            f"truth has {truth.shape[0]} rows, expected {record.n_steps + 1} for {record.n_steps} steps"
        )
    state_mean = record.state_mean()
    rmse = np.sqrt(np.mean((state_mean - truth[1:]) ** 2, axis=1))
    if c_true is not None and record.exp_parameter_mean.shape[1] > 0:
        c_mean = record.exp_parameter_mean[:, 0]
        abs_err = np.abs(c_mean - c_true)
        rel_err = abs_err / abs(c_true)
        time_to = entry_time_into_band(record.times, rel_err)
    else:
        abs_err = np.full(record.n_steps, np.nan)
        rel_err = np.full(record.n_steps, np.nan)
        time_to = float("nan")
    return MetricsReport(
        times=record.times,
        param_abs_error=abs_err,
        param_rel_error=rel_err,
        state_rmse=rmse,
        ess=record.ess,
        resample_times=record.resample_times(),
        c_true=c_true,
        time_to_10pct=time_to,
        terminal_abs_error=float(abs_err[-1]),
        terminal_rel_error=float(rel_err[-1]),
        terminal_rmse=float(rmse[-1]),
        n_resamples=int(record.resampled.sum()),
    )
