"""Time series container for ensemble-averaged observables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OBSERVABLE_KINDS = ("kinetic_energy", "sigma2", "scintillation")


@dataclass
class ObservableSeries:
    """An ensemble-averaged observable sampled on a strictly increasing time grid.

    values[i] is the ensemble mean at times[i]; stderr[i] is the standard error
    across realizations (zeros when only one realization was run).
    """

    times: np.ndarray
    values: np.ndarray
    kind: str
    ensemble_count: int
    metadata: dict = field(default_factory=dict)
    stderr: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.kind not in OBSERVABLE_KINDS:
            raise ValueError(f"unknown observable kind {self.kind!r}")
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise ValueError("times and values must be 1D arrays of equal length")
        if len(self.times) < 2:
            raise ValueError("a series needs at least two samples")
        if not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        if self.ensemble_count < 1:
            raise ValueError("ensemble_count must be positive")
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)
            if self.stderr.shape != self.values.shape:
                raise ValueError("stderr must match values in shape")

    def __len__(self) -> int:
        return len(self.times)

    def rescaled_times(self, tau: float) -> np.ndarray:
        """Times in units of the correlation time."""
        return self.times / tau

    def truncated(self, n: int) -> "ObservableSeries":
        """First n samples as a new series (metadata shared)."""
        if n < 2:
            raise ValueError("cannot truncate below two samples")
        stderr = None if self.stderr is None else self.stderr[:n]
        return ObservableSeries(self.times[:n], self.values[:n], self.kind,
                                self.ensemble_count, dict(self.metadata), stderr)
