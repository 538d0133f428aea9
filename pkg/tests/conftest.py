from __future__ import annotations

import numpy as np
import pytest

from dlde import LabeledDataset


def random_dataset(
    rng: np.random.Generator, n: int, d: int, anomalies: int = 0
) -> LabeledDataset:
    """Gaussian rows with ``anomalies`` displaced rows labeled 1."""
    x = rng.normal(size=(n, d))
    labels = np.zeros(n, dtype=np.int64)
    if anomalies:
        idx = rng.choice(n, size=anomalies, replace=False)
        x[idx] += 3.0
        labels[idx] = 1
    return LabeledDataset(x, labels)


def heartbeat_series(
    n_windows: int = 15,
    s: int = 40,
    anomaly_at: int = 7,
    noise: float = 0.05,
    seed: int = 0,
) -> np.ndarray:
    """Periodic pulse train with one window whose pulse is displaced.

    Serves as a stand-in for a one-minute physiological recording cut
    into per-second windows, where a single cycle is out of shape.
    """
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, s, endpoint=False)
    normal_pulse = np.exp(-0.5 * ((t - 0.30) / 0.05) ** 2) + 0.3 * np.sin(2 * np.pi * t)
    shifted_pulse = np.exp(-0.5 * ((t - 0.70) / 0.05) ** 2) + 0.3 * np.sin(2 * np.pi * t)
    windows = []
    for w in range(n_windows):
        shape = shifted_pulse if w == anomaly_at else normal_pulse
        windows.append(shape + rng.normal(0.0, noise, size=s))
    return np.concatenate(windows)


@pytest.fixture
def labeled_file(tmp_path):
    """Factory writing a label-first delimited file, returning its path."""

    def _write(lines: list[str], name: str = "data.csv"):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
