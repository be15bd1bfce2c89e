"""Shared experiment-output types and small series helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MetricSet",
    "NoiseParams",
    "visibility",
    "series_phase",
    "binary_entropy",
]


@dataclass
class MetricSet:
    """Named scalar observables plus scan series produced by one simulator.

    ``notes`` carries provenance strings; parameter provenance uses the
    ``param:<name>=<value>`` form so downstream scoring can compare the
    values a simulator actually used against the design.
    """

    scalars: dict[str, float] = field(default_factory=dict)
    series: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        for name, value in self.scalars.items():
            if not math.isfinite(value):
                raise ValueError(f"scalar {name!r} is not finite: {value!r}")
        clean = {}
        for name, (axis, values) in self.series.items():
            axis = np.asarray(axis, dtype=float)
            values = np.asarray(values, dtype=float)
            if axis.shape != values.shape:
                raise ValueError(f"series {name!r}: axis and values have different shapes")
            if not (np.all(np.isfinite(axis)) and np.all(np.isfinite(values))):
                raise ValueError(f"series {name!r} contains non-finite entries")
            clean[name] = (axis, values)
        self.series = clean

    def note_param(self, name: str, value: float) -> None:
        self.notes.append(f"param:{name}={value!r}")

    def used_params(self) -> dict[str, float]:
        out = {}
        for note in self.notes:
            if note.startswith("param:") and "=" in note:
                name, _, raw = note[len("param:") :].partition("=")
                try:
                    out[name] = float(raw)
                except ValueError:
                    continue
        return out

    def names(self) -> frozenset[str]:
        return frozenset(self.scalars) | frozenset(self.series)


@dataclass(frozen=True)
class NoiseParams:
    """Detection and indistinguishability imperfections shared by simulators."""

    detector_efficiency: float = 1.0  # eta in [0, 1]
    dark_count_rate_hz: float = 0.0
    mode_matching: float = 1.0  # in [0, 1]
    distinguishability: float = 0.0  # epsilon in [0, 1]
    seed: int = 42

    def __post_init__(self):
        if not 0.0 <= self.detector_efficiency <= 1.0:
            raise ValueError("detector_efficiency must be in [0, 1]")
        if self.dark_count_rate_hz < 0.0:
            raise ValueError("dark_count_rate_hz must be non-negative")
        if not 0.0 <= self.mode_matching <= 1.0:
            raise ValueError("mode_matching must be in [0, 1]")
        if not 0.0 <= self.distinguishability <= 1.0:
            raise ValueError("distinguishability must be in [0, 1]")


def visibility(values: np.ndarray) -> float:
    """(max - min) / (max + min); 0 for a flat or empty series."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    hi, lo = float(values.max()), float(values.min())
    if hi + lo == 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)


def series_phase(axis: np.ndarray, values: np.ndarray, frequency: float) -> float:
    """Phase of the cosine component at a known frequency (lock-in projection)."""
    axis = np.asarray(axis, dtype=float)
    values = np.asarray(values, dtype=float) - float(np.mean(values))
    c = float(np.sum(values * np.cos(frequency * axis)))
    s = float(np.sum(values * np.sin(frequency * axis)))
    return math.atan2(-s, c)


def binary_entropy(p: float) -> float:
    """h(p) in bits, with h(0) = h(1) = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)
