"""Detection of the period-2 mean-spin oscillation of synchronous p-bit updates."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInputError
from .ising import SpinState

ALTERNATION_THRESHOLD = 0.9
AMPLITUDE_THRESHOLD = 0.5
DEFAULT_WINDOW = 50


@dataclass(frozen=True)
class OscillationReport:
    detected: bool
    onset_cycle: Optional[int]
    alternation_fraction: float
    mean_amplitude: float

    def to_dict(self) -> dict:
        return asdict(self)


def mean_spin(state: SpinState) -> float:
    return float(np.mean(state.sigma))


def _window_stats(trace, window):
    """Alternation fraction and mean |m| for every window start."""
    flips = (trace[:-1] * trace[1:] < 0).astype(np.int64)
    flip_sums = np.convolve(flips, np.ones(window - 1, dtype=np.int64), mode="valid")
    amp = np.abs(trace)
    amp_sums = np.convolve(amp, np.ones(window), mode="valid")
    return flip_sums / (window - 1), amp_sums / window


def detect_oscillation(
    trace,
    window: int = DEFAULT_WINDOW,
    alternation_threshold: float = ALTERNATION_THRESHOLD,
    amplitude_threshold: float = AMPLITUDE_THRESHOLD,
) -> OscillationReport:
    """Check the last ``window`` cycles of a mean-spin trace for sign alternation.

    ``onset_cycle`` is the first window start from which every later window
    also meets both thresholds, or None when the final window does not.
    """
    trace = np.asarray(trace, dtype=np.float64)
    if window < 10:
        raise InvalidInputError(f"window must be >= 10, got {window}")
    if trace.ndim != 1 or trace.size < window:
        raise InvalidInputError(f"trace of length {trace.size} is shorter than window {window}")

    alt, amp = _window_stats(trace, window)
    # small tolerance so an exact 0.5 amplitude is not lost to summation rounding
    ok = (alt >= alternation_threshold - 1e-12) & (amp >= amplitude_threshold - 1e-12)
    detected = bool(ok[-1])
    onset = None
    if detected:
        failing = np.flatnonzero(~ok)
        onset = int(failing[-1] + 1) if failing.size else 0
    return OscillationReport(
        detected=detected,
        onset_cycle=onset,
        alternation_fraction=float(alt[-1]),
        mean_amplitude=float(amp[-1]),
    )
