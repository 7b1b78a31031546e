"""Pseudo-inverse-temperature ramps for the p-bit engines and the SA temperature ladder."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModelError, InvalidInputError
from .ising import IsingModel


def spin_scales(model: IsingModel) -> np.ndarray:
    """``s_i = sqrt((n-1) * Var(J_i,:))`` for all spins at once.

    The row excludes the diagonal and keeps structural zeros, so it always
    has ``n - 1`` entries; Var is the population variance.
    """
    n = model.n
    if n < 2:
        raise InvalidInputError(f"spin scale needs n >= 2, got n={n}")
    J = model.J
    k = n - 1
    row_sum = np.asarray(J.sum(axis=1)).ravel()
    row_sq = np.asarray(J.multiply(J).sum(axis=1)).ravel()
    mean = row_sum / k
    var = np.maximum(row_sq / k - mean * mean, 0.0)
    return np.sqrt(k * var)


def spin_scale(model: IsingModel, i: int) -> float:
    if model.n >= 2 and not 0 <= i < model.n:
        raise InvalidInputError(f"node index {i} out of range [0, {model.n})")
    return float(spin_scales(model)[i])


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric ramp ``I0(t) = i0_min * beta**(-t)`` over ``cycles`` steps."""

    i0_min: float
    i0_max: float
    beta: float
    cycles: int
    mean_s: float
    gamma: float = 0.1
    delta: float = 10.0
    zero_scale_fraction: float = 0.0

    def i0_at(self, t: int) -> float:
        return i0_at(self, t)

    def values(self) -> np.ndarray:
        return self.i0_min * self.beta ** (-np.arange(self.cycles, dtype=np.float64))

    def with_cycles(self, cycles: int) -> "AnnealSchedule":
        """Same end points, ramp recompressed to ``cycles`` steps."""
        if cycles < 2:
            raise InvalidInputError(f"cycles must be >= 2, got {cycles}")
        beta = (self.i0_min / self.i0_max) ** (1.0 / (cycles - 1))
        return AnnealSchedule(
            self.i0_min, self.i0_max, beta, cycles, self.mean_s,
            self.gamma, self.delta, self.zero_scale_fraction,
        )


def derive_schedule(model: IsingModel, gamma: float = 0.1, delta: float = 10.0, cycles: int = 1000) -> AnnealSchedule:
    if cycles < 2:
        raise InvalidInputError(f"cycles must be >= 2, got {cycles}")
    s = spin_scales(model)
    mean_s = float(s.mean())
    if mean_s <= 0.0:
        raise DegenerateModelError("mean spin scale is zero; model has no usable couplings")
    i0_min = gamma / mean_s
    i0_max = delta / mean_s
    beta = (i0_min / i0_max) ** (1.0 / (cycles - 1))
    return AnnealSchedule(
        i0_min=i0_min,
        i0_max=i0_max,
        beta=beta,
        cycles=cycles,
        mean_s=mean_s,
        gamma=gamma,
        delta=delta,
        zero_scale_fraction=float(np.mean(s == 0.0)),
    )


def i0_at(schedule: AnnealSchedule, t: int) -> float:
    if not 0 <= t < schedule.cycles:
        raise InvalidInputError(f"cycle {t} out of range [0, {schedule.cycles})")
    return schedule.i0_min * schedule.beta ** (-t)


@dataclass(frozen=True)
class SaTempSchedule:
    """``T <- 1/(1/T + delta_it)`` from ``t_init`` down to ``t_final``."""

    cycles: int
    t_init: float = 1.0
    t_final: float = 1e-3

    def __post_init__(self):
        if self.cycles < 2:
            raise InvalidInputError(f"cycles must be >= 2, got {self.cycles}")
        if not 0 < self.t_final < self.t_init:
            raise InvalidInputError("need 0 < t_final < t_init")

    @property
    def delta_it(self) -> float:
        return (1.0 / self.t_final - 1.0 / self.t_init) / (self.cycles - 1)

    def temp_at(self, t: int) -> float:
        return sa_temp_at(self, t)

    def values(self) -> np.ndarray:
        return 1.0 / (1.0 / self.t_init + np.arange(self.cycles) * self.delta_it)


def sa_temp_at(schedule: SaTempSchedule, t: int) -> float:
    if not 0 <= t < schedule.cycles:
        raise InvalidInputError(f"cycle {t} out of range [0, {schedule.cycles})")
    return 1.0 / (1.0 / schedule.t_init + t * schedule.delta_it)
