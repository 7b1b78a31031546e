"""Annealing engines: pSA, TApSA, SpSA (synchronous p-bits) and classic SA.

The p-bit engines update all spins at once from the previous snapshot::

    pSA    I_i = I0 * (h_i + sum_j J_ij s_j)
    TApSA  I_i = I0 * mean of the last alpha raw fields of spin i
    SpSA   I_i = previous I_i with probability p, otherwise the pSA input
    all    s_i = sgn(r_i + tanh(I_i)),  sgn(0) = +1

Classic SA does one sweep of n single-flip Metropolis attempts per cycle.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np
from numba import njit

from .errors import ConfigError, InvalidInputError
from .ising import Graph, IsingModel, SpinState, cut_value, energy
from .rng import STREAM_ACCEPT, STREAM_ORDER, SignalSource, key4, unit_open
from .schedule import AnnealSchedule, SaTempSchedule, derive_schedule, i0_at, sa_temp_at

ALGORITHMS = ("psa", "tapsa", "spsa", "sa")


def pbit_update(inputs, r):
    """``sgn(r + tanh(I))`` with ties going to +1; works on scalars and arrays."""
    out = np.where(np.asarray(r) + np.tanh(inputs) >= 0.0, 1, -1)
    return int(out) if out.ndim == 0 else out


def _pbit(inputs, r):
    return np.where(r + np.tanh(inputs) >= 0.0, 1.0, -1.0)


def _snapshot(model, state, fields):
    if len(state) != model.n:
        raise InvalidInputError(f"state has {len(state)} spins, model has {model.n}")
    return model.fields(state.sigma) if fields is None else fields


class TapsaBuffer:
    """Per-spin ring buffer of the last ``alpha`` raw fields."""

    def __init__(self, n: int, alpha: int):
        if alpha < 1:
            raise ConfigError(f"alpha must be >= 1, got {alpha}")
        self.alpha = alpha
        self.values = np.zeros((alpha, n))
        self.count = 0
        self.pos = 0

    def push(self, raw_fields: np.ndarray) -> None:
        self.values[self.pos] = raw_fields
        self.pos = (self.pos + 1) % self.alpha
        self.count = min(self.count + 1, self.alpha)

    def mean(self) -> np.ndarray:
        # warm-up averages only what is available instead of zero-padding
        return self.values[: self.count].sum(axis=0) / self.count


class SpsaInputState:
    """Previous p-bit inputs kept for SpSA stalls."""

    def __init__(self, n: int):
        self.n = n
        self.inputs: Optional[np.ndarray] = None
        self.last_stalled = np.zeros(n, dtype=bool)


def psa_inputs(fields, i0):
    return i0 * fields


def tapsa_inputs(fields, buffer: TapsaBuffer, i0):
    buffer.push(fields)
    return i0 * buffer.mean()


def spsa_inputs(fields, prev: SpsaInputState, p_stall, i0, source, cycle, spins=None, force_stall=None):
    fresh = i0 * fields
    if prev.inputs is None:
        # nothing to hold on the first cycle
        stalled = np.zeros(prev.n, dtype=bool)
    elif force_stall is not None:
        stalled = np.broadcast_to(np.asarray(force_stall, dtype=bool), (prev.n,)).copy()
    else:
        spins = np.arange(prev.n) if spins is None else spins
        stalled = source.stall_draws(spins, cycle) < p_stall
    inputs = np.where(stalled, prev.inputs, fresh) if stalled.any() else fresh
    prev.inputs = inputs
    prev.last_stalled = stalled
    return inputs


def psa_sweep(model: IsingModel, state: SpinState, i0: float, source: SignalSource, cycle: int, fields=None) -> SpinState:
    f = _snapshot(model, state, fields)
    r = source.signals(np.arange(model.n), cycle)
    return SpinState(_pbit(psa_inputs(f, i0), r))


def tapsa_sweep(model, state, buffer: TapsaBuffer, alpha: int, i0, source, cycle, fields=None) -> SpinState:
    if buffer.alpha != alpha:
        raise ConfigError(f"buffer holds {buffer.alpha} values, alpha is {alpha}")
    f = _snapshot(model, state, fields)
    r = source.signals(np.arange(model.n), cycle)
    return SpinState(_pbit(tapsa_inputs(f, buffer, i0), r))


def spsa_sweep(model, state, prev: SpsaInputState, p_stall, i0, source, cycle, fields=None, force_stall=None) -> SpinState:
    """SpSA sweep. ``force_stall`` overrides the random stall decision (test hook)."""
    if not 0.0 <= p_stall < 1.0:
        raise ConfigError(f"p_stall must be in [0, 1), got {p_stall}")
    f = _snapshot(model, state, fields)
    spins = np.arange(model.n)
    inputs = spsa_inputs(f, prev, p_stall, i0, source, cycle, spins, force_stall)
    r = source.signals(spins, cycle)
    return SpinState(_pbit(inputs, r))


@njit(cache=True)
def _sa_sweep_kernel(indptr, indices, data, h, sigma, temp, seed, cycle):
    n = sigma.size
    keys = np.empty(n, dtype=np.uint64)
    for i in range(n):
        keys[i] = key4(seed, STREAM_ORDER, cycle, i)
    order = np.argsort(keys)
    d_total = 0.0
    for k in range(n):
        i = order[k]
        f = h[i]
        for jj in range(indptr[i], indptr[i + 1]):
            f += data[jj] * sigma[indices[jj]]
        d = 2.0 * sigma[i] * f
        if d <= 0.0 or unit_open(seed, STREAM_ACCEPT, cycle, k) < np.exp(-d / temp):
            sigma[i] = -sigma[i]
            d_total += d
    return d_total


@njit(cache=True)
def _sa_run_kernel(indptr, indices, data, h, sigma, temps, seed, e0, energies, means):
    e = e0
    n = sigma.size
    for t in range(temps.size):
        e += _sa_sweep_kernel(indptr, indices, data, h, sigma, temps[t], seed, t)
        energies[t] = e
        means[t] = sigma.sum() / n


def classic_sa_sweep(model: IsingModel, state: SpinState, temp: float, source: SignalSource, cycle: int) -> SpinState:
    """n sequential Metropolis attempts in a shuffled order; ``state`` is updated in place."""
    if not temp > 0:
        raise InvalidInputError(f"temperature must be > 0, got {temp}")
    if len(state) != model.n:
        raise InvalidInputError(f"state has {len(state)} spins, model has {model.n}")
    J = model.J
    sigma = state.sigma.astype(np.float64)
    d = _sa_sweep_kernel(J.indptr, J.indices, J.data, model.h, sigma, float(temp), source.seed64, cycle)
    state.sigma[:] = sigma
    if state.cached_energy is not None:
        state.cached_energy += d
    return state


@dataclass(frozen=True)
class EngineConfig:
    algorithm: str = "psa"
    alpha: Optional[int] = None
    p_stall: Optional[float] = None
    cycles: int = 1000
    gamma: float = 0.1
    delta: float = 10.0
    signal: str = "uniform"
    lam: float = 10.0
    seed: int = 0
    schedule: Union[AnnealSchedule, SaTempSchedule, None] = None

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.cycles < 2:
            raise ConfigError(f"cycles must be >= 2, got {self.cycles}")
        if self.algorithm == "tapsa":
            if self.alpha is None:
                raise ConfigError("tapsa needs alpha")
            if int(self.alpha) != self.alpha or self.alpha < 1:
                raise ConfigError(f"alpha must be an integer >= 1, got {self.alpha}")
        elif self.alpha is not None:
            raise ConfigError(f"alpha is only meaningful for tapsa, not {self.algorithm}")
        if self.algorithm == "spsa":
            if self.p_stall is None:
                raise ConfigError("spsa needs p_stall")
            if not 0.0 <= self.p_stall < 1.0:
                raise ConfigError(f"p_stall must be in [0, 1), got {self.p_stall}")
        elif self.p_stall is not None:
            raise ConfigError(f"p_stall is only meaningful for spsa, not {self.algorithm}")
        if self.schedule is not None:
            want = SaTempSchedule if self.algorithm == "sa" else AnnealSchedule
            if not isinstance(self.schedule, want):
                raise ConfigError(f"{self.algorithm} needs a {want.__name__}")
            if self.schedule.cycles != self.cycles:
                raise ConfigError(f"schedule has {self.schedule.cycles} cycles, config has {self.cycles}")
        SignalSource(self.seed, self.signal, self.lam)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schedule"] = None if self.schedule is None else asdict(self.schedule)
        return d


@dataclass
class RunResult:
    final_state: SpinState
    final_energy: float
    final_cut: Optional[float]
    energy_trace: np.ndarray
    mean_spin_trace: np.ndarray
    i0_trace: np.ndarray  # temperature T for classic SA
    seed: int
    config: EngineConfig
    schedule: Union[AnnealSchedule, SaTempSchedule]

    @property
    def cycles(self) -> int:
        return int(self.energy_trace.size)


def _run_pbit(model, config, source, sigma, schedule):
    n = model.n
    cycles = config.cycles
    spins = np.arange(n)
    energies = np.empty(cycles)
    means = np.empty(cycles)
    i0s = np.empty(cycles)
    buffer = TapsaBuffer(n, int(config.alpha)) if config.algorithm == "tapsa" else None
    prev = SpsaInputState(n) if config.algorithm == "spsa" else None
    h = model.h
    fields = h + model.J @ sigma
    for t in range(cycles):
        i0 = i0_at(schedule, t)
        if config.algorithm == "tapsa":
            inputs = tapsa_inputs(fields, buffer, i0)
        elif config.algorithm == "spsa":
            inputs = spsa_inputs(fields, prev, config.p_stall, i0, source, t, spins)
        else:
            inputs = psa_inputs(fields, i0)
        sigma = _pbit(inputs, source.signals(spins, t))
        coupled = model.J @ sigma
        fields = h + coupled
        energies[t] = -(h @ sigma) - 0.5 * (sigma @ coupled)
        means[t] = sigma.mean()
        i0s[t] = i0
    return sigma, energies, means, i0s


def _run_sa(model, config, source, sigma, schedule):
    cycles = config.cycles
    temps = np.array([sa_temp_at(schedule, t) for t in range(cycles)])
    energies = np.empty(cycles)
    means = np.empty(cycles)
    e0 = energy(model, SpinState(sigma))
    J = model.J
    _sa_run_kernel(J.indptr, J.indices, J.data, model.h, sigma, temps, source.seed64, e0, energies, means)
    return sigma, energies, means, temps


def run(model: IsingModel, graph: Optional[Graph] = None, config: EngineConfig = EngineConfig()) -> RunResult:
    """Anneal from a seeded random state and record per-cycle traces."""
    config.validate()
    if graph is not None and graph.n != model.n:
        raise InvalidInputError(f"graph has {graph.n} nodes, model has {model.n}")
    source = SignalSource(config.seed, config.signal, config.lam)
    sigma = source.initial_spins(model.n).astype(np.float64)

    if config.algorithm == "sa":
        schedule = config.schedule or SaTempSchedule(config.cycles)
        sigma, energies, means, params = _run_sa(model, config, source, sigma, schedule)
    else:
        schedule = config.schedule or derive_schedule(model, config.gamma, config.delta, config.cycles)
        sigma, energies, means, params = _run_pbit(model, config, source, sigma, schedule)

    final = SpinState(sigma)
    final.cached_energy = float(energies[-1])
    return RunResult(
        final_state=final,
        final_energy=float(energies[-1]),
        final_cut=None if graph is None else cut_value(graph, final),
        energy_trace=energies,
        mean_spin_trace=means,
        i0_trace=params,
        seed=config.seed,
        config=config,
        schedule=schedule,
    )


def boltzmann_probabilities(model: IsingModel, temp: float):
    """Exact Boltzmann weights over all 2^n states (small models only).

    Returns ``(states, probs)`` with ``states`` as an ``(2^n, n)`` array of
    spins in lexicographic order (spin 0 most significant, -1 before +1).
    """
    n = model.n
    if n > 20:
        raise InvalidInputError("exact enumeration limited to n <= 20")
    codes = np.arange(2**n)
    states = np.where((codes[:, None] >> (n - 1 - np.arange(n))) & 1, 1, -1)
    e = np.array([energy(model, SpinState(s)) for s in states])
    w = np.exp(-(e - e.min()) / temp)
    return states, w / w.sum()


def state_code(sigma) -> int:
    """Index of a spin vector in the ordering used by ``boltzmann_probabilities``."""
    code = 0
    for s in np.asarray(sigma):
        code = (code << 1) | (1 if s > 0 else 0)
    return code

