"""Short pre-annealing sweeps that pick the TApSA window or the SpSA stall probability."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .engines import EngineConfig, run
from .errors import ConfigError
from .ising import Graph, IsingModel
from .rng import derive_seed
from .schedule import derive_schedule

DEFAULT_TUNING_CYCLES = 100
DEFAULT_TUNING_TRIALS = 5


@dataclass(frozen=True)
class TuneResult:
    algorithm: str
    best_param: float
    candidates: tuple
    scores: tuple  # mean final cut per candidate
    tuning_cycles: int
    tuning_trials: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


def _tune(algorithm, model, graph, candidates, gamma, delta, seed, tuning_cycles, tuning_trials, signal, lam):
    if not candidates:
        raise ConfigError("no candidates to tune over")
    if tuning_trials < 1:
        raise ConfigError(f"tuning_trials must be >= 1, got {tuning_trials}")
    if graph is None:
        raise ConfigError("tuning scores cuts and needs the graph")
    # end points from the full-length derivation, ramp compressed to the short run
    schedule = derive_schedule(model, gamma, delta, tuning_cycles)
    seeds = [derive_seed(seed, k) for k in range(tuning_trials)]
    scores = []
    for c in candidates:
        params = {"alpha": int(c)} if algorithm == "tapsa" else {"p_stall": float(c)}
        cuts = [
            run(model, graph, EngineConfig(
                algorithm=algorithm, cycles=tuning_cycles, gamma=gamma, delta=delta,
                signal=signal, lam=lam, seed=s, schedule=schedule, **params,
            )).final_cut
            for s in seeds
        ]
        scores.append(float(np.mean(cuts)))
    # ties resolve to the smallest parameter
    best = max(sorted(zip(candidates, scores), key=lambda cs: cs[0]), key=lambda cs: cs[1])[0]
    return TuneResult(algorithm, best, tuple(candidates), tuple(scores), tuning_cycles, tuning_trials, seed)


def tune_alpha(
    model: IsingModel,
    graph: Graph,
    candidates: Sequence[int],
    gamma: float = 0.1,
    delta: float = 10.0,
    seed: int = 0,
    tuning_cycles: int = DEFAULT_TUNING_CYCLES,
    tuning_trials: int = DEFAULT_TUNING_TRIALS,
    signal: str = "uniform",
    lam: float = 10.0,
) -> TuneResult:
    candidates = list(candidates)
    if any(int(a) != a or a < 1 for a in candidates):
        raise ConfigError(f"alpha candidates must be integers >= 1, got {candidates}")
    return _tune("tapsa", model, graph, [int(a) for a in candidates], gamma, delta, seed,
                 tuning_cycles, tuning_trials, signal, lam)


def tune_p(
    model: IsingModel,
    graph: Graph,
    candidates: Sequence[float],
    gamma: float = 0.1,
    delta: float = 10.0,
    seed: int = 0,
    tuning_cycles: int = DEFAULT_TUNING_CYCLES,
    tuning_trials: int = DEFAULT_TUNING_TRIALS,
    signal: str = "uniform",
    lam: float = 10.0,
) -> TuneResult:
    candidates = [float(p) for p in candidates]
    if any(not 0.0 <= p < 1.0 for p in candidates):
        raise ConfigError(f"p candidates must lie in [0, 1), got {candidates}")
    return _tune("spsa", model, graph, candidates, gamma, delta, seed,
                 tuning_cycles, tuning_trials, signal, lam)


def parse_grid(spec: str, integer: bool = False) -> list:
    """Parse ``"1,2,4"`` or ``"start:stop:step"`` (stop inclusive)."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range grid must be start:stop:step, got {spec!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ConfigError("grid step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        values = [round(start + k * step, 12) for k in range(count)]
    else:
        values = [float(x) for x in spec.split(",") if x.strip()]
    if not values:
        raise ConfigError(f"empty grid {spec!r}")
    return [int(v) for v in values] if integer else values

