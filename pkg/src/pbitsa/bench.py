"""Multi-trial benchmark harness, JSON results, CSV traces and table summaries."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .diagnostics import DEFAULT_WINDOW, detect_oscillation
from .engines import EngineConfig, RunResult, run
from .errors import ConfigError
from .graphio import REGISTRY, load_problem, registry_entry
from .ising import Graph, IsingModel
from .rng import derive_seed
from .schedule import SaTempSchedule, derive_schedule

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TRACE_HEADER = "cycle,i0,energy,mean_spin"


@dataclass
class TrialRecord:
    trial: int
    seed: int
    final_cut: Optional[float]
    final_energy: float
    oscillation: dict
    wall_time: float = 0.0


@dataclass
class BenchmarkStats:
    graph: str
    algorithm: str
    params: dict
    trials: int
    cycles: int
    seed: int
    min_cut: Optional[float]
    mean_cut: Optional[float]
    max_cut: Optional[float]
    best_known: Optional[float] = None
    normalized_min: Optional[float] = None
    normalized_mean: Optional[float] = None
    normalized_max: Optional[float] = None
    min_energy: float = 0.0
    mean_energy: float = 0.0
    max_energy: float = 0.0
    oscillating_trials: int = 0
    n_nodes: int = 0
    n_edges: Optional[int] = None
    config: dict = field(default_factory=dict)
    schedule: dict = field(default_factory=dict)
    trial_records: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def wall_times(self) -> list:
        return [t.wall_time for t in self.trial_records]

    def to_dict(self, include_timing: bool = False) -> dict:
        stats = {
            "min_cut": self.min_cut,
            "mean_cut": self.mean_cut,
            "max_cut": self.max_cut,
            "min_energy": self.min_energy,
            "mean_energy": self.mean_energy,
            "max_energy": self.max_energy,
        }
        if self.normalized_mean is not None:
            stats.update(
                best_known=self.best_known,
                normalized_min=self.normalized_min,
                normalized_mean=self.normalized_mean,
                normalized_max=self.normalized_max,
            )
        trials = []
        for t in self.trial_records:
            d = asdict(t)
            if not include_timing:
                d.pop("wall_time")
            trials.append(d)
        return {
            "schema_version": SCHEMA_VERSION,
            "graph": {"name": self.graph, "n_nodes": self.n_nodes, "n_edges": self.n_edges},
            "algorithm": self.algorithm,
            "params": self.params,
            "trials": self.trials,
            "cycles": self.cycles,
            "seed": self.seed,
            "config": self.config,
            "schedule": self.schedule,
            "stats": stats,
            "oscillation": {"oscillating_trials": self.oscillating_trials},
            "trial_results": trials,
            "warnings": self.warnings,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkStats":
        s = d["stats"]
        records = [TrialRecord(**{"wall_time": 0.0, **t}) for t in d.get("trial_results", [])]
        return cls(
            graph=d["graph"]["name"],
            algorithm=d["algorithm"],
            params=d["params"],
            trials=d["trials"],
            cycles=d["cycles"],
            seed=d["seed"],
            min_cut=s["min_cut"],
            mean_cut=s["mean_cut"],
            max_cut=s["max_cut"],
            best_known=s.get("best_known"),
            normalized_min=s.get("normalized_min"),
            normalized_mean=s.get("normalized_mean"),
            normalized_max=s.get("normalized_max"),
            min_energy=s["min_energy"],
            mean_energy=s["mean_energy"],
            max_energy=s["max_energy"],
            oscillating_trials=d["oscillation"]["oscillating_trials"],
            n_nodes=d["graph"]["n_nodes"],
            n_edges=d["graph"]["n_edges"],
            config=d.get("config", {}),
            schedule=d.get("schedule", {}),
            trial_records=records,
            warnings=d.get("warnings", []),
        )


def dumps_json(stats: BenchmarkStats, include_timing: bool = False) -> str:
    return json.dumps(stats.to_dict(include_timing), indent=2, sort_keys=True) + "\n"


def write_json(stats: BenchmarkStats, path, include_timing: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(stats, include_timing))
    return path


def emit_traces(result: RunResult, path) -> Path:
    """CSV of per-cycle ``i0`` (or ``T``), energy and mean spin, shortest round-trip floats."""
    path = Path(path)
    lines = [TRACE_HEADER]
    for t, (a, e, m) in enumerate(zip(result.i0_trace, result.energy_trace, result.mean_spin_trace)):
        lines.append(f"{t},{float(a)!r},{float(e)!r},{float(m)!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write traces to {path}: {exc}") from exc
    return path


def read_traces(path) -> dict:
    rows = Path(path).read_text().splitlines()
    if rows[0] != TRACE_HEADER:
        raise ValueError(f"unexpected trace header {rows[0]!r}")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]]).reshape(-1, 4)
    return {
        "cycle": data[:, 0].astype(int),
        "i0": data[:, 1],
        "energy": data[:, 2],
        "mean_spin": data[:, 3],
    }


# worker-process globals, set once per process by the pool initializer
_WORKER = {}


def _init_worker(model, graph):
    _WORKER["model"] = model
    _WORKER["graph"] = graph


def _run_trial(job):
    trial, config, window, trace_path = job
    start = time.perf_counter()
    result = run(_WORKER["model"], _WORKER["graph"], config)
    elapsed = time.perf_counter() - start
    report = detect_oscillation(result.mean_spin_trace, min(window, config.cycles)) if config.cycles >= 10 else None
    if trace_path is not None:
        emit_traces(result, trace_path)
    return TrialRecord(
        trial=trial,
        seed=config.seed,
        final_cut=result.final_cut,
        final_energy=result.final_energy,
        oscillation=report.to_dict() if report else {},
        wall_time=elapsed,
    )


def benchmark_name(path) -> str:
    """``data/G1.txt`` -> ``G1``; registry names match case-insensitively."""
    stem = Path(path).name
    if stem.lower().endswith(".txt"):
        stem = stem[:-4]
    for known in REGISTRY:
        if known.lower() == stem.lower():
            return known
    return stem


def run_benchmark(
    problem,
    algorithm: str,
    alpha: Optional[int] = None,
    p_stall: Optional[float] = None,
    trials: int = 100,
    cycles: int = 1000,
    seed: int = 0,
    gamma: float = 0.1,
    delta: float = 10.0,
    signal: str = "uniform",
    lam: float = 10.0,
    name: Optional[str] = None,
    trace_dir=None,
    workers: int = 1,
    window: int = DEFAULT_WINDOW,
) -> BenchmarkStats:
    """Run ``trials`` independent anneals and aggregate min/mean/max statistics.

    ``problem`` is a file path or a ``(graph, model)`` pair; the graph may be
    None for h/J instances, in which case only energies are reported.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if isinstance(problem, (str, Path)):
        graph, model = load_problem(problem)
        name = name or benchmark_name(problem)
    else:
        graph, model = problem
        name = name or "unnamed"
    graph: Optional[Graph]
    model: IsingModel

    base = EngineConfig(algorithm=algorithm, alpha=alpha, p_stall=p_stall, cycles=cycles,
                        gamma=gamma, delta=delta, signal=signal, lam=lam, seed=seed)
    base.validate()
    if algorithm == "sa":
        schedule = SaTempSchedule(cycles)
    else:
        schedule = derive_schedule(model, gamma, delta, cycles)
    warnings = []
    if algorithm != "sa" and schedule.zero_scale_fraction > 0.1:
        warnings.append(f"{schedule.zero_scale_fraction:.1%} of spins have zero coupling scale")

    jobs = []
    for k in range(trials):
        cfg = EngineConfig(algorithm=algorithm, alpha=alpha, p_stall=p_stall, cycles=cycles,
                           gamma=gamma, delta=delta, signal=signal, lam=lam,
                           seed=derive_seed(seed, k), schedule=schedule)
        trace = None if trace_dir is None else Path(trace_dir) / f"{name}_{algorithm}_trial{k:04d}.csv"
        jobs.append((k, cfg, window, trace))

    if workers > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(model, graph)) as pool:
            records = list(pool.map(_run_trial, jobs))
    else:
        _init_worker(model, graph)
        records = [_run_trial(j) for j in jobs]
    records.sort(key=lambda r: r.trial)

    energies = np.array([r.final_energy for r in records])
    params = {"alpha": alpha} if algorithm == "tapsa" else {"p_stall": p_stall} if algorithm == "spsa" else {}
    stats = BenchmarkStats(
        graph=name,
        algorithm=algorithm,
        params=params,
        trials=trials,
        cycles=cycles,
        seed=seed,
        min_cut=None,
        mean_cut=None,
        max_cut=None,
        min_energy=float(energies.min()),
        mean_energy=float(energies.mean()),
        max_energy=float(energies.max()),
        oscillating_trials=sum(bool(r.oscillation.get("detected")) for r in records),
        n_nodes=model.n,
        n_edges=None if graph is None else graph.n_edges,
        config={k: v for k, v in base.to_dict().items() if k not in ("seed", "schedule")},
        schedule=asdict(schedule),
        trial_records=records,
        warnings=warnings,
    )
    if graph is not None:
        cuts = np.array([r.final_cut for r in records])
        stats.min_cut = float(cuts.min())
        stats.mean_cut = float(cuts.mean())
        stats.max_cut = float(cuts.max())
        entry = registry_entry(name)
        if entry is None:
            msg = f"no best-known value for {name!r}; normalized statistics omitted"
            log.warning(msg)
            stats.warnings.append(msg)
        else:
            if (entry.n_nodes, entry.n_edges) != (graph.n, graph.n_edges):
                stats.warnings.append(
                    f"{name}: parsed {graph.n} nodes/{graph.n_edges} edges, "
                    f"registry lists {entry.n_nodes}/{entry.n_edges}"
                )
            bk = float(entry.best_known)
            stats.best_known = bk
            stats.normalized_min = stats.min_cut / bk
            stats.normalized_mean = stats.mean_cut / bk
            stats.normalized_max = stats.max_cut / bk
    return stats


@dataclass
class TableReport:
    algorithms: list
    rows: list  # (graph, {algorithm: (mean_cut, param, normalized_mean)})
    averages: dict  # algorithm -> average normalized mean over graphs that have one
    warnings: list

    def render(self) -> str:
        head = ["Graph"]
        for a in self.algorithms:
            head += [f"{a} mean cut", f"{a} param"]
        out = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for g, cells in self.rows:
            row = [g]
            for a in self.algorithms:
                if a in cells:
                    mean, param, _ = cells[a]
                    row += ["n/a" if mean is None else f"{mean:.2f}", "" if param is None else f"{param:g}"]
                else:
                    row += ["", ""]
            out.append("| " + " | ".join(row) + " |")
        avg = ["avg normalized"]
        for a in self.algorithms:
            v = self.averages.get(a)
            avg += ["" if v is None else f"{100 * v:.1f}%", ""]
        out.append("| " + " | ".join(avg) + " |")
        text = "\n".join(out) + "\n"
        if self.warnings:
            text += "\n" + "\n".join(f"warning: {w}" for w in self.warnings) + "\n"
        return text


_ALGO_ORDER = {"sa": 0, "psa": 1, "tapsa": 2, "spsa": 3}


def summarize_table(results: Sequence[BenchmarkStats]) -> TableReport:
    """Per-graph rows, per-algorithm columns, plus average normalized mean cut."""
    if not results:
        raise ValueError("nothing to summarize")
    registry_order = {name: k for k, name in enumerate(REGISTRY)}
    algorithms = sorted({r.algorithm for r in results}, key=lambda a: (_ALGO_ORDER.get(a, 9), a))
    graphs = sorted({r.graph for r in results}, key=lambda g: (registry_order.get(g, len(registry_order)), g))
    cells = {g: {} for g in graphs}
    norms = {a: [] for a in algorithms}
    warnings = []
    for r in results:
        param = r.params.get("alpha", r.params.get("p_stall")) if r.params else None
        if r.algorithm in cells[r.graph]:
            warnings.append(f"duplicate result for {r.graph}/{r.algorithm}; keeping the last one")
        cells[r.graph][r.algorithm] = (r.mean_cut, param, r.normalized_mean)
    for g in graphs:
        for a, (_, _, nm) in cells[g].items():
            if nm is not None:
                norms[a].append(nm)
    if len({r.trials for r in results}) > 1:
        warnings.append("results mix different trial counts")
    averages = {a: (float(np.mean(v)) if v else None) for a, v in norms.items()}
    return TableReport(algorithms, [(g, cells[g]) for g in graphs], averages, warnings)
