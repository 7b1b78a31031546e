"""Benchmark graph parsing, Ising construction and the best-known registry.

G-set text format::

    n m
    u v w        (m lines, 1-based node indices; w defaults to +1)

Instance format for arbitrary ``h``/``J``::

    n
    B i b        (bias on node i)
    C i j v      (coupling between i and j)
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ParseError
from .ising import Graph, IsingModel


@dataclass(frozen=True)
class BenchmarkEntry:
    name: str
    n_nodes: int
    n_edges: int
    best_known: float
    structure: str  # random | toroidal | planar | full
    weight_set: str  # "+1" | "+1,-1"


_REGISTRY_ROWS = [
    ("G1", 800, 19176, 11624, "random", "+1"),
    ("G6", 800, 19176, 2178, "random", "+1,-1"),
    ("G11", 800, 1600, 564, "toroidal", "+1,-1"),
    ("G14", 800, 4694, 3064, "planar", "+1"),
    ("G18", 800, 4694, 992, "planar", "+1,-1"),
    ("G22", 2000, 19990, 13359, "random", "+1"),
    ("G34", 2000, 4000, 1384, "toroidal", "+1,-1"),
    ("G38", 2000, 11779, 7688, "planar", "+1"),
    ("G39", 2000, 11778, 2408, "planar", "+1,-1"),
    ("G47", 1000, 9990, 6657, "random", "+1"),
    ("G48", 3000, 6000, 6000, "toroidal", "+1,-1"),
    ("G54", 1000, 5916, 3852, "random", "+1"),
    ("G55", 5000, 12498, 10299, "random", "+1"),
    ("G56", 5000, 12498, 4017, "random", "+1,-1"),
    ("G58", 5000, 29570, 19293, "planar", "+1"),
    ("K2000", 2000, 1999000, 33337, "full", "+1,-1"),
]

REGISTRY = {row[0]: BenchmarkEntry(*row) for row in _REGISTRY_ROWS}


def best_known(name: str) -> float:
    try:
        return float(REGISTRY[name].best_known)
    except KeyError:
        raise LookupError(f"no best-known value registered for {name!r}") from None


def registry_entry(name: str) -> Optional[BenchmarkEntry]:
    return REGISTRY.get(name)


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _float(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad number {token!r}", lineno) from None


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if tokens:
            yield lineno, tokens


def parse_gset(text: str) -> Graph:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty graph file") from None
    if len(header) != 2:
        raise ParseError("header must be 'n m'", lineno)
    n, m = _ints(header, lineno)
    if n < 1 or m < 0:
        raise ParseError(f"invalid header n={n} m={m}", lineno)

    us, vs, ws, linenos = [], [], [], []
    for lineno, tokens in lines:
        if len(tokens) not in (2, 3):
            raise ParseError("edge line must be 'u v [w]'", lineno)
        u, v = _ints(tokens[:2], lineno)
        w = _float(tokens[2], lineno) if len(tokens) == 3 else 1.0
        for x in (u, v):
            if not 1 <= x <= n:
                raise ParseError(f"node index {x} out of range [1, {n}]", lineno)
        if u == v:
            raise ParseError(f"self-loop on node {u}", lineno)
        us.append(min(u, v) - 1)
        vs.append(max(u, v) - 1)
        ws.append(w)
        linenos.append(lineno)
    if len(us) != m:
        raise ParseError(f"header declares {m} edges, found {len(us)}")

    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    keys = u * n + v
    _, first = np.unique(keys, return_index=True)
    if first.size != keys.size:
        dup = np.setdiff1d(np.arange(keys.size), first)[0]
        raise ParseError(f"duplicate edge {u[dup] + 1} {v[dup] + 1}", linenos[dup])
    return Graph(n, u, v, np.asarray(ws, dtype=np.float64))


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def serialize_gset(graph: Graph) -> str:
    out = [f"{graph.n} {graph.n_edges}"]
    out += [f"{u + 1} {v + 1} {_fmt(w)}" for u, v, w in zip(graph.u, graph.v, graph.w)]
    return "\n".join(out) + "\n"


def build_ising(graph: Graph) -> IsingModel:
    """MAX-CUT encoding: ``h = 0`` and ``J_uv = -w_uv``."""
    u, v, w = graph.arrays()
    J = sp.csr_matrix(
        (np.concatenate([-w, -w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
        shape=(graph.n, graph.n),
    )
    return IsingModel(graph.n, np.zeros(graph.n), J)


def load_instance(text: str) -> IsingModel:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty instance file") from None
    if len(header) != 1:
        raise ParseError("header must be 'n'", lineno)
    (n,) = _ints(header, lineno)
    if n < 1:
        raise ParseError(f"invalid node count {n}", lineno)

    h = np.zeros(n)
    biased = set()
    couplings = {}
    for lineno, tokens in lines:
        kind = tokens[0]
        if kind == "B" and len(tokens) == 3:
            (i,) = _ints(tokens[1:2], lineno)
            if not 1 <= i <= n:
                raise ParseError(f"node index {i} out of range [1, {n}]", lineno)
            if i in biased:
                raise ParseError(f"duplicate bias for node {i}", lineno)
            biased.add(i)
            h[i - 1] = _float(tokens[2], lineno)
        elif kind == "C" and len(tokens) == 4:
            i, j = _ints(tokens[1:3], lineno)
            for x in (i, j):
                if not 1 <= x <= n:
                    raise ParseError(f"node index {x} out of range [1, {n}]", lineno)
            if i == j:
                raise ParseError(f"self-coupling on node {i}", lineno)
            key = (min(i, j) - 1, max(i, j) - 1)
            if key in couplings:
                raise ParseError(f"duplicate coupling {i} {j}", lineno)
            couplings[key] = _float(tokens[3], lineno)
        else:
            raise ParseError("expected 'B i b' or 'C i j v'", lineno)
    return IsingModel.from_couplings(n, ((i, j, v) for (i, j), v in couplings.items()), h=h)


def serialize_instance(model: IsingModel) -> str:
    out = [str(model.n)]
    out += [f"B {i + 1} {_fmt(b)}" for i, b in enumerate(model.h) if b != 0]
    out += [f"C {i + 1} {j + 1} {_fmt(v)}" for i, j, v in model.couplings()]
    return "\n".join(out) + "\n"


def sniff_format(text: str) -> str:
    """Return ``"gset"`` or ``"instance"`` from the header token count."""
    for _, tokens in _content_lines(text):
        return "gset" if len(tokens) == 2 else "instance"
    raise ParseError("empty file")


def load_problem(path):
    """Read a file in either format; returns ``(graph_or_None, model)``."""
    text = Path(path).read_text()
    if sniff_format(text) == "gset":
        graph = parse_gset(text)
        return graph, build_ising(graph)
    return None, load_instance(text)


BENCHMARK_DIR_ENV = "PBITSA_GSET_DIR"


def default_search_dirs() -> list:
    dirs = []
    if os.environ.get(BENCHMARK_DIR_ENV):
        dirs.append(Path(os.environ[BENCHMARK_DIR_ENV]))
    dirs.append(Path.cwd() / "data" / "gset")
    return dirs


def locate_benchmark(name: str, search_dirs: Optional[Sequence] = None) -> Optional[Path]:
    """Find a local copy of a benchmark file such as ``G1`` or ``g1.txt``."""
    dirs = default_search_dirs() if search_dirs is None else [Path(d) for d in search_dirs]
    candidates = [name, name.lower(), f"{name}.txt", f"{name.lower()}.txt"]
    for d in dirs:
        for c in candidates:
            p = d / c
            if p.is_file():
                return p
    return None
