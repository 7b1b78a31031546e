"""Ising models, spin states, energies and MAX-CUT values.

Convention used throughout::

    H(sigma) = -sum_i h_i sigma_i - sum_{i<j} J_ij sigma_i sigma_j

``J`` is kept as a symmetric CSR matrix with an empty diagonal, so row ``i``
is the adjacency list of node ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp

from .errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class Graph:
    """Weighted undirected graph with 0-based nodes and ``u < v`` edges.

    Edges live in three parallel arrays so that dense benchmarks (K2000 has
    about two million edges) stay compact.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"graph needs at least one node, got n={self.n}")
        u = np.asarray(self.u, dtype=np.int64)
        v = np.asarray(self.v, dtype=np.int64)
        w = np.asarray(self.w, dtype=np.float64)
        if not (u.shape == v.shape == w.shape) or u.ndim != 1:
            raise InvalidInputError("edge arrays must be 1-D and of equal length")
        if np.any(u == v):
            raise InvalidInputError(f"self-loop on node {int(u[u == v][0])}")
        if u.size and (u.min() < 0 or np.any(u >= v) or v.max() >= self.n):
            raise InvalidInputError(f"edges must satisfy 0 <= u < v < n={self.n}")
        keys = u * self.n + v
        if np.unique(keys).size != keys.size:
            raise InvalidInputError("duplicate edge")
        for name, arr in (("u", u), ("v", v), ("w", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        """Build a graph from ``(u, v, w)`` triples, normalizing to ``u < v``."""
        e = np.asarray(list(edges), dtype=np.float64).reshape(-1, 3)
        a = e[:, 0].astype(np.int64)
        b = e[:, 1].astype(np.int64)
        return cls(int(n), np.minimum(a, b), np.maximum(a, b), e[:, 2])

    @property
    def n_edges(self) -> int:
        return int(self.u.size)

    @property
    def edges(self) -> list:
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.u, self.v, self.w)]

    def arrays(self):
        return self.u, self.v, self.w

    def total_weight(self) -> float:
        return float(self.w.sum())

    def __eq__(self, other):
        """Equal up to edge ordering."""
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or self.n_edges != other.n_edges:
            return False
        a = np.lexsort((self.v, self.u))
        b = np.lexsort((other.v, other.u))
        return (
            np.array_equal(self.u[a], other.u[b])
            and np.array_equal(self.v[a], other.v[b])
            and np.array_equal(self.w[a], other.w[b])
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Bias vector ``h`` and symmetric sparse coupling matrix ``J``."""

    n: int
    h: np.ndarray
    J: sp.csr_matrix

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"model needs at least one spin, got n={self.n}")
        h = np.asarray(self.h, dtype=np.float64)
        if h.shape != (self.n,):
            raise InvalidInputError(f"h has shape {h.shape}, expected ({self.n},)")
        J = sp.csr_matrix(self.J, dtype=np.float64)
        if J.shape != (self.n, self.n):
            raise InvalidInputError(f"J has shape {J.shape}, expected ({self.n}, {self.n})")
        J.eliminate_zeros()
        J.sort_indices()
        if J.diagonal().any():
            raise InvalidInputError("J has self-couplings on the diagonal")
        if (J != J.T).nnz:
            raise InvalidInputError("J is not symmetric")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)

    @classmethod
    def from_couplings(cls, n: int, couplings: Iterable, h=None) -> "IsingModel":
        """Build a model from ``(i, j, J_ij)`` triples, each pair listed once."""
        rows, cols, vals = [], [], []
        for i, j, v in couplings:
            rows += [i, j]
            cols += [j, i]
            vals += [float(v), float(v)]
        J = sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=np.float64)
        if h is None:
            h = np.zeros(n)
        return cls(int(n), np.asarray(h, dtype=np.float64), J)

    def __eq__(self, other):
        if not isinstance(other, IsingModel):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.h, other.h)
            and (self.J != other.J).nnz == 0
        )

    __hash__ = None

    def couplings(self):
        """Yield ``(i, j, J_ij)`` for every stored pair with ``i < j``."""
        upper = sp.triu(self.J, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        for k in order:
            yield int(upper.row[k]), int(upper.col[k]), float(upper.data[k])

    @property
    def n_couplings(self) -> int:
        return self.J.nnz // 2

    def fields(self, sigma: np.ndarray) -> np.ndarray:
        """Local fields ``h + J @ sigma`` for every spin."""
        return self.h + self.J @ np.asarray(sigma, dtype=np.float64)


@dataclass
class SpinState:
    """Spins in {-1, +1} with an optional cached energy."""

    sigma: np.ndarray
    cached_energy: Optional[float] = field(default=None)

    def __post_init__(self):
        s = np.asarray(self.sigma)
        if s.ndim != 1:
            raise InvalidInputError("sigma must be one-dimensional")
        if not np.all((s == 1) | (s == -1)):
            raise InvalidInputError("every spin must be -1 or +1")
        self.sigma = s.astype(np.int8)

    def __len__(self):
        return self.sigma.shape[0]

    def flipped(self, i: int) -> "SpinState":
        s = self.sigma.copy()
        s[i] = -s[i]
        return SpinState(s)

    def __neg__(self):
        return SpinState(-self.sigma)


def _check_len(n, state):
    if len(state) != n:
        raise InvalidInputError(f"state has {len(state)} spins, model/graph has {n}")


def _check_index(n, i):
    if not (0 <= i < n):
        raise InvalidInputError(f"node index {i} out of range [0, {n})")


def energy(model: IsingModel, state: SpinState) -> float:
    _check_len(model.n, state)
    s = state.sigma.astype(np.float64)
    return float(-(model.h @ s) - 0.5 * (s @ (model.J @ s)))


def local_field(model: IsingModel, state: SpinState, i: int) -> float:
    """``h_i + sum_j J_ij sigma_j`` on the given snapshot."""
    _check_len(model.n, state)
    _check_index(model.n, i)
    J = model.J
    lo, hi = J.indptr[i], J.indptr[i + 1]
    return float(model.h[i] + J.data[lo:hi] @ state.sigma[J.indices[lo:hi]].astype(np.float64))


def delta_energy(model: IsingModel, state: SpinState, i: int) -> float:
    """Energy change from flipping spin ``i``; O(degree)."""
    return 2.0 * float(state.sigma[i]) * local_field(model, state, i)


def cut_value(graph: Graph, state: SpinState) -> float:
    """Total weight of edges whose endpoints carry opposite spins."""
    _check_len(graph.n, state)
    u, v, w = graph.arrays()
    s = state.sigma
    return float(w[s[u] != s[v]].sum())


def cut_energy_identity_check(graph: Graph, model: IsingModel, state: SpinState) -> float:
    """``cut - (W - H) / 2``; zero whenever ``model`` was built from ``graph``."""
    if graph.n != model.n:
        raise InvalidInputError(f"graph has {graph.n} nodes, model has {model.n}")
    return cut_value(graph, state) - (graph.total_weight() - energy(model, state)) / 2.0
