"""Counter-based random signals.

Every draw is a pure function of ``(master_seed, stream, a, b)``: a chain of
splitmix64 finalizers turns the four words into 64 random bits. Nothing is
stateful, so a synchronous sweep gets the same numbers no matter in which
order (or on which thread) its spins are evaluated, and trials can be
replayed or extended without re-running anything before them.

The mixing functions are numba-compiled so the classic SA kernel can draw
inside its inner loop; the same code is exposed to numpy as ufuncs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit, vectorize
from scipy.stats import poisson as poisson_dist

from .errors import ConfigError

_M64 = (1 << 64) - 1

# stream tags; each consumer of randomness gets its own
STREAM_SIGNAL = 1
STREAM_STALL = 2
STREAM_ACCEPT = 3
STREAM_ORDER = 4
STREAM_INIT = 5
STREAM_TRIAL = 6

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 1.0 / 9007199254740992.0  # 2**-53
_INV_53_MAX = 1.0 / 9007199254740991.0  # 1 / (2**53 - 1)


@njit(inline="always", cache=True)
def _fmix(x):
    x = x + _GOLDEN
    x = (x ^ (x >> _S30)) * _C1
    x = (x ^ (x >> _S27)) * _C2
    return x ^ (x >> _S31)


@njit(cache=True)
def key4(seed, stream, a, b):
    """64 random bits for the coordinate ``(seed, stream, a, b)``."""
    h = _fmix(np.uint64(seed))
    h = _fmix(h ^ np.uint64(stream))
    h = _fmix(h ^ np.uint64(a))
    return _fmix(h ^ np.uint64(b))


@njit(cache=True)
def unit_open(seed, stream, a, b):
    """Uniform double in [0, 1)."""
    return np.float64(key4(seed, stream, a, b) >> _S11) * _TWO_M53


@njit(cache=True)
def signed_closed(seed, stream, a, b):
    """Uniform double in the closed interval [-1, 1]."""
    return -1.0 + 2.0 * (np.float64(key4(seed, stream, a, b) >> _S11) * _INV_53_MAX)


@vectorize(["uint64(uint64, uint64, uint64, uint64)"], cache=True)
def key4_ufunc(seed, stream, a, b):
    return key4(seed, stream, a, b)


@vectorize(["float64(uint64, uint64, uint64, uint64)"], cache=True)
def unit_open_ufunc(seed, stream, a, b):
    return unit_open(seed, stream, a, b)


@vectorize(["float64(uint64, uint64, uint64, uint64)"], cache=True)
def signed_closed_ufunc(seed, stream, a, b):
    return signed_closed(seed, stream, a, b)


def as_seed(seed) -> np.uint64:
    return np.uint64(int(seed) & _M64)


def _u64(x):
    return np.asarray(x, dtype=np.uint64)


def derive_seed(master_seed: int, index: int) -> int:
    """Child seed for trial ``index``; stable when more trials are appended."""
    return int(key4_ufunc(as_seed(master_seed), np.uint64(STREAM_TRIAL), np.uint64(index), np.uint64(0)))


@lru_cache(maxsize=16)
def _poisson_cdf(lam: float) -> np.ndarray:
    kmax = int(np.ceil(lam + 40.0 * np.sqrt(lam) + 40.0))
    table = poisson_dist.cdf(np.arange(kmax + 1), lam)
    table.setflags(write=False)
    return table


def poisson_from_unit(u, lam: float):
    """Invert the Poisson CDF: smallest ``k`` with ``u < CDF(k)``."""
    cdf = _poisson_cdf(float(lam))
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)


@dataclass(frozen=True)
class SignalSource:
    """Seeded source of p-bit random signals ``r_i(t)`` and auxiliary draws.

    ``kind="uniform"`` gives ``r ~ U[-1, 1]``; ``kind="poisson"`` gives
    ``r = X/lam - 1`` with ``X ~ Poisson(lam)``.
    """

    master_seed: int = 0
    kind: str = "uniform"
    lam: float = 10.0

    def __post_init__(self):
        if self.kind not in ("uniform", "poisson"):
            raise ConfigError(f"unknown signal kind {self.kind!r}")
        if self.kind == "poisson" and not self.lam > 0:
            raise ConfigError(f"poisson lambda must be > 0, got {self.lam}")

    @property
    def seed64(self) -> np.uint64:
        return as_seed(self.master_seed)

    def signals(self, spins, cycle):
        """Vectorized ``signal`` over an array of spin indices."""
        seed, stream = self.seed64, np.uint64(STREAM_SIGNAL)
        if self.kind == "uniform":
            return signed_closed_ufunc(seed, stream, _u64(spins), _u64(cycle))
        u = unit_open_ufunc(seed, stream, _u64(spins), _u64(cycle))
        return poisson_from_unit(u, self.lam) / self.lam - 1.0

    def stall_draws(self, spins, cycle):
        """U[0, 1) draws deciding SpSA stalls; disjoint from the signal stream."""
        return unit_open_ufunc(self.seed64, np.uint64(STREAM_STALL), _u64(spins), _u64(cycle))

    def acceptance(self, cycle, attempt):
        return unit_open_ufunc(self.seed64, np.uint64(STREAM_ACCEPT), _u64(cycle), _u64(attempt))

    def initial_spins(self, n: int) -> np.ndarray:
        bits = key4_ufunc(self.seed64, np.uint64(STREAM_INIT), _u64(np.arange(n)), np.uint64(0))
        return np.where(bits >> np.uint64(63), 1, -1).astype(np.int8)


def signal(source: SignalSource, spin, cycle):
    """``r_spin(cycle)``; a pure function of (seed, spin, cycle)."""
    out = source.signals(spin, cycle)
    return float(out) if np.ndim(out) == 0 else out


def acceptance_uniform(source: SignalSource, cycle, attempt):
    """Metropolis acceptance draw in [0, 1) for attempt ``attempt`` of ``cycle``."""
    out = source.acceptance(cycle, attempt)
    return float(out) if np.ndim(out) == 0 else out
