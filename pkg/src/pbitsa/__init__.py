"""p-bit simulated annealing (pSA, TApSA, SpSA) and a classic SA baseline for Ising problems."""

from .errors import ConfigError, DegenerateModelError, InvalidInputError, ParseError
from .ising import (
    Graph,
    IsingModel,
    SpinState,
    cut_energy_identity_check,
    cut_value,
    delta_energy,
    energy,
    local_field,
)
from .graphio import best_known, build_ising, load_instance, parse_gset

__version__ = "0.1.0"
