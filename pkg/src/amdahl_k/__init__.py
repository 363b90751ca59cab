"""Amdahl-law specialization coefficient toolkit.

``speedup`` holds the closed-form model, ``decomposition`` turns stage
breakdowns into serial fractions, ``algorithms`` has the instrumented
kernels and ``harness`` measures them against the model.
"""

from .decomposition import (
    Decomposition,
    Stage,
    builtin,
    builtin_catalog,
    max_k_of,
    rank_by_max_k,
    serial_fraction,
)
from .errors import DomainError, ParseError, UnboundedLimitError
from .speedup import (
    SpeedupParams,
    amdahl_speedup,
    coefficient_k,
    f_from_max_k,
    max_k,
    specialized_speedup,
    speedup_curve,
)

__version__ = "0.1.0"
