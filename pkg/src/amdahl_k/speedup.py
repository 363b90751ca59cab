"""Amdahl's law and the specialization coefficient k.

Everything here is a pure function of its arguments and evaluates in
64-bit floating point.  ``f`` is the serial (non-parallelizable) fraction of
the work, ``P`` the processor count of the baseline system and ``dP`` the
number of processors added by specialization.

    S  = 1 / (f + (1 - f) / P)
    S' = 1 / (f + (1 - f) / (P + dP))
    k  = S' / S
    max(k) = lim_{dP -> inf} k = (f (P - 1) + 1) / (P f)
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError, UnboundedLimitError

DEFAULT_P = 2


def _check_fraction(f, name="f"):
    if isinstance(f, bool) or not isinstance(f, numbers.Real):
        raise DomainError(f"{name} must be a real number, got {f!r}")
    f = float(f)
    if not 0.0 <= f <= 1.0:  # also rejects NaN
        raise DomainError(f"{name} must lie in [0, 1], got {f!r}")
    return f


def _check_count(n, name, minimum):
    if isinstance(n, bool):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    if not isinstance(n, numbers.Integral):
        if isinstance(n, numbers.Real) and float(n).is_integer():
            n = int(n)
        else:
            raise DomainError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {n}")
    return n


@dataclass(frozen=True)
class SpeedupParams:
    """The (f, P, dP) triple, validated on construction."""

    f: float
    P: int = DEFAULT_P
    dP: int = 0

    def __post_init__(self):
        object.__setattr__(self, "f", _check_fraction(self.f))
        object.__setattr__(self, "P", _check_count(self.P, "P", 1))
        object.__setattr__(self, "dP", _check_count(self.dP, "dP", 0))

    @property
    def speedup(self) -> float:
        return amdahl_speedup(self.f, self.P)

    @property
    def specialized_speedup(self) -> float:
        return specialized_speedup(self.f, self.P, self.dP)

    @property
    def k(self) -> float:
        return coefficient_k(self.f, self.P, self.dP)


def amdahl_speedup(f: float, P: int) -> float:
    """Classic Amdahl speedup of a program with serial fraction ``f`` on ``P`` processors."""
    f = _check_fraction(f)
    P = _check_count(P, "P", 1)
    return 1.0 / (f + (1.0 - f) / P)


def specialized_speedup(f: float, P: int, dP: int) -> float:
    """Speedup on ``P + dP`` processors."""
    f = _check_fraction(f)
    P = _check_count(P, "P", 1)
    dP = _check_count(dP, "dP", 0)
    return 1.0 / (f + (1.0 - f) / (P + dP))


def coefficient_k(f: float, P: int, dP: int) -> float:
    """Ratio of the ``P + dP`` speedup to the ``P`` speedup.

    Equals 1 when ``dP == 0`` or ``f == 1`` and is strictly greater than 1
    for ``f < 1, dP > 0``.
    """
    f = _check_fraction(f)
    P = _check_count(P, "P", 1)
    dP = _check_count(dP, "dP", 0)
    if dP == 0 or f == 1.0:
        return 1.0
    if f == 0.0:
        return (P + dP) / P
    return (f + (1.0 - f) / P) / (f + (1.0 - f) / (P + dP))


def max_k(f: float, P: int = DEFAULT_P) -> float:
    """Limit of :func:`coefficient_k` as ``dP`` grows without bound.

    Raises :class:`UnboundedLimitError` for ``f == 0``: a fully parallel
    program has no finite ceiling.
    """
    f = _check_fraction(f)
    P = _check_count(P, "P", 1)
    if f == 0.0:
        raise UnboundedLimitError("max(k) unbounded for f=0")
    return (f * (P - 1) + 1.0) / (P * f)


def f_from_max_k(kmax: float, P: int = DEFAULT_P) -> float:
    """Serial fraction whose ``max_k(f, P)`` equals ``kmax``.

    ``kmax == 1`` maps back to ``f == 1``; anything below 1 has no preimage.
    """
    if isinstance(kmax, bool) or not isinstance(kmax, numbers.Real):
        raise DomainError(f"kmax must be a real number, got {kmax!r}")
    kmax = float(kmax)
    P = _check_count(P, "P", 2)
    if not math.isfinite(kmax):
        raise DomainError(f"kmax must be finite, got {kmax!r}")
    if kmax < 1.0:
        raise DomainError(f"kmax must be >= 1, got {kmax!r}")
    return 1.0 / (P * (kmax - 1.0) + 1.0)


class CurveRow(NamedTuple):
    dP: int
    speedup: float
    k: float


def speedup_curve(f: float, P: int, dP_values: Sequence[int]) -> list[CurveRow]:
    """Tabulate ``(dP, S', k)`` for each increment, in the order given."""
    if len(dP_values) == 0:
        raise DomainError("dP_values must not be empty")
    return [
        CurveRow(int(dP), specialized_speedup(f, P, dP), coefficient_k(f, P, dP))
        for dP in dP_values
    ]
