"""Stage decompositions and the serial fraction they imply.

A decomposition is an ordered list of stages, each with a relative weight
(share of total work) and the fraction of that stage that can run in
parallel.  The serial fraction is the weight-averaged non-parallel share.

Text format, UTF-8, ``#`` starts a comment::

    name = apriori
    large-1-itemsets | 1 | 1
    init-k           | 1 | 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import DomainError, ParseError
from .speedup import DEFAULT_P, max_k


@dataclass(frozen=True)
class Stage:
    label: str
    weight: float
    parallel_fraction: float

    def __post_init__(self):
        if not self.label or "|" in self.label or "#" in self.label:
            raise DomainError(f"invalid stage label {self.label!r}")
        w = float(self.weight)
        if not (math.isfinite(w) and w > 0):
            raise DomainError(f"stage {self.label!r}: weight must be > 0, got {self.weight!r}")
        pf = float(self.parallel_fraction)
        if not 0.0 <= pf <= 1.0:
            raise DomainError(
                f"stage {self.label!r}: parallel_fraction must lie in [0, 1], "
                f"got {self.parallel_fraction!r}"
            )
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "parallel_fraction", pf)

    @property
    def role(self) -> str:
        return "serial" if self.parallel_fraction == 0.0 else "parallel"


@dataclass(frozen=True)
class Decomposition:
    name: str
    stages: tuple[Stage, ...]
    note: str = ""

    def __post_init__(self):
        if not self.name or not self.name.strip() == self.name or " " in self.name:
            raise DomainError(f"invalid decomposition name {self.name!r}")
        stages = tuple(self.stages)
        if not stages:
            raise DomainError(f"decomposition {self.name!r} has no stages")
        object.__setattr__(self, "stages", stages)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.stages]

    def role_of(self, label: str) -> str:
        for s in self.stages:
            if s.label == label:
                return s.role
        raise KeyError(label)

    @property
    def serial_fraction(self) -> float:
        return serial_fraction(self)


def serial_fraction(d: Decomposition) -> float:
    """Weighted share of non-parallelizable work, in [0, 1]."""
    if not d.stages:
        raise DomainError("empty stage list")
    total = math.fsum(s.weight for s in d.stages)
    if not total > 0:
        raise DomainError("stage weights must be positive")
    # the all-serial / all-parallel cases come out exactly 1 and 0 below
    serial = math.fsum(s.weight * (1.0 - s.parallel_fraction) for s in d.stages)
    return min(1.0, max(0.0, serial / total))


def max_k_of(d: Decomposition, P: int = DEFAULT_P) -> float:
    return max_k(serial_fraction(d), P)


class Ranked(NamedTuple):
    name: str
    f: float
    max_k: float


def rank_by_max_k(catalog: Iterable[Decomposition], P: int = DEFAULT_P) -> list[Ranked]:
    """Order decompositions by descending max(k); ties by ascending name."""
    rows = [Ranked(d.name, serial_fraction(d), max_k_of(d, P)) for d in catalog]
    if not rows:
        raise DomainError("catalog is empty")
    return sorted(rows, key=lambda r: (-r.max_k, r.name))


# -- built-in catalog -----------------------------------------------------

def _equal(name, stages, note=""):
    return Decomposition(name, tuple(Stage(lbl, 1.0, pf) for lbl, pf in stages), note)


APRIORI = _equal("apriori", [
    ("large-1-itemsets", 1),
    ("init-k", 0),
    ("while-loop", 0),
    ("gen-candidates", 1),
    ("transaction-loop", 1),
    ("subset-select", 1),
    ("candidate-loop", 1),
    ("count-increment", 0),
    ("filter-frequent", 1),
    ("advance-k", 0),
])

KNN = _equal("knn", [
    ("init-k", 0),
    ("distance-loop", 1),
    ("euclidean-metric", 1),
    ("sort", 1),
    ("init-votes", 0),
    ("neighbor-loop", 1),
    ("class-membership", 1),
    ("set-vote", 0),
    ("vote-branch", 0),
])

# 14 separable / 21 total is the published count; the labels name the steps
# of this package's lifting implementation (forward + inverse) so that
# instrumented runs line up with the catalog.
CDF97 = _equal("cdf97", [
    ("check-length", 0),
    ("fwd-level-loop", 0),
    ("fwd-split", 1),
    ("fwd-predict-1", 1),
    ("fwd-update-1", 1),
    ("fwd-predict-2", 1),
    ("fwd-update-2", 1),
    ("fwd-edge-extend", 0),
    ("fwd-scale-low", 1),
    ("fwd-scale-high", 1),
    ("fwd-pack", 0),
    ("inv-level-loop", 0),
    ("inv-unpack", 0),
    ("inv-unscale-low", 1),
    ("inv-unscale-high", 1),
    ("inv-edge-extend", 0),
    ("inv-update-2", 1),
    ("inv-predict-2", 1),
    ("inv-update-1", 1),
    ("inv-predict-1", 1),
    ("inv-merge", 1),
], note="14 of 21 stages separable; stage labels follow this package's lifting code")

# Profiled shares of run time.  The 34.6% outside the three profiled
# sections is assumed serial ("other"); only two of the butterfly's three
# nested loops parallelize.
FFT = Decomposition("fft", (
    Stage("twiddle", 25.4, 1.0),
    Stage("butterfly", 21.8, 2.0 / 3.0),
    Stage("complex-multiply", 18.2, 1.0),
    Stage("other", 34.6, 0.0),
), note="unprofiled 34.6% of run time assumed serial")

NBC = _equal("nbc", [
    ("load-data", 0),
    ("partition", 0),
    ("count-classes", 1),
    ("count-features", 1),
    ("merge-counts", 0),
    ("compute-likelihoods", 1),
    ("table-lookup", 0),
    ("score-classes", 1),
    ("table-write", 0),
], note="9 operations, 4 parallel; labels are generic")

_BUILTIN = (APRIORI, KNN, CDF97, FFT, NBC)


def builtin_catalog() -> list[Decomposition]:
    return list(_BUILTIN)


def builtin(name: str) -> Decomposition:
    for d in _BUILTIN:
        if d.name == name:
            return d
    known = ", ".join(d.name for d in _BUILTIN)
    raise KeyError(f"unknown built-in decomposition {name!r} (known: {known})")


# -- text format ----------------------------------------------------------

def _strip_comment(line):
    i = line.find("#")
    return (line if i < 0 else line[:i]).strip()


def parse_decomposition(text: str, source=None) -> Decomposition:
    name = None
    stages = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if name is None:
            key, eq, value = line.partition("=")
            if not eq or key.strip() != "name" or not value.strip():
                raise ParseError("expected 'name = <identifier>'", lineno, source)
            name = value.strip()
            if " " in name or "|" in name:
                raise ParseError(f"invalid name {name!r}", lineno, source)
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3:
            raise ParseError(
                f"expected '<label> | <weight> | <parallel_fraction>', got {line!r}", lineno, source
            )
        label, w, pf = parts
        if not label:
            raise ParseError("empty stage label", lineno, source)
        if label in seen:
            raise ParseError(f"duplicate stage label {label!r}", lineno, source)
        try:
            weight = float(w)
            frac = float(pf)
        except ValueError:
            raise ParseError(f"non-numeric weight or fraction in {line!r}", lineno, source) from None
        try:
            stages.append(Stage(label, weight, frac))
        except DomainError as e:
            raise ParseError(str(e), lineno, source) from None
        seen.add(label)
    if name is None:
        raise ParseError("missing 'name = <identifier>' line", None, source)
    if not stages:
        raise ParseError(f"decomposition {name!r} has no stages", None, source)
    return Decomposition(name, tuple(stages))


def load_decomposition(path) -> Decomposition:
    path = Path(path)
    return parse_decomposition(path.read_text(encoding="utf-8"), source=str(path))


def format_decomposition(d: Decomposition) -> str:
    width = max(len(s.label) for s in d.stages)
    lines = [f"name = {d.name}"]
    if d.note:
        lines.insert(0, f"# {d.note}")
    for s in d.stages:
        lines.append(f"{s.label:<{width}} | {s.weight!r} | {s.parallel_fraction!r}")
    return "\n".join(lines) + "\n"


def save_decomposition(d: Decomposition, path) -> None:
    Path(path).write_text(format_decomposition(d), encoding="utf-8")
