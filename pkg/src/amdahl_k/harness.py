"""Run instrumented workloads across worker counts and compare with the model.

Experiments run strictly one after another so timings are uncontended; only
the workload itself uses parallel lanes.  Records are plain data and can be
written to / read from newline-delimited JSON, and every downstream number
(:func:`empirical_f`, :func:`measured_speedup`, :func:`compare`) is a pure
function of the records.

Plan file format (``#`` comments, one ``key = value`` per line)::

    algorithm = fft
    input = synth=65536,7        # or: input = path=data/signal.csv
    workers = 1,2,4
    reps = 5
    warmup = 1
    # any other key is passed to the workload, e.g. min_support, k, levels,
    # queries, serial_fraction
"""

from __future__ import annotations

import json
import logging
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .algorithms import SERIAL, PhaseTimings
from .decomposition import Decomposition
from .errors import DomainError, ParseError, UnboundedLimitError
from .speedup import DEFAULT_P, amdahl_speedup, max_k
from .workloads import ALGORITHMS, InputSpec, build_workload

log = logging.getLogger(__name__)

# flag a run whose total is below this many timer ticks
COARSE_TIMER_FACTOR = 100


def timer_resolution_ns() -> float:
    return time.get_clock_info("perf_counter").resolution * 1e9


@dataclass
class ExperimentPlan:
    algorithm: str
    input: InputSpec
    worker_counts: list[int]
    repetitions: int = 3
    warmup_runs: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise DomainError(f"unknown algorithm {self.algorithm!r} (known: {', '.join(ALGORITHMS)})")
        if not self.worker_counts:
            raise DomainError("worker_counts must not be empty")
        if any(not isinstance(w, int) or w < 1 for w in self.worker_counts):
            raise DomainError(f"worker counts must be integers >= 1, got {self.worker_counts}")
        if 1 not in self.worker_counts:
            raise DomainError("baseline worker count 1 required")
        if len(set(self.worker_counts)) != len(self.worker_counts):
            raise DomainError(f"duplicate worker counts in {self.worker_counts}")
        if self.repetitions < 1:
            raise DomainError(f"reps must be >= 1, got {self.repetitions}")
        if self.warmup_runs < 0:
            raise DomainError(f"warmup must be >= 0, got {self.warmup_runs}")


_PLAN_KEYS = {"algorithm", "input", "workers", "reps", "warmup"}


def parse_plan(text: str, source=None) -> ExperimentPlan:
    values: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key or not value:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno, source)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno, source)
        values[key] = (lineno, value)

    for key in ("algorithm", "input", "workers"):
        if key not in values:
            raise ParseError(f"missing required key {key!r}", None, source)

    def integer(key, default):
        if key not in values:
            return default
        lineno, value = values[key]
        try:
            return int(value)
        except ValueError:
            raise ParseError(f"{key} must be an integer, got {value!r}", lineno, source) from None

    lineno, workers_text = values["workers"]
    try:
        workers = [int(w) for w in workers_text.split(",")]
    except ValueError:
        raise ParseError(f"workers must be a comma list of integers, got {workers_text!r}", lineno, source) from None

    lineno, input_text = values["input"]
    try:
        spec = InputSpec.parse(input_text)
    except DomainError as e:
        raise ParseError(str(e), lineno, source) from None

    options = {k: v for k, (_, v) in values.items() if k not in _PLAN_KEYS}
    return ExperimentPlan(
        algorithm=values["algorithm"][1],
        input=spec,
        worker_counts=workers,
        repetitions=integer("reps", 3),
        warmup_runs=integer("warmup", 1),
        options=options,
    )


def load_plan(path) -> ExperimentPlan:
    path = Path(path)
    return parse_plan(path.read_text(encoding="utf-8"), source=str(path))


@dataclass
class MeasurementRecord:
    algorithm: str
    workers: int
    repetition_index: int
    total_elapsed_ns: int
    phases: PhaseTimings
    coarse_timer: bool = False

    def to_json(self) -> str:
        return json.dumps({
            "algorithm": self.algorithm,
            "workers": self.workers,
            "repetition": self.repetition_index,
            "total_ns": self.total_elapsed_ns,
            "coarse_timer": self.coarse_timer,
            "phases": self.phases.to_list(),
        })

    @classmethod
    def from_json(cls, line: str) -> "MeasurementRecord":
        d = json.loads(line)
        return cls(
            algorithm=d["algorithm"],
            workers=int(d["workers"]),
            repetition_index=int(d["repetition"]),
            total_elapsed_ns=int(d["total_ns"]),
            phases=PhaseTimings.from_list(d["phases"]),
            coarse_timer=bool(d.get("coarse_timer", False)),
        )


def write_records(records: Iterable[MeasurementRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")


def read_records(path) -> list[MeasurementRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(MeasurementRecord.from_json(line))
            except (ValueError, KeyError, TypeError) as e:
                raise ParseError(f"bad record: {e}", lineno, str(path)) from None
    return out


def run_experiment(plan: ExperimentPlan, base_dir=None, workload=None) -> list[MeasurementRecord]:
    """Run ``plan``; returns ``repetitions * len(worker_counts)`` records (warmups dropped)."""
    if workload is None:
        workload = build_workload(plan.algorithm, plan.input, plan.options, base_dir)
    floor_ns = COARSE_TIMER_FACTOR * timer_resolution_ns()
    records = []
    for w in plan.worker_counts:
        for _ in range(plan.warmup_runs):
            workload.run(w)
        for rep in range(plan.repetitions):
            t0 = time.perf_counter_ns()
            _, phases = workload.run(w)
            total = time.perf_counter_ns() - t0
            coarse = total < floor_ns
            if coarse:
                log.warning("%s workers=%d rep=%d: %d ns is near timer resolution", plan.algorithm, w, rep, total)
            records.append(MeasurementRecord(plan.algorithm, w, rep, total, phases, coarse))
    return records


def _single_algorithm(records):
    names = {r.algorithm for r in records}
    if len(names) > 1:
        raise DomainError(f"records mix algorithms: {sorted(names)}")
    return names.pop()


def empirical_f(records: Iterable[MeasurementRecord]) -> float:
    """Median over one-worker runs of serial-phase time / total phase time."""
    records = list(records)
    if not records:
        raise DomainError("no records")
    _single_algorithm(records)
    if any(r.workers != 1 for r in records):
        raise DomainError("empirical_f needs one-worker records only")
    fracs = []
    for r in records:
        total = r.phases.total_ns()
        if total <= 0:
            raise DomainError(f"record {r.repetition_index} has no phase time")
        fracs.append(r.phases.total_ns(SERIAL) / total)
    return statistics.median(fracs)


def measured_speedup(records: Iterable[MeasurementRecord]) -> dict[int, float]:
    """``median t(1) / median t(w)`` for each worker count, ascending by ``w``."""
    by_w: dict[int, list[int]] = {}
    for r in records:
        by_w.setdefault(r.workers, []).append(r.total_elapsed_ns)
    if 1 not in by_w:
        raise DomainError("baseline worker count 1 required")
    base = statistics.median(by_w[1])
    out = {}
    for w in sorted(by_w):
        out[w] = 1.0 if w == 1 else base / statistics.median(by_w[w])
    return out


@dataclass(frozen=True)
class ComparisonRow:
    workers: int
    measured: float
    predicted_declared: float
    predicted_empirical: float

    @property
    def deviation(self) -> float:
        """Relative gap of the measurement against the declared-f prediction."""
        return self.measured / self.predicted_declared - 1.0


@dataclass
class ComparisonReport:
    algorithm: str
    declared_f: float
    empirical_f: float
    P_model: int
    max_k_declared: float | None  # None: unbounded (f = 0)
    max_k_empirical: float | None
    rows: list[ComparisonRow]

    @property
    def f_gap(self) -> float:
        return self.empirical_f - self.declared_f

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "declared_f": self.declared_f,
            "empirical_f": self.empirical_f,
            "f_gap": self.f_gap,
            "P_model": self.P_model,
            "max_k_declared": self.max_k_declared,
            "max_k_empirical": self.max_k_empirical,
            "rows": [
                {
                    "workers": r.workers,
                    "measured_speedup": r.measured,
                    "predicted_declared": r.predicted_declared,
                    "predicted_empirical": r.predicted_empirical,
                    "deviation": r.deviation,
                }
                for r in self.rows
            ],
        }

    @classmethod
    def from_dict(cls, d) -> "ComparisonReport":
        rows = [
            ComparisonRow(r["workers"], r["measured_speedup"], r["predicted_declared"], r["predicted_empirical"])
            for r in d["rows"]
        ]
        return cls(d["algorithm"], d["declared_f"], d["empirical_f"], d["P_model"],
                   d["max_k_declared"], d["max_k_empirical"], rows)


def _max_k_or_none(f, P):
    try:
        return max_k(f, P)
    except UnboundedLimitError:
        return None


def compare(records: Iterable[MeasurementRecord], declared: Decomposition, P_model: int = DEFAULT_P) -> ComparisonReport:
    """Pair measured speedups with Amdahl predictions from declared and measured f."""
    records = list(records)
    if not records:
        raise DomainError("no records")
    algorithm = _single_algorithm(records)
    f_decl = declared.serial_fraction
    f_emp = empirical_f([r for r in records if r.workers == 1])
    rows = [
        ComparisonRow(w, s, amdahl_speedup(f_decl, w), amdahl_speedup(f_emp, w))
        for w, s in measured_speedup(records).items()
    ]
    for r in rows:
        if not math.isfinite(r.deviation):
            raise DomainError(f"non-finite deviation at workers={r.workers}")
    return ComparisonReport(
        algorithm, f_decl, f_emp, P_model,
        _max_k_or_none(f_decl, P_model), _max_k_or_none(f_emp, P_model), rows,
    )
