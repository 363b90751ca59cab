"""Benchmark workloads: input generation/loading plus a ``run(workers)`` callable.

Besides the five catalog algorithms there is ``sleep``, a controlled
workload whose serial fraction is known by construction: a serial sleep of
``f0 * T`` followed by ``(1 - f0) * T`` of sleep split evenly over the
worker lanes.  ``size`` is ``T`` in milliseconds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import decomposition
from .algorithms import (
    PARALLEL,
    SERIAL,
    Lanes,
    PhaseTimings,
    apriori,
    cdf97_forward,
    cdf97_inverse,
    fft,
    knn_classify,
    nbc_classify,
    nbc_train,
)
from .algorithms import readers
from .decomposition import Decomposition, Stage
from .errors import DomainError

ALGORITHMS = ("apriori", "knn", "cdf97", "fft", "nbc", "sleep")


@dataclass(frozen=True)
class InputSpec:
    """Either a file path or synthetic-generator parameters."""

    path: str | None = None
    size: int | None = None
    seed: int = 0

    def __post_init__(self):
        if (self.path is None) == (self.size is None):
            raise DomainError("input needs exactly one of path=... or synth=<size>,<seed>")
        if self.size is not None and self.size < 1:
            raise DomainError(f"synthetic size must be >= 1, got {self.size}")

    @classmethod
    def parse(cls, text: str) -> "InputSpec":
        key, eq, value = text.strip().partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not value:
            raise DomainError(f"input must be path=<file> or synth=<size>,<seed>, got {text!r}")
        if key == "path":
            return cls(path=value)
        if key == "synth":
            parts = [p.strip() for p in value.split(",")]
            if len(parts) not in (1, 2):
                raise DomainError(f"synth takes <size>[,<seed>], got {value!r}")
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise DomainError(f"synth size/seed must be integers, got {value!r}") from None
            return cls(size=nums[0], seed=nums[1] if len(nums) == 2 else 0)
        raise DomainError(f"unknown input kind {key!r} (use path or synth)")

    def __str__(self):
        return f"path={self.path}" if self.path is not None else f"synth={self.size},{self.seed}"


@dataclass
class Workload:
    algorithm: str
    declared: Decomposition
    run: Callable[[int], tuple[object, PhaseTimings]]


def _path(spec, base_dir):
    p = Path(spec.path)
    if base_dir is not None and not p.is_absolute():
        p = Path(base_dir) / p
    return p


def _int_option(options, key, default):
    raw = options.get(key, default)
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise DomainError(f"option {key} must be an integer, got {raw!r}") from None


# -- synthetic generators -------------------------------------------------

def synth_transactions(size, seed, n_items=16):
    rng = np.random.default_rng(seed)
    items = [f"i{j:02d}" for j in range(n_items)]
    patterns = [rng.choice(n_items, size=int(rng.integers(2, 5)), replace=False) for _ in range(4)]
    db = []
    for _ in range(size):
        t = set(np.flatnonzero(rng.random(n_items) < 0.12).tolist())
        for p in patterns:
            if rng.random() < 0.35:
                t.update(p.tolist())
        if not t:
            t.add(int(rng.integers(n_items)))
        db.append([items[j] for j in sorted(t)])
    return db


def synth_points(size, seed, dim=8, n_classes=3):
    rng = np.random.default_rng(seed)
    centers = rng.normal(scale=4.0, size=(n_classes, dim))
    labels = rng.integers(n_classes, size=size)
    X = centers[labels] + rng.normal(size=(size, dim))
    train = [(tuple(x), f"c{lbl}") for x, lbl in zip(X.tolist(), labels.tolist())]
    query = tuple(rng.normal(scale=4.0, size=dim).tolist())
    return train, query


def synth_categorical(size, seed, n_features=6, n_values=4, n_classes=3):
    rng = np.random.default_rng(seed)
    # class-dependent value distributions
    probs = rng.dirichlet(np.ones(n_values), size=(n_classes, n_features))
    labels = rng.integers(n_classes, size=size)
    rows = []
    for lbl in labels.tolist():
        x = tuple(f"v{rng.choice(n_values, p=probs[lbl, j])}" for j in range(n_features))
        rows.append((x, f"c{lbl}"))
    return rows


def synth_signal(size, seed):
    return np.random.default_rng(seed).normal(size=size)


def synth_complex(size, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=size) + 1j * rng.normal(size=size)


# -- workload builders ----------------------------------------------------

def sleep_decomposition(f0: float) -> Decomposition:
    stages = []
    if f0 > 0:
        stages.append(Stage("serial", f0, 0.0))
    if f0 < 1:
        stages.append(Stage("parallel", 1.0 - f0, 1.0))
    return Decomposition("sleep", tuple(stages))


def sleep_workload(total_ms: float, f0: float) -> Workload:
    if not 0.0 <= f0 <= 1.0:
        raise DomainError(f"serial_fraction must lie in [0, 1], got {f0}")
    serial_s = f0 * total_ms / 1000.0
    parallel_s = (1.0 - f0) * total_ms / 1000.0

    def run(workers):
        timings = PhaseTimings()
        with timings.phase("serial", SERIAL):
            time.sleep(serial_s)
        with timings.phase("parallel", PARALLEL):
            with Lanes(workers) as lanes:
                lanes.map(time.sleep, [parallel_s / workers] * workers)
        return None, timings

    return Workload("sleep", sleep_decomposition(f0), run)


def build_workload(algorithm: str, spec: InputSpec, options=None, base_dir=None) -> Workload:
    """Load or generate the input for ``algorithm`` and wrap one instrumented run."""
    options = dict(options or {})
    if algorithm not in ALGORITHMS:
        raise DomainError(f"unknown algorithm {algorithm!r} (known: {', '.join(ALGORITHMS)})")

    if algorithm == "sleep":
        if spec.size is None:
            raise DomainError("the sleep workload only takes synth=<milliseconds>,<seed>")
        try:
            f0 = float(options.get("serial_fraction", 0.4))
        except ValueError:
            raise DomainError("option serial_fraction must be a number") from None
        return sleep_workload(spec.size, f0)

    declared = decomposition.builtin(algorithm)

    if algorithm == "apriori":
        if spec.path is not None:
            db = readers.read_transactions(_path(spec, base_dir))
        else:
            db = synth_transactions(spec.size, spec.seed)
        min_support = _int_option(options, "min_support", max(1, len(db) // 10))

        def run(workers):
            return apriori(db, min_support, workers)

    elif algorithm == "knn":
        if spec.path is not None:
            rows = readers.read_labeled_points(_path(spec, base_dir))
            if len(rows) < 2:
                raise DomainError("knn input needs at least two rows (training points + query)")
            train, query = rows[:-1], rows[-1][0]
        else:
            train, query = synth_points(spec.size, spec.seed)
        k = _int_option(options, "k", min(7, len(train) if len(train) % 2 else len(train) - 1))

        def run(workers):
            return knn_classify(train, query, k, workers)

    elif algorithm == "cdf97":
        if spec.path is not None:
            signal = readers.read_signal(_path(spec, base_dir))
        else:
            signal = synth_signal(spec.size, spec.seed)
        levels = _int_option(options, "levels", 3)

        def run(workers):
            coeffs, t_fwd = cdf97_forward(signal, levels, workers)
            out, t_inv = cdf97_inverse(coeffs, levels, workers)
            return out, t_fwd.merge(t_inv)

    elif algorithm == "fft":
        if spec.path is not None:
            x = readers.read_signal(_path(spec, base_dir), complex_values=True)
        else:
            x = synth_complex(spec.size, spec.seed)

        def run(workers):
            return fft(x, workers)

    else:  # nbc
        if spec.path is not None:
            rows = readers.read_categorical(_path(spec, base_dir))
        else:
            rows = synth_categorical(spec.size, spec.seed)
        queries = [x for x, _ in rows[: _int_option(options, "queries", 200)]]

        def run(workers):
            model, timings = nbc_train(rows, workers)
            labels = []
            for q in queries:
                label, t = nbc_classify(model, q, workers)
                labels.append(label)
                timings = timings.merge(t)
            return labels, timings

    return Workload(algorithm, declared, run)
