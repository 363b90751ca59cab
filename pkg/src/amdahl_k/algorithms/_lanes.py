"""Worker lanes and per-phase wall-clock accounting."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

from ..errors import DomainError

SERIAL = "serial"
PARALLEL = "parallel"


def check_workers(workers) -> int:
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise DomainError(f"workers must be an integer >= 1, got {workers!r}")
    return workers


def split_range(n: int, parts: int) -> list[range]:
    """Cut ``range(n)`` into ``parts`` contiguous pieces whose sizes differ by at most one."""
    q, r = divmod(n, parts)
    out, start = [], 0
    for i in range(parts):
        stop = start + q + (1 if i < r else 0)
        out.append(range(start, stop))
        start = stop
    return out


@dataclass(frozen=True)
class Phase:
    label: str
    role: str
    elapsed_ns: int


class PhaseTimings:
    """Ordered wall-clock totals per labeled phase.

    Re-entering a label accumulates into its existing entry, so a phase that
    runs once per loop iteration reports one total.  Only the coordinating
    thread times phases; time spent inside lanes is attributed to the
    enclosing phase, which keeps the sum bounded by wall time.
    """

    def __init__(self, entries=()):
        self._order: list[str] = []
        self._role: dict[str, str] = {}
        self._ns: dict[str, int] = {}
        for e in entries:
            self.add(e.label, e.role, e.elapsed_ns)

    def add(self, label, role, elapsed_ns):
        if role not in (SERIAL, PARALLEL):
            raise ValueError(f"role must be 'serial' or 'parallel', got {role!r}")
        if elapsed_ns < 0:
            raise ValueError("elapsed time must be non-negative")
        if label not in self._ns:
            self._order.append(label)
            self._role[label] = role
            self._ns[label] = 0
        elif self._role[label] != role:
            raise ValueError(f"phase {label!r} recorded with conflicting roles")
        self._ns[label] += int(elapsed_ns)

    @contextmanager
    def phase(self, label, role):
        t0 = time.perf_counter_ns()
        try:
            yield
        finally:
            self.add(label, role, time.perf_counter_ns() - t0)

    def merge(self, other: "PhaseTimings") -> "PhaseTimings":
        out = PhaseTimings(self.entries)
        for e in other.entries:
            out.add(e.label, e.role, e.elapsed_ns)
        return out

    @property
    def entries(self) -> list[Phase]:
        return [Phase(lbl, self._role[lbl], self._ns[lbl]) for lbl in self._order]

    @property
    def labels(self) -> list[str]:
        return list(self._order)

    def __getitem__(self, label) -> int:
        return self._ns[label]

    def __contains__(self, label):
        return label in self._ns

    def __len__(self):
        return len(self._order)

    def total_ns(self, role=None) -> int:
        return sum(ns for lbl, ns in self._ns.items() if role is None or self._role[lbl] == role)

    def to_list(self):
        return [[e.label, e.role, e.elapsed_ns] for e in self.entries]

    @classmethod
    def from_list(cls, rows):
        return cls(Phase(str(lbl), str(role), int(ns)) for lbl, role, ns in rows)

    def __repr__(self):
        inner = ", ".join(f"{e.label}={e.elapsed_ns}ns" for e in self.entries)
        return f"PhaseTimings({inner})"


class Lanes:
    """Exactly ``workers`` parallel execution lanes backed by a thread pool.

    With one worker everything runs inline on the calling thread.
    """

    def __init__(self, workers: int):
        self.workers = check_workers(workers)
        self._pool = None

    def __enter__(self):
        if self.workers > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, *exc):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def map(self, fn, items):
        """Apply ``fn`` to each item; results keep the order of ``items``."""
        items = list(items)
        if self._pool is None or len(items) <= 1:
            return [fn(x) for x in items]
        return list(self._pool.map(fn, items))

    def chunks(self, n: int) -> list[range]:
        return split_range(n, self.workers)

    def over_range(self, fn, n: int):
        """Call ``fn(chunk)`` once per lane on a contiguous slice of ``range(n)``."""
        return self.map(fn, self.chunks(n))
