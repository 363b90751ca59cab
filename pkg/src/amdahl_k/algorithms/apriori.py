"""Level-wise frequent itemset mining with lane-parallel counting.

The outer level loop is strictly sequential: level k needs the frequent
(k-1)-itemsets.  Within a level, candidate generation, transaction scanning,
subset selection and filtering are spread across worker lanes; per-lane
counts are merged in lane order so the result does not depend on the
number of workers.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from math import comb

from ..errors import DomainError
from ._lanes import PARALLEL, SERIAL, Lanes, PhaseTimings, check_workers


def _freeze(db, r):
    out = []
    for i in r:
        t = frozenset(db[i])
        if not t:
            raise DomainError(f"transaction {i} is empty")
        out.append(t)
    return out


def _join(prev, chunk, prev_set):
    """Candidates from ``prev[i]`` for i in chunk: shared-prefix join plus subset pruning."""
    out = []
    for i in chunk:
        a = prev[i]
        for j in range(i + 1, len(prev)):
            b = prev[j]
            if a[:-1] != b[:-1]:
                break  # prev is sorted, so the shared-prefix run has ended
            cand = a + (b[-1],)
            if all(cand[:m] + cand[m + 1:] in prev_set for m in range(len(cand) - 2)):
                out.append(cand)
    return out


def _select(projected, k, cands, cand_set):
    selected = []
    for t in projected:
        if len(t) < k:
            selected.append(())
        elif comb(len(t), k) <= len(cands):
            selected.append(tuple(c for c in combinations(t, k) if c in cand_set))
        else:
            ts = set(t)
            selected.append(tuple(c for c in cands if ts.issuperset(c)))
    return selected


def apriori(db, min_support: int, workers: int = 1):
    """Every itemset contained in at least ``min_support`` transactions.

    Returns ``(supports, timings)`` where ``supports`` maps each frequent
    itemset (a ``frozenset``) to its support count.  Items must be mutually
    orderable.
    """
    workers = check_workers(workers)
    if isinstance(min_support, bool) or not isinstance(min_support, int) or min_support < 1:
        raise DomainError(f"min_support must be an integer >= 1, got {min_support!r}")
    db = list(db)
    if not db:
        raise DomainError("transaction database is empty")
    n = len(db)
    timings = PhaseTimings()
    result: dict[frozenset, int] = {}

    with Lanes(workers) as lanes:
        with timings.phase("large-1-itemsets", PARALLEL):
            txs = [t for part in lanes.over_range(lambda r: _freeze(db, r), n) for t in part]
            partial = lanes.over_range(lambda r: Counter(x for i in r for x in txs[i]), n)
            counts = Counter()
            for c in partial:
                counts.update(c)
            level = sorted((item,) for item, c in counts.items() if c >= min_support)
            for c in level:
                result[frozenset(c)] = counts[c[0]]

        with timings.phase("init-k", SERIAL):
            k = 2

        while True:
            with timings.phase("while-loop", SERIAL):
                if not level:
                    break
                prev, prev_set = level, set(level)

            with timings.phase("gen-candidates", PARALLEL):
                parts = lanes.over_range(lambda r: _join(prev, r, prev_set), len(prev))
                cands = [c for part in parts for c in part]
                cand_set = set(cands)
                cand_items = {x for c in cands for x in c}

            with timings.phase("transaction-loop", PARALLEL):
                projected = lanes.over_range(
                    lambda r: [tuple(sorted(txs[i] & cand_items)) for i in r], n
                )

            with timings.phase("subset-select", PARALLEL):
                selected = lanes.map(lambda p: _select(p, k, cands, cand_set), projected)

            with timings.phase("candidate-loop", PARALLEL):
                local = lanes.map(lambda sel: Counter(c for ct in sel for c in ct), selected)

            with timings.phase("count-increment", SERIAL):
                count = Counter()
                for c in local:
                    count.update(c)

            with timings.phase("filter-frequent", PARALLEL):
                kept = lanes.over_range(
                    lambda r: [cands[i] for i in r if count[cands[i]] >= min_support], len(cands)
                )
                level = [c for part in kept for c in part]
                for c in level:
                    result[frozenset(c)] = count[c]

            with timings.phase("advance-k", SERIAL):
                k += 1

    return result, timings
