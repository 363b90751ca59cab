"""Categorical naive Bayes with add-one smoothing and a memo table.

Training counts classes and (class, feature, value) triples per lane and
merges the lane tables in order.  Classification first consults the
model's global table of previously classified samples; on a miss the
per-class log scores are computed across lanes, the winner is written back
to the table, and later identical samples are answered from it.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field

from ..errors import DomainError
from ._lanes import PARALLEL, SERIAL, Lanes, PhaseTimings, check_workers

# relative gap below which two log scores count as tied
TIE_TOLERANCE = 1e-12


@dataclass
class NaiveBayesModel:
    classes: list
    n_features: int
    class_counts: dict
    feature_counts: dict  # (class, feature, value) -> count
    feature_cardinality: list[int]
    log_prior: dict = field(default_factory=dict)
    log_likelihood: dict = field(default_factory=dict)  # (class, feature, value) -> log p
    log_unseen: dict = field(default_factory=dict)  # (class, feature) -> log p of an unseen value
    memo: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def log_score(self, c, sample) -> float:
        total = self.log_prior[c]
        for j, v in enumerate(sample):
            total += self.log_likelihood.get((c, j, v), self.log_unseen[(c, j)])
        return total

    def lookup(self, key):
        with self._lock:
            return self.memo.get(key)

    def remember(self, key, label):
        # first writer wins, so a cached label never changes
        with self._lock:
            return self.memo.setdefault(key, label)


def nbc_train(train, workers: int = 1):
    """Fit class priors and per-feature conditional counts.

    ``train`` is a sequence of ``(features, label)`` pairs with categorical
    (hashable) feature values.  Returns ``(model, timings)``.
    """
    workers = check_workers(workers)
    timings = PhaseTimings()

    with timings.phase("load-data", SERIAL):
        rows = [(tuple(x), y) for x, y in train]
        if not rows:
            raise DomainError("training set is empty")
        dim = len(rows[0][0])
        for i, (x, _) in enumerate(rows):
            if len(x) != dim:
                raise DomainError(f"row {i} has {len(x)} features, expected {dim}")

    with Lanes(workers) as lanes:
        with timings.phase("partition", SERIAL):
            parts = [rows[r.start:r.stop] for r in lanes.chunks(len(rows))]

        with timings.phase("count-classes", PARALLEL):
            class_parts = lanes.map(lambda part: Counter(y for _, y in part), parts)

        with timings.phase("count-features", PARALLEL):
            feat_parts = lanes.map(
                lambda part: Counter((y, j, v) for x, y in part for j, v in enumerate(x)), parts
            )

        with timings.phase("merge-counts", SERIAL):
            classes = list(dict.fromkeys(y for _, y in rows))
            class_counts = Counter()
            for c in class_parts:
                class_counts.update(c)
            feature_counts = Counter()
            for c in feat_parts:
                feature_counts.update(c)
            values = [set() for _ in range(dim)]
            for _, j, v in feature_counts:
                values[j].add(v)
            model = NaiveBayesModel(
                classes=classes,
                n_features=dim,
                class_counts=dict(class_counts),
                feature_counts=dict(feature_counts),
                feature_cardinality=[len(s) for s in values],
            )

        with timings.phase("compute-likelihoods", PARALLEL):
            n = len(rows)

            def tables(cls_range):
                prior, unseen = {}, {}
                for ci in cls_range:
                    c = classes[ci]
                    nc = class_counts[c]
                    prior[c] = math.log(nc / n)
                    for j in range(dim):
                        unseen[(c, j)] = -math.log(nc + model.feature_cardinality[j])
                return prior, unseen

            for prior, unseen in lanes.over_range(tables, len(classes)):
                model.log_prior.update(prior)
                model.log_unseen.update(unseen)

            def likelihoods(keys):
                out = {}
                for key in keys:
                    c, j, _ = key
                    denom = class_counts[c] + model.feature_cardinality[j]
                    out[key] = math.log((feature_counts[key] + 1) / denom)
                return out

            keys = list(feature_counts)
            for part in lanes.map(likelihoods, [keys[r.start:r.stop] for r in lanes.chunks(len(keys))]):
                model.log_likelihood.update(part)

    return model, timings


def nbc_classify(model: NaiveBayesModel, sample, workers: int = 1):
    """Most probable class for ``sample``; returns ``(label, timings)``.

    A repeat of an already classified sample is answered from the model's
    memo table, in which case only the ``table-lookup`` phase is recorded.
    Ties go to the class seen first in training.
    """
    workers = check_workers(workers)
    timings = PhaseTimings()
    key = tuple(sample)
    if len(key) != model.n_features:
        raise DomainError(f"sample has {len(key)} features, model expects {model.n_features}")

    with timings.phase("table-lookup", SERIAL):
        cached = model.lookup(key)
    if cached is not None:
        return cached, timings

    with timings.phase("score-classes", PARALLEL):
        with Lanes(workers) as lanes:
            parts = lanes.over_range(
                lambda r: [model.log_score(model.classes[i], key) for i in r], len(model.classes)
            )
        scores = [s for part in parts for s in part]
        best = max(scores)
        slack = TIE_TOLERANCE * max(1.0, abs(best))
        winner = model.classes[next(i for i, s in enumerate(scores) if s >= best - slack)]

    with timings.phase("table-write", SERIAL):
        label = model.remember(key, winner)
    return label, timings
