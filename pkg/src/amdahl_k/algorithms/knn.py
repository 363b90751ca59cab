"""k-nearest-neighbour majority vote with lane-parallel distance scans."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ._lanes import PARALLEL, SERIAL, Lanes, PhaseTimings, check_workers


def _as_training(train):
    points = list(train)
    if not points:
        raise DomainError("training set is empty")
    X = np.asarray([np.asarray(p, dtype=float).ravel() for p, _ in points])
    if X.ndim != 2:
        raise DomainError("training vectors must share one dimension")
    labels = [lbl for _, lbl in points]
    return X, labels


def knn_classify(train, query, k: int, workers: int = 1):
    """Majority class among the ``k`` training points nearest to ``query``.

    ``train`` is a sequence of ``(vector, label)`` pairs.  Distances are
    Euclidean; equal distances order by training index, and a vote tie goes
    to the class that first appears in ``train``.
    Returns ``(label, timings)``.
    """
    workers = check_workers(workers)
    timings = PhaseTimings()

    with timings.phase("init-k", SERIAL):
        try:
            X, labels = _as_training(train)
        except ValueError:
            raise DomainError("training vectors must share one dimension") from None
        q = np.asarray(query, dtype=float).ravel()
        n, dim = X.shape
        if q.shape[0] != dim:
            raise DomainError(f"query has dimension {q.shape[0]}, training set has {dim}")
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1 or k % 2 == 0:
            raise DomainError(f"k must be a positive odd integer, got {k!r}")
        if k > n:
            raise DomainError(f"k={k} exceeds the {n} training points")
        k = int(k)

    with Lanes(workers) as lanes:
        with timings.phase("distance-loop", PARALLEL):
            chunks = lanes.chunks(n)
            blocks = lanes.map(lambda r: X[r.start:r.stop] - q, chunks)

        with timings.phase("euclidean-metric", PARALLEL):
            dists = lanes.map(lambda b: np.sqrt((b * b).sum(axis=1)), blocks)

        with timings.phase("sort", PARALLEL):
            # each lane keeps its own k best, then the shortlists are merged
            def best(pair):
                r, d = pair
                order = np.lexsort((np.arange(r.start, r.stop), d))[:k]
                return d[order], order + r.start

            short = lanes.map(best, zip(chunks, dists))
            d_all = np.concatenate([s[0] for s in short])
            i_all = np.concatenate([s[1] for s in short])
            nearest = i_all[np.lexsort((i_all, d_all))[:k]]

        with timings.phase("init-votes", SERIAL):
            # class index = order of first appearance in the training set
            index_of = {}
            for lbl in labels:
                index_of.setdefault(lbl, len(index_of))
            class_order = list(index_of)
            votes = np.zeros(len(class_order), dtype=np.int64)

        with timings.phase("neighbor-loop", PARALLEL):
            neighbor_chunks = [nearest[r.start:r.stop] for r in lanes.chunks(k)]

        with timings.phase("class-membership", PARALLEL):
            member = lanes.map(lambda idx: [index_of[labels[i]] for i in idx], neighbor_chunks)

        with timings.phase("set-vote", SERIAL):
            for m in member:
                np.add.at(votes, m, 1)

        with timings.phase("vote-branch", SERIAL):
            winner = class_order[int(np.argmax(votes))]

    return winner, timings

