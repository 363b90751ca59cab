"""CDF 9/7 discrete wavelet transform by lifting.

Two predict and two update steps followed by a scaling step, with
whole-sample symmetric extension at the signal edges.  Coefficients are
stored in the usual pyramid layout: ``[approx_L | detail_L | ... | detail_1]``.

Within one lifting pass every interior sample is independent, so passes are
split across lanes; the two edge samples that need the mirrored neighbour
are handled serially.  Passes and levels run in order.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ._lanes import PARALLEL, SERIAL, Lanes, PhaseTimings, check_workers

ALPHA = -1.586134342059924
BETA = -0.052980118572961
GAMMA = 0.882911075530934
DELTA = 0.443506852043971
ZETA = 1.149604398860241


def _check(x, levels):
    if isinstance(levels, bool) or not isinstance(levels, int) or levels < 1:
        raise DomainError(f"levels must be an integer >= 1, got {levels!r}")
    a = np.array(x, dtype=np.float64).ravel()
    block = 1 << levels
    if a.size < block or a.size % block:
        raise DomainError(
            f"length {a.size} must be a positive multiple of 2**levels = {block}"
        )
    return a


def _predict(lanes, target, source, c):
    # target[i] += c * (source[i] + source[i+1]) for interior i
    def run(r):
        target[r.start:r.stop] += c * (source[r.start:r.stop] + source[r.start + 1:r.stop + 1])

    lanes.over_range(run, target.size - 1)


def _predict_edge(target, source, c):
    target[-1] += 2.0 * c * source[-1]


def _update(lanes, target, source, c):
    # target[i] += c * (source[i-1] + source[i]) for interior i >= 1
    def run(r):
        lo, hi = r.start + 1, r.stop + 1
        target[lo:hi] += c * (source[lo - 1:hi - 1] + source[lo:hi])

    lanes.over_range(run, target.size - 1)


def _update_edge(target, source, c):
    target[0] += 2.0 * c * source[0]


def _scale(lanes, v, factor, divide=False):
    def run(r):
        if divide:
            v[r.start:r.stop] /= factor
        else:
            v[r.start:r.stop] *= factor

    lanes.over_range(run, v.size)


def cdf97_forward(signal, levels: int = 1, workers: int = 1):
    """Multi-level forward transform; returns ``(coefficients, timings)``."""
    workers = check_workers(workers)
    timings = PhaseTimings()
    with timings.phase("check-length", SERIAL):
        y = _check(signal, levels)

    with Lanes(workers) as lanes:
        m = y.size
        for _ in range(levels):
            with timings.phase("fwd-level-loop", SERIAL):
                h = m // 2
                s = np.empty(h)
                d = np.empty(h)

            with timings.phase("fwd-split", PARALLEL):
                def split(r):
                    s[r.start:r.stop] = y[2 * r.start:2 * r.stop:2]
                    d[r.start:r.stop] = y[2 * r.start + 1:2 * r.stop:2]

                lanes.over_range(split, h)

            for label, fn, edge, target, source, c in (
                ("fwd-predict-1", _predict, _predict_edge, d, s, ALPHA),
                ("fwd-update-1", _update, _update_edge, s, d, BETA),
                ("fwd-predict-2", _predict, _predict_edge, d, s, GAMMA),
                ("fwd-update-2", _update, _update_edge, s, d, DELTA),
            ):
                with timings.phase(label, PARALLEL):
                    fn(lanes, target, source, c)
                with timings.phase("fwd-edge-extend", SERIAL):
                    edge(target, source, c)

            with timings.phase("fwd-scale-low", PARALLEL):
                _scale(lanes, s, ZETA)
            with timings.phase("fwd-scale-high", PARALLEL):
                _scale(lanes, d, ZETA, divide=True)

            with timings.phase("fwd-pack", SERIAL):
                y[:h] = s
                y[h:m] = d
                m = h

    return y, timings


def cdf97_inverse(coefficients, levels: int = 1, workers: int = 1):
    """Undo :func:`cdf97_forward`; returns ``(signal, timings)``."""
    workers = check_workers(workers)
    timings = PhaseTimings()
    with timings.phase("check-length", SERIAL):
        y = _check(coefficients, levels)

    with Lanes(workers) as lanes:
        for lev in range(levels, 0, -1):
            with timings.phase("inv-level-loop", SERIAL):
                m = y.size >> (lev - 1)
                h = m // 2

            with timings.phase("inv-unpack", SERIAL):
                s = y[:h].copy()
                d = y[h:m].copy()

            with timings.phase("inv-unscale-low", PARALLEL):
                _scale(lanes, s, ZETA, divide=True)
            with timings.phase("inv-unscale-high", PARALLEL):
                _scale(lanes, d, ZETA)

            for label, fn, edge, target, source, c in (
                ("inv-update-2", _update, _update_edge, s, d, -DELTA),
                ("inv-predict-2", _predict, _predict_edge, d, s, -GAMMA),
                ("inv-update-1", _update, _update_edge, s, d, -BETA),
                ("inv-predict-1", _predict, _predict_edge, d, s, -ALPHA),
            ):
                with timings.phase("inv-edge-extend", SERIAL):
                    edge(target, source, c)
                with timings.phase(label, PARALLEL):
                    fn(lanes, target, source, c)

            with timings.phase("inv-merge", PARALLEL):
                def merge(r):
                    y[2 * r.start:2 * r.stop:2] = s[r.start:r.stop]
                    y[2 * r.start + 1:2 * r.stop:2] = d[r.start:r.stop]

                lanes.over_range(merge, h)

    return y, timings
