"""Iterative radix-2 decimation-in-time FFT.

Phases: ``twiddle`` builds the table of roots of unity, ``complex-multiply``
scales each butterfly's lower input by its twiddle factor, ``butterfly``
forms the sum/difference pairs, and ``other`` covers input conversion and
the bit-reversal permutation.  The stage loop (log2 N passes) is
sequential; the butterflies inside a pass are split across lanes.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from ._lanes import PARALLEL, SERIAL, Lanes, PhaseTimings, check_workers


def bit_reverse_permutation(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft(x, workers: int = 1):
    """Discrete Fourier transform ``X[k] = sum_n x[n] exp(-2 pi i k n / N)``.

    ``len(x)`` must be a power of two.  Returns ``(spectrum, timings)``.
    """
    workers = check_workers(workers)
    timings = PhaseTimings()

    with timings.phase("other", SERIAL):
        a = np.array(x, dtype=np.complex128).ravel()
        n = a.size
        if n < 1 or n & (n - 1):
            raise DomainError(f"input length must be a power of two, got {n}")
        a = a[bit_reverse_permutation(n)]

    if n == 1:
        return a, timings

    half_n = n // 2
    with Lanes(workers) as lanes:
        with timings.phase("twiddle", PARALLEL):
            table = np.empty(half_n, dtype=np.complex128)

            def roots(r):
                ang = (-2.0 * np.pi / n) * np.arange(r.start, r.stop)
                table[r.start:r.stop] = np.cos(ang) + 1j * np.sin(ang)

            lanes.over_range(roots, half_n)

        # butterfly b of a pass touches (top, top + half); lanes own disjoint b ranges
        b_all = np.arange(half_n, dtype=np.int64)
        t = np.empty(half_n, dtype=np.complex128)
        chunks = lanes.chunks(half_n)
        half = 1
        while half < n:
            stride = n // (2 * half)

            def twiddled(r, half=half, stride=stride):
                b = b_all[r.start:r.stop]
                j = b % half
                top = (b // half) * (2 * half) + j
                t[r.start:r.stop] = table[j * stride] * a[top + half]
                return top

            def combine(pair, half=half):
                r, top = pair
                u = a[top]
                v = t[r.start:r.stop]
                a[top] = u + v
                a[top + half] = u - v

            with timings.phase("complex-multiply", PARALLEL):
                tops = lanes.map(twiddled, chunks)
            with timings.phase("butterfly", PARALLEL):
                lanes.map(combine, zip(chunks, tops))
            half *= 2

    return a, timings

