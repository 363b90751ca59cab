"""Instrumented, worker-count-parameterized kernels.

Each kernel returns ``(result, PhaseTimings)``; the phase labels match the
stage labels of the built-in decomposition of the same name.
"""

from ._lanes import PARALLEL, SERIAL, Lanes, Phase, PhaseTimings, split_range
from .apriori import apriori
from .cdf97 import cdf97_forward, cdf97_inverse
from .fft import fft
from .knn import knn_classify
from .nbc import NaiveBayesModel, nbc_classify, nbc_train

__all__ = [
    "PARALLEL",
    "SERIAL",
    "Lanes",
    "Phase",
    "PhaseTimings",
    "split_range",
    "apriori",
    "cdf97_forward",
    "cdf97_inverse",
    "fft",
    "knn_classify",
    "NaiveBayesModel",
    "nbc_classify",
    "nbc_train",
]
