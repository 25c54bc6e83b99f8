"""Exact and approximate pattern-to-text distance profiles under an alphabet metric.

The profile of a pattern ``P`` (length m) against a text ``T`` (length n) is
``S[i] = sum_j d(t_{i+j}, p_j)`` for every offset ``i = 0 .. n-m``.
"""
from .approximator import ApproxParams, DistanceProfile, approximate_profile, choose_q
from .convolution import correlate, exact_profile_per_letter
from .errors import (
    AsymmetricMetric,
    BudgetExceeded,
    DegenerateAlphabet,
    MetricError,
    MetricProfError,
    NonzeroDiagonal,
    OverflowRisk,
    TriangleViolation,
    WildcardDistance,
    WrongMetricKind,
    ZeroOffDiagonal,
)
from .hash_family import HashFamily, HashFunction, apply_hash, make_family
from .io import load_metric
from .metric import WILDCARD, MetricSpace, dist, from_points, hamming, normalize, validate
from .one_mismatch import MismatchReport, Status, encode, mismatch_sums, one_mismatch
from .oracle import naive_profile
from .sampler import sample, sample_uniform_mismatch, subsample_pattern

__version__ = "0.1.0"
