"""Slow, obviously-correct reference computations for tests and exact mode."""
from __future__ import annotations

import numpy as np

from .hash_family import HashFamily
from .metric import WILDCARD, MetricSpace, as_symbols
from .one_mismatch import MismatchReport, Status


def naive_profile(text, pattern, ms: MetricSpace) -> np.ndarray:
    """``S[i] = sum_j d(t_{i+j}, p_j)`` by direct summation, in original units.

    Positions where either symbol is a wildcard contribute nothing.
    """
    text = as_symbols(text, ms.size)
    pattern = as_symbols(pattern, ms.size)
    n, m = text.size, pattern.size
    n_off = n - m + 1
    out = np.zeros(n_off)
    for j in range(m):
        p = pattern[j]
        if p == WILDCARD:
            continue
        window = text[j:j + n_off]
        live = window != WILDCARD
        out[live] += ms.matrix[window[live], p]
    return out * ms.scale


def mismatch_positions(text, pattern, offset: int) -> np.ndarray:
    """Pattern indices where both symbols are present and differ."""
    text = as_symbols(text)
    pattern = as_symbols(pattern)
    window = text[offset:offset + pattern.size]
    live = (window != WILDCARD) & (pattern != WILDCARD)
    return np.flatnonzero(live & (window != pattern))


def brute_force_mismatch(text, pattern) -> MismatchReport:
    """One-mismatch labels by counting differences at every offset."""
    text = as_symbols(text)
    pattern = as_symbols(pattern)
    n_off = text.size - pattern.size + 1
    status = np.empty(n_off, dtype=np.int8)
    location = np.full(n_off, -1, dtype=np.int64)
    for i in range(n_off):
        pos = mismatch_positions(text, pattern, i)
        if pos.size == 0:
            status[i] = Status.MATCH
        elif pos.size == 1:
            status[i] = Status.LOCATION
            location[i] = pos[0]
        else:
            status[i] = Status.MANY
    return MismatchReport(status, location)


def bucket_stats(text, pattern, ms: MetricSpace, offset: int, D: float):
    """Positions with distance in ``[D, 2D)`` at ``offset``, their count and mass.

    Distances are in the metric's current units.
    """
    text = as_symbols(text, ms.size)
    pattern = as_symbols(pattern, ms.size)
    window = text[offset:offset + pattern.size]
    live = (window != WILDCARD) & (pattern != WILDCARD)
    d = np.zeros(pattern.size)
    d[live] = ms.matrix[window[live], pattern[live]]
    members = np.flatnonzero((d >= D) & (d < 2 * D))
    return members, members.size, float(d[members].sum())


def separated_positions(table: np.ndarray, text, pattern, offset: int) -> np.ndarray:
    """Positions whose two symbols land in different buckets under ``table``."""
    text = as_symbols(text)
    pattern = as_symbols(pattern)
    window = text[offset:offset + pattern.size]
    live = (window != WILDCARD) & (pattern != WILDCARD)
    sep = np.zeros(pattern.size, dtype=bool)
    sep[live] = table[window[live]] != table[pattern[live]]
    return np.flatnonzero(sep)


def empirical_separation(fam: HashFamily, x: int, y: int, draws: int, rng) -> float:
    """Fraction of ``draws`` hash draws that put ``x`` and ``y`` in different buckets."""
    if draws < 1:
        raise ValueError("need at least one draw")
    tables = fam.sample_tables(rng, draws)
    return float(np.mean(tables[:, x] != tables[:, y]))
