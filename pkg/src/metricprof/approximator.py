"""(1 +- eps)-approximate distance profiles by bucketed sampling.

For every level ``D`` in ``top, top/2, ..., 1`` (``top`` is the dynamic range
rounded up to a power of two) and every keep probability ``q`` in
``1/2, 1/4, ...`` above ``1/m``, ``K`` independent sampling runs are made on the
text and pattern relabeled by a fresh hash draw at threshold ``D``. Per offset
the run counts give ``m0`` (matches) and the returned positions whose true
distance lies in ``[D, 2D)``. The ``q`` with the largest ``q * m0`` among
those with ``m0 >= e^-4 K`` is kept and the level contributes

    S_D = (1 - q) / (q * m0) * sum of the in-bucket returned distances.

The estimate is the sum over levels, rescaled to the metric's original units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from . import _kernels
from .errors import BudgetExceeded, DivisionGuard
from .hash_family import DEFAULT_C_PART, make_family
from .metric import MetricSpace, as_symbols, normalize
from .one_mismatch import one_mismatch_batch
from .streams import DEFAULT_SEED, stream

MATCH_FLOOR = math.exp(-4)
MIN_ITERATIONS = 55
DEFAULT_MAX_SAMPLES = 50_000_000
_HASH_STREAM = "hash"
_KEEP_STREAM = "keep"


@dataclass(frozen=True)
class ApproxParams:
    """Accuracy and reproducibility knobs.

    ``K = max(ceil(k_const * C * t / epsilon**2), 55)`` sampling runs are made
    per (level, q) pair, where ``C`` is the hash family's separation factor.
    """

    epsilon: float = 0.25
    t: float = 3.0
    k_const: float = 4.0
    master_seed: int = DEFAULT_SEED
    c_part: float = DEFAULT_C_PART
    max_samples: int = DEFAULT_MAX_SAMPLES
    threads: Optional[int] = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if not self.k_const > 0:
            raise ValueError("k_const must be positive")

    def iterations(self, factor: float) -> int:
        k = math.ceil(self.k_const * factor * self.t / self.epsilon**2)
        return max(k, MIN_ITERATIONS)


@dataclass(frozen=True)
class LevelEstimate:
    D: float
    chosen_q: Optional[float]
    m0: int
    m1: int
    s_d: float
    low_confidence: bool


@dataclass(eq=False)
class DistanceProfile:
    """Distance profile values in original metric units plus diagnostics.

    For approximate profiles the per-level arrays have shape
    ``(levels, offsets)``; ``chosen_q`` is NaN where no probability qualified.
    """

    values: np.ndarray
    mode: str
    scale: float = 1.0
    n: int = 0
    m: int = 0
    params: dict = field(default_factory=dict)
    levels: Optional[np.ndarray] = None
    q_values: Optional[np.ndarray] = None
    iterations: int = 0
    chosen_q: Optional[np.ndarray] = None
    m0: Optional[np.ndarray] = None
    m1: Optional[np.ndarray] = None
    s_d: Optional[np.ndarray] = None

    @property
    def low_confidence(self) -> np.ndarray:
        if self.chosen_q is None:
            return np.zeros(self.values.size, dtype=bool)
        return np.isnan(self.chosen_q).any(axis=0)

    @property
    def total_samples(self) -> int:
        if self.levels is None:
            return 0
        return len(self.levels) * len(self.q_values) * self.iterations

    def level_estimate(self, offset: int, level: int) -> LevelEstimate:
        q = self.chosen_q[level, offset]
        return LevelEstimate(
            D=float(self.levels[level]),
            chosen_q=None if np.isnan(q) else float(q),
            m0=int(self.m0[level, offset]),
            m1=int(self.m1[level, offset]),
            s_d=float(self.s_d[level, offset]),
            low_confidence=bool(np.isnan(q)),
        )

    def diagnostics(self) -> dict:
        if self.levels is None:
            return {}
        per_level = []
        for li, D in enumerate(self.levels.tolist()):
            chosen = self.chosen_q[li]
            qs, counts = np.unique(chosen[~np.isnan(chosen)], return_counts=True)
            per_level.append({
                "D": D,
                "low_confidence": int(np.isnan(chosen).sum()),
                "chosen_q": {repr(float(q)): int(c) for q, c in zip(qs, counts)},
                "mass": float(self.s_d[li].sum() * self.scale),
            })
        return {
            "iterations": self.iterations,
            "q_values": self.q_values.tolist(),
            "total_samples": self.total_samples,
            "levels": per_level,
        }

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "m": self.m,
            "offsets": int(self.values.size),
            "profile": self.values.tolist(),
            "scale": self.scale,
            "params": self.params,
            "diagnostics": self.diagnostics(),
            "low_confidence_offsets": np.flatnonzero(self.low_confidence).tolist(),
        }


def level_set(ms: MetricSpace) -> np.ndarray:
    """Thresholds ``top, top/2, ..., 1`` for a normalized metric."""
    top = int(ms.level_top)
    return np.array([float(top >> k) for k in range(top.bit_length())])


def probe_probabilities(m: int) -> np.ndarray:
    """``1/2, 1/4, ...`` while ``q > 1/m``; just ``[1/2]`` when that is empty."""
    qs = []
    q = 0.5
    while q > 1.0 / m:
        qs.append(q)
        q /= 2
    return np.array(qs or [0.5])


def choose_q(m0_by_q: np.ndarray, q_values: np.ndarray, K: int) -> np.ndarray:
    """Index of the chosen probability per offset, or -1 if none qualifies.

    Among rows with ``m0 >= e^-4 K`` the one maximizing ``q * m0`` wins; ties
    go to the larger ``q``. ``q_values`` must be in decreasing order.
    """
    m0_by_q = np.asarray(m0_by_q)
    score = np.where(m0_by_q >= MATCH_FLOOR * K, q_values[:, None] * m0_by_q, -np.inf)
    best = score.argmax(axis=0)
    best[np.isneginf(score.max(axis=0))] = -1
    return best


def estimate_bucket_mass(m0, q, mass):
    """``(1 - q) / (q * m0) * mass`` for the distances summed into ``mass``."""
    m0 = np.asarray(m0, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if np.any(m0 < 1):
        raise DivisionGuard("bucket mass needs at least one match")
    return (1.0 - q) / (q * m0) * np.asarray(mass, dtype=np.float64)


def approximate_profile(text, pattern, ms: MetricSpace, family: Optional[str] = None,
                        params: ApproxParams = ApproxParams()) -> DistanceProfile:
    """Approximate ``S[i] = sum_j d(t_{i+j}, p_j)`` for every offset.

    Parameters
    ----------
    text, pattern : int arrays of symbol ids (WILDCARD allowed)
    ms : MetricSpace
        Normalized internally if needed.
    family : {"grid", "partition"}, optional
        Hash family; defaults to grid for normed and partition for finite
        metrics.
    params : ApproxParams

    Raises
    ------
    BudgetExceeded
        If levels * probabilities * K exceeds ``params.max_samples``.
    """
    ms = normalize(ms)
    text = as_symbols(text, ms.size)
    pattern = as_symbols(pattern, ms.size)
    n, m = text.size, pattern.size
    if m == 0 or m > n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    fam = make_family(ms, family, c_part=params.c_part)
    K = params.iterations(fam.factor)
    levels = level_set(ms)
    qs = probe_probabilities(m)
    total = len(levels) * len(qs) * K
    if total > params.max_samples:
        raise BudgetExceeded(f"{total} sampling runs requested, cap is {params.max_samples}")

    n_off = n - m + 1
    chunk = max(1, min(K, (1 << 24) // n_off))
    dist = np.ascontiguousarray(ms.matrix)
    shape = (len(levels), n_off)
    chosen_q = np.full(shape, np.nan)
    m0_out = np.zeros(shape, dtype=np.int64)
    m1_out = np.zeros(shape, dtype=np.int64)
    s_d = np.zeros(shape)

    prev_threads = numba.get_num_threads()
    if params.threads is not None:
        numba.set_num_threads(max(1, min(params.threads, numba.config.NUMBA_NUM_THREADS)))
    try:
        for li, D in enumerate(levels):
            fam_d = fam.at(D)
            m0 = np.zeros((len(qs), n_off), dtype=np.int64)
            m1 = np.zeros((len(qs), n_off), dtype=np.int64)
            mass = np.zeros((len(qs), n_off))
            for qi, q in enumerate(qs):
                tables = fam_d.sample_tables(stream(params.master_seed, _HASH_STREAM, li, qi), K)
                keep = stream(params.master_seed, _KEEP_STREAM, li, qi).random((K, m)) < q
                for lo in range(0, K, chunk):
                    status, location = one_mismatch_batch(
                        text, pattern, tables[lo:lo + chunk], keep[lo:lo + chunk])
                    _kernels.bucket_tally(status, location, text, pattern, dist,
                                          D, 2 * D, m0[qi], m1[qi], mass[qi])
            pick = choose_q(m0, qs, K)
            ok = pick >= 0
            cols = np.flatnonzero(ok)
            rows = pick[ok]
            chosen_q[li, cols] = qs[rows]
            m0_out[li, cols] = m0[rows, cols]
            m1_out[li, cols] = m1[rows, cols]
            s_d[li, cols] = estimate_bucket_mass(m0[rows, cols], qs[rows], mass[rows, cols])
    finally:
        numba.set_num_threads(prev_threads)

    return DistanceProfile(
        values=s_d.sum(axis=0) * ms.scale,
        mode="approx",
        scale=ms.scale,
        n=n,
        m=m,
        params={
            "epsilon": params.epsilon,
            "t": params.t,
            "k_const": params.k_const,
            "seed": params.master_seed,
            "family": fam.kind,
            "C": fam.factor,
        },
        levels=levels,
        q_values=qs,
        iterations=K,
        chosen_q=chosen_q,
        m0=m0_out,
        m1=m1_out,
        s_d=s_d,
    )
