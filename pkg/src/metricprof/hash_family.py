"""Probabilistically separating hash families on an alphabet metric.

A family at threshold ``D`` relabels symbols into buckets such that

1. symbols at distance ``>= D`` always land in different buckets, and
2. symbols at distance ``d`` are separated with probability ``<= C * d / D``.

Two constructions are provided:

``grid``
    Normed alphabets. Randomly shifted axis-aligned cells of side
    ``D / dim**(1/p)``; any pair at L_p distance ``>= D`` differs by at least
    one cell side in some coordinate. ``C = dim``.

``partition``
    Finite metrics. Ball-growing decomposition with a random radius in
    ``[D/4, D/2)`` and a random center order; clusters have diameter
    ``< D``. ``C = c_part * ln(sigma + 1)`` with an empirically checked
    constant ``c_part``.

Bucket ids are renumbered densely per draw, in order of first appearance
over the symbol ids, starting at 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import WrongMetricKind
from .metric import FINITE, NORMED, WILDCARD, MetricSpace, as_symbols

GRID = "grid"
PARTITION = "partition"
DEFAULT_C_PART = 8.0

# keep per-chunk scratch arrays around 16M elements
_CHUNK_ELEMS = 1 << 24


@dataclass(frozen=True, eq=False)
class HashFunction:
    """One sampled relabeling; ``table[x]`` is the bucket (>= 1) of symbol ``x``."""

    table: np.ndarray
    threshold: float
    family: str

    def __call__(self, s):
        return apply_hash(self, s)


@dataclass(frozen=True, eq=False)
class HashFamily:
    metric: MetricSpace
    kind: str
    threshold: float = 1.0
    c_part: float = DEFAULT_C_PART

    @property
    def factor(self) -> float:
        return family_factor(self)

    def at(self, threshold: float) -> "HashFamily":
        return replace(self, threshold=float(threshold))

    def sample_tables(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """``count`` independent draws as a ``(count, sigma)`` table array."""
        if self.kind == GRID:
            return grid_tables(self.metric, self.threshold, rng, count)
        return partition_tables(self.metric, self.threshold, rng, count)

    def sample(self, rng: np.random.Generator) -> HashFunction:
        return HashFunction(self.sample_tables(rng, 1)[0], self.threshold, self.kind)


def make_family(ms: MetricSpace, kind: str | None = None, threshold: float = 1.0,
                c_part: float = DEFAULT_C_PART) -> HashFamily:
    """Pick the natural family for ``ms`` unless ``kind`` is given."""
    if kind is None:
        kind = GRID if ms.kind == NORMED else PARTITION
    if kind == GRID and ms.kind != NORMED:
        raise WrongMetricKind("grid hashing needs a normed alphabet")
    if kind == PARTITION and ms.kind != FINITE:
        raise WrongMetricKind("partition hashing needs a finite metric")
    if kind not in (GRID, PARTITION):
        raise ValueError(f"unknown hash family {kind!r}")
    return HashFamily(ms, kind, float(threshold), float(c_part))


def family_factor(f: HashFamily) -> float:
    """Separation factor C used in the iteration count."""
    if f.kind == GRID:
        return float(f.metric.dim)
    return f.c_part * math.log(f.metric.size + 1)


def _check_threshold(D: float) -> None:
    if not D >= 1:
        raise ValueError(f"threshold must be >= 1, got {D}")


def _canonical(rep: np.ndarray) -> np.ndarray:
    """Dense ids from representatives, where ``rep[k, x]`` is the smallest
    symbol sharing a bucket with ``x`` in draw ``k``."""
    sigma = rep.shape[1]
    first = rep == np.arange(sigma)
    ids = np.cumsum(first, axis=1)
    return np.take_along_axis(ids, rep, axis=1)


def grid_tables(ms: MetricSpace, D: float, rng: np.random.Generator, count: int) -> np.ndarray:
    if ms.kind != NORMED:
        raise WrongMetricKind("grid hashing needs a normed alphabet")
    _check_threshold(D)
    pts = ms.points / ms.scale
    sigma, dim = pts.shape
    cell = D if math.isinf(ms.p) else D / dim ** (1.0 / ms.p)
    shift = rng.random((count, dim))
    scaled = pts / cell
    out = np.empty((count, sigma), dtype=np.int64)
    step = max(1, _CHUNK_ELEMS // (sigma * sigma * dim))
    for lo in range(0, count, step):
        cells = np.floor(scaled[None, :, :] - shift[lo:lo + step, None, :])
        same = np.all(cells[:, :, None, :] == cells[:, None, :, :], axis=-1)
        rep = same.argmax(axis=2)
        out[lo:lo + step] = _canonical(rep)
    return out


def partition_tables(ms: MetricSpace, D: float, rng: np.random.Generator, count: int) -> np.ndarray:
    if ms.kind != FINITE:
        raise WrongMetricKind("partition hashing needs a finite metric")
    _check_threshold(D)
    sigma = ms.size
    radius = rng.uniform(D / 4, D / 2, count)
    order = rng.random((count, sigma)).argsort(axis=1)
    out = np.empty((count, sigma), dtype=np.int64)
    step = max(1, _CHUNK_ELEMS // (sigma * sigma))
    cols = np.arange(sigma)
    for lo in range(0, count, step):
        o = order[lo:lo + step]
        rows = np.arange(o.shape[0])[:, None]
        within = ms.matrix[o] <= radius[lo:lo + step, None, None]
        # every symbol is within radius of itself, so argmax finds a True
        center = np.take_along_axis(o, within.argmax(axis=1), axis=1)
        first = np.full(o.shape, sigma, dtype=np.int64)
        np.minimum.at(first, (np.broadcast_to(rows, o.shape), center),
                      np.broadcast_to(cols, o.shape))
        rep = np.take_along_axis(first, center, axis=1)
        out[lo:lo + step] = _canonical(rep)
    return out


def grid_hash_sample(ms: MetricSpace, D: float, rng: np.random.Generator) -> HashFunction:
    return HashFunction(grid_tables(ms, D, rng, 1)[0], float(D), GRID)


def partition_hash_sample(ms: MetricSpace, D: float, rng: np.random.Generator) -> HashFunction:
    return HashFunction(partition_tables(ms, D, rng, 1)[0], float(D), PARTITION)


def apply_hash(h: HashFunction, s) -> np.ndarray:
    """Relabel a symbol string; bucket ``b`` becomes symbol id ``b - 1``.

    Wildcards pass through unchanged.
    """
    s = as_symbols(s, h.table.size)
    out = np.full(s.shape, WILDCARD, dtype=np.int64)
    live = s != WILDCARD
    out[live] = h.table[s[live]] - 1
    return out
