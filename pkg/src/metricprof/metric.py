"""Alphabet metrics: validation, normalization and distance lookup.

A :class:`MetricSpace` holds the full ``sigma x sigma`` distance matrix in
its current units together with the divisor (``scale``) that has been applied
to the original distances. Normed alphabets additionally keep the original
point coordinates, which the grid hash needs.

Symbol strings are plain integer numpy arrays; :data:`WILDCARD` marks a
don't-care position.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AsymmetricMetric,
    DegenerateAlphabet,
    NonzeroDiagonal,
    TriangleViolation,
    WildcardDistance,
    ZeroOffDiagonal,
)

WILDCARD = -1

FINITE = "finite"
NORMED = "normed"


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """A finite alphabet with a metric.

    Attributes
    ----------
    kind : {"finite", "normed"}
    matrix : ndarray, shape (sigma, sigma)
        Pairwise distances in current units (original units divided by
        ``scale``).
    points : ndarray, shape (sigma, dim), optional
        Original coordinates for the normed kind.
    p : float
        Norm exponent for the normed kind, ``inf`` allowed.
    scale : float
        Divisor already applied to the original distances; 1 for a metric
        that has not been normalized.
    symbols : tuple of str, optional
        Token for each symbol id.
    """

    kind: str
    matrix: np.ndarray
    points: Optional[np.ndarray] = None
    p: float = 2.0
    scale: float = 1.0
    symbols: Optional[tuple] = None
    _extent: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.matrix.setflags(write=False)
        if self.points is not None:
            self.points.setflags(write=False)
        off = self.matrix[~np.eye(self.size, dtype=bool)]
        if off.size:
            extent = (float(off.min()), float(off.max()))
        else:
            extent = (math.nan, math.nan)
        object.__setattr__(self, "_extent", extent)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return 0 if self.points is None else self.points.shape[1]

    @property
    def min_distance(self) -> float:
        return self._extent[0]

    @property
    def max_distance(self) -> float:
        """Largest distance in current units (``b_d`` once normalized)."""
        return self._extent[1]

    @property
    def b_d(self) -> float:
        """Dynamic range: ratio of the largest to the smallest nonzero distance."""
        lo, hi = self._extent
        return hi / lo

    @property
    def level_top(self) -> float:
        """``b_d`` rounded up to a power of two (at least 1)."""
        return float(next_power_of_two(self.b_d))

    @property
    def is_normalized(self) -> bool:
        return self.min_distance == 1.0

    def symbol_index(self) -> dict:
        if self.symbols is None:
            raise ValueError("metric carries no symbol names")
        return {s: i for i, s in enumerate(self.symbols)}


def next_power_of_two(x: float) -> int:
    """Smallest power of two that is ``>= x``, for ``x > 0``; at least 1."""
    if x <= 1:
        return 1
    mantissa, exponent = math.frexp(x)
    # frexp gives x = mantissa * 2**exponent with mantissa in [0.5, 1)
    return 1 << (exponent - 1) if mantissa == 0.5 else 1 << exponent


def validate(raw, *, check_triangle: bool = True, symbols: Optional[Sequence[str]] = None,
             rtol: float = 1e-12) -> MetricSpace:
    """Check the metric axioms on a square matrix and wrap it.

    Parameters
    ----------
    raw : array_like, shape (sigma, sigma)
        Nonnegative finite distances.
    check_triangle : bool
        Run the O(sigma^3) triangle-inequality scan. Skip only for trusted
        inputs.
    symbols : sequence of str, optional
    rtol : float
        Slack, relative to the largest entry, allowed in the triangle check
        to absorb rounding in the detour sums.

    Raises
    ------
    AsymmetricMetric, NonzeroDiagonal, ZeroOffDiagonal, TriangleViolation
    """
    m = np.array(raw, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"metric matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise ValueError("metric entries must be finite and nonnegative")
    if symbols is not None and len(symbols) != m.shape[0]:
        raise ValueError("symbol list length does not match matrix size")

    bad = np.argwhere(m != m.T)
    if bad.size:
        x, y = bad[0]
        raise AsymmetricMetric(f"d({x},{y}) = {m[x, y]} but d({y},{x}) = {m[y, x]}")
    diag = np.flatnonzero(np.diag(m))
    if diag.size:
        x = diag[0]
        raise NonzeroDiagonal(f"d({x},{x}) = {m[x, x]}")
    zero = np.argwhere((m == 0) & ~np.eye(m.shape[0], dtype=bool))
    if zero.size:
        x, y = zero[0]
        raise ZeroOffDiagonal(f"d({x},{y}) = 0 for distinct symbols")
    if check_triangle:
        _check_triangle(m, rtol)
    return MetricSpace(FINITE, m, symbols=None if symbols is None else tuple(symbols))


def _check_triangle(m: np.ndarray, rtol: float) -> None:
    slack = rtol * (m.max() if m.size else 0.0)
    for y in range(m.shape[0]):
        detour = m[:, y, None] + m[None, y, :]
        bad = np.argwhere(m > detour + slack)
        if bad.size:
            x, z = bad[0]
            raise TriangleViolation(int(x), y, int(z), m[x, z], detour[x, z])


def from_points(points, p: float = 2.0, symbols: Optional[Sequence[str]] = None) -> MetricSpace:
    """Alphabet of points in R^dim under the L_p norm, ``1 <= p <= inf``."""
    pts = np.array(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or not np.all(np.isfinite(pts)):
        raise ValueError("points must be a finite (sigma, dim) array")
    p = float(p)
    if not p >= 1:
        raise ValueError(f"norm exponent must be >= 1, got {p}")
    if symbols is not None and len(symbols) != len(pts):
        raise ValueError("symbol list length does not match point count")
    m = lp_distances(pts, p)
    zero = np.argwhere((m == 0) & ~np.eye(len(pts), dtype=bool))
    if zero.size:
        x, y = zero[0]
        raise ZeroOffDiagonal(f"symbols {x} and {y} sit at the same point")
    return MetricSpace(NORMED, m, points=pts, p=p,
                       symbols=None if symbols is None else tuple(symbols))


def lp_distances(pts: np.ndarray, p: float) -> np.ndarray:
    diff = np.abs(pts[:, None, :] - pts[None, :, :])
    return np.linalg.norm(diff, ord=p, axis=-1)


def normalize(ms: MetricSpace) -> MetricSpace:
    """Rescale so the smallest nonzero distance is exactly 1.

    The divisor is folded into ``scale`` so that ``matrix * scale`` always
    recovers the original distances. Normalizing twice is a no-op.
    """
    if ms.size < 2:
        raise DegenerateAlphabet("need at least two symbols for a nonzero distance")
    lo = ms.min_distance
    if lo == 1.0:
        return ms
    matrix = ms.matrix / lo
    np.fill_diagonal(matrix, 0.0)
    return MetricSpace(ms.kind, matrix, points=None if ms.points is None else ms.points.copy(),
                       p=ms.p, scale=ms.scale * lo, symbols=ms.symbols)


def dist(ms: MetricSpace, x: int, y: int) -> float:
    """Distance between symbols ``x`` and ``y`` in the metric's current units."""
    if x == WILDCARD or y == WILDCARD:
        raise WildcardDistance("distance to a wildcard is undefined")
    return float(ms.matrix[x, y])


def hamming(sigma: int) -> MetricSpace:
    """Uniform metric: every pair of distinct symbols at distance 1."""
    return MetricSpace(FINITE, 1.0 - np.eye(sigma))


def random_metric(sigma: int, b_d: float, rng: np.random.Generator, dim: int = 3) -> MetricSpace:
    """Random finite metric, already normalized, with dynamic range exactly ``b_d``.

    Random points in ``[0, 1]^dim`` under L1 are scaled so the closest pair
    is at distance 1, then distances are truncated at ``b_d``. Truncation
    ``min(d, c)`` of a metric is again a metric, so the result is valid by
    construction.
    """
    if sigma < 2:
        raise DegenerateAlphabet("need at least two symbols")
    if b_d < 1:
        raise ValueError("dynamic range must be >= 1")
    while True:
        pts = rng.random((sigma, dim))
        m = lp_distances(pts, 1.0)
        off = m[~np.eye(sigma, dtype=bool)]
        if off.min() > 0 and off.max() / off.min() >= b_d:
            break
        dim = max(1, dim - 1)
    m = np.minimum(m / off.min(), b_d)
    np.fill_diagonal(m, 0.0)
    return MetricSpace(FINITE, m)


def as_symbols(seq, sigma: Optional[int] = None) -> np.ndarray:
    """Coerce a sequence of symbol ids to an int64 array, checking the range."""
    s = np.asarray(seq, dtype=np.int64)
    if s.ndim != 1:
        raise ValueError("symbol strings are one-dimensional")
    if np.any(s < WILDCARD):
        raise ValueError("negative symbol ids other than WILDCARD")
    if sigma is not None and s.size and s.max() >= sigma:
        raise ValueError(f"symbol id {int(s.max())} outside alphabet of size {sigma}")
    return s
