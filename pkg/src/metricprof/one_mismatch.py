"""Label every alignment as an exact match, a single mismatch, or more.

With codes ``c >= 1`` for symbols and masks ``w`` that zero out wildcards,

    A0[i] = sum_j w_p[j] w_t[i+j] (p_j - t_{i+j})^2
    A1[i] = sum_j j w_p[j] w_t[i+j] (p_j - t_{i+j})^2

are computed exactly. ``A0 = 0`` means a match; otherwise the only candidate
for a single mismatch is ``r = A1 / A0``, which is accepted when it is an
integer in range and the single term at ``r`` accounts for all of ``A0``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .convolution import correlate
from .errors import OverflowRisk
from .metric import WILDCARD, as_symbols

EXACT_FLOAT_LIMIT = 2**53


class Status(enum.IntEnum):
    MATCH = _kernels.MATCH
    LOCATION = _kernels.LOCATION
    MANY = _kernels.MANY


@dataclass(frozen=True, eq=False)
class MismatchReport:
    """Per-offset result: ``status`` codes and the mismatch ``location``.

    ``location[i]`` is the pattern index of the single mismatch when
    ``status[i] == Status.LOCATION`` and -1 otherwise.
    """

    status: np.ndarray
    location: np.ndarray

    def __len__(self):
        return self.status.size

    def labels(self) -> list:
        """``"match"``, the integer location, or ``"many"`` per offset."""
        out = []
        for st, loc in zip(self.status.tolist(), self.location.tolist()):
            if st == Status.MATCH:
                out.append("match")
            elif st == Status.LOCATION:
                out.append(loc)
            else:
                out.append("many")
        return out


def encode(s):
    """Map ids to positive codes ``id + 1`` and wildcards to 0, plus a 0/1 mask."""
    s = as_symbols(s)
    mask = (s != WILDCARD).astype(np.int64)
    codes = (s + 1) * mask
    return codes, mask


def _sums(tc, tm, pc, pm):
    n, m = tc.size, pc.size
    if m == 0 or m > n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    j = np.arange(m, dtype=np.int64)
    t2 = tc * tc
    # (p - t)^2 = p^2 - 2pt + t^2, each term one correlation with masks folded in
    a0 = correlate(tm, pc * pc) - 2 * correlate(tc, pc) + correlate(t2, pm)
    a1 = correlate(tm, j * pc * pc) - 2 * correlate(tc, j * pc) + correlate(t2, j * pm)
    return a0, a1


def mismatch_sums(text, pattern) -> tuple:
    """The exact ``(A0, A1)`` arrays for all offsets."""
    tc, tm = encode(text)
    pc, pm = encode(pattern)
    return _sums(tc, tm, pc, pm)


def one_mismatch(text, pattern) -> MismatchReport:
    """Run the one-mismatch algorithm over all ``n - m + 1`` offsets.

    Both strings may contain wildcards.

    Raises
    ------
    OverflowRisk
        If the codes are too large for exact correlation.
    """
    tc, tm = encode(text)
    pc, pm = encode(pattern)
    a0, a1 = _sums(tc, tm, pc, pm)
    return _classify(a0, a1, tc, tm, pc, pm)


def _classify(a0, a1, tc, tm, pc, pm) -> MismatchReport:
    m = pc.size
    n_off = a0.size
    status = np.full(n_off, Status.MANY, dtype=np.int8)
    location = np.full(n_off, -1, dtype=np.int64)
    status[a0 == 0] = Status.MATCH

    cand = np.flatnonzero(a0 != 0)
    num, den = a1[cand], a0[cand]
    whole = num % den == 0
    cand, r, den = cand[whole], (num // den)[whole], den[whole]
    inside = r < m
    cand, r, den = cand[inside], r[inside], den[inside]
    diff = pc[r] - tc[cand + r]
    ok = (pm[r] == 1) & (tm[cand + r] == 1) & (diff * diff == den)
    status[cand[ok]] = Status.LOCATION
    location[cand[ok]] = r[ok]
    return MismatchReport(status, location)


def one_mismatch_batch(text, pattern, tables, keep) -> tuple:
    """Many independent one-mismatch runs sharing a text and pattern.

    Row ``k`` relabels symbols through ``tables[k]`` (or ``tables[0]`` for a
    single shared table), erases pattern positions where ``keep[k]`` is
    False, and runs the one-mismatch test on the result.

    Parameters
    ----------
    text, pattern : int arrays of symbol ids, WILDCARD allowed
    tables : int array, shape (rows or 1, sigma)
        Positive codes per symbol.
    keep : bool array, shape (rows, m)

    Returns
    -------
    status : int8 array, shape (rows, n - m + 1)
    location : int32 array, same shape, -1 where no single mismatch
    """
    text = as_symbols(text)
    pattern = as_symbols(pattern)
    tables = np.ascontiguousarray(tables, dtype=np.int64)
    keep = np.ascontiguousarray(keep, dtype=np.bool_)
    m = pattern.size
    if m == 0 or m > text.size:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={text.size}")
    if keep.ndim != 2 or keep.shape[1] != m:
        raise ValueError("keep must have shape (rows, m)")
    if tables.shape[0] not in (1, keep.shape[0]):
        raise ValueError("need one table per row or a single shared table")
    if tables.size and tables.min() < 1:
        raise ValueError("relabeling codes must be positive")
    top = int(tables.max()) if tables.size else 0
    # A1 <= sum_j j * top^2 < m^2 * top^2 must stay exactly representable
    if m * m * top * top >= EXACT_FLOAT_LIMIT:
        raise OverflowRisk(f"codes up to {top} with m={m} exceed the exact accumulation range")
    n_off = text.size - m + 1
    status = np.empty((keep.shape[0], n_off), dtype=np.int8)
    location = np.empty((keep.shape[0], n_off), dtype=np.int32)
    _kernels.one_mismatch_rows(text, pattern, tables, keep, status, location)
    return status, location
