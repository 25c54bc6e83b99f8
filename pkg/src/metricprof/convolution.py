"""Sliding cross-correlation and the per-letter exact distance profile.

Two backends sit behind :func:`correlate`:

* schoolbook int64 accumulation for short kernels (``m <= SCHOOLBOOK_CUTOFF``);
* overlap-save number-theoretic transforms over one or two NTT-friendly
  primes, recombined with Garner's formula. The text is cut into blocks of
  roughly ``2m`` so the cost is O(n log m).

Both are bit-exact. :func:`correlate_real` is the floating-point counterpart
used where a small relative error is acceptable.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy import signal

from .errors import OverflowRisk, WildcardDistance
from .metric import WILDCARD, MetricSpace

SCHOOLBOOK_CUTOFF = 64

# (prime, primitive root, log2 of the largest supported transform length)
_PRIMES = ((998244353, 3, 23), (469762049, 3, 26))
P1, P2 = _PRIMES[0][0], _PRIMES[1][0]

#: Largest correlation value either integer backend reproduces exactly.
EXACT_LIMIT = P1 * P2 - 1
_INT64_LIMIT = 2**63 - 1


def correlate(a, b, bound: int | None = None) -> np.ndarray:
    """Exact integer cross-correlation ``V[i] = sum_j a[i+j] * b[j]``.

    Parameters
    ----------
    a : array_like of int, length n
    b : array_like of int, length m <= n
    bound : int, optional
        Declared upper bound on every output magnitude. Defaults to
        ``m * max|a| * max|b|`` computed from the data.

    Returns
    -------
    ndarray of int64, length n - m + 1

    Raises
    ------
    OverflowRisk
        If ``bound`` exceeds :data:`EXACT_LIMIT`.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n, m = a.size, b.size
    if m == 0 or m > n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if bound is None:
        bound = m * int(np.abs(a).max()) * int(np.abs(b).max())
    if bound > EXACT_LIMIT:
        raise OverflowRisk(f"correlation bound {bound} exceeds exact limit {EXACT_LIMIT}")
    if bound == 0:
        return np.zeros(n - m + 1, dtype=np.int64)
    if m <= SCHOOLBOOK_CUTOFF:
        return _schoolbook(a, b)
    if np.any(a < 0) or np.any(b < 0):
        # the modular path reconstructs values in [0, limit); split signs
        ap, an = np.maximum(a, 0), np.maximum(-a, 0)
        bp, bn = np.maximum(b, 0), np.maximum(-b, 0)
        return (_ntt_correlate(ap, bp, bound) + _ntt_correlate(an, bn, bound)
                - _ntt_correlate(ap, bn, bound) - _ntt_correlate(an, bp, bound))
    return _ntt_correlate(a, b, bound)


def _schoolbook(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n_off = a.size - b.size + 1
    out = np.zeros(n_off, dtype=np.int64)
    for j, bj in enumerate(b.tolist()):
        if bj:
            out += bj * a[j:j + n_off]
    return out


@lru_cache(maxsize=None)
def _bit_reverse(length: int) -> np.ndarray:
    bits = length.bit_length() - 1
    idx = np.arange(length)
    rev = np.zeros(length, dtype=np.int64)
    for k in range(bits):
        rev |= ((idx >> k) & 1) << (bits - 1 - k)
    return rev


@lru_cache(maxsize=None)
def _twiddles(prime: int, root: int, length: int, inverse: bool) -> tuple:
    stages = []
    size = 2
    while size <= length:
        w = pow(root, (prime - 1) // size, prime)
        if inverse:
            w = pow(w, prime - 2, prime)
        half = size // 2
        powers = np.empty(half, dtype=np.int64)
        acc = 1
        for k in range(half):
            powers[k] = acc
            acc = acc * w % prime
        stages.append(powers)
        size *= 2
    return tuple(stages)


def _ntt(x: np.ndarray, prime: int, root: int, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 NTT along the last axis; values in [0, prime)."""
    length = x.shape[-1]
    lead = x.shape[:-1]
    y = x[..., _bit_reverse(length)]
    size = 2
    for w in _twiddles(prime, root, length, inverse):
        half = size // 2
        y = y.reshape(*lead, length // size, size)
        u = y[..., :half]
        v = y[..., half:] * w % prime
        y = np.concatenate(((u + v) % prime, (u - v) % prime), axis=-1)
        size *= 2
    y = y.reshape(*lead, length)
    if inverse:
        y = y * pow(length, prime - 2, prime) % prime
    return y


def _ntt_correlate(a: np.ndarray, b: np.ndarray, bound: int) -> np.ndarray:
    n, m = a.size, b.size
    n_off = n - m + 1
    length = 1 << max(1, (2 * m - 1).bit_length())
    hop = length - m + 1
    n_blocks = -(-n_off // hop)
    padded = np.zeros(n_blocks * hop + m - 1, dtype=np.int64)
    padded[:n] = a
    starts = np.arange(n_blocks) * hop
    blocks = np.zeros((n_blocks, length), dtype=np.int64)
    blocks[:, :hop + m - 1] = padded[starts[:, None] + np.arange(hop + m - 1)]
    kernel = np.zeros(length, dtype=np.int64)
    # circular correlation = convolution with the reversed kernel
    kernel[:m] = b[::-1]

    primes = _PRIMES[:1] if bound < P1 else _PRIMES
    residues = []
    for prime, root, max_log in primes:
        if length > 1 << max_log:
            raise OverflowRisk(f"transform length {length} unsupported for prime {prime}")
        fa = _ntt(blocks % prime, prime, root)
        fb = _ntt(kernel % prime, prime, root)
        conv = _ntt(fa * fb % prime, prime, root, inverse=True)
        residues.append(conv[:, m - 1:m - 1 + hop].reshape(-1)[:n_off])
    if len(residues) == 1:
        return residues[0]
    r1, r2 = residues
    inv = pow(P1, P2 - 2, P2)
    k = (r2 - r1) % P2 * inv % P2
    return r1 + P1 * k


def correlate_real(a, b) -> np.ndarray:
    """Floating-point correlation along the last axis, O(n log m) via overlap-add.

    ``a`` and ``b`` may be stacked ``(rows, n)`` and ``(rows, m)``; rows are
    correlated pairwise.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim == 1:
        return signal.oaconvolve(a, b[::-1], mode="valid")
    return signal.oaconvolve(a, b[:, ::-1], mode="valid", axes=-1)


def exact_profile_per_letter(text, pattern, ms: MetricSpace) -> np.ndarray:
    """Distance profile as a sum of one real correlation per pattern letter.

    For each letter ``a`` occurring in the pattern, the text row
    ``d(a, t_i)`` is correlated with the indicator of ``a`` in the pattern.
    Values are returned in original units (multiplied by ``ms.scale``).
    """
    text = np.asarray(text, dtype=np.int64)
    pattern = np.asarray(pattern, dtype=np.int64)
    if np.any(text == WILDCARD) or np.any(pattern == WILDCARD):
        raise WildcardDistance("per-letter profile does not support wildcards")
    letters = np.unique(pattern)
    rows = ms.matrix[letters][:, text]
    indicators = (pattern[None, :] == letters[:, None]).astype(np.float64)
    total = correlate_real(rows, indicators).sum(axis=0)
    return np.maximum(total, 0.0) * ms.scale
