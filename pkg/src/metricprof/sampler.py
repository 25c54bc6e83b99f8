"""Draw a uniformly random mismatch per offset by erasing pattern positions.

``sample(q, text, pattern, rng)`` keeps each pattern position with
probability ``q`` (else makes it a wildcard) and runs the one-mismatch test. At an offset with ``k`` true
mismatches it reports a match with probability ``(1-q)**k`` and a single
mismatch with probability ``k q (1-q)**(k-1)``, the mismatch being uniform
over the ``k`` candidates. Pattern wildcards are never mismatches.
"""
from __future__ import annotations

import numpy as np

from .metric import WILDCARD, as_symbols
from .one_mismatch import MismatchReport, Status, one_mismatch, one_mismatch_batch
from .streams import as_generator

SampleOutcome = MismatchReport


def _check_q(q: float) -> None:
    if not 0 < q <= 1:
        raise ValueError(f"keep probability must be in (0, 1], got {q}")


def subsample_pattern(pattern, q: float, rng) -> np.ndarray:
    """Keep each position with probability ``q``; erase the rest to WILDCARD."""
    _check_q(q)
    pattern = as_symbols(pattern)
    keep = as_generator(rng).random(pattern.size) < q
    return np.where(keep, pattern, WILDCARD)


def sample(q: float, text, pattern, rng) -> SampleOutcome:
    """One thinned-pattern one-mismatch run.

    ``Status.LOCATION`` entries carry the position of the returned mismatch;
    ``Status.MANY`` is the "nothing" outcome.
    """
    return one_mismatch(text, subsample_pattern(pattern, q, rng))


def sample_many(q: float, text, pattern, rng, trials: int, tables=None) -> tuple:
    """``trials`` independent :func:`sample` runs in one batch.

    The keep masks are drawn as one ``(trials, m)`` uniform block, so row
    ``k`` consumes the same randomness that the ``k``-th sequential call to
    :func:`subsample_pattern` would.

    Parameters
    ----------
    tables : int array, shape (trials or 1, sigma), optional
        Per-row symbol relabelings; defaults to the identity.

    Returns
    -------
    (status, location) arrays of shape ``(trials, n - m + 1)``.
    """
    _check_q(q)
    text = as_symbols(text)
    pattern = as_symbols(pattern)
    keep = as_generator(rng).random((trials, pattern.size)) < q
    if tables is None:
        sigma = int(max(text.max(initial=-1), pattern.max(initial=-1))) + 1
        tables = np.arange(1, sigma + 1, dtype=np.int64)[None, :]
    return one_mismatch_batch(text, pattern, tables, keep)


def q_sweep(m: int) -> list:
    """Keep probabilities 1, 1/2, 1/4, ... down to the last one ``>= 1/m``."""
    qs = [1.0]
    while qs[-1] / 2 >= 1.0 / m:
        qs.append(qs[-1] / 2)
    return qs


def sample_uniform_mismatch(text, pattern, rng) -> np.ndarray:
    """Per offset, a uniformly random mismatch position or -1.

    Sweeps ``q`` downward from 1 and keeps the first mismatch found at each
    offset.
    """
    rng = as_generator(rng)
    pattern = as_symbols(pattern)
    found = None
    for q in q_sweep(pattern.size):
        rep = sample(q, text, pattern, rng)
        if found is None:
            found = np.full(rep.status.size, -1, dtype=np.int64)
        hit = (found < 0) & (rep.status == Status.LOCATION)
        found[hit] = rep.location[hit]
        if np.all(found >= 0):
            break
    return found
