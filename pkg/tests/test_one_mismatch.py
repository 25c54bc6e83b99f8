import time

import numpy as np
import pytest

from metricprof.errors import OverflowRisk
from metricprof.metric import WILDCARD
from metricprof.one_mismatch import (
    Status,
    encode,
    mismatch_sums,
    one_mismatch,
    one_mismatch_batch,
)
from metricprof.oracle import brute_force_mismatch

from conftest import symbols


def test_encode():
    codes, mask = encode([0, WILDCARD, 2])
    assert codes.tolist() == [1, 0, 3]
    assert mask.tolist() == [1, 0, 1]
    assert encode([WILDCARD] * 4)[1].tolist() == [0, 0, 0, 0]
    assert encode([3, 1, 0])[1].tolist() == [1, 1, 1]


def test_sums_worked_example():
    # a..d -> codes 1..4; values from evaluating the A0/A1 definitions by hand
    a0, a1 = mismatch_sums(symbols("abcab"), symbols("abd"))
    assert (a0[0], a1[0]) == (1, 2)
    assert (a0[1], a1[1]) == (11, 19)
    rep = one_mismatch(symbols("abcab"), symbols("abd"))
    assert rep.labels()[:2] == [2, "many"]


def test_all_wildcard_pattern_matches_everywhere(rng):
    text = rng.integers(0, 5, 40)
    rep = one_mismatch(text, [WILDCARD] * 7)
    assert np.all(rep.status == Status.MATCH)


def test_final_alignment_included():
    rep = one_mismatch(symbols("xxab"), symbols("ab"))
    assert len(rep) == 3
    assert rep.labels()[-1] == "match"


def test_wildcards_in_text():
    rep = one_mismatch(symbols("a?c"), symbols("abd"))
    assert rep.labels() == [2]


def _random_instance(rng, planted=None):
    sigma = int(rng.integers(2, 9))
    m = int(rng.integers(1, 100))
    n = m + int(rng.integers(0, 120))
    text = rng.integers(0, sigma, n)
    if planted is None:
        pattern = rng.integers(0, sigma, m)
    else:
        i = int(rng.integers(0, n - m + 1))
        pattern = text[i:i + m].copy()
        for j in rng.choice(m, size=min(planted, m), replace=False):
            pattern[j] = (pattern[j] + 1 + rng.integers(0, sigma - 1)) % sigma
    for arr, rate in ((pattern, rng.choice([0, 0.1, 0.5])), (text, rng.choice([0, 0.05]))):
        arr[rng.random(arr.size) < rate] = WILDCARD
    return text, pattern


@pytest.mark.parametrize("planted", [None, 0, 1, 2])
def test_equivalence_with_brute_force(planted, rng):
    for _ in range(250):
        text, pattern = _random_instance(rng, planted)
        got = one_mismatch(text, pattern)
        want = brute_force_mismatch(text, pattern)
        assert np.array_equal(got.status, want.status)
        assert np.array_equal(got.location, want.location)


def test_batch_engine_agrees_with_transform_path(rng):
    for _ in range(100):
        text, pattern = _random_instance(rng, rng.choice([None, 0, 1, 2]))
        sigma = int(max(text.max(), pattern.max())) + 1
        rows = 5
        keep = rng.random((rows, pattern.size)) < rng.choice([1.0, 0.5, 0.1])
        tables = rng.integers(1, 4, (rows, sigma))
        status, location = one_mismatch_batch(text, pattern, tables, keep)
        for k in range(rows):
            relabel = lambda s: np.where(s == WILDCARD, WILDCARD, tables[k][np.maximum(s, 0)] - 1)
            sub = np.where(keep[k], relabel(pattern), WILDCARD)
            want = one_mismatch(relabel(text), sub)
            assert np.array_equal(status[k], want.status)
            assert np.array_equal(location[k], want.location)


def test_batch_engine_shared_table(rng):
    text = rng.integers(0, 4, 60)
    pattern = text[10:30].copy()
    pattern[7] = (pattern[7] + 1) % 4
    status, location = one_mismatch_batch(text, pattern, np.arange(1, 5)[None, :],
                                          np.ones((3, 20), dtype=bool))
    assert status[:, 10].tolist() == [Status.LOCATION] * 3
    assert location[:, 10].tolist() == [7] * 3


def test_batch_overflow_guard():
    with pytest.raises(OverflowRisk):
        one_mismatch_batch(np.zeros(10, dtype=int), np.zeros(5, dtype=int),
                           np.array([[2**40]]), np.ones((1, 5), dtype=bool))


def test_large_alphabet_uses_two_primes(rng):
    text = rng.integers(0, 50_000, 3000)
    pattern = text[1000:1400].copy()
    pattern[123] += 1
    rep = one_mismatch(text, pattern)
    assert rep.labels()[1000] == 123


def _best_time(fn, repeat=5):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def test_scaling_in_n(rng):
    m = 200
    small = rng.integers(0, 16, 1 << 15)
    big = rng.integers(0, 16, 1 << 16)
    pattern = rng.integers(0, 16, m)
    one_mismatch(small, pattern)
    ratio = _best_time(lambda: one_mismatch(big, pattern)) / _best_time(lambda: one_mismatch(small, pattern))
    assert ratio <= 3.0
