import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metricprof import metric
from metricprof.errors import (
    AsymmetricMetric,
    DegenerateAlphabet,
    NonzeroDiagonal,
    TriangleViolation,
    WildcardDistance,
    ZeroOffDiagonal,
)


def test_validate_hamming_two_symbols():
    ms = metric.validate([[0, 1], [1, 0]])
    assert ms.kind == metric.FINITE
    assert ms.size == 2
    assert ms.b_d == 1.0


@pytest.mark.parametrize("raw, error", [
    ([[0, 1], [2, 0]], AsymmetricMetric),
    ([[1, 1], [1, 0]], NonzeroDiagonal),
    ([[0, 0], [0, 0]], ZeroOffDiagonal),
])
def test_validate_axiom_errors(raw, error):
    with pytest.raises(error):
        metric.validate(raw)


def test_triangle_violation_reports_triple():
    with pytest.raises(TriangleViolation) as info:
        metric.validate([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    x, y, z = info.value.triple
    assert (x, z) in ((0, 2), (2, 0)) and y == 1
    assert info.value.direct == 3 and info.value.detour == 2


def test_triangle_check_can_be_skipped():
    ms = metric.validate([[0, 1, 3], [1, 0, 1], [3, 1, 0]], check_triangle=False)
    assert ms.max_distance == 3


@pytest.mark.parametrize("raw", [[[0, -1], [-1, 0]], [[0, np.inf], [np.inf, 0]], [[0, 1, 2]]])
def test_validate_rejects_malformed(raw):
    with pytest.raises(ValueError):
        metric.validate(raw)


def test_normalize_single_distance():
    ms = metric.normalize(metric.validate([[0, 2], [2, 0]]))
    np.testing.assert_array_equal(ms.matrix, [[0, 1], [1, 0]])
    assert ms.scale == 2
    assert ms.b_d == 1 and ms.max_distance == 1


def test_normalize_round_trip():
    ms = metric.normalize(metric.validate([[0, 3], [3, 0]]))
    assert metric.dist(ms, 0, 1) * ms.scale == 3


def test_normalize_random_metric_min_is_one(rng):
    pts = rng.random((8, 2))
    raw = metric.lp_distances(pts, 2.0)
    ms = metric.normalize(metric.validate(raw))
    # direct min-scan oracle over off-diagonal entries
    off = [ms.matrix[i, j] for i in range(8) for j in range(8) if i != j]
    assert min(off) == 1.0
    assert max(off) == ms.b_d
    assert ms.scale == pytest.approx(min(raw[i, j] for i in range(8) for j in range(8) if i != j))


def test_normalize_degenerate():
    with pytest.raises(DegenerateAlphabet):
        metric.normalize(metric.validate([[0.0]]))


def test_normalize_idempotent(rng):
    ms = metric.normalize(metric.validate(metric.lp_distances(rng.random((6, 3)), 1.0)))
    again = metric.normalize(ms)
    assert again.scale == ms.scale
    np.testing.assert_array_equal(again.matrix, ms.matrix)


def test_normed_distances():
    ms = metric.from_points([[0, 0], [3, 4]], p=2)
    assert metric.dist(ms, 0, 1) == 5
    ms = metric.from_points([[1, 5], [2, 2]], p=math.inf)
    assert metric.dist(ms, 0, 1) == 3
    assert metric.dist(ms, 1, 1) == 0


def test_normed_duplicate_points_rejected():
    with pytest.raises(ZeroOffDiagonal):
        metric.from_points([[0, 0], [0, 0]])


def test_normed_normalization_divides_by_scale():
    ms = metric.normalize(metric.from_points([[0.0], [2.0], [6.0]], p=1))
    assert ms.scale == 2
    assert metric.dist(ms, 0, 2) == 3
    np.testing.assert_array_equal(ms.points, [[0.0], [2.0], [6.0]])


def test_wildcard_distance():
    with pytest.raises(WildcardDistance):
        metric.dist(metric.hamming(3), metric.WILDCARD, 0)


@pytest.mark.parametrize("x, expected", [(0.5, 1), (1, 1), (1.5, 2), (8, 8), (8.000001, 16), (63.9, 64)])
def test_next_power_of_two(x, expected):
    assert metric.next_power_of_two(x) == expected


@pytest.mark.parametrize("b_d", [1, 8, 64])
def test_random_metric_has_requested_range(b_d, rng):
    ms = metric.random_metric(16, b_d, rng)
    assert ms.min_distance == 1.0
    assert ms.max_distance == b_d
    assert ms.level_top == b_d
    metric.validate(ms.matrix)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(1, 4), st.sampled_from([1.0, 2.0, math.inf]),
       st.integers(0, 2**32 - 1))
def test_normed_metric_properties(sigma, dim, p, seed):
    pts = np.random.default_rng(seed).normal(size=(sigma, dim))
    ms = metric.normalize(metric.from_points(pts, p=p))
    m = ms.matrix
    assert np.array_equal(m, m.T)
    assert np.all(np.diag(m) == 0)
    off = m[~np.eye(sigma, dtype=bool)]
    assert off.min() == 1.0
    assert off.max() == ms.b_d
    # per-coordinate oracle, within a few ulps of the arithmetic used
    for x in range(sigma):
        for y in range(sigma):
            diff = [abs(a - b) for a, b in zip(pts[x], pts[y])]
            if p == math.inf:
                direct = max(diff)
            elif p == 1.0:
                direct = sum(diff)
            else:
                direct = math.sqrt(sum(d * d for d in diff))
            assert metric.dist(ms, x, y) * ms.scale == pytest.approx(direct, rel=4e-16 * dim, abs=0)


def test_as_symbols_checks_range():
    with pytest.raises(ValueError):
        metric.as_symbols([0, 5], sigma=3)
    with pytest.raises(ValueError):
        metric.as_symbols([0, -2])
    np.testing.assert_array_equal(metric.as_symbols([0, metric.WILDCARD, 2], 3), [0, -1, 2])
