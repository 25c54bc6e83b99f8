import math

import numpy as np
import pytest

from metricprof import metric
from metricprof.errors import WrongMetricKind
from metricprof.hash_family import (
    GRID,
    PARTITION,
    HashFunction,
    apply_hash,
    family_factor,
    grid_hash_sample,
    make_family,
    partition_hash_sample,
)
from metricprof.metric import WILDCARD
from metricprof.oracle import bucket_stats, empirical_separation, separated_positions


def normed(rng, sigma, dim, p):
    return metric.normalize(metric.from_points(rng.normal(size=(sigma, dim)) * 4, p=p))


def finite(rng, sigma, b_d=16):
    return metric.random_metric(sigma, b_d, rng)


def condition_one_violations(fam, D, draws, rng):
    tables = fam.at(D).sample_tables(rng, draws)
    far = fam.metric.matrix >= D
    same = tables[:, :, None] == tables[:, None, :]
    return int((same & far).sum())


@pytest.mark.parametrize("dim", [1, 2, 8])
@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_grid_condition_one(dim, p, rng):
    ms = normed(rng, 12, dim, p)
    fam = make_family(ms)
    for D in (1.0, 2.0, ms.level_top / 2):
        assert condition_one_violations(fam, max(D, 1.0), 300, rng) == 0


@pytest.mark.parametrize("sigma", [8, 32])
def test_partition_condition_one(sigma, rng):
    fam = make_family(finite(rng, sigma))
    for D in (1, 2, 4, 8, 16):
        assert condition_one_violations(fam, D, 300, rng) == 0


def test_partition_boundary_distance_exactly_d(rng):
    ms = metric.validate([[0, 2, 1], [2, 0, 1], [1, 1, 0]])
    fam = make_family(ms, threshold=2.0)
    tables = fam.sample_tables(rng, 2000)
    assert np.all(tables[:, 0] != tables[:, 1])


def test_grid_one_dimensional_rates(rng):
    ms = metric.normalize(metric.from_points([[0.0], [1.0], [5.0], [10.0]], p=1))
    fam = make_family(ms, threshold=10.0)
    # cell side equals D in one dimension, so Pr(split) = d / D
    assert empirical_separation(fam, 0, 1, 10_000, rng) == pytest.approx(0.1, abs=0.015)
    assert empirical_separation(fam, 0, 2, 10_000, rng) == pytest.approx(0.5, abs=0.02)
    assert empirical_separation(fam, 0, 3, 10_000, rng) == 1.0


@pytest.mark.parametrize("kind, sigma", [(GRID, 10), (PARTITION, 16)])
def test_condition_two(kind, sigma, rng):
    ms = normed(rng, sigma, 2, 2.0) if kind == GRID else finite(rng, sigma)
    D = 4.0
    fam = make_family(ms, threshold=D)
    draws = 4000
    tables = fam.sample_tables(rng, draws)
    freq = (tables[:, :, None] != tables[:, None, :]).mean(axis=0)
    bound = np.minimum(fam.factor * ms.matrix / D, 1.0)
    se = np.sqrt(bound * (1 - bound) / draws)
    assert np.all(freq <= fam.factor * ms.matrix / D + 3 * se + 1e-12)


def test_family_factor():
    rng = np.random.default_rng(0)
    assert family_factor(make_family(normed(rng, 5, 3, 2.0))) == 3
    fam = make_family(finite(rng, 16))
    assert fam.factor == pytest.approx(8 * math.log(17))
    assert fam.factor == pytest.approx(22.67, abs=0.01)


def test_kind_mismatch():
    rng = np.random.default_rng(0)
    with pytest.raises(WrongMetricKind):
        make_family(finite(rng, 4), kind=GRID)
    with pytest.raises(WrongMetricKind):
        make_family(normed(rng, 4, 2, 1.0), kind=PARTITION)
    with pytest.raises(ValueError):
        make_family(finite(rng, 4)).at(0.5).sample_tables(rng, 1)


def test_default_kinds():
    rng = np.random.default_rng(1)
    assert make_family(finite(rng, 4)).kind == PARTITION
    assert make_family(normed(rng, 4, 2, 1.0)).kind == GRID


def test_tables_dense_from_one(rng):
    for fam in (make_family(finite(rng, 20)), make_family(normed(rng, 20, 3, 1.0))):
        for D in (1.0, 4.0):
            for row in fam.at(D).sample_tables(rng, 50):
                firsts = [row[x] for x in range(row.size) if row[x] not in row[:x]]
                assert firsts == list(range(1, row.max() + 1))


def test_samplers_and_apply(rng):
    ms = finite(rng, 6)
    h = partition_hash_sample(ms, 2.0, rng)
    assert h.family == PARTITION and h.threshold == 2.0
    g = grid_hash_sample(normed(rng, 6, 2, 2.0), 2.0, rng)
    assert g.family == GRID
    h = HashFunction(np.array([1, 1, 2]), 1.0, PARTITION)
    assert apply_hash(h, [0, 1, 2, WILDCARD]).tolist() == [0, 0, 1, WILDCARD]
    assert h([2, 2]).tolist() == [1, 1]


def test_same_seed_same_tables():
    ms = finite(np.random.default_rng(3), 12)
    fam = make_family(ms, threshold=2.0)
    a = fam.sample_tables(np.random.default_rng(5), 10)
    b = fam.sample_tables(np.random.default_rng(5), 10)
    assert np.array_equal(a, b)


def test_in_bucket_positions_always_separated(rng):
    ms = finite(rng, 16)
    fam = make_family(ms)
    text = rng.integers(0, 16, 80)
    pattern = rng.integers(0, 16, 30)
    for D in (1, 2, 4, 8):
        members, count, mass = bucket_stats(text, pattern, ms, 3, D)
        # every in-bucket distance is in [D, 2D)
        assert count * D <= mass + 1e-9
        assert mass < 2 * D * count or count == 0
        for table in fam.at(D).sample_tables(rng, 200):
            assert set(members.tolist()) <= set(separated_positions(table, text, pattern, 3).tolist())


def test_bucket_boundary_single_position():
    ms = metric.validate([[0, 2], [2, 0]])
    members, count, mass = bucket_stats([0], [1], ms, 0, 2.0)
    assert members.tolist() == [0] and count == 1 and mass == 2.0
    assert mass / 2.0 <= count <= 2 * mass / 2.0
