"""
Hashing symbols by distance
===========================

A separating hash relabels symbols into buckets so that symbols at least
``D`` apart never share a bucket, while close symbols are split only
rarely. Normed alphabets use a randomly shifted grid; matrix metrics use a
ball-growing random partition.
"""

import math

import numpy as np

from metricprof import make_family, metric
from metricprof.oracle import empirical_separation

rng = np.random.default_rng(2)

##############################################################################
# Grid hashing on the line
# ------------------------
#
# In one dimension the split probability of two points is exactly their
# distance over ``D``.

ms = metric.from_points([[0.0], [1.0], [5.0], [10.0]], p=1)
fam = make_family(ms, threshold=10.0)
for y, d in ((1, 1.0), (2, 5.0), (3, 10.0)):
    rate = empirical_separation(fam, 0, y, 10_000, rng)
    print(f"d={d:4.1f}  split rate {rate:.3f}  bound {min(1.0, fam.factor * d / 10):.3f}")

##############################################################################
# Ball-growing partitions of a random metric
# ------------------------------------------
#
# Each draw picks a radius in ``[D/4, D/2)`` and a random order of centres.
# Every symbol joins the first centre within the radius, so clusters have
# diameter below ``D``.

ms = metric.random_metric(16, 32, rng)
fam = make_family(ms)
print("separation factor C:", round(fam.factor, 2), "=", "8 ln 17 =", round(8 * math.log(17), 2))
for D in (2.0, 8.0, 32.0):
    tables = fam.at(D).sample_tables(rng, 1000)
    far = ms.matrix >= D
    together = tables[:, :, None] == tables[:, None, :]
    print(f"D={D:4.0f}  mean buckets {tables.max(axis=1).mean():5.2f}  "
          f"far pairs ever together: {int((together & far).sum())}")
