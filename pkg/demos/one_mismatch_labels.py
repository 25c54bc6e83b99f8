"""
Match, one mismatch, or many
============================

Three exact integer correlations label every offset of a pattern against a
text. The first weighted sum is zero only at a match; when exactly one
position differs, the ratio of the second to the first sum is that
position.
"""

import numpy as np

from metricprof import mismatch_sums, one_mismatch
from metricprof.metric import WILDCARD

##############################################################################
# A worked example
# ----------------
#
# Letters a..d become ids 0..3 (codes 1..4 inside the algorithm).

text = np.array([0, 1, 2, 0, 1])    # a b c a b
pattern = np.array([0, 1, 3])       # a b d
a0, a1 = mismatch_sums(text, pattern)
print("A0:", a0, "A1:", a1)
print("labels:", one_mismatch(text, pattern).labels())

##############################################################################
# At offset 0 the ratio ``A1 / A0 = 2`` points at the ``d`` that faces a
# ``c``. At offset 1 the ratio is not a whole number, so at least two
# positions differ.

##############################################################################
# Wildcards are never mismatches
# ------------------------------

pattern = np.array([0, WILDCARD, 3])
print("labels with a wildcard:", one_mismatch(text, pattern).labels())

##############################################################################
# Planting a single error in a long string
# ----------------------------------------

rng = np.random.default_rng(1)
text = rng.integers(0, 20, 100_000)
pattern = text[4242:4242 + 300].copy()
pattern[17] = (pattern[17] + 1) % 20
rep = one_mismatch(text, pattern)
print("label at the planted offset:", rep.labels()[4242])
