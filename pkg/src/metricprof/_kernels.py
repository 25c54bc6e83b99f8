"""Compiled inner loops for batched one-mismatch runs.

Each row of a batch is an independent one-mismatch run on a relabeled text
and a (sub)sampled pattern. The A0/A1 sums are accumulated exactly in int64
by a schoolbook correlation that only visits the surviving pattern
positions, so a row costs O(n * kept). The sums are carried in float64,
which is exact for integers below 2**53; callers enforce that bound. Rows are independent and the per-row
output slots are disjoint, which keeps results identical for any thread
count.
"""
import os

import numpy as np
from numba import config, njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # the probe for an outdated TBB only produces a warning
    config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

MATCH = 0
LOCATION = 1
MANY = 2


@njit(fastmath=True, cache=True)
def _accumulate(tcode, tmask, pcode, idx, n_off, a0, a1):
    # two pattern positions per sweep over the offsets; all values are
    # integers below 2**53, so reassociation cannot change the sums
    kept = idx.size
    jj = 0
    while jj + 2 <= kept:
        j0 = idx[jj]
        j1 = idx[jj + 1]
        p0 = np.float64(pcode[j0])
        p1 = np.float64(pcode[j1])
        f0 = np.float64(j0)
        f1 = np.float64(j1)
        t0 = tcode[j0:j0 + n_off]
        w0 = tmask[j0:j0 + n_off]
        t1 = tcode[j1:j1 + n_off]
        w1 = tmask[j1:j1 + n_off]
        for i in range(n_off):
            d = p0 - t0[i]
            e0 = d * d * w0[i]
            d = p1 - t1[i]
            e1 = d * d * w1[i]
            a0[i] += e0 + e1
            a1[i] += f0 * e0 + f1 * e1
        jj += 2
    if jj < kept:
        j0 = idx[jj]
        p0 = np.float64(pcode[j0])
        f0 = np.float64(j0)
        t0 = tcode[j0:j0 + n_off]
        w0 = tmask[j0:j0 + n_off]
        for i in range(n_off):
            d = p0 - t0[i]
            e0 = d * d * w0[i]
            a0[i] += e0
            a1[i] += f0 * e0


@njit(parallel=True, cache=True)
def one_mismatch_rows(text_ids, pattern_ids, tables, keep, status, location):
    n_rows, m = keep.shape
    n = text_ids.shape[0]
    n_off = n - m + 1
    shared = tables.shape[0] == 1
    for k in prange(n_rows):
        row = np.int64(0) if shared else np.int64(k)
        tcode = np.empty(n, np.float64)
        tmask = np.empty(n, np.float64)
        for x in range(n):
            s = text_ids[x]
            if s < 0:
                tcode[x] = 0.0
                tmask[x] = 0.0
            else:
                tcode[x] = tables[row, s]
                tmask[x] = 1.0
        pcode = np.zeros(m, np.int64)
        idx = np.empty(m, np.int64)
        kept = 0
        for j in range(m):
            s = pattern_ids[j]
            if s >= 0 and keep[k, j]:
                pcode[j] = tables[row, s]
                idx[kept] = j
                kept += 1
        a0 = np.zeros(n_off, np.float64)
        a1 = np.zeros(n_off, np.float64)
        _accumulate(tcode, tmask, pcode, idx[:kept], n_off, a0, a1)
        for i in range(n_off):
            s0 = np.int64(a0[i])
            s1 = np.int64(a1[i])
            if s0 == 0:
                status[k, i] = MATCH
                location[k, i] = -1
                continue
            status[k, i] = MANY
            location[k, i] = -1
            # the float quotient is exact whenever s0 divides s1; the
            # multiply-back check rejects everything else
            r = np.int64(a1[i] / a0[i])
            if r >= m or r * s0 != s1 or pcode[r] == 0 or tmask[i + r] == 0.0:
                continue
            d = pcode[r] - np.int64(tcode[i + r])
            if d * d == s0:
                status[k, i] = LOCATION
                location[k, i] = r


@njit(parallel=True, cache=True)
def bucket_tally(status, location, text_ids, pattern_ids, dist, lo, hi, m0, m1, mass):
    """Per offset: count matches, and in-bucket returned positions with their mass."""
    n_rows, n_off = status.shape
    for i in prange(n_off):
        c0 = 0
        c1 = 0
        s = 0.0
        for k in range(n_rows):
            st = status[k, i]
            if st == MATCH:
                c0 += 1
            elif st == LOCATION:
                j = location[k, i]
                d = dist[text_ids[i + j], pattern_ids[j]]
                if d >= lo and d < hi:
                    c1 += 1
                    s += d
        m0[i] += c0
        m1[i] += c1
        mass[i] += s
