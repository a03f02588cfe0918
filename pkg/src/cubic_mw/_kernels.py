"""Fused inner loops for the windowed pair-sum merge.

Each kernel walks the ragged (row, t) layout once: values are computed,
hashed on their low bits and either marked in or probed against a flag
table, without materializing intermediate arrays.  Value magnitudes are
pre-checked by the caller to stay inside int64.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def mark_window(base, lo, hi, ct, v0, mask, flags):
    for r in range(base.size):
        br = base[r]
        for t in range(lo[r], hi[r]):
            v = br + ct * t * t * t
            flags[(v - v0) & mask] = 1


@numba.njit(cache=True)
def probe_window(base, lo, hi, ct, v0, mask, flags, out_v, out_r, out_t):
    """Collect entries whose hashed value is marked; returns the count.

    A count larger than the buffers means overflow: the caller retries
    with bigger buffers.
    """
    k = 0
    cap = out_v.size
    for r in range(base.size):
        br = base[r]
        for t in range(lo[r], hi[r]):
            v = br + ct * t * t * t
            if flags[(v - v0) & mask]:
                if k < cap:
                    out_v[k] = v
                    out_r[k] = r
                    out_t[k] = t
                k += 1
    return k


@numba.njit(cache=True)
def mark_values(values, v0, mask, flags):
    for i in range(values.size):
        flags[(values[i] - v0) & mask] = 1
