"""Numba-compiled engine for the pair-tracking recursion.

One item pair at a time is evolved in a single (n+1)^2 scratch grid, updated
in place.  The in-place gather is safe because each new cell reads only cells
at lexicographically equal-or-larger indices, which an ascending (i, j) sweep
has not yet overwritten; cells a pair leaves behind sit strictly above the
shrinking position range and are provably never read again.

The loops only visit the rectangle of positions a pair can actually occupy at
rank r (its start shifted down by at most r-1, clipped to the remaining-set
size), which is what keeps the kernel comfortably polynomial.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def accumulate_pairs(qflat, offsets, starts_a, starts_b, orient, csum, n):
    buf = np.zeros((n + 1, n + 1))
    for p in range(starts_a.shape[0]):
        a = starts_a[p]
        b = starts_b[p]
        fwd = orient[p] == 1
        buf[:, :] = 0.0
        buf[a, b] = 1.0
        for r in range(1, n):
            k = n - r + 1
            off = offsets[r - 1]
            ilo = a - (r - 1)
            if ilo < 0:
                ilo = 0
            ihi = a if a < k - 2 else k - 2
            jhi = b if b < k - 1 else k - 1
            jlo0 = b - (r - 1)
            for i in range(ilo, ihi + 1):
                jlo = jlo0 if jlo0 > i + 1 else i + 1
                for j in range(jlo, jhi + 1):
                    m = buf[i, j]
                    if m != 0.0:
                        if fwd:
                            qflat[off + i * k + j] += m
                        else:
                            qflat[off + j * k + i] += m
            if r == n - 1:
                break
            z = csum[r - 1, k]
            kn = k - 1
            ilo = a - r
            if ilo < 0:
                ilo = 0
            ihi = a if a < kn - 2 else kn - 2
            jhi = b if b < kn - 1 else kn - 1
            jlo0 = b - r
            for i in range(ilo, ihi + 1):
                jlo = jlo0 if jlo0 > i + 1 else i + 1
                left = csum[r - 1, i + 1] / z
                for j in range(jlo, jhi + 1):
                    stay = (z - csum[r - 1, j + 1]) / z
                    mid = (csum[r - 1, j + 1] - csum[r - 1, i + 1]) / z
                    if mid < 0.0:
                        mid = 0.0
                    buf[i, j] = (
                        buf[i, j] * stay
                        + buf[i, j + 1] * mid
                        + buf[i + 1, j + 1] * left
                    )
