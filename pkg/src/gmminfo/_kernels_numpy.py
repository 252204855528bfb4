"""Vectorized numpy engine for the pair-tracking recursion.

State layout: a chunk of item pairs is evolved together as a dense tensor
``S[p, i, j]`` holding the probability that pair ``p`` sits at 0-based
positions ``(i, j)`` of the (identity-sorted) remaining set.  One rank step
is three shifted multiply-adds; the weight factors depend only on positions,
never on the pair, which is what makes the chunked broadcast valid.

See ``pairtracker`` for the position/weight conventions shared with the
numba kernel.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 512  # pairs per block; bounds peak memory at ~chunk * n^2 floats


def accumulate_pairs(
    qflat: np.ndarray,
    offsets: np.ndarray,
    starts_a: np.ndarray,
    starts_b: np.ndarray,
    orient: np.ndarray,
    csum: np.ndarray,
    n: int,
) -> None:
    """Add every pair's position masses, oriented, into the flat rank blocks."""
    n_pairs = starts_a.shape[0]
    for lo in range(0, n_pairs, _CHUNK):
        hi = min(lo + _CHUNK, n_pairs)
        _accumulate_chunk(
            qflat,
            offsets,
            starts_a[lo:hi],
            starts_b[lo:hi],
            orient[lo:hi],
            csum,
            n,
        )


def _accumulate_chunk(qflat, offsets, a, b, orient, csum, n):
    c = a.shape[0]
    if c == 0:
        return
    s = np.zeros((c, n, n))
    s[np.arange(c), a, b] = 1.0
    w_fwd = orient.astype(np.float64)
    w_rev = 1.0 - w_fwd

    for r in range(1, n):
        k = n - r + 1
        off = offsets[r - 1]
        flat = s.reshape(c, k * k)
        block = (w_fwd @ flat).reshape(k, k) + (w_rev @ flat).reshape(k, k).T
        qflat[off : off + k * k] += block.ravel()

        if r == n - 1:
            break
        cs = csum[r - 1]
        z = cs[k]
        kn = k - 1
        idx = np.arange(kn)
        stay = (z - cs[idx + 1]) / z
        left = cs[idx + 1] / z
        mid = np.maximum(cs[idx + 1][None, :] - cs[idx + 1][:, None], 0.0) / z
        s = (
            s[:, :kn, :kn] * stay[None, None, :]
            + s[:, :kn, 1:k] * mid[None, :, :]
            + s[:, 1:k, 1:k] * left[None, :, None]
        )
