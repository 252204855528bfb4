"""Brute-force reference computations by exhaustive enumeration of S_n.

Everything here is the slow, obviously-correct path: sums over all ``n!``
permutations (or all length ``r-1`` prefixes), used to validate the
polynomial-time implementations at small ``n``.  Calls refuse ``n`` above a
cap (default 8, overridable per call or via the ``ORACLE_MAX_N`` environment
variable) so a typo can never launch a week-long loop.

Permutations are enumerated in lexicographic order, so iteration order is
reproducible.
"""

from __future__ import annotations

import itertools
import math
import os
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EnumerationLimitError,
    InvalidParameterError,
)
from .model import GmmParams, log_prob
from .perm import Permutation, inversion_matrix
from .truncgeom import z_norm

DEFAULT_MAX_N = 8


def max_enumeration_n() -> int:
    """Effective cap: the ORACLE_MAX_N environment override, else 8."""
    env = os.environ.get("ORACLE_MAX_N")
    return DEFAULT_MAX_N if env is None else int(env)


def _check_cap(n: int, max_n: int | None):
    cap = max_enumeration_n() if max_n is None else max_n
    if n > cap:
        raise EnumerationLimitError(
            f"enumeration over S_{n} refused (cap is {cap}; "
            f"{math.factorial(n)} permutations)"
        )


def all_permutations(n: int, max_n: int | None = None) -> Iterator[Permutation]:
    """All of S_n in lexicographic order."""
    _check_cap(n, max_n)
    for items in itertools.permutations(range(1, n + 1)):
        yield Permutation(items)


def oracle_measures(
    p: GmmParams, q: GmmParams, max_n: int | None = None
) -> tuple[float, float, float]:
    """(entropy, cross-entropy, KL) of ``p`` against ``q`` by full enumeration.

    ``H = -sum P ln P``, ``XE = -sum P ln Q``, ``KL = XE - H``; all in nats.
    """
    if p.n != q.n:
        raise DimensionMismatchError("models must have the same number of items")
    h = 0.0
    xe = 0.0
    for pi in all_permutations(p.n, max_n):
        lp = log_prob(p, pi)
        lq = log_prob(q, pi)
        w = math.exp(lp)
        h -= w * lp
        xe -= w * lq
    return h, xe, xe - h


def _stagewise_prefix_probs(
    n: int, alpha: np.ndarray, r: int
) -> Iterator[tuple[tuple[int, ...], float]]:
    """All prefixes ``pi_{1:r-1}`` with their stagewise probability under the
    identity-centered model with dispersions ``alpha``."""
    zs = [z_norm(float(alpha[j]), n - j) for j in range(r - 1)]
    for prefix in itertools.permutations(range(1, n + 1), r - 1):
        w = 1.0
        remaining = list(range(1, n + 1))
        for j, e in enumerate(prefix):
            s = remaining.index(e)
            w *= float(alpha[j]) ** s / zs[j]
            remaining.pop(s)
        yield prefix, w


def oracle_sbar(
    sigma: Permutation, alpha: Sequence[float], max_n: int | None = None
) -> np.ndarray:
    """Expected stagewise codes ``E[s_r(pi | sigma)]`` under the
    identity-centered model with dispersions ``alpha``.

    Computed twice: as the direct expectation over all of S_n, and by the
    conditional decomposition (enumerate prefixes, inner sum over the next
    item only).  The two must agree to float accuracy; a disagreement means a
    broken invariant and raises.
    """
    n = sigma.n
    _check_cap(n, max_n)
    alpha = np.asarray(alpha, dtype=np.float64)
    ident = Permutation.identity(n)
    p_id = GmmParams(ident, alpha)

    from .perm import encode  # local import to keep module load light

    direct = np.zeros(n - 1)
    for pi in all_permutations(n, max_n):
        w = math.exp(log_prob(p_id, pi))
        direct += w * encode(pi, sigma)

    srank = np.array([sigma.rank_of(e) for e in range(1, n + 1)])
    conditional = np.zeros(n - 1)
    for r in range(1, n):
        k = n - r + 1
        zr = z_norm(float(alpha[r - 1]), k)
        acc = 0.0
        for prefix, w in _stagewise_prefix_probs(n, alpha, r):
            remaining = [e for e in range(1, n + 1) if e not in prefix]
            inner = 0.0
            for s_id, e in enumerate(remaining):
                s_sigma = sum(1 for f in remaining if srank[f - 1] < srank[e - 1])
                inner += float(alpha[r - 1]) ** s_id * s_sigma
            acc += w * inner
        conditional[r - 1] = acc / zr

    if not np.allclose(direct, conditional, rtol=0.0, atol=1e-9):
        raise AssertionError(
            "conditional and direct expectations disagree: "
            f"{direct} vs {conditional}"
        )
    return direct


def oracle_qbar(
    sigma: Permutation,
    alpha: Sequence[float],
    r: int,
    max_n: int | None = None,
) -> np.ndarray:
    """Average principal submatrix ``sum_A P(A) Q(sigma)_{A,A}`` at rank ``r``.

    ``A`` runs over the surviving item sets after ``r-1`` stagewise deletions
    under the identity-centered model; the block keeps rows/columns of the
    inversion matrix at the surviving items, in natural item order.  ``r=1``
    returns ``Q(sigma)`` itself.
    """
    n = sigma.n
    _check_cap(n, max_n)
    if not 1 <= r <= n - 1:
        raise InvalidParameterError(f"rank {r} outside 1..{n - 1}")
    alpha = np.asarray(alpha, dtype=np.float64)
    q = inversion_matrix(sigma).astype(np.float64)
    k = n - r + 1
    out = np.zeros((k, k))
    for prefix, w in _stagewise_prefix_probs(n, alpha, r):
        alive = [e - 1 for e in range(1, n + 1) if e not in prefix]
        out += w * q[np.ix_(alive, alive)]
    return out
