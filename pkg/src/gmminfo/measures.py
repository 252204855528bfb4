"""Entropy, cross-entropy and KL-divergence between Generalized Mallows Models.

All three measures split additively over ranks.  Entropy never needs the pair
tracker: the stagewise codes are independent truncated geometrics, so

    H(p) = sum_r H(geom(theta_r; n-r+1))

independent of the central permutation.  Cross-entropy does need it, because
the codes of p-samples read against q's center are the codes of an
identity-centered model read against the relative center

    rho = relabel(q.sigma, p.sigma)

and their expectations are the ``sbar`` sequence.  Per rank,

    XE_r(p, q) = -sbar_r(rho; p.theta) * ln(q.theta_r) + ln Z_{n-r+1}(q.theta_r)

and KL is the per-rank difference XE - H, nonnegative because
``sbar_r(rho; alpha) >= mean(geom(alpha_r; n-r+1))`` for every center.

Values are in nats; :meth:`InfoReport.in_bits` converts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import math

import numpy as np

from .errors import DimensionMismatchError
from .model import GmmParams
from .pairtracker import sbar
from .perm import relabel

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class InfoReport:
    """An information measure together with its additive per-rank split.

    ``per_rank[r-1]`` is the rank-r contribution; the entries sum to
    ``value``.  ``meta`` records the inputs (and the relative center for the
    two-model measures) for diagnostics; it stays out of the JSON form.  For
    n = 1 models value/per_rank are trivially zero/empty.
    """

    value: float
    per_rank: np.ndarray = field(repr=False)
    units: str = "nats"
    meta: dict = field(default_factory=dict, repr=False)

    def in_bits(self) -> "InfoReport":
        if self.units == "bits":
            return self
        return InfoReport(self.value / _LN2, self.per_rank / _LN2, "bits", self.meta)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "per_rank": [float(x) for x in self.per_rank],
            "units": self.units,
        }


def _report(per_rank: np.ndarray, **meta) -> InfoReport:
    return InfoReport(float(np.sum(per_rank)), per_rank, meta=meta)


def _check_sizes(p: GmmParams, q: GmmParams):
    if p.n != q.n:
        raise DimensionMismatchError(f"model sizes differ: {p.n} vs {q.n}")


def entropy(p: GmmParams) -> InfoReport:
    """Shannon entropy of the model, in nats.

    Depends on the dispersions only; models sharing ``theta`` have identical
    reports whatever their centers.  Equals ``ln n!`` when every ``theta_r``
    is 1.
    """
    per_rank = np.array([p.stage(r).entropy() for r in range(1, p.n)])
    return _report(per_rank, p=p)


def cross_entropy(
    p: GmmParams,
    q: GmmParams,
    *,
    backend: str | None = None,
    threads: int = 1,
) -> InfoReport:
    """Cross-entropy ``-E_p[ln q(pi)]`` in nats, exactly and in polynomial time.

    Reduces to :func:`entropy` when ``p == q``; the computation still runs
    through the pair tracker, so that identity is a test target rather than a
    shortcut.
    """
    _check_sizes(p, q)
    if p.n == 1:
        return _report(np.zeros(0), p=p, q=q)
    rho = relabel(q.sigma, p.sigma)
    s = sbar(rho, p.theta, backend=backend, threads=threads)
    per_rank = -s * np.log(q.theta) + q._log_z
    return _report(per_rank, p=p, q=q, rho=rho)


def kl_divergence(
    p: GmmParams,
    q: GmmParams,
    *,
    backend: str | None = None,
    threads: int = 1,
) -> InfoReport:
    """KL-divergence ``E_p[ln(p(pi)/q(pi))]`` in nats.

    Computed as cross-entropy minus entropy per rank.  Every per-rank entry is
    nonnegative up to roundoff; the total is zero iff the models define the
    same distribution.  With equal centers it collapses to the sum of
    stagewise truncated-geometric divergences.
    """
    _check_sizes(p, q)
    xe = cross_entropy(p, q, backend=backend, threads=threads)
    h = entropy(p)
    return _report(xe.per_rank - h.per_rank, **xe.meta)
