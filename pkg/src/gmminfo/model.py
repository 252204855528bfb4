"""The Generalized Mallows Model: parameters, exact log-probability, sampling.

A model is a central permutation ``sigma`` plus a dispersion vector
``theta_1..theta_{n-1}`` in ``(0, 1]``.  The probability of a permutation
``pi`` factors over ranks into truncated geometrics:

    P(pi) = prod_r  theta_r**s_r(pi|sigma) / Z_{n-r+1}(theta_r)

with ``s_r`` the stagewise codes of :func:`gmminfo.perm.encode`.  Log-domain
probability is the primitive; the linear-domain value is a wrapper (products
of n-1 factors underflow for large n).  The Mallows model is the special case
of a constant dispersion vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import math

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .perm import Permutation, decode, encode
from .truncgeom import TruncGeom, z_norm


@dataclass(frozen=True)
class GmmParams:
    """Central permutation plus per-rank dispersions ``(0, 1]^(n-1)``."""

    sigma: Permutation
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64)
        object.__setattr__(self, "theta", theta)
        if theta.shape != (self.n - 1,):
            raise DimensionMismatchError(
                f"theta has shape {theta.shape}, expected ({self.n - 1},)"
            )
        if np.any(np.isnan(theta)) or np.any(theta <= 0.0) or np.any(theta > 1.0):
            raise InvalidParameterError("every theta_r must lie in (0, 1]")

    @property
    def n(self) -> int:
        return self.sigma.n

    @cached_property
    def _log_z(self) -> np.ndarray:
        # ln Z_{n-r+1}(theta_r) for ranks r = 1..n-1
        n = self.n
        return np.array(
            [math.log(z_norm(t, n - r)) for r, t in enumerate(self.theta)]
        )

    def stage(self, r: int) -> TruncGeom:
        """The truncated geometric factor at 1-based rank ``r``."""
        if not 1 <= r <= self.n - 1:
            raise InvalidParameterError(f"rank {r} outside 1..{self.n - 1}")
        return TruncGeom(float(self.theta[r - 1]), self.n - r + 1)


def mallows(sigma: Permutation, theta: float) -> GmmParams:
    """Constant-dispersion special case."""
    return GmmParams(sigma, np.full(sigma.n - 1, float(theta)))


def log_prob(params: GmmParams, pi: Permutation) -> float:
    """Exact log-probability of ``pi`` under ``params`` (nats)."""
    if pi.n != params.n:
        raise DimensionMismatchError(
            f"permutation size {pi.n} does not match model size {params.n}"
        )
    if params.n == 1:
        return 0.0
    s = encode(pi, params.sigma)
    # log(1) == 0.0 exactly, so theta_r = 1 needs no special case
    return float(np.sum(s * np.log(params.theta)) - np.sum(params._log_z))


def prob(params: GmmParams, pi: Permutation) -> float:
    return math.exp(log_prob(params, pi))


def sample(
    params: GmmParams, rng: np.random.Generator, count: int | None = None
) -> Permutation | list[Permutation]:
    """Draw permutations by the stagewise construction (exact, no MCMC).

    Codes ``s_r ~ geom(theta_r; n-r+1)`` are drawn independently per rank and
    decoded against ``sigma``.  With ``count=None`` a single permutation is
    returned, otherwise a list of ``count``.  The caller owns the random
    state; equal seeds give identical streams.
    """
    n = params.n
    m = 1 if count is None else count
    codes = np.zeros((m, max(n - 1, 0)), dtype=np.int64)
    for r in range(1, n):
        codes[:, r - 1] = params.stage(r).sample(rng, size=m)
    perms = [decode(params.sigma, codes[i]) for i in range(m)]
    return perms[0] if count is None else perms
