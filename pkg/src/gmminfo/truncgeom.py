"""Truncated geometric distribution ``geom(theta; k)`` on ``{0, ..., k-1}``.

The pmf is ``theta**s / Z_k(theta)`` with normalizer
``Z_k(theta) = 1 + theta + ... + theta**(k-1)``.  ``theta`` lives in ``(0, 1]``;
``theta = 1`` is the uniform distribution on ``{0..k-1}`` and is supported
exactly, not as a limit.  All information quantities are in nats.

Note the sign in the closed forms: ``-ln pmf(s) = -s*ln(theta) + ln Z_k``, so
entropy is ``-mean * ln(theta) + ln Z_k`` (both terms nonnegative).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import math

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError


def _check_theta(theta: float):
    if not (0.0 < theta <= 1.0) or math.isnan(theta):
        raise InvalidParameterError(f"theta must lie in (0, 1], got {theta}")


def _check_k(k: int):
    if k < 1:
        raise InvalidParameterError(f"support size k must be >= 1, got {k}")


def powers(theta: float, k: int) -> np.ndarray:
    """``[1, theta, ..., theta**(k-1)]`` as float64."""
    return np.power(theta, np.arange(k, dtype=np.float64))


def z_norm(theta: float, k: int) -> float:
    """Partial geometric sum ``1 + theta + ... + theta**(k-1)``.

    Computed by direct summation, which is exact for ``theta = 1`` and free of
    the cancellation the closed form ``(1 - theta**k) / (1 - theta)`` suffers
    near ``theta = 1``.
    """
    _check_theta(theta)
    _check_k(k)
    return float(np.sum(powers(theta, k)))


@dataclass(frozen=True)
class TruncGeom:
    """Value type for one stagewise factor of a Generalized Mallows Model."""

    theta: float
    k: int

    def __post_init__(self):
        _check_theta(self.theta)
        _check_k(self.k)

    @cached_property
    def z(self) -> float:
        return z_norm(self.theta, self.k)

    def pmf(self) -> np.ndarray:
        return powers(self.theta, self.k) / self.z

    def mean(self) -> float:
        """Expected value ``sum_s s * theta**s / Z_k``."""
        p = powers(self.theta, self.k)
        return float(np.arange(self.k, dtype=np.float64) @ p) / self.z

    def entropy(self) -> float:
        """``-mean * ln(theta) + ln Z_k``, equal to ``-sum pmf * ln pmf``."""
        if self.theta == 1.0:
            return math.log(self.k)
        return -self.mean() * math.log(self.theta) + math.log(self.z)

    def kl(self, other: "TruncGeom") -> float:
        """KL-divergence to another truncated geometric on the same support.

        ``mean * ln(theta/theta') + ln(Z_k(theta')/Z_k(theta))``; nonnegative,
        zero iff the distributions coincide.
        """
        if self.k != other.k:
            raise DimensionMismatchError(
                f"support sizes differ: {self.k} vs {other.k}"
            )
        return self.mean() * math.log(self.theta / other.theta) + math.log(
            other.z / self.z
        )

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Inverse-CDF draw(s); deterministic for a seeded generator."""
        cdf = np.cumsum(self.pmf())
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        idx = np.minimum(idx, self.k - 1)  # guard cdf[-1] rounding below 1
        return int(idx) if size is None else idx.astype(np.int64)
