"""Permutations and their inversion combinatorics.

Conventions used throughout the package:

- A permutation of n items is an ordered list ``[pi_1, ..., pi_n]`` of the
  integer item labels ``1..n``; ``pi_i`` is the item at rank ``i``.  Ranks are
  1-based wherever they are user-visible (CLI, JSON, docstrings).
- The inversion matrix ``Q(pi)`` is the n x n binary matrix with
  ``Q[e][e'] = 1`` iff item ``e`` is ranked before item ``e'`` in ``pi``
  (rows/columns in natural item order, diagonal fixed to 0).  Its transpose
  with zero diagonal is the precedence matrix ``M``.
- The stagewise code ``s_r(pi | sigma)`` for ranks ``r = 1..n-1`` counts how
  many still-unplaced items precede ``pi_r`` in ``sigma``; the codes sum to
  the Kendall tau distance between ``pi`` and ``sigma``.

Matrices returned here are plain numpy arrays indexed ``[e-1, e'-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError


@dataclass(frozen=True)
class Permutation:
    """An ordering of the items ``1..n`` with O(1) rank lookup."""

    items: tuple[int, ...]

    def __post_init__(self):
        n = len(self.items)
        if n < 1:
            raise InvalidParameterError("a permutation needs at least one item")
        if sorted(self.items) != list(range(1, n + 1)):
            raise InvalidParameterError(
                f"not a permutation of 1..{n}: {list(self.items)}"
            )

    @classmethod
    def of(cls, items: Iterable[int]) -> "Permutation":
        return cls(tuple(int(x) for x in items))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(tuple(int(x) + 1 for x in rng.permutation(n)))

    @property
    def n(self) -> int:
        return len(self.items)

    @cached_property
    def _rank(self) -> dict[int, int]:
        return {e: r for r, e in enumerate(self.items, start=1)}

    def rank_of(self, item: int) -> int:
        """1-based rank of ``item``."""
        try:
            return self._rank[item]
        except KeyError:
            raise InvalidParameterError(f"item {item} not in permutation") from None

    def inverse(self) -> "Permutation":
        """The inverse permutation: entry ``e`` is the rank of item ``e``."""
        return Permutation(tuple(self._rank[e] for e in range(1, self.n + 1)))

    def zero_based(self) -> np.ndarray:
        """Items shifted to ``0..n-1`` as an int64 array, for kernel use."""
        return np.asarray(self.items, dtype=np.int64) - 1

    def is_identity(self) -> bool:
        return all(e == i for i, e in enumerate(self.items, start=1))

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in self.items) + "]"


def _check_same_n(pi: Permutation, sigma: Permutation):
    if pi.n != sigma.n:
        raise DimensionMismatchError(
            f"permutations of different sizes: {pi.n} vs {sigma.n}"
        )


def rank_array(pi: Permutation) -> np.ndarray:
    """int64 array whose entry ``e-1`` is the 1-based rank of item ``e``."""
    ranks = np.empty(pi.n, dtype=np.int64)
    ranks[pi.zero_based()] = np.arange(1, pi.n + 1)
    return ranks


def inversion_matrix(pi: Permutation) -> np.ndarray:
    """Binary matrix with ``Q[e-1, e'-1] = 1`` iff ``e`` is ranked before ``e'``.

    Column sums reconstruct the ranks: ``1 + sum(Q[:, e-1])`` is the rank of
    item ``e`` in ``pi``.
    """
    r = rank_array(pi)
    return (r[:, None] < r[None, :]).astype(np.uint8)


def precedence_matrix(pi: Permutation) -> np.ndarray:
    """Transpose orientation of the inversion matrix: ``M[e-1, e'-1] = 1`` iff
    ``e'`` is ranked before ``e``.  Strictly lower-triangular for the identity.
    """
    return inversion_matrix(pi).T.copy()


def kendall_distance(pi: Permutation, sigma: Permutation) -> int:
    """Number of item pairs ordered oppositely in ``pi`` and ``sigma``."""
    _check_same_n(pi, sigma)
    r1 = rank_array(pi)
    r2 = rank_array(sigma)
    d1 = r1[:, None] < r1[None, :]
    d2 = r2[:, None] < r2[None, :]
    # each discordant unordered pair appears once in the upper, once in the
    # lower triangle of (d1 != d2)
    return int(np.sum(d1 != d2)) // 2


def encode(pi: Permutation, sigma: Permutation) -> np.ndarray:
    """Stagewise code of ``pi`` relative to ``sigma``.

    Entry ``r-1`` (ranks ``1..n-1``) counts the items among
    ``{pi_r, ..., pi_n}`` that precede ``pi_r`` in ``sigma``.  The entries sum
    to ``kendall_distance(pi, sigma)``.
    """
    _check_same_n(pi, sigma)
    n = pi.n
    srank = rank_array(sigma)
    remaining = np.ones(n, dtype=bool)
    code = np.empty(n - 1, dtype=np.int64)
    for r, e in enumerate(pi.items[:-1]):
        remaining[e - 1] = False
        code[r] = int(np.sum(remaining & (srank < srank[e - 1])))
    return code


def decode(sigma: Permutation, code: Sequence[int]) -> Permutation:
    """Rebuild a permutation from ``sigma`` and a stagewise code.

    At stage ``r`` the item at position ``1 + code[r-1]`` of the surviving
    ``sigma``-list is selected and removed.  Inverse of :func:`encode`.
    """
    n = sigma.n
    code = np.asarray(code, dtype=np.int64)
    if code.shape != (n - 1,):
        raise DimensionMismatchError(
            f"code length {code.shape} does not match n={n} (need n-1 entries)"
        )
    pool = list(sigma.items)
    out = []
    for r, s in enumerate(code):
        if not 0 <= s <= n - 1 - r:
            raise InvalidParameterError(
                f"code entry {int(s)} at rank {r + 1} outside 0..{n - 1 - r}"
            )
        out.append(pool.pop(int(s)))
    out.extend(pool)
    return Permutation(tuple(out))


def relabel(pi: Permutation, sigma: Permutation) -> Permutation:
    """Rewrite ``pi`` in the coordinates of ``sigma``: entry ``i`` becomes the
    rank of ``pi_i`` in ``sigma``.  ``relabel(sigma, sigma)`` is the identity,
    and Kendall distance and stagewise codes are invariant under relabeling
    both arguments jointly.
    """
    _check_same_n(pi, sigma)
    return Permutation(tuple(sigma.rank_of(e) for e in pi.items))
