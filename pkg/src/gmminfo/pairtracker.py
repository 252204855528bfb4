"""Expected inversion statistics under stagewise sampling, in polynomial time.

The quantity of interest is the sequence of averaged principal submatrices

    Qbar_k = sum over item sets A of size k of  P(A) * Q(sigma)_{A,A}

for k = n down to 2, where ``A`` is the random set of items still unplaced
after ``r-1`` stagewise deletions (``k = n-r+1``) under an identity-centered
model with dispersions ``alpha``, and ``Q(sigma)_{A,A}`` keeps rows/columns
of the inversion matrix at the surviving items in natural order.  Summing
over item sets directly costs O(2^n); instead, every unordered item pair
``{a, b}`` is tracked through the deletions via the joint distribution of its
two positions inside the shrinking remaining set.

Position bookkeeping for a pair starting at 0-based positions ``(i, j)``,
``i < j``, when one item is deleted from a remaining set of size ``k`` by
sampling 0-based position ``s`` with probability ``alpha_r**s / Z_k``:

    s > j          -> (i, j)        weight  sum_{s=j+1}^{k-1} alpha_r**s / Z_k
    i < s < j      -> (i, j-1)      weight  sum_{s=i+1}^{j-1} alpha_r**s / Z_k
    s < i          -> (i-1, j-1)    weight  sum_{s=0}^{i-1}   alpha_r**s / Z_k
    s = i or s = j -> pair leaves the remaining set; its mass is dropped

so each pair's distribution is sub-stochastic: its total mass equals the
probability that both items survive.  A pair contributes its mass at
``(i, j)`` to ``Qbar_k[i, j]`` when ``a`` precedes ``b`` in sigma and to
``Qbar_k[j, i]`` otherwise.  The weight sums are prefix-sum lookups, exact
for ``alpha_r = 1`` (uniform stages).

The expected stagewise codes follow from the same matrices:

    sbar_r = (1/Z_k) * sum_{u,v} Qbar_k[u, v] * alpha_r**v        (0-based v)

i.e. column sums weighted by the sampling probability of the column position.
For sigma = id this collapses to the truncated-geometric means.

Two production engines (numba / numpy, see ``_backend``) share exactly this
arithmetic; :class:`PairTracker` is the transparent dict-based reference used
for diagnostics and small-n verification.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from ._backend import resolve_backend
from .errors import InvalidParameterError
from .perm import Permutation, inversion_matrix
from .truncgeom import powers


def _validate(sigma: Permutation, alpha: Sequence[float]) -> np.ndarray:
    n = sigma.n
    if n < 2:
        raise InvalidParameterError("pair tracking needs at least 2 items")
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (n - 1,):
        raise InvalidParameterError(
            f"alpha has shape {alpha.shape}, expected ({n - 1},)"
        )
    if np.any(np.isnan(alpha)) or np.any(alpha <= 0.0) or np.any(alpha > 1.0):
        raise InvalidParameterError("every alpha_r must lie in (0, 1]")
    return alpha


def _prefix_sums(alpha: np.ndarray, n: int) -> np.ndarray:
    """csum[r-1, t] = sum_{s<t} alpha_r**s, for t = 0..n."""
    csum = np.zeros((n - 1, n + 1))
    for r in range(1, n):
        csum[r - 1, 1:] = np.cumsum(powers(float(alpha[r - 1]), n))
    return csum


def _rank_offsets(n: int) -> tuple[np.ndarray, int]:
    """Flat-buffer offsets of the per-rank k*k blocks, and the total length."""
    sizes = np.array([(n - r + 1) ** 2 for r in range(1, n)], dtype=np.int64)
    offsets = np.zeros(n - 1, dtype=np.int64)
    offsets[1:] = np.cumsum(sizes[:-1])
    return offsets, int(np.sum(sizes))


class PairTracker:
    """Reference engine: explicit per-pair sparse position distributions.

    Exposes the internals the fast kernels do not: for every pair ``{a, b}``
    (1-based items, ``a < b``) a dict mapping 1-based position pairs
    ``(i, j)``, ``i < j <= k``, to probability mass.  Start state at rank 1
    puts mass 1 at ``(a, b)``.  Intended for inspection and verification;
    cost grows like n^5, so keep n modest.
    """

    def __init__(self, sigma: Permutation, alpha: Sequence[float]):
        self.sigma = sigma
        self.alpha = _validate(sigma, alpha)
        self.n = sigma.n
        self._csum = _prefix_sums(self.alpha, self.n)
        self._q = inversion_matrix(sigma)
        self.rank = 1
        self.states: dict[tuple[int, int], dict[tuple[int, int], float]] = {
            (a, b): {(a, b): 1.0}
            for a in range(1, self.n)
            for b in range(a + 1, self.n + 1)
        }

    @property
    def k(self) -> int:
        """Remaining-set size at the current rank."""
        return self.n - self.rank + 1

    def pair_mass(self, a: int, b: int) -> float:
        """Probability that both ``a`` and ``b`` are still unplaced."""
        return sum(self.states[(a, b)].values())

    def qbar(self) -> np.ndarray:
        k = self.k
        out = np.zeros((k, k))
        for (a, b), st in self.states.items():
            fwd = self._q[a - 1, b - 1] == 1
            for (i, j), m in st.items():
                if fwd:
                    out[i - 1, j - 1] += m
                else:
                    out[j - 1, i - 1] += m
        return out

    def advance(self) -> None:
        """One deletion step: rank r -> r+1."""
        if self.rank >= self.n - 1:
            raise InvalidParameterError("tracker already at the last rank")
        k = self.k
        cs = self._csum[self.rank - 1]
        z = cs[k]
        for key, st in self.states.items():
            new: dict[tuple[int, int], float] = {}
            for (i, j), m in st.items():
                w_stay = (z - cs[j]) / z
                if w_stay > 0.0:
                    new[(i, j)] = new.get((i, j), 0.0) + m * w_stay
                if j > i + 1:
                    w_mid = (cs[j - 1] - cs[i]) / z
                    new[(i, j - 1)] = new.get((i, j - 1), 0.0) + m * w_mid
                if i > 1:
                    w_left = cs[i - 1] / z
                    new[(i - 1, j - 1)] = new.get((i - 1, j - 1), 0.0) + m * w_left
            self.states[key] = new
        self.rank += 1

    def run(self):
        """Yield (rank, qbar) for every rank from the current one to n-1."""
        while True:
            yield self.rank, self.qbar()
            if self.rank == self.n - 1:
                return
            self.advance()


def _pair_arrays(sigma: Permutation, inversions_only: bool):
    """0-based start positions and orientation bits for the tracked pairs."""
    q = inversion_matrix(sigma)
    starts_a, starts_b, orient = [], [], []
    n = sigma.n
    for a in range(n - 1):
        for b in range(a + 1, n):
            fwd = q[a, b] == 1
            if inversions_only and fwd:
                continue
            starts_a.append(a)
            starts_b.append(b)
            orient.append(1 if fwd else 0)
    return (
        np.asarray(starts_a, dtype=np.int64),
        np.asarray(starts_b, dtype=np.int64),
        np.asarray(orient, dtype=np.uint8),
    )


def _run_kernel(sigma, alpha, inversions_only, backend, threads):
    n = sigma.n
    csum = _prefix_sums(alpha, n)
    offsets, total = _rank_offsets(n)
    starts_a, starts_b, orient = _pair_arrays(sigma, inversions_only)

    if backend == "numba":
        from ._kernels_numba import accumulate_pairs
    else:
        from ._kernels_numpy import accumulate_pairs

    def run_range(lo, hi):
        part = np.zeros(total)
        accumulate_pairs(
            part, offsets, starts_a[lo:hi], starts_b[lo:hi], orient[lo:hi], csum, n
        )
        return part

    n_pairs = starts_a.shape[0]
    if threads <= 1 or n_pairs < 2 * threads:
        qflat = run_range(0, n_pairs)
    else:
        bounds = np.linspace(0, n_pairs, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(run_range, bounds[:-1], bounds[1:])
            )
        qflat = np.sum(parts, axis=0)

    out = []
    for r in range(1, n):
        k = n - r + 1
        off = offsets[r - 1]
        out.append(qflat[off : off + k * k].reshape(k, k).copy())
    return out


def _reference_qbar(sigma, alpha, inversions_only):
    tracker = PairTracker(sigma, alpha)
    if inversions_only:
        keep = {
            key for key in tracker.states if tracker._q[key[0] - 1, key[1] - 1] == 0
        }
        tracker.states = {k: v for k, v in tracker.states.items() if k in keep}
    return [qb for _, qb in tracker.run()]


def qbar_sequence(
    sigma: Permutation,
    alpha: Sequence[float],
    *,
    backend: str | None = None,
    threads: int = 1,
) -> list[np.ndarray]:
    """Averaged principal submatrices ``Qbar_k`` for k = n down to 2.

    ``Qbar_k[i, j]`` (0-based) is the probability that positions ``i`` and
    ``j`` of the remaining set at rank ``r = n-k+1`` are both occupied and the
    item at ``i`` precedes the item at ``j`` in ``sigma``.  The first matrix
    is ``Q(sigma)`` itself.  The sampling center is the identity; relabel
    first for other centers.
    """
    alpha = _validate(sigma, alpha)
    backend = resolve_backend(backend)
    if backend == "reference":
        return _reference_qbar(sigma, alpha, False)
    return _run_kernel(sigma, alpha, False, backend, threads)


def qbar_inversions_only(
    sigma: Permutation,
    alpha: Sequence[float],
    *,
    backend: str | None = None,
    threads: int = 1,
) -> list[np.ndarray]:
    """Same recursion restricted to inverted pairs (lower-triangle component).

    Tracks only pairs ``a < b`` whose order sigma flips, so the output is the
    part of :func:`qbar_sequence` landing strictly below the diagonal.  All
    zeros for sigma = id.  Kept as the minimal variant; the full tracking is
    the production path.
    """
    alpha = _validate(sigma, alpha)
    backend = resolve_backend(backend)
    if backend == "reference":
        return _reference_qbar(sigma, alpha, True)
    return _run_kernel(sigma, alpha, True, backend, threads)


def sbar(
    sigma: Permutation,
    alpha: Sequence[float],
    *,
    backend: str | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Expected stagewise codes ``E[s_r(pi | sigma)]`` for r = 1..n-1 under
    the identity-centered model with dispersions ``alpha``.

    Entry ``r-1`` depends on ``alpha`` only through ``alpha_{1:r}``; for
    sigma = id it equals the mean of ``geom(alpha_r; n-r+1)``.
    """
    alpha = _validate(sigma, alpha)
    qbars = qbar_sequence(sigma, alpha, backend=backend, threads=threads)
    n = sigma.n
    out = np.empty(n - 1)
    for r in range(1, n):
        k = n - r + 1
        w = powers(float(alpha[r - 1]), k)
        out[r - 1] = float(qbars[r - 1].sum(axis=0) @ w) / float(np.sum(w))
    return out
