import itertools

import numpy as np

import gmminfo as gi


def all_perms(n):
    """All of S_n as Permutation objects, lexicographic."""
    return [gi.Permutation.of(p) for p in itertools.permutations(range(1, n + 1))]


def random_params(n, rng, low=0.1, unit=False):
    sigma = gi.Permutation.random(n, rng)
    theta = np.ones(n - 1) if unit else rng.uniform(low, 1.0, n - 1)
    return gi.GmmParams(sigma, theta)


def pair_position_dist(n, alpha, r, a, b):
    """Joint distribution of the surviving positions of items a and b.

    Enumerates all of S_n under an identity-centered model with dispersions
    ``alpha``; for each permutation whose first r-1 entries avoid both items,
    records the 1-based positions of a and b inside the sorted survivor set.
    Returns a dict {(i, j): probability}; the values sum to the survival
    probability of the pair.  Totally independent of the tracker code paths.
    """
    params = gi.GmmParams(gi.Permutation.identity(n), np.asarray(alpha, float))
    out = {}
    for pi in all_perms(n):
        placed = set(pi.items[: r - 1])
        if a in placed or b in placed:
            continue
        survivors = sorted(set(range(1, n + 1)) - placed)
        key = (survivors.index(a) + 1, survivors.index(b) + 1)
        out[key] = out.get(key, 0.0) + gi.prob(params, pi)
    return out
