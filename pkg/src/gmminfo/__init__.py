"""Exact information measures for (Generalized) Mallows Models over rankings.

The package provides:

- permutation utilities (inversion matrices, Kendall distance, stagewise
  codes) in :mod:`gmminfo.perm`,
- the truncated geometric building block in :mod:`gmminfo.truncgeom`,
- model parameters, exact log-probability and stagewise sampling in
  :mod:`gmminfo.model`,
- entropy / cross-entropy / KL-divergence in closed polynomial form in
  :mod:`gmminfo.measures`, powered by the pair-position recursion of
  :mod:`gmminfo.pairtracker`,
- a full-enumeration oracle for small n in :mod:`gmminfo.bruteforce`,
- a command line front end, ``gmminfo`` (see :mod:`gmminfo.cli`).

Numeric heavy lifting runs on a numba kernel when numba is importable and on
a vectorized numpy kernel otherwise; set ``GMMINFO_BACKEND`` to ``numba``,
``numpy`` or ``reference`` to force a choice.
"""

from ._backend import available_backends, resolve_backend
from .bruteforce import (
    all_permutations,
    max_enumeration_n,
    oracle_measures,
    oracle_qbar,
    oracle_sbar,
)
from .errors import (
    DimensionMismatchError,
    EnumerationLimitError,
    GmmInfoError,
    InvalidParameterError,
)
from .measures import InfoReport, cross_entropy, entropy, kl_divergence
from .model import GmmParams, log_prob, mallows, prob, sample
from .pairtracker import PairTracker, qbar_inversions_only, qbar_sequence, sbar
from .perm import (
    Permutation,
    decode,
    encode,
    inversion_matrix,
    kendall_distance,
    precedence_matrix,
    rank_array,
    relabel,
)
from .truncgeom import TruncGeom, powers, z_norm

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatchError",
    "EnumerationLimitError",
    "GmmInfoError",
    "GmmParams",
    "InfoReport",
    "InvalidParameterError",
    "PairTracker",
    "Permutation",
    "TruncGeom",
    "all_permutations",
    "available_backends",
    "cross_entropy",
    "decode",
    "encode",
    "entropy",
    "inversion_matrix",
    "kendall_distance",
    "kl_divergence",
    "log_prob",
    "mallows",
    "max_enumeration_n",
    "oracle_measures",
    "oracle_qbar",
    "oracle_sbar",
    "powers",
    "precedence_matrix",
    "prob",
    "qbar_inversions_only",
    "qbar_sequence",
    "rank_array",
    "relabel",
    "resolve_backend",
    "sample",
    "sbar",
    "z_norm",
    "__version__",
]
