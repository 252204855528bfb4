"""Command line front end.

Subcommands compute log-probabilities, draw samples, and evaluate entropy,
cross-entropy, KL-divergence and the expectation exports (sbar / qbar); each
compute subcommand has a brute-force twin under ``oracle`` and a ``--check``
flag that runs both and compares.  Results go to stdout as one-line JSON or
CSV; everything else goes to stderr.

Exit codes: 0 success, 1 usage or parse error, 2 domain error (invalid
parameters, size mismatch), 3 enumeration cap exceeded, 4 check disagreement.

Model files are JSON objects ``{"sigma": [...], "theta": [...]}``; a scalar
``theta`` broadcasts to all n-1 ranks.  Permutations on the command line are
comma-separated 1-based integers, e.g. ``--pi 3,1,4,2``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from ._backend import ENV_VAR, available_backends
from .bruteforce import oracle_measures, oracle_qbar, oracle_sbar
from .errors import (
    DimensionMismatchError,
    EnumerationLimitError,
    GmmInfoError,
    InvalidParameterError,
)
from .measures import cross_entropy, entropy, kl_divergence
from .model import GmmParams, log_prob, mallows, prob, sample
from .pairtracker import qbar_sequence, sbar
from .perm import Permutation, relabel

CHECK_TOL = 1e-9

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_CAP = 3
EXIT_CHECK = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad args; route through our own code instead
    def error(self, message):
        raise _UsageError(message)


def _parse_perm(text: str) -> Permutation:
    try:
        items = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise _UsageError(f"not a comma-separated integer list: {text!r}") from None
    return Permutation.of(items)


def _load_model(path: str) -> GmmParams:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise _UsageError(f"cannot read model file {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise _UsageError(f"model file {path} is not valid JSON: {e}") from None
    if not isinstance(data, dict) or "sigma" not in data or "theta" not in data:
        raise _UsageError(f'model file {path} needs keys "sigma" and "theta"')
    sigma = Permutation.of(data["sigma"])
    theta = data["theta"]
    if np.isscalar(theta):
        return mallows(sigma, float(theta))
    return GmmParams(sigma, np.asarray(theta, dtype=np.float64))


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _matrix_csv(m: np.ndarray) -> str:
    return "\n".join(",".join(repr(float(x)) for x in row) for row in m)


def _check_fail(what: str, delta: float) -> int:
    print(
        f"check failed: {what} disagrees with oracle by {delta:.3e} "
        f"(tolerance {CHECK_TOL:.0e})",
        file=sys.stderr,
    )
    return EXIT_CHECK


def _check_note(what: str, delta: float):
    print(f"check ok: {what} within {delta:.3e} of oracle", file=sys.stderr)


# ---------------------------------------------------------------- subcommands


def _cmd_prob(args) -> int:
    params = _load_model(args.model)
    pi = _parse_perm(args.pi)
    lp = log_prob(params, pi)
    print(json.dumps({"log_prob": lp, "prob": prob(params, pi)}))
    return EXIT_OK


def _cmd_sample(args) -> int:
    params = _load_model(args.model)
    rng = np.random.default_rng(args.seed)
    perms = sample(params, rng, count=args.count)
    lines = "\n".join(",".join(str(e) for e in p.items) for p in perms)
    _emit(lines, args.out)
    return EXIT_OK


def _cmd_entropy(args) -> int:
    params = _load_model(args.model)
    report = entropy(params)
    if args.check:
        ref = oracle_measures(params, params)[0]
        delta = abs(report.value - ref)
        if delta > CHECK_TOL:
            return _check_fail("entropy", delta)
        _check_note("entropy", delta)
    if args.bits:
        report = report.in_bits()
    print(json.dumps(report.to_dict()))
    return EXIT_OK


def _cmd_two_model(args, which: str) -> int:
    p = _load_model(args.from_file)
    q = _load_model(args.to_file)
    fn = cross_entropy if which == "xent" else kl_divergence
    report = fn(p, q, threads=args.threads)
    if args.check:
        _, xe_ref, kl_ref = oracle_measures(p, q)
        ref = xe_ref if which == "xent" else kl_ref
        delta = abs(report.value - ref)
        if delta > CHECK_TOL:
            return _check_fail(which, delta)
        _check_note(which, delta)
    if args.bits:
        report = report.in_bits()
    print(json.dumps(report.to_dict()))
    return EXIT_OK


def _relative_center(args, params: GmmParams) -> Permutation:
    if args.sigma2 is None:
        return Permutation.identity(params.n)
    return relabel(_parse_perm(args.sigma2), params.sigma)


def _cmd_sbar(args) -> int:
    params = _load_model(args.model)
    rho = _relative_center(args, params)
    values = sbar(rho, params.theta, threads=args.threads)
    if args.check:
        ref = oracle_sbar(rho, params.theta)
        delta = float(np.max(np.abs(values - ref)))
        if delta > CHECK_TOL:
            return _check_fail("sbar", delta)
        _check_note("sbar", delta)
    _emit(json.dumps([float(x) for x in values]), args.out)
    return EXIT_OK


def _cmd_qbar(args) -> int:
    params = _load_model(args.model)
    rho = _relative_center(args, params)
    if not 1 <= args.rank <= params.n - 1:
        raise InvalidParameterError(f"rank {args.rank} outside 1..{params.n - 1}")
    seq = qbar_sequence(rho, params.theta, threads=args.threads)
    matrix = seq[args.rank - 1]
    if args.check:
        ref = oracle_qbar(rho, params.theta, args.rank)
        delta = float(np.max(np.abs(matrix - ref)))
        if delta > CHECK_TOL:
            return _check_fail("qbar", delta)
        _check_note("qbar", delta)
    _emit(_matrix_csv(matrix), args.out)
    return EXIT_OK


def _cmd_oracle_entropy(args) -> int:
    params = _load_model(args.model)
    value = oracle_measures(params, params)[0]
    if args.bits:
        print(json.dumps({"value": value / np.log(2.0), "units": "bits"}))
    else:
        print(json.dumps({"value": value, "units": "nats"}))
    return EXIT_OK


def _cmd_oracle_two_model(args, which: str) -> int:
    p = _load_model(args.from_file)
    q = _load_model(args.to_file)
    _, xe, kl = oracle_measures(p, q)
    value = xe if which == "xent" else kl
    if args.bits:
        print(json.dumps({"value": value / np.log(2.0), "units": "bits"}))
    else:
        print(json.dumps({"value": value, "units": "nats"}))
    return EXIT_OK


def _cmd_oracle_sbar(args) -> int:
    params = _load_model(args.model)
    rho = _relative_center(args, params)
    values = oracle_sbar(rho, params.theta)
    _emit(json.dumps([float(x) for x in values]), args.out)
    return EXIT_OK


def _cmd_oracle_qbar(args) -> int:
    params = _load_model(args.model)
    rho = _relative_center(args, params)
    if not 1 <= args.rank <= params.n - 1:
        raise InvalidParameterError(f"rank {args.rank} outside 1..{params.n - 1}")
    matrix = oracle_qbar(rho, params.theta, args.rank)
    _emit(_matrix_csv(matrix), args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        sizes = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"--n-list wants comma-separated ints: {args.n_list!r}")
    if not sizes or any(n < 2 for n in sizes):
        raise _UsageError("--n-list wants sizes >= 2")
    backends = [b for b in ("numba", "numpy") if b in available_backends()]
    rng = np.random.default_rng(args.seed)
    if "numba" in backends:
        # trigger jit compilation outside the timed region
        warm = Permutation.random(5, rng)
        qbar_sequence(warm, np.full(4, 0.5), backend="numba")
    rows = ["n,backend,seconds"]
    for n in sizes:
        sigma = Permutation.random(n, rng)
        alpha = rng.uniform(0.2, 1.0, size=n - 1)
        for backend in backends:
            best = np.inf
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                qbar_sequence(sigma, alpha, backend=backend)
                best = min(best, time.perf_counter() - t0)
            rows.append(f"{n},{backend},{best:.6f}")
            print(f"bench n={n} {backend}: {best:.6f}s", file=sys.stderr)
    _emit("\n".join(rows), args.out)
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _add_common(p, *, threads=False, bits=False, check=False, out=False):
    if threads:
        p.add_argument("--threads", type=int, default=1, help="pair-level threads")
    if bits:
        p.add_argument("--bits", action="store_true", help="report in bits")
    if check:
        p.add_argument(
            "--check",
            action="store_true",
            help="also run the enumeration oracle and compare",
        )
    if out:
        p.add_argument("--out", default=None, help="write to file instead of stdout")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gmminfo", description=__doc__.split("\n\n")[0])
    parser.add_argument(
        "--version",
        action="version",
        version=f"gmminfo {__version__} (rng: numpy default_rng / PCG64; "
        f"backends: {','.join(available_backends())}; select via {ENV_VAR})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prob", help="log-probability of a permutation")
    p.add_argument("--model", required=True)
    p.add_argument("--pi", required=True, help="permutation, e.g. 3,1,4,2")
    p.set_defaults(func=_cmd_prob)

    p = sub.add_parser("sample", help="draw permutations")
    p.add_argument("--model", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    _add_common(p, out=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("entropy", help="model entropy")
    p.add_argument("--model", required=True)
    _add_common(p, bits=True, check=True)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("xent", help="cross-entropy between two models")
    p.add_argument("--from", dest="from_file", required=True)
    p.add_argument("--to", dest="to_file", required=True)
    _add_common(p, threads=True, bits=True, check=True)
    p.set_defaults(func=lambda a: _cmd_two_model(a, "xent"))

    p = sub.add_parser("kl", help="KL-divergence between two models")
    p.add_argument("--from", dest="from_file", required=True)
    p.add_argument("--to", dest="to_file", required=True)
    _add_common(p, threads=True, bits=True, check=True)
    p.set_defaults(func=lambda a: _cmd_two_model(a, "kl"))

    p = sub.add_parser("sbar", help="expected stagewise codes under the model")
    p.add_argument("--model", required=True)
    p.add_argument("--sigma2", default=None, help="center to read codes against")
    _add_common(p, threads=True, check=True, out=True)
    p.set_defaults(func=_cmd_sbar)

    p = sub.add_parser("qbar", help="averaged inversion submatrix at a rank")
    p.add_argument("--model", required=True)
    p.add_argument("--sigma2", default=None, help="center to read pairs against")
    p.add_argument("--rank", type=int, required=True)
    _add_common(p, threads=True, check=True, out=True)
    p.set_defaults(func=_cmd_qbar)

    o = sub.add_parser("oracle", help="brute-force twins (small n)")
    osub = o.add_subparsers(dest="oracle_command", required=True)

    p = osub.add_parser("entropy")
    p.add_argument("--model", required=True)
    _add_common(p, bits=True)
    p.set_defaults(func=_cmd_oracle_entropy)

    p = osub.add_parser("xent")
    p.add_argument("--from", dest="from_file", required=True)
    p.add_argument("--to", dest="to_file", required=True)
    _add_common(p, bits=True)
    p.set_defaults(func=lambda a: _cmd_oracle_two_model(a, "xent"))

    p = osub.add_parser("kl")
    p.add_argument("--from", dest="from_file", required=True)
    p.add_argument("--to", dest="to_file", required=True)
    _add_common(p, bits=True)
    p.set_defaults(func=lambda a: _cmd_oracle_two_model(a, "kl"))

    p = osub.add_parser("sbar")
    p.add_argument("--model", required=True)
    p.add_argument("--sigma2", default=None)
    _add_common(p, out=True)
    p.set_defaults(func=_cmd_oracle_sbar)

    p = osub.add_parser("qbar")
    p.add_argument("--model", required=True)
    p.add_argument("--sigma2", default=None)
    p.add_argument("--rank", type=int, required=True)
    _add_common(p, out=True)
    p.set_defaults(func=_cmd_oracle_qbar)

    p = sub.add_parser("bench", help="time the pair recursion per backend")
    p.add_argument("--n-list", default="10,20,40,80")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, out=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidParameterError, DimensionMismatchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except GmmInfoError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
