"""``permpat`` command line.

Exit status: 0 success, 1 a verification claim failed or I/O error,
2 bad input or flags, 3 refused for resource limits, 4 internal error.
Errors are printed to stderr as one line: ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from math import comb, factorial
from typing import Sequence

from . import __version__
from .census import DEFAULT_MAX_N, census, census_streamed
from .constructions import RECORD15, coleman_permutation, record15, wilf_permutation
from .core import InvalidInputError, ResourceLimitError, format_permutation, parse_permutation
from .search import KNOWN_H, heuristic_top, search_h
from .theorem import (
    GOLDEN_RATIO,
    LOG_SCALE_N,
    bound_chain,
    improved_constant_bound,
    improved_constant_bound_log2,
    theorem_bound,
    theorem_bound_log2,
    verify_distinctness,
)

THREADS_ENV = "PERMPAT_THREADS"
SPILL_ENV = "PERMPAT_SPILL_DIR"

EXIT_OK, EXIT_CLAIM, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _header(out: list[str], command: str, **fields) -> None:
    out.append(f"permpat {__version__} {command}")
    for key, value in fields.items():
        out.append(f"{key}: {value}")


# ---------------------------------------------------------------------------
# count


def _read_permutation(args: argparse.Namespace) -> tuple[int, ...]:
    text = " ".join(args.permutation) if args.permutation else sys.stdin.readline()
    return parse_permutation(text)


def cmd_count(args: argparse.Namespace) -> tuple[int, str]:
    p = _read_permutation(args)
    n = len(p)
    if args.stream:
        counts = census_streamed(p, spill_dir=args.spill_dir or os.environ.get(SPILL_ENV))
        per_length = [counts[k] for k in range(1, n + 1)]
    else:
        per_length = list(census(p, max_n=args.max_n, workers=args.threads).per_length)
    total = sum(per_length)
    out: list[str] = []
    if args.csv:
        out.append("length,distinct_patterns,cap_binomial,cap_factorial")
        for k, c in enumerate(per_length, start=1):
            out.append(f"{k},{c},{comb(n, k)},{factorial(k)}")
        out.append(f"total,{total},,")
        return EXIT_OK, "\n".join(out)
    if not args.quiet:
        _header(
            out,
            "count",
            input=format_permutation(p),
            n=n,
            convention="nonempty patterns only; the empty pattern is not counted",
        )
        out.append(f"{'length':>6} {'distinct':>10} {'C(n,k)':>10} {'k!':>10}")
        for k, c in enumerate(per_length, start=1):
            out.append(f"{k:>6} {c:>10} {comb(n, k):>10} {factorial(k):>10}")
    out.append(f"total: {total}")
    if not args.quiet:
        out.append(f"cap 2^n - 1: {2**n - 1}")
    return EXIT_OK, "\n".join(out)


# ---------------------------------------------------------------------------
# construct


def cmd_construct(args: argparse.Namespace) -> tuple[int, str]:
    if args.family == "wilf":
        if args.n is None or args.k is not None:
            raise UsageError("construct wilf takes --n only")
        return EXIT_OK, format_permutation(wilf_permutation(args.n))
    if args.family == "coleman":
        if args.k is None or args.n is not None:
            raise UsageError("construct coleman takes --k only")
        return EXIT_OK, format_permutation(coleman_permutation(args.k).body)
    if args.n is not None or args.k is not None:
        raise UsageError("construct record15 takes no size flags")
    return EXIT_OK, format_permutation(record15())


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args: argparse.Namespace) -> tuple[int, str]:
    report = verify_distinctness(args.k, workers=args.threads)
    chain = bound_chain(args.k)
    n = args.k * args.k
    bound = theorem_bound(n)
    ok = report.all_distinct and report.family_size > bound
    out: list[str] = []
    if args.csv:
        out.append("k,n,family_size,distinct,theorem_bound,ok")
        out.append(f"{args.k},{n},{report.family_size},{report.distinct_patterns},{_fmt(bound)},{str(ok).lower()}")
        return (EXIT_OK if ok else EXIT_CLAIM), "\n".join(out)
    free = (args.k - 1) ** 2
    if not args.quiet:
        _header(out, "verify coleman", k=args.k, n=n, input=format_permutation(coleman_permutation(args.k).body))
        out.append(f"required entries: {2 * args.k - 1}, free entries: {free}, chosen: {free // 2}")
        out.append(f"member length: {2 * args.k - 1 + free // 2} (floor convention)")
    out.append(f"family size: {report.family_size}")
    out.append(f"distinct patterns: {report.distinct_patterns}")
    out.append(f"all distinct: {str(report.all_distinct).lower()}")
    if report.counterexample:
        a, b = report.counterexample
        out.append(f"counterexample: {format_permutation(a)} | {format_permutation(b)}")
    out.append(f"theorem bound 2^(n-2sqrt n)/sqrt n: {_fmt(bound)}")
    if not args.quiet:
        out.append(f"stirling estimate: {_fmt(chain.stirling_estimate)}")
        out.append(f"improved-constant bound: {_fmt(chain.improved_constant_bound)}")
        out.append(f"golden-ratio bound phi^n: {_fmt(chain.golden_bound)}")
        out.append(f"cap 2^n - 1: {chain.cap}")
        for name, flag in chain.comparisons:
            out.append(f"  {name}: {str(flag).lower()}")
    out.append(f"ok: {str(ok).lower()}")
    return (EXIT_OK if ok else EXIT_CLAIM), "\n".join(out)


# ---------------------------------------------------------------------------
# search


def cmd_search(args: argparse.Namespace) -> tuple[int, str]:
    ns = range(1, args.n + 1) if args.table else [args.n]
    records = [search_h(n, big=args.big, workers=args.threads) for n in ns]
    out: list[str] = []
    if args.csv:
        out.append("n,h,argmax_count,example_argmax")
        for r in records:
            out.append(f'{r.n},{r.h_value},{len(r.argmax_permutations)},"{format_permutation(r.argmax_permutations[0])}"')
        return EXIT_OK, "\n".join(out)
    if not args.quiet:
        _header(out, "search", n=args.n, pruning="one lexicographic-minimum representative per reverse/complement/inverse orbit")
    prev = None
    for r in records:
        line = f"h({r.n}) = {r.h_value}"
        if prev is not None:
            line += f"  diff {r.h_value - prev}"
        prev = r.h_value
        out.append(line)
        if not args.quiet:
            out.append(f"  orbit representatives examined: {r.classes_examined}")
            out.append(f"  maximizers: {len(r.all_maximizers())} in {len(r.argmax_permutations)} orbit(s)")
            for w in r.argmax_permutations:
                out.append(f"    {format_permutation(w)}")
    if args.table and len(records) > 1:
        h = [r.h_value for r in records]
        diffs = [b - a for a, b in zip(h, h[1:])]
        out.append(f"differences positive: {str(all(d > 0 for d in diffs)).lower()}")
        out.append(f"differences non-decreasing: {str(all(a <= b for a, b in zip(diffs, diffs[1:]))).lower()}")
    return EXIT_OK, "\n".join(out)


# ---------------------------------------------------------------------------
# bounds


BOUNDS_HEADER = "n,log2_scale,cap,golden_bound,theorem_bound,improved_constant_bound,measured,measured_source"


def bounds_table(n_max: int) -> list[dict[str, object]]:
    """One row per n: the all-subsets cap, phi^n, and the two pi_k-derived bounds, plus any measured value.

    Beyond n = 400 the bound columns hold log2 values (``log2_scale`` = 1).
    """
    if n_max < 1:
        raise InvalidInputError(f"n_max must be >= 1, got {n_max}")
    record_total = census(RECORD15).total if n_max >= 15 else None
    rows = []
    for n in range(1, n_max + 1):
        log_scale = n > LOG_SCALE_N
        if log_scale:
            cap = math.log2(2**n - 1)
            golden = n * math.log2(GOLDEN_RATIO)
            theorem = theorem_bound_log2(n)
            improved = improved_constant_bound_log2(n)
        else:
            cap = 2**n - 1
            golden = GOLDEN_RATIO**n
            theorem = theorem_bound(n)
            improved = improved_constant_bound(n) if n > 1 else None
        measured, source = None, ""
        if n in KNOWN_H:
            measured, source = KNOWN_H[n], "h"
        elif n == 15 and record_total is not None:
            measured, source = record_total, "record15"
        rows.append(
            dict(
                n=n,
                log2_scale=int(log_scale),
                cap=cap,
                golden_bound=golden,
                theorem_bound=theorem,
                improved_constant_bound=improved,
                measured=measured,
                measured_source=source,
            )
        )
    return rows


def cmd_bounds(args: argparse.Namespace) -> tuple[int, str]:
    rows = bounds_table(args.n_max)
    out: list[str] = []
    if not args.csv and not args.quiet:
        _header(out, "bounds", n_max=args.n_max, note="measured: h(n) from exhaustive search, or f(record15) at n = 15")
    out.append(BOUNDS_HEADER)
    for r in rows:
        cap = _fmt(r["cap"]) if r["log2_scale"] else str(r["cap"])
        measured = "" if r["measured"] is None else str(r["measured"])
        out.append(
            ",".join(
                [
                    str(r["n"]),
                    str(r["log2_scale"]),
                    cap,
                    _fmt(r["golden_bound"]),
                    _fmt(r["theorem_bound"]),
                    _fmt(r["improved_constant_bound"]),
                    measured,
                    str(r["measured_source"]),
                ]
            )
        )
    return EXIT_OK, "\n".join(out)


# ---------------------------------------------------------------------------
# heuristic


def cmd_heuristic(args: argparse.Namespace) -> tuple[int, str]:
    report = heuristic_top(args.n, args.beam, seed=args.seed, restarts=args.restarts, max_n=args.max_n)
    out: list[str] = []
    entries = list(report.ranked) + list(report.references)
    if args.csv:
        out.append("rank,label,permutation,distance_score,min_spread,census_total")
        for i, e in enumerate(entries, start=1):
            rank = str(i) if i <= len(report.ranked) else "ref"
            out.append(f'{rank},{e.label},"{format_permutation(e.permutation)}",{e.distance_score},{e.min_spread},{e.census_total}')
        return EXIT_OK, "\n".join(out)
    if not args.quiet:
        _header(
            out,
            "heuristic",
            n=report.n,
            beam=report.beam,
            seed=report.seed,
            restarts=report.restarts,
            note="heuristic search, no optimality claim; distance_score is constant on S_n, ascent maximises sorted pairwise L1 spread",
        )
    for e in entries:
        out.append(
            f"{e.label}: {format_permutation(e.permutation)}  distance_score={e.distance_score} "
            f"min_spread={e.min_spread} census_total={e.census_total}"
        )
    return EXIT_OK, "\n".join(out)


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permpat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"permpat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="machine-readable CSV output")
    common.add_argument("--quiet", action="store_true", help="omit report headers and detail lines")
    common.add_argument(
        "--threads", type=_positive, default=_default_threads(), help=f"worker count (default ${THREADS_ENV} or 1)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="distinct patterns of a permutation")
    p.add_argument("permutation", nargs="*", help='e.g. "3 6 9 2 5 8 1 4 7"; read from stdin if omitted')
    p.add_argument("--max-n", type=_positive, default=DEFAULT_MAX_N, help="refuse larger inputs (default %(default)s)")
    p.add_argument("--stream", action="store_true", help="external-memory census (n <= 28)")
    p.add_argument("--spill-dir", help=f"directory for spill files (default ${SPILL_ENV} or system temp)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("construct", parents=[common], help="emit a named permutation")
    p.add_argument("family", choices=["wilf", "coleman", "record15"])
    p.add_argument("--n", type=_positive)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="check the pi_k restricted family")
    p.add_argument("family", choices=["coleman"])
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="exhaustive h(n)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--big", action="store_true", help="allow n >= 10")
    p.add_argument("--table", action="store_true", help="report h(1)..h(n) with first differences")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("bounds", parents=[common], help="bound formulas per n")
    p.add_argument("--n-max", type=_positive, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("heuristic", parents=[common], help="spread heuristic with exact census totals")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--beam", type=_positive, default=5)
    p.add_argument("--seed", type=int, default=2003)
    p.add_argument("--restarts", type=_positive)
    p.add_argument("--max-n", type=_positive, default=DEFAULT_MAX_N)
    p.set_defaults(func=cmd_heuristic)
    return parser


def _validate(args: argparse.Namespace) -> None:
    if args.csv and args.quiet:
        raise UsageError("--csv and --quiet are mutually exclusive")
    if args.command == "count":
        if args.stream and args.threads > 1:
            raise UsageError("--stream runs single-threaded; drop --threads")
        if args.spill_dir and not args.stream:
            raise UsageError("--spill-dir requires --stream")


def run(argv: Sequence[str] | None = None) -> tuple[int, str, str]:
    """Parse and dispatch; returns (status, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        _validate(args)
        status, text = args.func(args)
        return status, text, ""
    except (UsageError, InvalidInputError) as exc:
        return EXIT_INPUT, "", f"error: input: {exc}"
    except ResourceLimitError as exc:
        return EXIT_RESOURCE, "", f"error: resource: {exc}"
    except OSError as exc:
        return EXIT_CLAIM, "", f"error: io: {exc}"
    except Exception as exc:  # noqa: BLE001
        return EXIT_INTERNAL, "", f"error: internal: {type(exc).__name__}: {exc}"


def main(argv: Sequence[str] | None = None) -> int:
    status, out, err = run(argv)
    if out:
        print(out)
    if err:
        print(err, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
