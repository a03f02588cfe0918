"""Command line front end.

Subcommands mirror the library: enumerate, tgs, search, inject, manin,
stats and a one-off compose.  Raw enumerations are cached as point-list
files keyed by coefficients and height bound, so descent and statistics
runs do not re-enumerate.  Exit codes: 0 success, 2 precondition or usage
problem, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .composition import CompositionFailure, alpha_beta, compose
from .descent import (
    CompositionCache,
    IndexTooSmallError,
    TGSReport,
    greedy_initial_set,
    inject_bad_points,
    remove_superfluous,
    test_generating_set,
)
from .enumeration import (
    ExclusionPolicy,
    PointIndex,
    enumerate_points,
    index_from_points,
    read_point_list,
    write_point_list,
)
from .stats import manin_series, strong_decomposability, write_decomposability_csv, write_manin_csv
from .surfaces import (
    DiagonalSurface,
    ProjPoint,
    canonicalize,
    h_max,
    is_on_surface,
    load_registry,
)

DEFAULT_CACHE = "~/.cache/cubic-mw"


def parse_point(text: str) -> ProjPoint:
    """Accept '1 -1 0 0', '1,-1,0,0' or '(1:-1:0:0)'."""
    cleaned = text.strip().strip("()").replace(":", " ").replace(",", " ")
    parts = cleaned.split()
    if len(parts) != 4:
        raise ValueError(f"expected four integers in point {text!r}")
    return canonicalize(int(v) for v in parts)


def parse_index_set(text: str) -> set[int]:
    """Comma list of indices; 'a-b' ranges allowed; empty string is empty."""
    out: set[int] = set()
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk[1:]:
            lo, hi = chunk.split("-", 1)
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(chunk))
    return out


def format_point(p: ProjPoint) -> str:
    return f"({p.x}:{p.y}:{p.z}:{p.u})"


def _resolve_surface(args) -> tuple[str, DiagonalSurface]:
    if (args.surface is None) == (args.coeffs is None):
        raise ValueError("give exactly one of --surface or --coeffs")
    if args.surface is not None:
        registry = load_registry(args.registry)
        return args.surface, registry.get(args.surface)
    a, b, c, d = args.coeffs
    return f"{a}_{b}_{c}_{d}", DiagonalSurface(a, b, c, d, picard_rank=args.rank)


def _policy(args) -> ExclusionPolicy:
    keeps = frozenset(parse_point(k) for k in (args.keep or []))
    return ExclusionPolicy(args.exclude_trivial_lines, keeps)


def _cache_dir(args) -> Path:
    raw = args.cache_dir or os.environ.get("CUBIC_MW_CACHE") or DEFAULT_CACHE
    return Path(raw).expanduser()


def _cache_path(cache: Path, surface: DiagonalSurface, hmax_bound: int) -> Path:
    a, b, c, d = surface.coefficients
    return cache / f"points_{a}_{b}_{c}_{d}_H{hmax_bound}.txt"


def cached_points(args, label: str, surface: DiagonalSurface, hmax_bound: int) -> list[ProjPoint]:
    """Raw enumeration via the point-list cache."""
    cache = _cache_dir(args)
    path = _cache_path(cache, surface, hmax_bound)
    if path.exists():
        _, coeffs, bound, points = read_point_list(str(path))
        if coeffs == surface.coefficients and bound == hmax_bound:
            return points
    points = enumerate_points(surface, hmax_bound)
    cache.mkdir(parents=True, exist_ok=True)
    write_point_list(str(path), label, surface, hmax_bound, points)
    return points


def build_cached_index(
    args, label: str, surface: DiagonalSurface, hmax_bound: int, policy: ExclusionPolicy
) -> PointIndex:
    pts = cached_points(args, label, surface, hmax_bound)
    return index_from_points(surface, pts, hmax_bound, policy)


def index_covering(
    args, label: str, surface: DiagonalSurface, n: int, policy: ExclusionPolicy
) -> PointIndex:
    """Index from --hmax if given, else grown until it covers index n."""
    if args.hmax is not None:
        idx = build_cached_index(args, label, surface, args.hmax, policy)
        if len(idx) < n or idx.height_at(n) > idx.hsum_bound:
            required = idx.height_at(n) if len(idx) >= n else None
            hint = f"h_max >= {required}" if required else f"h_max > {args.hmax}"
            raise IndexTooSmallError(
                f"--hmax {args.hmax} does not cover index {n}; rerun with {hint}"
            )
        return idx
    bound = max(64, n)
    while True:
        idx = build_cached_index(args, label, surface, bound, policy)
        if len(idx) >= n:
            required = idx.height_at(n)
            if required <= bound:
                return idx
            bound = required
        else:
            bound *= 2


# -- subcommands ------------------------------------------------------------

def cmd_enumerate(args) -> int:
    label, surface = _resolve_surface(args)
    policy = _policy(args)
    points = cached_points(args, label, surface, args.hmax)
    if args.output:
        write_point_list(args.output, label, surface, args.hmax, points)
    count = sum(1 for p in points if policy.allows(p))
    print(f"{label} H={args.hmax} count={count}")
    return 0


def _print_tgs_row(idx: PointIndex, report: TGSReport) -> None:
    height = idx.height_at(report.n)
    bad_i, bad_h = ("-", "-") if report.first_bad is None else report.first_bad
    print(
        f"{height} {report.n} {report.generated_count} "
        f"{report.percentage:.1f} {report.iterations} {bad_i} {bad_h}"
    )


def _initial_args(args) -> tuple[set[int], list[ProjPoint]]:
    indices = parse_index_set(args.set) if args.set is not None else set()
    points = [parse_point(t) for t in (args.point or [])]
    return indices, points


def cmd_tgs(args) -> int:
    label, surface = _resolve_surface(args)
    idx = index_covering(args, label, surface, args.n, _policy(args))
    initial, extra = _initial_args(args)
    report = test_generating_set(idx, initial, args.n, extra_points=extra)
    _print_tgs_row(idx, report)
    if args.output:
        payload = report.to_dict(label, idx.height_at(report.n))
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_search(args) -> int:
    label, surface = _resolve_surface(args)
    idx = index_covering(args, label, surface, args.n, _policy(args))
    found = greedy_initial_set(idx, args.n, args.threshold)
    if found is None:
        print(f"{label}: no generating set found (prefixes up to 12, threshold {args.threshold})")
        return 0
    indices = sorted(found)
    points = [idx.point(i) for i in indices]
    print(f"{label} indices: {{{', '.join(str(i) for i in indices)}}}")
    print(f"{label} points: {{{', '.join(format_point(p) for p in points)}}}")
    if args.output:
        payload = {
            "surface_label": label,
            "n": args.n,
            "threshold": args.threshold,
            "indices": indices,
            "points": [list(p) for p in points],
        }
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_inject(args) -> int:
    label, surface = _resolve_surface(args)
    idx = index_covering(args, label, surface, args.n, _policy(args))
    initial = parse_index_set(args.set)
    final, trace = inject_bad_points(idx, initial, args.n, args.batch, args.rounds)
    for report in trace:
        _print_tgs_row(idx, report)
    if args.output:
        payload = {
            "surface_label": label,
            "n": args.n,
            "batch": args.batch,
            "rounds": args.rounds,
            "initial_set": sorted(initial),
            "final_set": sorted(final),
            "trace": [r.to_dict(label, idx.height_at(r.n)) for r in trace],
        }
        Path(args.output).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_manin(args) -> int:
    label, surface = _resolve_surface(args)
    heights = sorted(parse_index_set(args.heights))
    rows = manin_series(surface, _policy(args), heights)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_manin_csv(rows, fh)
    else:
        write_manin_csv(rows, sys.stdout)
    return 0


def cmd_stats(args) -> int:
    label, surface = _resolve_surface(args)
    bounds = sorted(parse_index_set(args.n))
    if not bounds:
        raise ValueError("--n must name at least one index bound")
    idx = index_covering_n(args, label, surface, max(bounds))
    results = [strong_decomposability(idx, n) for n in bounds]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_decomposability_csv(results, fh)
    else:
        write_decomposability_csv(results, sys.stdout)
    return 0


def index_covering_n(args, label, surface, n):
    return index_covering(args, label, surface, n, _policy(args))


def cmd_compose(args) -> int:
    label, surface = _resolve_surface(args)
    p1, p2 = parse_point(args.p1), parse_point(args.p2)
    for name, p in (("p1", p1), ("p2", p2)):
        if not is_on_surface(surface, p):
            raise ValueError(f"{name} {format_point(p)} is not on surface {label}")
    alpha, beta = alpha_beta(surface, p1, p2)
    print(f"alpha {alpha}")
    print(f"beta {beta}")
    result = compose(surface, p1, p2)
    if isinstance(result, CompositionFailure):
        print(f"result {result.value}")
    else:
        print(f"result {format_point(result)}")
    return 0


# -- parser -----------------------------------------------------------------

def _add_surface_args(sp) -> None:
    sp.add_argument("--surface", help="registry label")
    sp.add_argument("--coeffs", nargs=4, type=int, metavar=("A", "B", "C", "D"))
    sp.add_argument("--rank", type=int, default=1, help="Picard rank for --coeffs (default 1)")
    sp.add_argument("--registry", help="registry file (default: built-in 13 surfaces)")
    sp.add_argument("--cache-dir", help=f"point-list cache (env CUBIC_MW_CACHE, default {DEFAULT_CACHE})")


def _add_policy_args(sp) -> None:
    sp.add_argument("--exclude-trivial-lines", action="store_true")
    sp.add_argument("--keep", action="append", metavar="POINT",
                    help="trivial-line point to retain, e.g. '1 -1 0 0' (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubic-mw",
        description="Rational points on diagonal cubic surfaces: enumeration, "
                    "secant composition, generating-set descent, statistics.",
    )
    parser.add_argument("--seed-registry", metavar="PATH",
                        help="write the built-in 13-surface registry file to PATH and exit")
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("enumerate", help="enumerate points up to an h_max bound")
    _add_surface_args(sp)
    _add_policy_args(sp)
    sp.add_argument("--hmax", type=int, required=True)
    sp.add_argument("-o", "--output", help="also write the point list here")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("tgs", help="test a generating set up to index n")
    _add_surface_args(sp)
    _add_policy_args(sp)
    sp.add_argument("--set", help="initial indices, e.g. '1,2,4' ('' for empty)")
    sp.add_argument("--point", action="append", metavar="POINT",
                    help="literal generator point (repeatable)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--hmax", type=int, help="enumeration bound (default: grown to cover n)")
    sp.add_argument("-o", "--output", help="write the JSON report here")
    sp.set_defaults(func=cmd_tgs)

    sp = sub.add_parser("search", help="search prefixes {1..m} for a generating set")
    _add_surface_args(sp)
    _add_policy_args(sp)
    sp.add_argument("--n", type=int, default=100, help="index bound for the trials")
    sp.add_argument("--threshold", type=float, default=0.8,
                    help="fraction of the first n points required (default 0.8)")
    sp.add_argument("--hmax", type=int)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("inject", help="grow a set by injecting first bad points")
    _add_surface_args(sp)
    _add_policy_args(sp)
    sp.add_argument("--set", required=True, help="initial indices, e.g. '1-10'")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--batch", type=int, default=1)
    sp.add_argument("--rounds", type=int, default=10)
    sp.add_argument("--hmax", type=int)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_inject)

    sp = sub.add_parser("manin", help="counting-ratio series as CSV")
    _add_surface_args(sp)
    _add_policy_args(sp)
    sp.add_argument("--heights", required=True, help="e.g. '100,200,500,1000' ('' for none)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_manin)

    sp = sub.add_parser("stats", help="strong-decomposability statistics as CSV")
    _add_surface_args(sp)
    _add_policy_args(sp)
    sp.add_argument("--n", required=True, help="index bounds, e.g. '500,1000'")
    sp.add_argument("--hmax", type=int)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("compose", help="compose two points on a surface")
    _add_surface_args(sp)
    sp.add_argument("--p1", required=True, metavar="POINT")
    sp.add_argument("--p2", required=True, metavar="POINT")
    sp.set_defaults(func=cmd_compose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed_registry:
            import importlib.resources

            text = (
                importlib.resources.files("cubic_mw")
                .joinpath("data/surfaces.txt")
                .read_text(encoding="utf-8")
            )
            Path(args.seed_registry).write_text(text, encoding="utf-8")
            print(f"wrote registry to {args.seed_registry}")
            return 0
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
