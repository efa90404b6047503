"""Command-line interface.

Subcommands mirror the library surface: `charpoly` runs the full
counting pipeline, `count` a single finite-field count, `rank` and
`pattern` evaluate the ranking map, `verify` cross-checks the pipeline
against the independent oracles and the published table, and `prob5`
produces the five-object pattern-probability table.

Output is a human-readable listing by default, or machine-readable with
--json (sorted keys) / --tsv.  Every record carries the same top-level
fields: command, parameters, results, threads, elapsed_s, safe, version.
Exit status: 0 when every internal assertion passed, 1 when a
verification check failed, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import known_values as kv
from .arrangement import prime_threshold, select_primes
from .charpoly import (
    CharPoly,
    a_sequence,
    chambers_and_r,
    factor_over_Z,
    interpolate_charpoly,
    mu2_formula,
)
from .errors import MidhypError
from .ffcount import CountJob, checkpointed_count, count_m1, count_points_naive
from .oracle import lattice_charpoly, saturate_patterns, thrall_count
from .ranking import inversions, midpoint_order, object_config, rank_at, ranking_pattern
from .spherical import SPHERE_VOLUME, chamber_cone, pattern_probabilities_m5, solid_angle_mc
from . import __version__

LONG_RUN_NODE_LIMIT = 10**10


def _estimated_nodes(m: int, q: int) -> int:
    """Upper bound on DFS interior nodes: braid-only branching per depth."""
    est = 1
    for k in range(3, m):
        est *= max(q - k + 1, 1)
    return est


def _emit(record: dict, args) -> None:
    record.setdefault("version", __version__)
    record.setdefault("threads", getattr(args, "threads", None) or os.cpu_count() or 1)
    if getattr(args, "json", False):
        print(json.dumps(record, sort_keys=True, default=str))
        return
    if getattr(args, "tsv", False):
        for key in sorted(record):
            value = record[key]
            if isinstance(value, (list, tuple, dict)):
                value = json.dumps(value, sort_keys=True, default=str)
            print(f"{key}\t{value}")
        return
    width = max(len(k) for k in record)
    for key in sorted(record):
        print(f"{key:<{width}}  {record[key]}")


def _parse_points(text: str):
    return object_config([p.strip() for p in text.split(",")])


def cmd_charpoly(args) -> int:
    start = time.perf_counter()
    m = args.m
    if not 3 <= m <= 8:
        raise MidhypError("charpoly supports m in 3..8")
    safe = True
    if args.inject_paper:
        if m not in kv.CHI_LINEAR_ROOTS:
            raise MidhypError(f"no published polynomial for m = {m}")
        cp = CharPoly(m, kv.chi_coefficients(m))
        primes = []
    else:
        primes = ([int(p) for p in args.primes.split(",")] if args.primes
                  else select_primes(m, m - 2))
        worst = max(_estimated_nodes(m, q) for q in primes)
        if worst > LONG_RUN_NODE_LIMIT and not args.allow_long:
            raise MidhypError(
                f"estimated {worst:.2e} search nodes exceeds {LONG_RUN_NODE_LIMIT:.0e}; "
                "pass --allow-long to run anyway (hours) or --inject-paper"
            )
        results = [
            count_m1(m, q, threads=args.threads,
                     override_threshold=0 if args.force else None)
            for q in primes
        ]
        safe = all(r.safe for r in results)
        cp = interpolate_charpoly(m, [(r.q, r.count) for r in results])
    rc = chambers_and_r(cp)
    fac = factor_over_Z(cp)
    record = {
        "command": "charpoly",
        "m": m,
        "coeffs": list(cp.coeffs),
        "roots": {str(root): mult for root, mult in fac.roots},
        "nonlinear_factor": list(fac.remainder),
        "chambers": rc.chambers,
        "r": rc.r,
        "primes": primes,
        "counts": {str(q): c for q, c in cp.provenance},
        "safe": safe,
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    _emit(record, args)
    return 0


def cmd_count(args) -> int:
    start = time.perf_counter()
    est = _estimated_nodes(args.m, args.q)
    if est > LONG_RUN_NODE_LIMIT and not args.allow_long:
        raise MidhypError(
            f"estimated {est:.2e} search nodes exceeds {LONG_RUN_NODE_LIMIT:.0e}; "
            "pass --allow-long (and ideally --checkpoint) to run anyway"
        )
    checkpoint = None
    if args.checkpoint is not None:
        checkpoint = args.checkpoint
        if checkpoint == "":
            directory = os.environ.get("MIDHYP_CHECKPOINT_DIR", ".")
            checkpoint = os.path.join(directory, f"midhyp_m{args.m}_q{args.q}.ckpt")
    job = CountJob(args.m, args.q, threads=args.threads, checkpoint_path=checkpoint,
                   override_threshold=0 if args.force else None)
    result = checkpointed_count(job) if checkpoint else __count(job)
    record = {
        "command": "count",
        "m": args.m,
        "q": args.q,
        "count": result.count,
        "nodes": result.nodes_visited,
        "checkpoint": checkpoint,
        "safe": result.safe,
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    _emit(record, args)
    return 0


def __count(job: CountJob):
    from .ffcount import count_points

    return count_points(job)


def cmd_rank(args) -> int:
    start = time.perf_counter()
    config = _parse_points(args.points)
    ranking = rank_at(config, args.ideal)
    record = {
        "command": "rank",
        "m": config.m,
        "points": [str(p) for p in config.points],
        "ideal": args.ideal,
        "ranking": list(ranking.perm),
        "inversions": inversions(ranking),
        "safe": True,
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    _emit(record, args)
    return 0


def cmd_pattern(args) -> int:
    start = time.perf_counter()
    config = _parse_points(args.points)
    pattern = ranking_pattern(config, verify=True)
    order = midpoint_order(config)
    record = {
        "command": "pattern",
        "m": config.m,
        "points": [str(p) for p in config.points],
        "midpoint_order": [list(p) for p in order],
        "pattern": [list(r.perm) for r in pattern],
        "safe": True,
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    _emit(record, args)
    return 0


def cmd_verify(args) -> int:
    start = time.perf_counter()
    m = args.m
    if not 3 <= m <= 7:
        raise MidhypError("verify supports m in 3..7")
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str = ""):
        checks.append((name, bool(ok), detail))

    primes = select_primes(m, m - 1)  # one extra for overdetermination
    results = [count_m1(m, q, threads=args.threads) for q in primes]
    cp = interpolate_charpoly(m, [(r.q, r.count) for r in results])
    rc = chambers_and_r(cp)
    check("interpolation overdetermined by one prime", True,
          f"primes {primes}")
    check("mu1 equals -(C(m,2)+3C(m,4))", cp.coeffs[1] == -(math.comb(m, 2) + 3 * math.comb(m, 4)))
    check("mu2 closed form", cp.coeffs[2] == mu2_formula(m))
    known_r = kv.RANKING_PATTERNS.get(m)
    if known_r is not None:
        check("r matches published table", rc.r == known_r, f"r={rc.r}")
        check("chambers match published table", rc.chambers == kv.CHAMBERS[m])
    fac = factor_over_Z(cp)
    check("chi splits into linear factors", fac.is_split,
          f"roots {dict(fac.roots)}")
    check("a-sequence coincidence", a_sequence(m - 2) == rc.r)
    if m <= 5:
        check("lattice charpoly equals interpolated",
              lattice_charpoly(m).coeffs == cp.coeffs)
        smalls = [q for q in (2, 3, 5, 7, 11, 13, 17)]
        agree = all(
            count_m1(m, q, override_threshold=0).count == count_points_naive(m, q)
            for q in smalls
        )
        check("fast counter equals naive counter", agree, f"q in {smalls}")
    if m <= 6 and known_r is not None:
        found = saturate_patterns(m, seed=args.seed, known_r=known_r)
        check("sampling saturates at r distinct midpoint orders",
              len(found) == known_r, f"found {len(found)}")
    g = thrall_count(m)
    check("monotone-labeling count bounds r", g >= rc.r,
          f"g={g}, r={rc.r}" + (", tight" if g == rc.r else ""))
    ok = all(c[1] for c in checks)
    record = {
        "command": "verify",
        "m": m,
        "seed": args.seed,
        "checks": [{"name": n, "ok": o, "detail": d} for n, o, d in checks],
        "passed": sum(c[1] for c in checks),
        "failed": sum(not c[1] for c in checks),
        "chambers": rc.chambers,
        "r": rc.r,
        "safe": all(r.safe for r in results),
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    _emit(record, args)
    return 0 if ok else 1


def cmd_prob5(args) -> int:
    start = time.perf_counter()
    samples = int(float(args.samples))
    ok = True
    rows = []
    if args.method in ("schlafli", "both"):
        table = pattern_probabilities_m5()
    else:
        table = None
    for label in ("I", "II", "III", "IV", "V", "VI"):
        row = {"chamber": label, "reference_probability": kv.PROBABILITIES[label]}
        if table is not None:
            prob = table.probability(label)
            row["volume_schlafli"] = round(next(r.volume for r in table.rows if r.label == label), 9)
            row["probability"] = round(prob, 9)
            if abs(prob - kv.PROBABILITIES[label]) > 1e-3:
                ok = False
        if args.method in ("mc", "both"):
            frac, se = solid_angle_mc(chamber_cone(label), samples,
                                      seed=args.seed, threads=args.threads or 1)
            row["volume_mc"] = round(frac * SPHERE_VOLUME, 9)
            row["mc_stderr"] = round(se * SPHERE_VOLUME, 12)
            if args.method == "both":
                diff = abs(row["volume_mc"] - sum(
                    r.volume for r in table.rows if r.label == label))
                row["mc_within_3se"] = bool(diff < 3 * se * SPHERE_VOLUME)
                ok = ok and row["mc_within_3se"]
        rows.append(row)
    record = {
        "command": "prob5",
        "m": 5,
        "method": args.method,
        "samples": samples if args.method in ("mc", "both") else 0,
        "seed": args.seed,
        "probabilities": rows,
        "volumes": {r.label: round(r.volume, 9) for r in table.rows} if table else {},
        "safe": ok,
        "elapsed_s": round(time.perf_counter() - start, 6),
    }
    _emit(record, args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="midhyp",
        description="Ranking patterns of the unidimensional unfolding model.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, threads=True, seed=False):
        p.add_argument("--json", action="store_true", help="emit one JSON object")
        p.add_argument("--tsv", action="store_true", help="emit tab-separated key/value rows")
        if threads:
            p.add_argument("--threads", type=int, default=None,
                           help="worker threads (default: all cores)")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("charpoly", help="characteristic polynomial, chambers, r(m)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--primes", help="comma-separated primes (default: smallest admissible)")
    p.add_argument("--allow-long", action="store_true",
                   help="permit searches estimated above 1e10 nodes")
    p.add_argument("--inject-paper", action="store_true",
                   help="use the published polynomial instead of counting")
    p.add_argument("--force", action="store_true",
                   help="accept primes below the admissibility threshold (unsafe)")
    common(p)
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("count", help="count |M_1(m, q)| for one prime")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--checkpoint", nargs="?", const="", default=None,
                   help="checkpoint file (bare flag: $MIDHYP_CHECKPOINT_DIR/midhyp_m{m}_q{q}.ckpt)")
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--force", action="store_true",
                   help="accept primes below the admissibility threshold (unsafe)")
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("rank", help="ranking of one ideal point")
    p.add_argument("--points", required=True, help="comma-separated object positions")
    p.add_argument("--ideal", required=True, help="ideal point (exact decimal or fraction)")
    common(p, threads=False)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("pattern", help="full ranking pattern of a configuration")
    p.add_argument("--points", required=True, help="comma-separated ascending positions")
    common(p, threads=False)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("verify", help="cross-check pipeline against independent oracles")
    p.add_argument("--m", type=int, required=True)
    common(p, seed=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("prob5", help="pattern probabilities for five objects")
    p.add_argument("--method", choices=("schlafli", "mc", "both"), default="schlafli")
    p.add_argument("--samples", default="1e8", help="Monte Carlo samples per chamber")
    common(p, seed=True)
    p.set_defaults(func=cmd_prob5)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MidhypError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
