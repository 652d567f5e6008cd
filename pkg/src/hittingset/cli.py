"""Command line front end.

Exit codes: 0 certified optimum (or success), 1 input/usage error,
2 time limit hit with an incumbent, 3 solution failed verification.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .hypergraph import InstanceError
from .instances import (
    OracleRefused,
    appendix_family,
    brute_force_oracle,
    generate_random,
    read_instance,
    verify,
)
from .solver import BOUND_NAMES, LOOP_ITEM_NAMES, REDUCTION_NAMES, GreedyMode, LocalSearch, Report, Settings, solve

log = logging.getLogger("hittingset")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TIMEOUT = 2
EXIT_INVALID = 3


def _settings_from_args(args) -> Settings:
    return Settings(
        repack_count=args.repack_count,
        greedy_mode=args.greedy_mode,
        enabled_bounds=frozenset(BOUND_NAMES) - set(args.disable_bound),
        enabled_reductions=frozenset(REDUCTION_NAMES) - set(args.disable_reduction),
        local_search=args.local_search,
        time_limit=args.time_limit,
        rng_seed=args.seed,
        inclusion_first=args.exploration_order == "inclusion-first",
    )


def _add_settings_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--repack-count", type=int, default=3, metavar="C",
                   help="vertices probed by costly discard with repacking (default 3)")
    p.add_argument("--greedy-mode", choices=[m.value for m in GreedyMode],
                   default=GreedyMode.ONCE_PER_NODE.value)
    p.add_argument("--disable-bound", action="append", default=[], choices=BOUND_NAMES,
                   metavar="NAME", help=f"repeatable; one of {', '.join(BOUND_NAMES)}")
    p.add_argument("--disable-reduction", action="append", default=[], choices=REDUCTION_NAMES,
                   metavar="NAME", help=f"repeatable; one of {', '.join(REDUCTION_NAMES)}")
    p.add_argument("--local-search", choices=[m.value for m in LocalSearch],
                   default=LocalSearch.OFF.value)
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exploration-order", choices=["inclusion-first", "exclusion-first"],
                   default="inclusion-first")


def _write_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _solve_file(path: str, settings: Settings) -> Report:
    inst = read_instance(path).build()
    report = solve(inst, settings)
    report.instance["path"] = str(path)
    return report


def cmd_solve(args) -> int:
    settings = _settings_from_args(args)
    report = _solve_file(args.instance, settings)
    _write_text(report.to_json() + "\n", args.report)
    log.info("opt_size=%d complete=%s nodes=%d wall=%.3fs",
             report.opt_size, report.complete, report.tree_nodes, report.wall_time)
    return EXIT_OK if report.complete else EXIT_TIMEOUT


def _batch_job(job):
    path, settings, out_dir = job
    report = _solve_file(path, settings)
    out = Path(out_dir) / (Path(path).stem + ".report.json")
    out.write_text(report.to_json() + "\n", encoding="utf-8")
    return str(out), report.complete


def cmd_batch(args) -> int:
    settings = _settings_from_args(args)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    jobs = [(p, settings, args.out_dir) for p in args.instances]
    if args.workers <= 1:
        results = [_batch_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_batch_job, jobs))
    for out, complete in results:
        print(f"{out}\t{'certified' if complete else 'timeout'}")
    return EXIT_OK if all(c for _, c in results) else EXIT_TIMEOUT


def _load_solution(args) -> list[int]:
    if args.report:
        return Report.from_json(Path(args.report).read_text(encoding="utf-8")).solution
    try:
        return [int(x) for x in args.solution.replace(",", " ").split()]
    except ValueError:
        raise InstanceError(f"cannot parse solution {args.solution!r}") from None


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    solution = _load_solution(args)
    bad = [v for v in solution if not 0 <= v < inst.num_vertices]
    if bad:
        raise InstanceError(f"solution vertex id out of range: {bad[0]}")
    unhit = [i for i, e in enumerate(inst.edges) if set(e).isdisjoint(solution)]
    ok = verify(inst.edges, solution)
    print(json.dumps({"valid": ok, "size": len(set(solution)), "unhit_edges": unhit[:20]}))
    return EXIT_OK if ok else EXIT_INVALID


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    size, solution = brute_force_oracle(inst.edges, inst.num_vertices, cap=args.cap)
    print(json.dumps({"opt_size": size, "solution": solution}))
    return EXIT_OK


def cmd_gen_random(args) -> int:
    inst = generate_random(args.n, args.m, args.min_size, args.max_size, args.seed)
    _write_text(inst.to_json(), args.output)
    return EXIT_OK


def cmd_gen_appendix_family(args) -> int:
    _write_text(appendix_family(args.k, args.n).to_json(), args.output)
    return EXIT_OK


def _share(part: float, whole: float) -> float:
    return part / whole if whole else 0.0


def stats_rows(reports: list[tuple[str, Report]]) -> tuple[list[str], list[list]]:
    """Per-run rows: prune attribution, loop reach, forced vertices, time shares.

    Shares are relative to the run's own totals, as in the usual
    per-instance breakdown plots.
    """
    header = ["report", "opt_size", "complete", "tree_nodes", "wall_time", "loop_iterations"]
    header += [f"prune_{b}" for b in BOUND_NAMES]
    header += [f"prune_share_{b}" for b in BOUND_NAMES]
    header += [f"reach_{i}" for i in LOOP_ITEM_NAMES]
    header += [f"forced_{r}" for r in ("unit_edge", "costly_discard_efficiency",
                                       "costly_discard_packing_update", "costly_discard_repack")]
    timing_keys = list(next(iter(reports))[1].runtime_by_operation) if reports else []
    header += [f"time_share_{k}" for k in timing_keys]
    rows = []
    for name, r in reports:
        prunes = [r.prunes_by_bound.get(b, 0) for b in BOUND_NAMES]
        total = sum(prunes)
        row = [name, r.opt_size, int(r.complete), r.tree_nodes, f"{r.wall_time:.6f}", r.loop_iterations]
        row += prunes
        row += [f"{_share(p, total):.4f}" for p in prunes]
        row += [r.loop_reach_counts.get(i, 0) for i in LOOP_ITEM_NAMES]
        row += [r.forced_by_rule.get(k, 0) for k in ("unit_edge", "costly_discard_efficiency",
                                                    "costly_discard_packing_update",
                                                    "costly_discard_repack")]
        row += [f"{_share(r.runtime_by_operation.get(k, 0.0), r.wall_time):.4f}" for k in timing_keys]
        rows.append(row)
    return header, rows


def cmd_stats(args) -> int:
    reports = [(p, Report.from_json(Path(p).read_text(encoding="utf-8"))) for p in args.reports]
    header, rows = stats_rows(reports)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out, delimiter="\t" if args.format == "tsv" else ",", lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hittingset", description="Exact minimum hitting set solver")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance and write a JSON report")
    p.add_argument("instance")
    p.add_argument("-o", "--report", default=None, help="report path (default: stdout)")
    _add_settings_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("batch", help="solve many instances, one report file each")
    p.add_argument("instances", nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--workers", type=int, default=1)
    _add_settings_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("verify", help="check that a solution hits every edge")
    p.add_argument("instance")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--solution", help="vertex ids, comma or space separated")
    g.add_argument("--report", help="take the solution from a solve report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search (small instances)")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=20, help="maximum number of vertices (default 20)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-random", help="uniform random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--max-size", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen_random)

    p = sub.add_parser("gen-appendix-family", help="bound-separating instance family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen_appendix_family)

    p = sub.add_parser("stats", help="aggregate reports into a delimited table")
    p.add_argument("reports", nargs="+")
    p.add_argument("--format", choices=["tsv", "csv"], default="tsv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InstanceError, OracleRefused, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
