"""Command-line front end: bench trials, experiment matrices, model checking.

POP_SIGNAL (integer offset from SIGRTMIN) selects the signal used by the
os-signal transport.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .bench.config import BenchConfig, CSV_COLUMNS, StallSpec
from .bench.matrix import load_matrix_spec, run_matrix, summary_path_for
from .bench.runner import run_lrr, run_trial
from .oracle.explore import BudgetExceeded, explore
from .oracle.model import MUTANTS, SCHEMES, build
from .reclaim import RECLAIMER_NAMES, STUBBED_RECLAIMERS

PAPER_PARITY = dict(duration_ms=5000, reclaim_freq=24576)


def _add_bench_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ds", default="hml", choices=("hml", "ll", "hmht"))
    p.add_argument("--reclaimer", default="hp-pop",
                   choices=tuple(RECLAIMER_NAMES) + STUBBED_RECLAIMERS)
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--size", dest="key_range", type=int, default=2048,
                   help="maximum key range; prefilled to half")
    p.add_argument("--inserts", dest="insert_pct", type=int, default=50)
    p.add_argument("--deletes", dest="delete_pct", type=int, default=50)
    p.add_argument("--duration-ms", type=int, default=1000)
    p.add_argument("--reclaim-freq", type=int, default=1024)
    p.add_argument("--epoch-freq", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trial", type=int, default=1)
    p.add_argument("--stall", type=StallSpec.parse, default=None,
                   metavar="tid=3,at-ms=200,for-ms=500")
    p.add_argument("--lrr", action="store_true",
                   help="long-running-reads mode: half searchers, half head updaters")
    p.add_argument("--paper-parity", action="store_true",
                   help="5 s trials and the paper's 24K retire threshold")
    p.add_argument("--csv", default=None, help="append the result row to this file")
    p.add_argument("--visit-spins", type=int, default=None)
    p.add_argument("--fence-spins", type=int, default=None)
    p.add_argument("--transport", default="virtual", choices=("virtual", "os-signal"))
    p.add_argument("--watchdog-s", type=float, default=None)
    p.add_argument("--pin", dest="pin_threads", action="store_true")
    p.add_argument("--debug-oracle", dest="debug", action="store_true",
                   help="run under the use-after-free oracle")


def _bench_config(args: argparse.Namespace) -> BenchConfig:
    kw = dict(
        ds=args.ds, reclaimer=args.reclaimer, threads=args.threads,
        key_range=args.key_range, insert_pct=args.insert_pct,
        delete_pct=args.delete_pct, duration_ms=args.duration_ms,
        reclaim_freq=args.reclaim_freq, epoch_freq=args.epoch_freq,
        seed=args.seed, trial=args.trial, stall=args.stall, lrr=args.lrr,
        visit_spins=args.visit_spins, fence_spins=args.fence_spins,
        transport=args.transport, watchdog_s=args.watchdog_s,
        pin_threads=args.pin_threads, debug=args.debug,
    )
    if args.paper_parity:
        kw.update(PAPER_PARITY)
    return BenchConfig(**kw)


def cmd_bench(args: argparse.Namespace) -> int:
    if args.reclaimer in STUBBED_RECLAIMERS:
        print(f"error: reclaimer {args.reclaimer!r} is recognized but not implemented "
              "(needs a process-wide membarrier)", file=sys.stderr)
        return 2
    cfg = _bench_config(args)
    res = run_lrr(cfg) if cfg.lrr else run_trial(cfg)
    row = res.csv_row()
    if args.csv:
        import os
        new = not os.path.exists(args.csv) or os.path.getsize(args.csv) == 0
        with open(args.csv, "a", newline="", encoding="utf-8") as f:
            w = csv.DictWriter(f, fieldnames=list(CSV_COLUMNS))
            if new:
                w.writeheader()
            w.writerow(row)
    print(json.dumps({**row, "wall_time_s": round(res.wall_time_s, 3),
                      "read_throughput_mops": round(res.read_throughput_mops, 6),
                      "contains_ops": res.contains_ops}, indent=2))
    if res.error:
        print(f"trial error: {res.error}", file=sys.stderr)
        return 1
    return 0


def cmd_matrix(args: argparse.Namespace) -> int:
    spec = load_matrix_spec(args.spec)
    def progress(row):
        print(f"{row['ds']:5s} {row['reclaimer']:10s} t={row['threads']:>3} "
              f"trial={row['trial']} tput={row['throughput_mops']} "
              f"{('ERR ' + row['error']) if row['error'] else ''}")
    ran = run_matrix(spec, args.csv, progress=progress if not args.quiet else None)
    print(f"{ran} rows executed; results in {args.csv}; "
          f"summary in {summary_path_for(args.csv)}")
    return 0


def cmd_model_check(args: argparse.Namespace) -> int:
    model = build(args.scheme, threads=args.threads, mutant=args.mutant)
    try:
        res = explore(model, budget=args.budget)
    except BudgetExceeded as e:
        print(f"verdict: BUDGET-EXCEEDED ({e.budget} states)")
        return 3
    print(f"verdict: {res.verdict}")
    print(f"states explored: {res.states}")
    if res.detail:
        print(f"detail: {res.detail}")
    if res.trace:
        print("trace:")
        for step in res.trace:
            print(f"  {step}")
    return 0 if res.safe else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="popsmr",
        description="publish-on-ping safe memory reclamation: benchmarks and model checking",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run one benchmark trial")
    _add_bench_args(b)
    b.set_defaults(fn=cmd_bench)

    m = sub.add_parser("matrix", help="run a cross-product of configs from a JSON spec")
    m.add_argument("--spec", required=True)
    m.add_argument("--csv", required=True)
    m.add_argument("--quiet", action="store_true")
    m.set_defaults(fn=cmd_matrix)

    mc = sub.add_parser("model-check", help="explore a protocol model exhaustively")
    mc.add_argument("--scheme", required=True, choices=SCHEMES)
    mc.add_argument("--threads", type=int, default=2, choices=(2, 3))
    mc.add_argument("--budget", type=int, default=10_000_000)
    mc.add_argument("--mutant", default=None, choices=MUTANTS)
    mc.set_defaults(fn=cmd_model_check)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
