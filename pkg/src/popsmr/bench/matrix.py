"""Cross-product experiment runner with idempotent CSV append.

The matrix spec is a JSON object; list-valued fields are crossed, scalars are
fixed.  One CSV row per (config x trial) in deterministic order.  A companion
summary CSV carries per-config medians (median trial marked) and the spread
as a percentage, since the row schema is pinned and has no variance column.
"""

from __future__ import annotations

import csv
import itertools
import json
import os
import statistics

from .config import BenchConfig, CSV_COLUMNS, StallSpec
from .runner import run_trial

#: spec fields that may be lists in a matrix file, in cross-product order
SWEEP_FIELDS = ("ds", "reclaimer", "threads", "key_range", "insert_pct",
                "delete_pct", "duration_ms", "reclaim_freq", "epoch_freq", "seed")

#: the desk-scale default experiment: 7 reclaimers x 3 structures x 3 thread
#: counts, update-heavy, 5 trials each
DEFAULT_MATRIX = {
    "ds": ["hml", "ll", "hmht"],
    "reclaimer": ["nr", "hp", "he", "ebr", "hp-pop", "he-pop", "epoch-pop"],
    "threads": [1, 4, 8],
    "key_range": 2048,
    "insert_pct": 50,
    "delete_pct": 50,
    "duration_ms": 1000,
    "reclaim_freq": 1024,
    "seed": 42,
    "trials": 5,
}

#: columns identifying one config (everything but trial/metrics)
KEY_FIELDS = ("ds", "reclaimer", "threads", "key_range", "insert_pct",
              "delete_pct", "duration_ms", "seed")

SUMMARY_COLUMNS = ("ds", "reclaimer", "threads", "key_range", "insert_pct",
                   "delete_pct", "duration_ms", "seed", "trials",
                   "median_trial", "median_throughput_mops",
                   "min_throughput_mops", "max_throughput_mops", "spread_pct",
                   "median_max_retire_list")


def load_matrix_spec(path: str) -> dict:
    if path == "default":
        return dict(DEFAULT_MATRIX)
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def expand_configs(spec: dict) -> list[BenchConfig]:
    spec = dict(spec)
    trials = int(spec.pop("trials", 5))
    stall = spec.pop("stall", None)
    sweeps = []
    for field in SWEEP_FIELDS:
        if field in spec:
            v = spec.pop(field)
            sweeps.append([(field, x) for x in (v if isinstance(v, list) else [v])])
    fixed = spec  # remaining keys passed straight to BenchConfig
    configs = []
    for combo in itertools.product(*sweeps):
        base = dict(combo)
        for trial in range(1, trials + 1):
            kw = dict(fixed)
            kw.update(base)
            kw["trial"] = trial
            if stall:
                kw["stall"] = StallSpec(**stall)
            configs.append(BenchConfig(**kw))
    return configs


def _row_key(row: dict) -> tuple:
    return tuple(str(row[k]) for k in KEY_FIELDS) + (str(row["trial"]),)


def completed_keys(csv_path: str) -> set:
    done = set()
    if not os.path.exists(csv_path):
        return done
    with open(csv_path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            done.add(_row_key(row))
    return done


def run_matrix(spec: dict, csv_path: str, progress=None) -> int:
    """Run every (config x trial) not already present in csv_path; append rows
    as they finish.  Returns the number of rows executed this call."""
    configs = expand_configs(spec)
    done = completed_keys(csv_path)
    new_file = not os.path.exists(csv_path) or os.path.getsize(csv_path) == 0
    ran = 0
    with open(csv_path, "a", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(CSV_COLUMNS))
        if new_file:
            writer.writeheader()
        for cfg in configs:
            row_key = _config_key(cfg)
            if row_key in done:
                continue
            try:
                result_row = run_trial(cfg).csv_row()
            except Exception as e:
                result_row = _error_row(cfg, f"{type(e).__name__}: {e}")
            writer.writerow(result_row)
            f.flush()
            done.add(row_key)
            ran += 1
            if progress is not None:
                progress(result_row)
    write_summary(csv_path)
    return ran


def _config_key(cfg: BenchConfig) -> tuple:
    return (cfg.ds, cfg.reclaimer, str(cfg.threads), str(cfg.key_range),
            str(cfg.insert_pct), str(cfg.delete_pct), str(cfg.duration_ms),
            str(cfg.seed)) + (str(cfg.trial),)


def _error_row(cfg: BenchConfig, err: str) -> dict:
    row = {c: 0 for c in CSV_COLUMNS}
    row.update(ds=cfg.ds, reclaimer=cfg.reclaimer, threads=cfg.threads,
               key_range=cfg.key_range, insert_pct=cfg.insert_pct,
               delete_pct=cfg.delete_pct, duration_ms=cfg.duration_ms,
               seed=cfg.seed, trial=cfg.trial, throughput_mops="0.000000",
               error=err)
    return row


def summary_path_for(csv_path: str) -> str:
    root, ext = os.path.splitext(csv_path)
    return f"{root}_summary{ext or '.csv'}"


def write_summary(csv_path: str) -> str:
    """Medians across trials per config; the median trial is marked."""
    groups: dict[tuple, list[dict]] = {}
    with open(csv_path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            if row["error"]:
                continue
            groups.setdefault(tuple(row[k] for k in KEY_FIELDS), []).append(row)
    out = summary_path_for(csv_path)
    with open(out, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(SUMMARY_COLUMNS))
        writer.writeheader()
        for key in sorted(groups):
            rows = groups[key]
            tputs = [(float(r["throughput_mops"]), int(r["trial"])) for r in rows]
            tputs.sort()
            med_tput, med_trial = tputs[len(tputs) // 2]
            lo, hi = tputs[0][0], tputs[-1][0]
            spread = 100.0 * (hi - lo) / med_tput if med_tput else 0.0
            writer.writerow(dict(
                zip(KEY_FIELDS, key),
                trials=len(rows),
                median_trial=med_trial,
                median_throughput_mops=f"{med_tput:.6f}",
                min_throughput_mops=f"{lo:.6f}",
                max_throughput_mops=f"{hi:.6f}",
                spread_pct=f"{spread:.2f}",
                median_max_retire_list=statistics.median(
                    int(r["max_retire_list"]) for r in rows),
            ))
    return out
