"""popplot acceptance: six figures from a default-matrix-shaped CSV, medians
matching an independent recomputation to the printed digit, deterministic
output, and a live round-trip through the popsmr CLI."""

import csv
import json
import statistics
import subprocess
import sys

import pytest

from popplot import FigureSpec, SchemaError, build_figures, load_rows, render
from popplot.cli import main

COLUMNS = ["ds", "reclaimer", "threads", "key_range", "insert_pct",
           "delete_pct", "duration_ms", "seed", "trial", "total_ops",
           "throughput_mops", "max_retire_list", "total_unreclaimed",
           "signals_sent", "handler_runs", "error"]

RECLAIMERS = ["nr", "hp", "he", "ebr", "hp-pop", "he-pop", "epoch-pop"]


def synth_matrix_csv(path, trials=5):
    """Deterministic default-matrix-shaped data: 3 ds x 7 reclaimers x
    {1,4,8} threads x trials."""
    rows = []
    for ds_i, ds in enumerate(("hml", "ll", "hmht")):
        for rec_i, rec in enumerate(RECLAIMERS):
            for threads in (1, 4, 8):
                for trial in range(1, trials + 1):
                    base = 1.0 + ds_i * 0.3 + rec_i * 0.11 + threads * 0.07
                    tput = base + 0.013 * ((trial * 7 + rec_i) % 5)
                    rows.append({
                        "ds": ds, "reclaimer": rec, "threads": threads,
                        "key_range": 2048, "insert_pct": 50, "delete_pct": 50,
                        "duration_ms": 1000, "seed": 42, "trial": trial,
                        "total_ops": int(tput * 1e6),
                        "throughput_mops": f"{tput:.6f}",
                        "max_retire_list": 100 + rec_i * 17 + threads,
                        "total_unreclaimed": 11 * rec_i,
                        "signals_sent": 0, "handler_runs": 0, "error": "",
                    })
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=COLUMNS)
        w.writeheader()
        w.writerows(rows)
    return rows


def test_six_figures_from_default_matrix(tmp_path):
    src = tmp_path / "matrix.csv"
    synth_matrix_csv(src)
    out_t = render(FigureSpec(csv_paths=[str(src)], metric="throughput_mops",
                              out_dir=str(tmp_path / "figs")))
    out_m = render(FigureSpec(csv_paths=[str(src)], metric="max_retire_list",
                              out_dir=str(tmp_path / "figs"), log_y=True))
    assert len(out_t) == 3 and len(out_m) == 3   # 3 tput + 3 memory figures
    for stem, info in {**out_t, **out_m}.items():
        assert set(info["medians"]) == set(RECLAIMERS)  # one series per reclaimer
        for f in info["files"]:
            import os
            assert os.path.getsize(f) > 0
    assert any(stem.endswith("logy_max_retire_list") for stem in out_m)


def test_medians_match_independent_recomputation(tmp_path):
    src = tmp_path / "matrix.csv"
    rows = synth_matrix_csv(src)
    out = render(FigureSpec(csv_paths=[str(src)], metric="throughput_mops",
                            out_dir=str(tmp_path / "figs")))
    for (ds, rec, threads) in [("hml", "hp-pop", 4), ("ll", "nr", 1),
                               ("hmht", "ebr", 8), ("hml", "he-pop", 8)]:
        vals = [float(r["throughput_mops"]) for r in rows
                if r["ds"] == ds and r["reclaimer"] == rec
                and r["threads"] == threads]
        expect = f"{statistics.median(vals):.6f}"
        stem = f"{ds}_100u_throughput_mops"
        idx = out[stem]["threads"][rec].index(threads)
        assert out[stem]["medians"][rec][idx] == expect


def test_rendering_is_deterministic(tmp_path):
    src = tmp_path / "matrix.csv"
    synth_matrix_csv(src)
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out_dir in (a, b):
        render(FigureSpec(csv_paths=[str(src)], metric="throughput_mops",
                          out_dir=str(out_dir), formats=("svg",)))
    fa = sorted(a.glob("*.svg"))
    fb = sorted(b.glob("*.svg"))
    assert fa and len(fa) == len(fb)
    for x, y in zip(fa, fb):
        assert x.read_bytes() == y.read_bytes()


def test_single_trial_no_error_band(tmp_path):
    src = tmp_path / "single.csv"
    synth_matrix_csv(src, trials=1)
    rows = load_rows([str(src)])
    figs = build_figures(rows, "throughput_mops")
    assert all(s.trials == 1 for f in figs for s in f.series)
    out = render(FigureSpec(csv_paths=[str(src)], metric="throughput_mops",
                            out_dir=str(tmp_path / "figs"), formats=("svg",)))
    assert len(out) == 3


def test_schema_mismatch_names_missing_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("ds,reclaimer,threads\nhml,nr,1\n")
    with pytest.raises(SchemaError) as exc:
        load_rows([str(bad)])
    assert "throughput_mops" in str(exc.value)
    rc = main(["--csv", str(bad), "--out", str(tmp_path / "f")])
    assert rc == 2


def test_error_rows_are_skipped(tmp_path):
    src = tmp_path / "m.csv"
    rows = synth_matrix_csv(src, trials=2)
    # poison one config entirely: it must vanish from the series
    with open(src, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=COLUMNS)
        w.writeheader()
        for r in rows:
            if r["reclaimer"] == "hp" and r["ds"] == "hml":
                r = dict(r, error="boom")
            w.writerow(r)
    out = render(FigureSpec(csv_paths=[str(src)], metric="throughput_mops",
                            out_dir=str(tmp_path / "figs"), formats=("svg",)))
    assert "hp" not in out["hml_100u_throughput_mops"]["medians"]
    assert "hp" in out["ll_100u_throughput_mops"]["medians"]


def test_cli_prints_medians_and_writes_both_formats(tmp_path, capsys):
    src = tmp_path / "matrix.csv"
    synth_matrix_csv(src)
    rc = main(["--csv", str(src), "--metric", "throughput_mops",
               "--out", str(tmp_path / "figs")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "median[hp-pop]" in out
    svgs = list((tmp_path / "figs").glob("*.svg"))
    pngs = list((tmp_path / "figs").glob("*.png"))
    assert len(svgs) == 3 and len(pngs) == 3


def test_live_roundtrip_through_popsmr_cli(tmp_path):
    """Consume the primary strictly through its CLI + CSV interface."""
    spec = {"ds": ["hml"], "reclaimer": ["nr", "ebr"], "threads": [1],
            "key_range": 128, "duration_ms": 80, "trials": 2,
            "visit_spins": 0, "fence_spins": 0, "reclaim_freq": 64}
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out_csv = tmp_path / "live.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "popsmr.cli", "matrix", "--spec", str(spec_path),
         "--csv", str(out_csv), "--quiet"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    out = render(FigureSpec(csv_paths=[str(out_csv)], metric="throughput_mops",
                            out_dir=str(tmp_path / "figs"), formats=("svg",)))
    (stem, info), = out.items()
    assert set(info["medians"]) == {"nr", "ebr"}
    with open(out_csv) as f:
        rows = list(csv.DictReader(f))
    for rec in ("nr", "ebr"):
        vals = [float(r["throughput_mops"]) for r in rows if r["reclaimer"] == rec]
        assert info["medians"][rec][0] == f"{statistics.median(vals):.6f}"
