"""Figure construction from popsmr bench CSVs.

One figure per (data structure, workload mix): x = threads, y = the chosen
metric, one series per reclaimer with the median across trials as the line and
the min/max spread as a band.  Ordering and palette are fixed so a given CSV
always renders byte-identical output.
"""

from __future__ import annotations

import csv
import os
import statistics
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "popplot"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

METRICS = ("throughput_mops", "max_retire_list", "total_unreclaimed")

REQUIRED_COLUMNS = (
    "ds", "reclaimer", "threads", "key_range", "insert_pct", "delete_pct",
    "duration_ms", "seed", "trial", "total_ops", "throughput_mops",
    "max_retire_list", "total_unreclaimed", "signals_sent", "handler_runs",
    "error",
)

#: fixed palette: one color per reclaimer CLI name, stable across figures
PALETTE = {
    "nr": "#555555",
    "hp": "#1f77b4",
    "he": "#2ca02c",
    "ebr": "#ff7f0e",
    "hp-pop": "#d62728",
    "he-pop": "#9467bd",
    "epoch-pop": "#8c564b",
    "hp-asym": "#bcbd22",
}
FALLBACK_COLORS = ("#17becf", "#e377c2", "#7f7f7f")

METRIC_LABELS = {
    "throughput_mops": "throughput (Mops/s)",
    "max_retire_list": "max retire-list length per thread",
    "total_unreclaimed": "unreclaimed objects at end",
}


class SchemaError(ValueError):
    pass


@dataclass
class FigureSpec:
    csv_paths: list[str]
    metric: str = "throughput_mops"
    log_y: bool = False
    out_dir: str = "figs"
    formats: tuple = ("svg", "png")

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")


@dataclass
class Series:
    reclaimer: str
    threads: list[int]
    medians: list[float]
    mins: list[float]
    maxes: list[float]
    trials: int

    def printed_medians(self) -> list[str]:
        return [f"{m:.6f}" for m in self.medians]


@dataclass
class FigureData:
    ds: str
    insert_pct: int
    delete_pct: int
    metric: str
    series: list[Series] = field(default_factory=list)

    @property
    def workload_tag(self) -> str:
        return f"{self.insert_pct + self.delete_pct}u"

    def stem(self, log_y: bool) -> str:
        parts = [self.ds, self.workload_tag]
        if log_y:
            parts.append("logy")
        parts.append(self.metric)
        return "_".join(parts)


def load_rows(csv_paths) -> list[dict]:
    rows = []
    for path in csv_paths:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise SchemaError(
                    f"{path}: missing column(s) {', '.join(missing)}")
            rows.extend(reader)
    return rows


def build_figures(rows: list[dict], metric: str) -> list[FigureData]:
    """Group rows into per-(ds, workload) figures with one series per
    reclaimer; medians across trials, min/max spread."""
    groups: dict[tuple, dict[str, dict[int, list[float]]]] = {}
    for row in rows:
        if row["error"]:
            continue
        key = (row["ds"], int(row["insert_pct"]), int(row["delete_pct"]))
        per_rec = groups.setdefault(key, {})
        per_thr = per_rec.setdefault(row["reclaimer"], {})
        per_thr.setdefault(int(row["threads"]), []).append(float(row[metric]))

    figures = []
    for (ds, ins, dele) in sorted(groups):
        fig = FigureData(ds=ds, insert_pct=ins, delete_pct=dele, metric=metric)
        per_rec = groups[(ds, ins, dele)]
        order = [r for r in PALETTE if r in per_rec]
        order += sorted(set(per_rec) - set(order))
        for rec in order:
            per_thr = per_rec[rec]
            threads = sorted(per_thr)
            vals = [sorted(per_thr[t]) for t in threads]
            fig.series.append(Series(
                reclaimer=rec,
                threads=threads,
                medians=[statistics.median(v) for v in vals],
                mins=[v[0] for v in vals],
                maxes=[v[-1] for v in vals],
                trials=max(len(v) for v in vals),
            ))
        figures.append(fig)
    return figures


def _color(reclaimer: str, i: int) -> str:
    return PALETTE.get(reclaimer, FALLBACK_COLORS[i % len(FALLBACK_COLORS)])


def render_figure(fig_data: FigureData, spec: FigureSpec) -> list[str]:
    """Draw one figure; returns the written file paths."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i, s in enumerate(fig_data.series):
        color = _color(s.reclaimer, i)
        ax.plot(s.threads, s.medians, marker="o", label=s.reclaimer, color=color)
        if s.trials > 1:
            ax.fill_between(s.threads, s.mins, s.maxes, color=color, alpha=0.15,
                            linewidth=0)
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("threads")
    ax.set_ylabel(METRIC_LABELS[fig_data.metric])
    ax.set_title(f"{fig_data.ds} {fig_data.workload_tag} "
                 f"({fig_data.insert_pct}% ins / {fig_data.delete_pct}% del)")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()

    os.makedirs(spec.out_dir, exist_ok=True)
    written = []
    stem = fig_data.stem(spec.log_y)
    for ext in spec.formats:
        path = os.path.join(spec.out_dir, f"{stem}.{ext}")
        fig.savefig(path, metadata={"Date": None} if ext == "svg" else None)
        written.append(path)
    plt.close(fig)
    return written


def render(spec: FigureSpec) -> dict:
    """Load, group and render every figure for the spec's metric.

    Returns {figure_stem: {"files": [...], "medians": {reclaimer: [printed]}}}.
    """
    rows = load_rows(spec.csv_paths)
    figures = build_figures(rows, spec.metric)
    out = {}
    for fd in figures:
        if not fd.series:
            print(f"warning: no usable series for {fd.ds}/{fd.workload_tag}")
            continue
        files = render_figure(fd, spec)
        out[fd.stem(spec.log_y)] = {
            "files": files,
            "medians": {s.reclaimer: s.printed_medians() for s in fd.series},
            "threads": {s.reclaimer: s.threads for s in fd.series},
        }
    return out
