"""Benchmark reports: tab-separated timing tables and matplotlib figures."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, asdict, fields
from pathlib import Path


@dataclass
class BenchRow:
    n: int
    vertices: int
    edges: int
    width: int
    states: int
    elapsed_ms: float
    count: str


def format_tsv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow([f.name for f in fields(BenchRow)])
    for row in rows:
        d = asdict(row)
        d["elapsed_ms"] = f"{row.elapsed_ms:.3f}"
        writer.writerow(d.values())
    return buf.getvalue()


def plot_bench(rows: list[BenchRow], path: str | Path, title: str = "") -> Path:
    """Render elapsed time against ``n`` (log-scaled time axis) to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    fig, (ax_t, ax_s) = plt.subplots(1, 2, figsize=(9, 3.6))
    ns = [r.n for r in rows]
    ax_t.plot(ns, [max(r.elapsed_ms, 1e-3) for r in rows], "o-", color="tab:blue")
    ax_t.set_yscale("log")
    ax_t.set_xlabel("n")
    ax_t.set_ylabel("elapsed (ms)")
    ax_s.plot(ns, [r.states for r in rows], "s-", color="tab:orange")
    ax_s.set_xlabel("n")
    ax_s.set_ylabel("root table entries")
    for ax in (ax_t, ax_s):
        ax.grid(True, alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
