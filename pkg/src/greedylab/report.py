"""Report emission: long-format CSV, verdict JSON, and rendered figures.

CSV is the contract and is byte-stable for a fixed (config, seed): rows are
written in measurement order with fixed %.12g formatting.  Figures are a
convenience layer on top of the same rows; matplotlib is imported lazily so
library users who never render pay nothing.
"""

from __future__ import annotations

import csv
import json
from collections import defaultdict
from pathlib import Path

from .suites import SuiteResult

CSV_HEADER = ["quantity", "scale", "value", "bound_kind", "witness", "seed"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def write_rows_csv(rows, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([_fmt(v) for v in r.row()])
    return path


def write_verdicts_json(result: SuiteResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "format_version": 1,
        "suite": result.suite,
        "passed": result.passed,
        "verdicts": [{"criterion": v.criterion, "passed": v.passed,
                      "details": _jsonable(v.details)} for v in result.verdicts],
        "provenance": result.provenance,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def render_figures(result: SuiteResult, outdir: str | Path) -> list[Path]:
    """One PNG per suite summarizing its measured curves."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    series = defaultdict(list)
    for r in result.rows:
        series[r.quantity].append((r.scale, r.value))

    if not series:
        return []
    ncols = min(3, len(series))
    nrows = (len(series) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows),
                             squeeze=False)
    for ax in axes.flat:
        ax.set_visible(False)
    for ax, (name, pts) in zip(axes.flat, sorted(series.items())):
        ax.set_visible(True)
        pts = sorted(pts)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        ax.plot(xs, ys, "o-", ms=3, lw=1)
        ax.set_title(name, fontsize=9)
        ax.grid(alpha=0.3)
        if all(x > 0 for x in xs) and max(xs) / max(min(xs), 1e-12) > 50:
            ax.set_xscale("log")
        if all(y > 0 for y in ys) and max(ys) / max(min(ys), 1e-12) > 50:
            ax.set_yscale("log")
    fig.suptitle(f"suite: {result.suite}", fontsize=11)
    fig.tight_layout()
    out = outdir / f"{result.suite}_report.png"
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return [out]


def emit_report(result: SuiteResult, outdir: str | Path,
                figures: bool = True) -> dict:
    """Write <suite>.csv and <suite>_verdicts.json (and figures) to outdir."""
    outdir = Path(outdir)
    paths = {
        "csv": write_rows_csv(result.rows, outdir / f"{result.suite}.csv"),
        "verdicts": write_verdicts_json(result, outdir / f"{result.suite}_verdicts.json"),
    }
    if figures:
        figs = render_figures(result, outdir)
        if figs:
            paths["figure"] = figs[0]
    return paths
