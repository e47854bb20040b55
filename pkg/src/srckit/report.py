"""Report emission: JSON, delimited CSV, and an SVG figure with the three
error panels (overall error per solver, dominance error, error given
dominance failure) rendered next to the delimited output.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .harness import METRICS, BenchmarkReport

JSON = "json"
CSV = "csv"
SVG = "svg"
SINKS = (JSON, CSV, SVG)

_PANELS = (
    ("L", "overall error L"),
    ("dominance_error", "dominance error 1 - P_D"),
    ("P2", "error given dominance failure P2"),
)


def emit_report(report: BenchmarkReport, sinks, out_dir, stem: str = "report"):
    """Write the report to the requested sinks; returns the written paths.

    json: the full report, schema-versioned. csv: one row per
    (series, index, metric, value). svg: three labeled panels of mean error
    curves over the sparsity sweep, with baseline curves over projection
    dimension overlaid on the first panel when present.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for sink in sinks:
        if sink == JSON:
            path = out_dir / f"{stem}.json"
            path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
        elif sink == CSV:
            path = out_dir / f"{stem}.csv"
            path.write_text(_render_csv(report))
        elif sink == SVG:
            path = out_dir / f"{stem}.svg"
            _render_svg(report, path)
        else:
            raise ValueError(f"unknown sink {sink!r}; choose from {SINKS}")
        written.append(path)
    return written


def _render_csv(report: BenchmarkReport) -> str:
    lines = ["series,index,metric,value"]
    for name, res in report.solvers.items():
        for metric in METRICS:
            for s, value in enumerate(res.mean[metric], start=1):
                lines.append(f"{name},{s},{metric},{value!r}")
    for name, res in report.baselines.items():
        for d, value in enumerate(res.mean, start=1):
            lines.append(f"{name},{d},error,{value!r}")
    return "\n".join(lines) + "\n"


def _render_svg(report: BenchmarkReport, path: Path):
    with plt.rc_context({"svg.hashsalt": "srckit"}):
        fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
        for ax, (metric, title) in zip(axes, _PANELS):
            for name, res in report.solvers.items():
                curve = res.mean[metric]
                ax.plot(range(1, len(curve) + 1), curve, label=name)
            if metric == "L":
                for name, res in report.baselines.items():
                    if len(res.mean):
                        ax.plot(
                            range(1, len(res.mean) + 1),
                            res.mean,
                            linestyle="--",
                            label=f"{name} (over d)",
                        )
            ax.set_xlabel("sparsity level s / dimension d" if metric == "L" else "sparsity level s")
            ax.set_ylabel("error rate")
            ax.set_title(title)
            ax.set_ylim(bottom=0)
            if ax.has_data():
                ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
