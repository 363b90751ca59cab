"""Rendering of comparison reports: text table, CSV and a speedup figure."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .harness import ComparisonReport  # noqa: E402

CSV_FIELDS = ["algorithm", "workers", "measured_speedup", "predicted_declared",
              "predicted_empirical", "deviation"]


def _fmt_k(v):
    return "unbounded" if v is None else f"{v:.4f}"


def format_report(report: ComparisonReport) -> str:
    lines = [
        f"algorithm      {report.algorithm}",
        f"declared f     {report.declared_f:.4f}",
        f"empirical f    {report.empirical_f:.4f}   (gap {report.f_gap:+.4f})",
        f"max(k) P={report.P_model}     declared {_fmt_k(report.max_k_declared)}   "
        f"empirical {_fmt_k(report.max_k_empirical)}",
        "",
        f"{'workers':>7}  {'measured':>9}  {'S(f_decl)':>9}  {'S(f_emp)':>9}  {'gap':>8}",
    ]
    for r in report.rows:
        lines.append(
            f"{r.workers:>7}  {r.measured:>9.4f}  {r.predicted_declared:>9.4f}  "
            f"{r.predicted_empirical:>9.4f}  {r.deviation:>+8.2%}"
        )
    return "\n".join(lines) + "\n"


def write_report_csv(reports, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_FIELDS)
        for rep in reports:
            for r in rep.rows:
                w.writerow([rep.algorithm, r.workers, repr(r.measured), repr(r.predicted_declared),
                            repr(r.predicted_empirical), repr(r.deviation)])


def plot_speedup(report: ComparisonReport, path) -> Path:
    """Measured speedup against both Amdahl predictions and the linear ideal."""
    ws = [r.workers for r in report.rows]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(ws, ws, ":", color="0.6", label="linear")
    ax.plot(ws, [r.predicted_declared for r in report.rows], "s--",
            label=f"Amdahl, declared f={report.declared_f:.3f}")
    ax.plot(ws, [r.predicted_empirical for r in report.rows], "^--",
            label=f"Amdahl, empirical f={report.empirical_f:.3f}")
    ax.plot(ws, [r.measured for r in report.rows], "o-", color="k", label="measured")
    ax.set_xlabel("workers")
    ax.set_ylabel("speedup")
    ax.set_title(report.algorithm)
    ax.set_xticks(ws)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path
