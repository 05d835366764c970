import csv
import io
from typing import Iterable

from .Harness import BenchReport

CSV_HEADER = (
    "n",
    "nodes",
    "C",
    "D",
    "I",
    "t_gen",
    "t_opt",
    "t_lower",
    "t_e",
    "t_e_opt",
    "flops_speedup",
    "measured_speedup",
)


def report_row(report: BenchReport) -> list:
    """One CSV row; graph columns describe the reduced graph."""
    after = report.after.to_json()
    return [
        report.n if report.n is not None else "",
        report.nodes,
        after["C"],
        after["D"],
        after["I"],
        report.t_gen,
        report.t_opt,
        report.t_lower,
        report.t_e,
        report.t_e_opt,
        report.flops_speedup,
        report.measured_speedup,
    ]


def export_csv(reports: Iterable[BenchReport]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        writer.writerow(report_row(report))
    return buffer.getvalue()


def export_curve_csv(report: BenchReport) -> str:
    """Speedup against sample count, one row per N."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("N", "speedup"))
    writer.writerows(report.curve)
    return buffer.getvalue()


def save_csv(reports: Iterable[BenchReport], path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(export_csv(reports))
