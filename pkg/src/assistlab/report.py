"""Results tables: one block per task mode, split into No-AI and AI sections.

Rendering follows the study-table style: percents with one decimal
(trailing .0 trimmed, so 100 renders as "100%"), reach times with two
decimals, select extra times with three, follow ratios as percents. Output
comes as aligned plain text and as RFC-4180 CSV.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .metrics import ModeSummary

MODE_ORDER = ("locate", "select", "follow")

MODE_TITLES = {
    "locate": ("Locate Mode", "Target Reached %", "Avg. Reach Time"),
    "select": ("Select Mode", "Target Selected %", "Avg. Extra Time Required"),
    "follow": ("Follow Mode", "Moving Target Touched %", "Avg. Follow %"),
}

_TIME_DECIMALS = {"locate": 2, "select": 3}

NO_AI_SECTION = "No AI Support"
AI_SECTION = "AI Support"
OVERALL_LABEL = "Overall Average"


def format_percent(value: float) -> str:
    text = f"{value:.1f}".rstrip("0").rstrip(".")
    return f"{text}%"


def format_seconds(value: float, decimals: int) -> str:
    return f"{value:.{decimals}f}s"


def format_time_metric(mode: str, value: float | None) -> str:
    if value is None:
        return "-"
    if mode == "follow":
        return format_percent(value)
    return format_seconds(value, _TIME_DECIMALS[mode])


@dataclass(frozen=True)
class ConditionSummary:
    """One table row: an input condition and its per-mode summary."""

    label: str
    assisted: bool
    summary: ModeSummary


@dataclass(frozen=True)
class ReportRow:
    section: str
    label: str
    success_pct: float | None
    time_metric: float | None


@dataclass
class ReportTable:
    """All mode blocks of one run, renderable as text or CSV."""

    run_label: str
    blocks: dict[str, list[ReportRow]]

    def to_text(self) -> str:
        lines = [f"Results: {self.run_label}", ""]
        for mode in MODE_ORDER:
            if mode not in self.blocks:
                continue
            title, success_title, time_title = MODE_TITLES[mode]
            rows = [
                (
                    row.section,
                    row.label,
                    "-" if row.success_pct is None else format_percent(row.success_pct),
                    format_time_metric(mode, row.time_metric),
                )
                for row in self.blocks[mode]
            ]
            header = ("", "Input", success_title, time_title)
            widths = [
                max(len(r[i]) for r in [header, *rows]) for i in range(4)
            ]
            lines.append(f"== {title} ==")
            lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip())
            lines.append("-" * (sum(widths) + 6))
            for row in rows:
                lines.append(
                    "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
                )
            lines.append("")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["mode", "section", "input", "success", "time"])
        for mode in MODE_ORDER:
            for row in self.blocks.get(mode, []):
                writer.writerow(
                    [
                        mode,
                        row.section,
                        row.label,
                        "-" if row.success_pct is None else format_percent(row.success_pct),
                        format_time_metric(mode, row.time_metric),
                    ]
                )
        return buffer.getvalue()


def summarize(run_label: str, conditions: list[ConditionSummary]) -> ReportTable:
    """Group condition summaries into mode blocks with an overall-average row.

    Within each mode, unassisted conditions come first (the baseline
    section), assisted ones second, preserving input order inside each
    section. The overall average spans every condition row of that mode;
    rows without a time metric are skipped in its time average.
    """
    blocks: dict[str, list[ReportRow]] = {}
    for mode in MODE_ORDER:
        in_mode = [c for c in conditions if c.summary.mode == mode]
        if not in_mode:
            continue
        ordered = [c for c in in_mode if not c.assisted] + [c for c in in_mode if c.assisted]
        rows = [
            ReportRow(
                section=AI_SECTION if c.assisted else NO_AI_SECTION,
                label=c.label,
                success_pct=c.summary.success_pct,
                time_metric=c.summary.time_metric,
            )
            for c in ordered
        ]
        success_values = [r.success_pct for r in rows]
        time_values = [r.time_metric for r in rows if r.time_metric is not None]
        rows.append(
            ReportRow(
                section="",
                label=OVERALL_LABEL,
                success_pct=sum(success_values) / len(success_values),
                time_metric=sum(time_values) / len(time_values) if time_values else None,
            )
        )
        blocks[mode] = rows
    return ReportTable(run_label=run_label, blocks=blocks)
