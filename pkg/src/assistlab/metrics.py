"""Per-mode trial metrics computed from sub-task outcome records.

Each mode pairs a success percentage with a time-style metric:
locate -> average reach time, select -> average extra time beyond the
required dwell, follow -> average overlapped fraction of the fly time.
Averages default to dividing by the number of successful sub-tasks; the
paper_literal flag divides the same sums by the total count instead, and
is computed as corrected * successes / n so the two modes always satisfy
that identity exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class EmptyRecordSet(ValueError):
    """A metric was requested over zero records."""


@dataclass(frozen=True)
class SubTaskRecord:
    """Outcome of one sub-task. Mode is 'locate', 'select' or 'follow'.

    reach_time is present only for locate successes; cumulative_overlap and
    dwell_required only for select; overlap_time and fly_time only for
    follow. All times are seconds and non-negative.
    """

    mode: str
    index: int
    success: bool
    reach_time: float | None = None
    cumulative_overlap: float | None = None
    dwell_required: float | None = None
    overlap_time: float | None = None
    fly_time: float | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("locate", "select", "follow"):
            raise ValueError(f"unknown record mode {self.mode!r}")
        locate_ok = (self.reach_time is not None) == (self.mode == "locate" and self.success)
        select_ok = (self.cumulative_overlap is not None) == (self.mode == "select") and (
            (self.dwell_required is not None) == (self.mode == "select")
        )
        follow_ok = (self.overlap_time is not None) == (self.mode == "follow") and (
            (self.fly_time is not None) == (self.mode == "follow")
        )
        if not (locate_ok and select_ok and follow_ok):
            raise ValueError(f"record fields do not match mode {self.mode!r}: {self}")
        for name in ("reach_time", "cumulative_overlap", "dwell_required", "overlap_time", "fly_time"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        if self.mode == "follow" and self.overlap_time > self.fly_time:
            raise ValueError(
                f"overlap_time {self.overlap_time} exceeds fly_time {self.fly_time}"
            )


@dataclass(frozen=True)
class ModeSummary:
    """One row of a results table: success share plus the mode's time metric.

    time_metric is seconds for locate/select and a percentage for follow;
    None when there were no successful sub-tasks to average over.
    """

    mode: str
    n: int
    successes: int
    success_pct: float
    time_metric: float | None


def _check(records: list[SubTaskRecord], mode: str) -> None:
    if not records:
        raise EmptyRecordSet(f"no {mode} records")
    for record in records:
        if record.mode != mode:
            raise ValueError(f"expected {mode} record, got {record.mode!r}")


def _averaged(total: float, successes: int, n: int, paper_literal: bool) -> float | None:
    if successes == 0:
        return None
    corrected = total / successes
    if paper_literal:
        return corrected * successes / n
    return corrected


def compute_locate(records: list[SubTaskRecord], paper_literal: bool = False) -> ModeSummary:
    """Target Reached % and Avg. Reach Time over locate records."""
    _check(records, "locate")
    n = len(records)
    wins = [r for r in records if r.success]
    # fsum: exactly rounded, so record order cannot change the average
    total = math.fsum(r.reach_time for r in wins)
    return ModeSummary(
        mode="locate",
        n=n,
        successes=len(wins),
        success_pct=100.0 * len(wins) / n,
        time_metric=_averaged(total, len(wins), n, paper_literal),
    )


def compute_select(records: list[SubTaskRecord], paper_literal: bool = False) -> ModeSummary:
    """Target Selected % and Avg. Extra Time Required over select records."""
    _check(records, "select")
    n = len(records)
    wins = [r for r in records if r.success]
    total = math.fsum(r.cumulative_overlap - r.dwell_required for r in wins)
    return ModeSummary(
        mode="select",
        n=n,
        successes=len(wins),
        success_pct=100.0 * len(wins) / n,
        time_metric=_averaged(total, len(wins), n, paper_literal),
    )


def compute_follow(records: list[SubTaskRecord], paper_literal: bool = False) -> ModeSummary:
    """Moving Target Touched % and Avg. Follow % over follow records.

    The follow ratio is averaged over touched sub-tasks only; untouched
    ones still count toward n. Reported as a percentage.
    """
    _check(records, "follow")
    n = len(records)
    wins = [r for r in records if r.success]
    total = math.fsum(r.overlap_time / r.fly_time for r in wins)
    averaged = _averaged(total, len(wins), n, paper_literal)
    return ModeSummary(
        mode="follow",
        n=n,
        successes=len(wins),
        success_pct=100.0 * len(wins) / n,
        time_metric=None if averaged is None else 100.0 * averaged,
    )


_COMPUTE = {"locate": compute_locate, "select": compute_select, "follow": compute_follow}


def compute_for_mode(
    mode: str, records: list[SubTaskRecord], paper_literal: bool = False
) -> ModeSummary:
    return _COMPUTE[mode](records, paper_literal)
