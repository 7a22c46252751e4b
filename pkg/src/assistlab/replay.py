"""Rebuild sub-task records from a session's raw event stream.

The engine writes records from its own accumulators; this module derives
the same records purely from the emitted events plus the task spec, which
is what `replay` uses to verify a stored log's trailer. Times follow the
engine's arithmetic exactly (integer ticks divided by the tick rate), so
matching records compare equal, not merely close.
"""

from __future__ import annotations

from .engine import EventKind, SessionEvent, TaskMode, TaskSpec
from .metrics import SubTaskRecord


def records_from_events(spec: TaskSpec, events: list[SessionEvent]) -> list[SubTaskRecord]:
    """Walk the event stream once and emit one record per resolved sub-task."""
    records: list[SubTaskRecord] = []
    rate = spec.tick_rate
    appeared_tick = 0
    open_enter: int | None = None
    overlap_ticks = 0
    index = 0

    for event in events:
        if event.kind is EventKind.SUBTASK_STARTED:
            index = event.data["subtask"]
            # A later sub-task appears on the boundary before its start
            # event's tick; the session's first appears at tick 0 itself.
            appeared_tick = event.tick - 1 if event.tick > 0 else 0
            open_enter = None
            overlap_ticks = 0
        elif event.kind is EventKind.OVERLAP_ENTERED:
            open_enter = event.tick
        elif event.kind is EventKind.OVERLAP_EXITED:
            if open_enter is not None:
                overlap_ticks += event.tick - open_enter
                open_enter = None
        elif event.kind in (EventKind.SUBTASK_SUCCEEDED, EventKind.SUBTASK_FAILED):
            success = event.kind is EventKind.SUBTASK_SUCCEEDED
            if open_enter is not None:
                # Overlap still open: the resolution tick itself counts.
                overlap_ticks += event.tick - open_enter + 1
                open_enter = None
            sub = spec.sub_tasks[index]
            if spec.mode is TaskMode.LOCATE:
                records.append(
                    SubTaskRecord(
                        mode="locate",
                        index=index,
                        success=success,
                        reach_time=(event.tick - appeared_tick) / rate if success else None,
                    )
                )
            elif spec.mode is TaskMode.SELECT:
                records.append(
                    SubTaskRecord(
                        mode="select",
                        index=index,
                        success=success,
                        cumulative_overlap=overlap_ticks / rate,
                        dwell_required=sub.dwell_required,
                    )
                )
            else:
                records.append(
                    SubTaskRecord(
                        mode="follow",
                        index=index,
                        success=success,
                        overlap_time=overlap_ticks / rate,
                        fly_time=(event.tick - appeared_tick) / rate,
                    )
                )
    return records
