"""Deterministic fixed-tick session engine for the three trial modes.

A session is an ordered list of sub-tasks, one visible target at a time.
Each `step` advances exactly one tick: the raw input delta is passed
through the configured assistance, the cursor moves and is clamped to the
canvas, overlap with the current target is tested, and the mode rules
decide whether the sub-task resolved. All state is counted in integer
ticks; seconds only appear when records are built (ticks / tick_rate),
which keeps accumulation drift-free and replays bit-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .assist import AssistConfig, apply_assist
from .geometry import TargetRect, Vec2, point_in_rect
from .metrics import SubTaskRecord


class TaskMode(Enum):
    LOCATE = "locate"
    SELECT = "select"
    FOLLOW = "follow"


class EventKind(Enum):
    SUBTASK_STARTED = "subtask-started"
    CURSOR_MOVED = "cursor-moved"
    OVERLAP_ENTERED = "overlap-entered"
    OVERLAP_EXITED = "overlap-exited"
    SUBTASK_SUCCEEDED = "subtask-succeeded"
    SUBTASK_FAILED = "subtask-failed"
    SESSION_ENDED = "session-ended"


class InvalidSpec(ValueError):
    """Task spec violates a structural invariant."""


class SessionAlreadyEnded(RuntimeError):
    """step() called on a session that already emitted SESSION_ENDED."""


@dataclass(frozen=True)
class SubTaskSpec:
    """One target presentation. Only the fields of its task mode may be set.

    Locate: availability_window (s). Select: dwell_required (s) and
    select_timeout (s). Follow: path waypoints plus speed (px/s); the
    target rect supplies the moving target's size, its position is driven
    along the path.
    """

    target: TargetRect
    availability_window: float | None = None
    dwell_required: float | None = None
    select_timeout: float | None = None
    path: tuple[Vec2, ...] | None = None
    speed: float | None = None


@dataclass(frozen=True)
class TaskSpec:
    mode: TaskMode
    sub_tasks: tuple[SubTaskSpec, ...]
    canvas_width: float = 1920.0
    canvas_height: float = 1080.0
    tick_rate: int = 60
    assist: AssistConfig = field(default_factory=AssistConfig)

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_rate


@dataclass
class SessionEvent:
    tick: int
    kind: EventKind
    data: dict


@dataclass
class SessionState:
    """Mutable per-session state; step() advances it one tick at a time."""

    cursor: Vec2
    tick: int = 0
    subtask_index: int = 0
    ended: bool = False
    awaiting_start: bool = False
    appeared_tick: int = 0
    reached_tick: int | None = None
    overlapping: bool = False
    continuous_overlap_ticks: int = 0
    cumulative_overlap_ticks: int = 0
    records: list[SubTaskRecord] = field(default_factory=list)
    events: list[SessionEvent] = field(default_factory=list)


def _seconds_to_ticks(seconds: float, tick_rate: int) -> int:
    # Small slack so e.g. 1.0 s at 60 Hz is exactly 60 ticks.
    return max(1, math.ceil(seconds * tick_rate - 1e-9))


def path_length(path: tuple[Vec2, ...]) -> float:
    total = 0.0
    for a, b in zip(path, path[1:]):
        total += a.distance_to(b)
    return total


def path_position(path: tuple[Vec2, ...], distance_along: float) -> Vec2:
    """Arc-length position along the waypoint polyline, clamped to its end."""
    if distance_along <= 0.0:
        return path[0]
    remaining = distance_along
    for a, b in zip(path, path[1:]):
        segment = a.distance_to(b)
        if remaining <= segment:
            if segment == 0.0:
                continue
            t = remaining / segment
            return lerp_points(a, b, t)
        remaining -= segment
    return path[-1]


def lerp_points(a: Vec2, b: Vec2, t: float) -> Vec2:
    return Vec2(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


def validate_spec(spec: TaskSpec) -> None:
    """Raise InvalidSpec when the spec breaks a structural invariant."""
    if not spec.sub_tasks:
        raise InvalidSpec("sub_tasks must be non-empty")
    if spec.tick_rate <= 0:
        raise InvalidSpec(f"tick_rate must be > 0, got {spec.tick_rate}")
    if spec.canvas_width <= 0 or spec.canvas_height <= 0:
        raise InvalidSpec(
            f"canvas must be positive, got {spec.canvas_width} x {spec.canvas_height}"
        )
    for i, sub in enumerate(spec.sub_tasks):
        given = {
            "availability_window": sub.availability_window is not None,
            "dwell_required": sub.dwell_required is not None,
            "select_timeout": sub.select_timeout is not None,
            "path": sub.path is not None,
            "speed": sub.speed is not None,
        }
        if spec.mode is TaskMode.LOCATE:
            wanted = {"availability_window"}
        elif spec.mode is TaskMode.SELECT:
            wanted = {"dwell_required", "select_timeout"}
        else:
            wanted = {"path", "speed"}
        for name, present in given.items():
            if present and name not in wanted:
                raise InvalidSpec(f"sub_tasks[{i}].{name} is not a {spec.mode.value} field")
            if not present and name in wanted:
                raise InvalidSpec(f"sub_tasks[{i}].{name} is required in {spec.mode.value} mode")
        if spec.mode is TaskMode.LOCATE and sub.availability_window <= 0:
            raise InvalidSpec(f"sub_tasks[{i}].availability_window must be > 0")
        if spec.mode is TaskMode.SELECT:
            if sub.dwell_required <= 0:
                raise InvalidSpec(f"sub_tasks[{i}].dwell_required must be > 0")
            if sub.select_timeout <= 0:
                raise InvalidSpec(f"sub_tasks[{i}].select_timeout must be > 0")
        if spec.mode is TaskMode.FOLLOW:
            if len(sub.path) < 2:
                raise InvalidSpec(f"sub_tasks[{i}].path needs at least 2 waypoints")
            if sub.speed <= 0:
                raise InvalidSpec(f"sub_tasks[{i}].speed must be > 0")
            if path_length(sub.path) <= 0:
                raise InvalidSpec(f"sub_tasks[{i}].path has zero length")


def _clamp_to_canvas(p: Vec2, spec: TaskSpec) -> Vec2:
    return Vec2(
        min(max(p.x, 0.0), spec.canvas_width),
        min(max(p.y, 0.0), spec.canvas_height),
    )


def _target_rect_at(sub: SubTaskSpec, mode: TaskMode, elapsed_seconds: float) -> TargetRect:
    if mode is not TaskMode.FOLLOW:
        return sub.target
    center = path_position(sub.path, elapsed_seconds * sub.speed)
    return replace(
        sub.target,
        x=center.x - sub.target.width / 2.0,
        y=center.y - sub.target.height / 2.0,
    )


def active_target_rect(state: SessionState, spec: TaskSpec) -> TargetRect:
    """The rect the upcoming tick will be tested against (for aiming/display)."""
    sub = spec.sub_tasks[state.subtask_index]
    if state.awaiting_start:
        return _target_rect_at(sub, spec.mode, 0.0)
    elapsed = (state.tick - state.appeared_tick) / spec.tick_rate
    return _target_rect_at(sub, spec.mode, elapsed)


def subtask_elapsed_seconds(state: SessionState, spec: TaskSpec) -> float:
    if state.awaiting_start:
        return 0.0
    return (state.tick - state.appeared_tick) / spec.tick_rate


def _rect_payload(rect: TargetRect) -> dict:
    return {"x": rect.x, "y": rect.y, "w": rect.width, "h": rect.height, "id": rect.id}


def start_session(spec: TaskSpec, initial_cursor: Vec2) -> SessionState:
    """Validated session at tick 0 with sub-task 0 started and cursor clamped."""
    validate_spec(spec)
    state = SessionState(cursor=_clamp_to_canvas(initial_cursor, spec))
    first = _target_rect_at(spec.sub_tasks[0], spec.mode, 0.0)
    state.events.append(
        SessionEvent(0, EventKind.SUBTASK_STARTED, {"subtask": 0, "target": _rect_payload(first)})
    )
    return state


def step(state: SessionState, raw_delta: Vec2, spec: TaskSpec) -> list[SessionEvent]:
    """Advance one tick; returns the events emitted during it.

    Events are also appended to state.events, the session's full stream.
    """
    if state.ended:
        raise SessionAlreadyEnded(f"session ended at tick {state.tick}")
    state.tick += 1
    tick = state.tick
    emitted: list[SessionEvent] = []

    def emit(kind: EventKind, data: dict) -> None:
        event = SessionEvent(tick, kind, data)
        state.events.append(event)
        emitted.append(event)

    if state.awaiting_start:
        state.awaiting_start = False
        # The target appears on the boundary between the resolution tick and
        # this one, so this tick already counts as one elapsed tick — the
        # same accounting as the first sub-task, which appears at tick 0.
        state.appeared_tick = tick - 1
        state.reached_tick = None
        state.overlapping = False
        state.continuous_overlap_ticks = 0
        state.cumulative_overlap_ticks = 0
        sub = spec.sub_tasks[state.subtask_index]
        first = _target_rect_at(sub, spec.mode, 0.0)
        emit(
            EventKind.SUBTASK_STARTED,
            {"subtask": state.subtask_index, "target": _rect_payload(first)},
        )

    sub = spec.sub_tasks[state.subtask_index]
    elapsed_ticks = tick - state.appeared_tick
    # The target moves first (Follow), then the tick's overlap is tested.
    target = _target_rect_at(sub, spec.mode, elapsed_ticks / spec.tick_rate)

    assisted = apply_assist(spec.assist, state.cursor, raw_delta, [target])
    moved = _clamp_to_canvas(state.cursor + assisted, spec)
    if moved != state.cursor:
        state.cursor = moved
        emit(EventKind.CURSOR_MOVED, {"x": moved.x, "y": moved.y})

    overlap = point_in_rect(state.cursor, target)
    if overlap and not state.overlapping:
        emit(EventKind.OVERLAP_ENTERED, {"subtask": state.subtask_index})
    elif not overlap and state.overlapping:
        emit(EventKind.OVERLAP_EXITED, {"subtask": state.subtask_index})
    state.overlapping = overlap

    index = state.subtask_index
    rate = spec.tick_rate

    def resolve(success: bool, record: SubTaskRecord) -> None:
        state.records.append(record)
        kind = EventKind.SUBTASK_SUCCEEDED if success else EventKind.SUBTASK_FAILED
        emit(kind, {"subtask": index})
        if index + 1 < len(spec.sub_tasks):
            state.subtask_index = index + 1
            state.awaiting_start = True
        else:
            state.ended = True
            emit(EventKind.SESSION_ENDED, {})

    if spec.mode is TaskMode.LOCATE:
        window_ticks = _seconds_to_ticks(sub.availability_window, rate)
        # Expiry wins the boundary tick: once elapsed exceeds the window the
        # target is gone, so overlap on that tick can no longer succeed.
        if elapsed_ticks > window_ticks:
            resolve(False, SubTaskRecord(mode="locate", index=index, success=False))
        elif overlap:
            state.reached_tick = tick
            resolve(
                True,
                SubTaskRecord(
                    mode="locate",
                    index=index,
                    success=True,
                    reach_time=(tick - state.appeared_tick) / rate,
                ),
            )
    elif spec.mode is TaskMode.SELECT:
        if overlap:
            state.continuous_overlap_ticks += 1
            state.cumulative_overlap_ticks += 1
        else:
            state.continuous_overlap_ticks = 0
        dwell_ticks = _seconds_to_ticks(sub.dwell_required, rate)
        timeout_ticks = _seconds_to_ticks(sub.select_timeout, rate)
        if state.continuous_overlap_ticks >= dwell_ticks:
            resolve(
                True,
                SubTaskRecord(
                    mode="select",
                    index=index,
                    success=True,
                    cumulative_overlap=state.cumulative_overlap_ticks / rate,
                    dwell_required=sub.dwell_required,
                ),
            )
        elif elapsed_ticks > timeout_ticks:
            resolve(
                False,
                SubTaskRecord(
                    mode="select",
                    index=index,
                    success=False,
                    cumulative_overlap=state.cumulative_overlap_ticks / rate,
                    dwell_required=sub.dwell_required,
                ),
            )
    else:
        if overlap:
            state.cumulative_overlap_ticks += 1
        distance_along = (elapsed_ticks / rate) * sub.speed
        if distance_along >= path_length(sub.path):
            touched = state.cumulative_overlap_ticks > 0
            resolve(
                touched,
                SubTaskRecord(
                    mode="follow",
                    index=index,
                    success=touched,
                    overlap_time=state.cumulative_overlap_ticks / rate,
                    fly_time=elapsed_ticks / rate,
                ),
            )

    return emitted
