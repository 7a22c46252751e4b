import pytest

from assistlab.assist import AssistConfig, AssistMode
from assistlab.engine import (
    EventKind,
    InvalidSpec,
    SessionAlreadyEnded,
    SubTaskSpec,
    TaskMode,
    TaskSpec,
    active_target_rect,
    path_position,
    start_session,
    step,
)
from assistlab.geometry import TargetRect, Vec2


def _locate_spec(n: int = 1, window: float = 5.0, **kwargs) -> TaskSpec:
    subs = tuple(
        SubTaskSpec(
            target=TargetRect(100.0 + 200.0 * i, 100.0, 80.0, 80.0, id=f"t{i:02d}"),
            availability_window=window,
        )
        for i in range(n)
    )
    return TaskSpec(mode=TaskMode.LOCATE, sub_tasks=subs, **kwargs)


def _select_spec(n: int = 1, dwell: float = 1.0, timeout: float = 10.0) -> TaskSpec:
    subs = tuple(
        SubTaskSpec(
            target=TargetRect(100.0, 100.0, 80.0, 80.0, id=f"t{i:02d}"),
            dwell_required=dwell,
            select_timeout=timeout,
        )
        for i in range(n)
    )
    return TaskSpec(mode=TaskMode.SELECT, sub_tasks=subs)


def _follow_spec(path=((0.0, 0.0), (100.0, 0.0)), speed: float = 60.0, n: int = 1) -> TaskSpec:
    waypoints = tuple(Vec2(x, y) for x, y in path)
    subs = tuple(
        SubTaskSpec(
            target=TargetRect(0.0, 0.0, 10.0, 10.0, id=f"t{i:02d}"),
            path=waypoints,
            speed=speed,
        )
        for i in range(n)
    )
    return TaskSpec(mode=TaskMode.FOLLOW, sub_tasks=subs)


def _kinds(events) -> list[EventKind]:
    return [e.kind for e in events]


# -- path_position ------------------------------------------------------------


def test_path_position_examples() -> None:
    straight = (Vec2(0.0, 0.0), Vec2(10.0, 0.0))
    assert path_position(straight, 0.0) == Vec2(0.0, 0.0)
    assert path_position(straight, 4.0) == Vec2(4.0, 0.0)
    assert path_position(straight, 99.0) == Vec2(10.0, 0.0)
    bent = (Vec2(0.0, 0.0), Vec2(10.0, 0.0), Vec2(10.0, 10.0))
    assert path_position(bent, 15.0) == Vec2(10.0, 5.0)


# -- start_session ------------------------------------------------------------


def test_start_session_initial_state() -> None:
    state = start_session(_locate_spec(), Vec2(960.0, 540.0))
    assert state.tick == 0
    assert state.subtask_index == 0
    assert not state.ended
    assert _kinds(state.events) == [EventKind.SUBTASK_STARTED]
    assert state.events[0].tick == 0


def test_start_session_clamps_cursor() -> None:
    state = start_session(_follow_spec(), Vec2(-5.0, -5.0))
    assert state.cursor == Vec2(0.0, 0.0)
    state = start_session(_locate_spec(), Vec2(99999.0, 99999.0))
    assert state.cursor == Vec2(1920.0, 1080.0)


def test_invalid_specs_rejected() -> None:
    with pytest.raises(InvalidSpec):
        start_session(TaskSpec(mode=TaskMode.LOCATE, sub_tasks=()), Vec2(0.0, 0.0))
    with pytest.raises(InvalidSpec):
        start_session(_locate_spec(tick_rate=0), Vec2(0.0, 0.0))
    with pytest.raises(InvalidSpec):
        start_session(_locate_spec(canvas_width=0.0), Vec2(0.0, 0.0))
    # a select field on a locate sub-task
    bad = TaskSpec(
        mode=TaskMode.LOCATE,
        sub_tasks=(
            SubTaskSpec(
                target=TargetRect(0.0, 0.0, 10.0, 10.0),
                availability_window=5.0,
                dwell_required=1.0,
            ),
        ),
    )
    with pytest.raises(InvalidSpec):
        start_session(bad, Vec2(0.0, 0.0))
    # missing mode field
    bad = TaskSpec(
        mode=TaskMode.SELECT,
        sub_tasks=(SubTaskSpec(target=TargetRect(0.0, 0.0, 10.0, 10.0), dwell_required=1.0),),
    )
    with pytest.raises(InvalidSpec):
        start_session(bad, Vec2(0.0, 0.0))
    # degenerate follow paths
    with pytest.raises(InvalidSpec):
        start_session(_follow_spec(path=((0.0, 0.0),)), Vec2(0.0, 0.0))
    with pytest.raises(InvalidSpec):
        start_session(_follow_spec(path=((3.0, 3.0), (3.0, 3.0))), Vec2(0.0, 0.0))
    with pytest.raises(InvalidSpec):
        start_session(_follow_spec(speed=0.0), Vec2(0.0, 0.0))


# -- step: generic rules ------------------------------------------------------


def test_zero_delta_outside_target_emits_nothing() -> None:
    state = start_session(_locate_spec(), Vec2(500.0, 500.0))
    events = step(state, Vec2(0.0, 0.0), _locate_spec())
    assert events == []
    assert state.tick == 1
    assert state.cursor == Vec2(500.0, 500.0)


def test_cursor_clamped_each_tick() -> None:
    spec = _locate_spec()
    state = start_session(spec, Vec2(10.0, 10.0))
    step(state, Vec2(-100.0, -100.0), spec)
    assert state.cursor == Vec2(0.0, 0.0)


def test_step_after_end_raises() -> None:
    spec = _locate_spec(window=0.1)
    state = start_session(spec, Vec2(500.0, 500.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    with pytest.raises(SessionAlreadyEnded):
        step(state, Vec2(0.0, 0.0), spec)


def test_determinism_same_inputs_same_events() -> None:
    spec = _select_spec(n=2, dwell=0.2, timeout=1.0)
    deltas = [Vec2((i * 7 % 13) - 6.0, (i * 5 % 11) - 5.0) for i in range(400)]
    streams = []
    for _ in range(2):
        state = start_session(spec, Vec2(300.0, 300.0))
        for d in deltas:
            if state.ended:
                break
            step(state, d, spec)
        streams.append([(e.tick, e.kind, e.data) for e in state.events])
    assert streams[0] == streams[1]


# -- locate mode --------------------------------------------------------------


def test_locate_single_tick_success_trace() -> None:
    spec = _locate_spec(n=2)
    state = start_session(spec, Vec2(95.0, 140.0))  # 5 px left of target 0
    events = step(state, Vec2(10.0, 0.0), spec)
    assert _kinds(events) == [
        EventKind.CURSOR_MOVED,
        EventKind.OVERLAP_ENTERED,
        EventKind.SUBTASK_SUCCEEDED,
    ]
    assert state.records[0].success
    assert state.records[0].reach_time == 1.0 / 60.0
    assert not state.ended  # second sub-task pending


def test_locate_failure_after_window() -> None:
    spec = _locate_spec(window=0.5)
    state = start_session(spec, Vec2(500.0, 500.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    # 0.5 s at 60 Hz is 30 ticks; failure on the tick after the window
    assert state.tick == 31
    assert not state.records[0].success
    assert state.records[0].reach_time is None


def test_locate_overlap_on_expiry_tick_does_not_succeed() -> None:
    # Arrive exactly when the window has just expired: the target is gone.
    spec = _locate_spec(window=0.5)
    state = start_session(spec, Vec2(500.0, 500.0))
    for _ in range(30):
        step(state, Vec2(0.0, 0.0), spec)
    events = step(state, Vec2(-360.0, -360.0), spec)  # lands inside the rect
    assert EventKind.SUBTASK_FAILED in _kinds(events)
    assert not state.records[0].success


def test_locate_success_reach_within_window() -> None:
    spec = _locate_spec(window=1.0)
    state = start_session(spec, Vec2(500.0, 140.0))
    while not state.ended:
        step(state, Vec2(-6.0, 0.0), spec)
    record = state.records[0]
    assert record.success
    assert record.reach_time <= 1.0


# -- select mode --------------------------------------------------------------


def test_select_sixty_tick_dwell_example() -> None:
    spec = _select_spec(dwell=1.0)
    state = start_session(spec, Vec2(140.0, 140.0))  # already on the target
    for i in range(59):
        events = step(state, Vec2(0.0, 0.0), spec)
        assert EventKind.SUBTASK_SUCCEEDED not in _kinds(events)
    events = step(state, Vec2(0.0, 0.0), spec)
    assert EventKind.SUBTASK_SUCCEEDED in _kinds(events)
    assert state.tick == 60
    record = state.records[0]
    assert record.cumulative_overlap == 1.0
    assert record.dwell_required == 1.0


def test_select_exit_resets_continuous_not_cumulative() -> None:
    spec = _select_spec(dwell=0.5, timeout=10.0)
    state = start_session(spec, Vec2(140.0, 140.0))
    for _ in range(20):
        step(state, Vec2(0.0, 0.0), spec)  # 20 overlap ticks
    step(state, Vec2(500.0, 0.0), spec)  # exit
    step(state, Vec2(-500.0, 0.0), spec)  # re-enter
    assert state.continuous_overlap_ticks == 1
    assert state.cumulative_overlap_ticks == 21
    for _ in range(29):
        step(state, Vec2(0.0, 0.0), spec)
    assert state.ended
    record = state.records[0]
    assert record.success
    # 20 before the exit + 30 continuous = 50 overlap ticks
    assert record.cumulative_overlap == 50.0 / 60.0


def test_select_timeout_failure() -> None:
    spec = _select_spec(dwell=1.0, timeout=0.5)
    state = start_session(spec, Vec2(500.0, 500.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    assert state.tick == 31
    record = state.records[0]
    assert not record.success
    assert record.cumulative_overlap == 0.0


def test_select_continuous_never_overshoots_dwell_at_success() -> None:
    spec = _select_spec(dwell=0.25)
    state = start_session(spec, Vec2(140.0, 140.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    # 0.25 s at 60 Hz: exactly 15 ticks of continuous overlap at the event
    assert state.continuous_overlap_ticks == 15


# -- follow mode --------------------------------------------------------------


def test_follow_stationary_cursor_overlap_interval() -> None:
    # Target runs (0,0) -> (100,0) at 1 px/tick; cursor parked at (50.5,0)
    # overlaps while the 10 px wide target covers it: ticks 46..55. The
    # half-pixel offset keeps the interval edges away from exact boundaries.
    spec = _follow_spec()
    state = start_session(spec, Vec2(50.5, 0.0))
    entered = exited = None
    while not state.ended:
        for e in step(state, Vec2(0.0, 0.0), spec):
            if e.kind is EventKind.OVERLAP_ENTERED:
                entered = e.tick
            elif e.kind is EventKind.OVERLAP_EXITED:
                exited = e.tick
    assert entered == 46
    assert exited == 56
    assert state.tick == 100
    record = state.records[0]
    assert record.success
    assert record.overlap_time == 10.0 / 60.0
    assert record.fly_time == 100.0 / 60.0


def test_follow_untouched_fails() -> None:
    spec = _follow_spec()
    state = start_session(spec, Vec2(500.0, 500.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    record = state.records[0]
    assert not record.success
    assert record.overlap_time == 0.0
    assert record.fly_time == 100.0 / 60.0


def test_follow_fly_time_matches_path_length_over_speed() -> None:
    spec = _follow_spec(path=((0.0, 0.0), (100.0, 0.0), (100.0, 50.0)), speed=120.0)
    state = start_session(spec, Vec2(500.0, 500.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    record = state.records[0]
    assert abs(record.fly_time - 150.0 / 120.0) <= 1.0 / 60.0


def test_follow_target_moves_before_overlap_test() -> None:
    spec = _follow_spec()
    state = start_session(spec, Vec2(1.0, 0.0))
    # At tick 1 the target center is already at (1,0), not (0,0).
    rect = active_target_rect(state, spec)
    assert rect.center == Vec2(0.0, 0.0)
    events = step(state, Vec2(0.0, 0.0), spec)
    assert EventKind.OVERLAP_ENTERED in _kinds(events)
    assert state.overlapping


# -- session sequencing -------------------------------------------------------


def test_every_subtask_resolves_exactly_once() -> None:
    spec = _locate_spec(n=3, window=0.2)
    state = start_session(spec, Vec2(500.0, 500.0))
    while not state.ended:
        step(state, Vec2(0.0, 0.0), spec)
    kinds = _kinds(state.events)
    resolved = [
        k for k in kinds if k in (EventKind.SUBTASK_SUCCEEDED, EventKind.SUBTASK_FAILED)
    ]
    assert len(resolved) == 3
    assert len(state.records) == 3
    assert [r.index for r in state.records] == [0, 1, 2]
    assert kinds[-1] is EventKind.SESSION_ENDED
    assert kinds.count(EventKind.SUBTASK_STARTED) == 3


def test_next_subtask_starts_on_following_tick() -> None:
    spec = _select_spec(n=2, dwell=1.0 / 60.0)
    state = start_session(spec, Vec2(140.0, 140.0))
    events = step(state, Vec2(0.0, 0.0), spec)
    assert EventKind.SUBTASK_SUCCEEDED in _kinds(events)
    assert EventKind.SUBTASK_STARTED not in _kinds(events)
    events = step(state, Vec2(0.0, 0.0), spec)
    started = [e for e in events if e.kind is EventKind.SUBTASK_STARTED]
    assert len(started) == 1
    assert started[0].tick == 2
    assert started[0].data["subtask"] == 1


def test_later_subtasks_use_the_same_elapsed_accounting_as_the_first() -> None:
    # Sub-task 1 resolves at tick 1; sub-task 2 begins on tick 2 with one
    # elapsed tick already counted, exactly like sub-task 1 at tick 1. A
    # cursor parked on both targets therefore reaches each in 1/60 s, and a
    # follow target can never be overlapped for longer than it flies.
    spec = _locate_spec(n=2)
    both = TargetRect(100.0, 100.0, 480.0, 80.0, id="wide")
    from dataclasses import replace as _replace

    spec = TaskSpec(
        mode=TaskMode.LOCATE,
        sub_tasks=tuple(_replace(s, target=both) for s in spec.sub_tasks),
    )
    state = start_session(spec, Vec2(140.0, 140.0))
    step(state, Vec2(0.0, 0.0), spec)
    step(state, Vec2(0.0, 0.0), spec)
    assert [r.reach_time for r in state.records] == [1.0 / 60.0, 1.0 / 60.0]

    follow = _follow_spec(path=((100.0, 100.0), (196.0, 100.0)), speed=60.0, n=3)
    state = start_session(follow, Vec2(100.0, 100.0))
    while not state.ended:
        rect = active_target_rect(state, follow)
        center = Vec2(rect.x + rect.width / 2.0, rect.y + rect.height / 2.0)
        step(state, center - state.cursor, follow)
    for record in state.records:
        assert record.fly_time == 96.0 / 60.0
        assert record.overlap_time <= record.fly_time


def test_assisted_session_uses_configured_mode() -> None:
    from dataclasses import replace

    # Same raw deltas, 40 ticks: gravity closes a gap plain input cannot.
    sub = SubTaskSpec(
        target=TargetRect(300.0, 250.0, 40.0, 40.0, id="t00"), availability_window=5.0
    )
    assisted = TaskSpec(
        mode=TaskMode.LOCATE,
        sub_tasks=(sub,),
        assist=AssistConfig(
            mode=AssistMode.GRAVITY_MAP, influence_distance=200.0, assist_gain=8.0
        ),
    )
    plain = replace(assisted, assist=AssistConfig())
    state_a = start_session(assisted, Vec2(200.0, 270.0))
    state_p = start_session(plain, Vec2(200.0, 270.0))
    for _ in range(40):
        if not state_a.ended:
            step(state_a, Vec2(2.0, 0.0), assisted)
        if not state_p.ended:
            step(state_p, Vec2(2.0, 0.0), plain)
    assert state_a.records and state_a.records[0].success
    assert not state_p.records  # 80 px at 2 px/tick cannot reach in 40 ticks
