"""Deterministic task layout generation for headless experiments.

Layouts depend only on (master seed, mode, repetition), never on the
profile or assistance condition, so every condition in a sweep faces the
same target sequence and comparisons stay fair.
"""

from __future__ import annotations

import math

from .assist import AssistConfig
from .config import ExperimentConfig
from .engine import SubTaskSpec, TaskMode, TaskSpec
from .geometry import TargetRect, Vec2
from .rng import PortableRng, derive_seed


def layout_seed(master_seed: int, mode: TaskMode, rep: int) -> int:
    return derive_seed(master_seed, f"layout/{mode.value}/rep{rep}")


def _center_rect(center: Vec2, size: float, rect_id: str) -> TargetRect:
    return TargetRect(center.x - size / 2.0, center.y - size / 2.0, size, size, rect_id)


def _random_center(rng: PortableRng, config: ExperimentConfig, margin: float) -> Vec2:
    return Vec2(
        rng.uniform(margin, config.canvas_width - margin),
        rng.uniform(margin, config.canvas_height - margin),
    )


def _follow_path(rng: PortableRng, config: ExperimentConfig) -> tuple[Vec2, ...]:
    settings = config.follow
    margin = settings.margin
    lo = Vec2(margin, margin)
    hi = Vec2(config.canvas_width - margin, config.canvas_height - margin)
    point = _random_center(rng, config, margin)
    heading = rng.uniform(0.0, math.tau)
    waypoints = [point]
    for _ in range(settings.segments):
        length = rng.uniform(settings.segment_length_min, settings.segment_length_max)
        candidate = Vec2(
            point.x + length * math.cos(heading),
            point.y + length * math.sin(heading),
        )
        candidate = Vec2(
            min(max(candidate.x, lo.x), hi.x),
            min(max(candidate.y, lo.y), hi.y),
        )
        if point.distance_to(candidate) < 40.0:
            # Clamping collapsed the segment against the border; head back
            # toward the canvas center instead.
            to_center = (
                Vec2(config.canvas_width / 2.0, config.canvas_height / 2.0) - point
            ).normalized()
            candidate = point + to_center * length
            heading = math.atan2(to_center.y, to_center.x)
        waypoints.append(candidate)
        point = candidate
        heading += rng.uniform(-1.2, 1.2)
    return tuple(waypoints)


def build_task_spec(
    config: ExperimentConfig, mode: TaskMode, rep: int, assist: AssistConfig
) -> TaskSpec:
    """The task layout for one (mode, repetition) under one assist condition."""
    rng = PortableRng(layout_seed(config.master_seed, mode, rep))
    subs: list[SubTaskSpec] = []
    if mode is TaskMode.LOCATE:
        settings = config.locate
        for i in range(settings.subtasks):
            center = _random_center(rng, config, settings.margin)
            subs.append(
                SubTaskSpec(
                    target=_center_rect(center, settings.target_size, f"t{i:02d}"),
                    availability_window=settings.availability_window,
                )
            )
    elif mode is TaskMode.SELECT:
        settings = config.select
        for i in range(settings.subtasks):
            center = _random_center(rng, config, settings.margin)
            subs.append(
                SubTaskSpec(
                    target=_center_rect(center, settings.target_size, f"t{i:02d}"),
                    dwell_required=settings.dwell,
                    select_timeout=settings.timeout,
                )
            )
    else:
        settings = config.follow
        for i in range(settings.subtasks):
            path = _follow_path(rng, config)
            speed = settings.speeds[i % len(settings.speeds)]
            subs.append(
                SubTaskSpec(
                    target=_center_rect(path[0], settings.target_size, f"t{i:02d}"),
                    path=path,
                    speed=speed,
                )
            )
    return TaskSpec(
        mode=mode,
        sub_tasks=tuple(subs),
        canvas_width=config.canvas_width,
        canvas_height=config.canvas_height,
        tick_rate=config.tick_rate,
        assist=assist,
    )
