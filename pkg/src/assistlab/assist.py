"""The two input-assistance algorithms and the policy applying them to raw input.

Both algorithms are pure functions of their arguments: same inputs, bitwise
identical outputs. `apply_assist` is the single place where an assistance
mode turns a raw per-tick input delta into the delta the session engine
actually applies to the cursor.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .geometry import (
    TargetRect,
    Vec2,
    closest_point_on_rect,
    lerp,
    point_in_rect_interior,
)


class AssistMode(Enum):
    NONE = "none"
    INTERPOLATION = "interpolation"
    GRAVITY_MAP = "gravity"


@dataclass(frozen=True)
class AssistConfig:
    """Assistance mode plus its tuning knobs.

    influence: alignment dead-zone threshold for interpolation, in [0, 1).
    prediction_steps: future positions predicted per interpolation call.
    influence_distance: max distance at which a target pulls the cursor.
    assist_gain: scale of the gravity pull relative to raw input magnitude.
    """

    mode: AssistMode = AssistMode.NONE
    influence: float = 0.8
    prediction_steps: int = 1
    influence_distance: float = 250.0
    assist_gain: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.influence < 1.0:
            raise ValueError(f"influence must be in [0, 1), got {self.influence}")
        if self.prediction_steps < 1:
            raise ValueError(f"prediction_steps must be >= 1, got {self.prediction_steps}")
        if not self.influence_distance > 0:
            raise ValueError(f"influence_distance must be > 0, got {self.influence_distance}")
        if self.assist_gain < 0:
            raise ValueError(f"assist_gain must be >= 0, got {self.assist_gain}")


def gravity_map_influence(
    targets: Sequence[TargetRect], p: Vec2, influence_distance: float
) -> Vec2:
    """Summed pull vector toward every target within influence_distance of p.

    Each target in range contributes a unit direction toward its closest
    point, scaled by 1 - (d / influence_distance)^2, which fades to exactly
    zero at the edge of the area of effect. If p lies strictly inside any
    target the whole result is (0, 0): contact needs no further pull.
    Targets are visited in list order; a target touching p on its boundary
    contributes nothing but does not stop the scan.
    """
    if not influence_distance > 0:
        raise ValueError(f"influence_distance must be > 0, got {influence_distance}")
    total = Vec2(0.0, 0.0)
    for rect in targets:
        closest = closest_point_on_rect(p, rect)
        if point_in_rect_interior(p, rect):
            return Vec2(0.0, 0.0)
        distance = p.distance_to(closest)
        if distance > influence_distance:
            continue
        if distance == 0.0:
            continue
        direction = (closest - p).normalized()
        falloff = 1.0 - (distance / influence_distance) ** 2
        total = total + direction * falloff
    return total


def interpolation_prediction(
    start: Vec2,
    move_vec: Vec2,
    target: Vec2,
    influence: float = 0.8,
    number: int = 1,
) -> list[Vec2]:
    """Predict `number` future positions, bending the movement toward target.

    Movement is deviated only when its direction aligns with the target
    direction beyond the `influence` dead-zone threshold; below it, control
    stays free (the heading is unchanged). Step size is capped at both the
    input magnitude and the remaining distance to the target. Returns
    number + 1 points: the undeviated start + move_vec first, then one point
    per prediction step.
    """
    if not 0.0 <= influence < 1.0:
        raise ValueError(f"influence must be in [0, 1), got {influence}")
    if number < 1:
        raise ValueError(f"number must be >= 1, got {number}")
    points = [start, start + move_vec]
    move_len = move_vec.length()
    for _ in range(number):
        # Base is two elements back, so the freshly appended point is never
        # the base of the next step.
        base = points[len(points) - 2]
        to_target = target - base
        target_len = to_target.length()
        if move_len == 0.0 or target_len == 0.0:
            points.append(base)
            continue
        target_dir = to_target.normalized()
        move_dir = move_vec.normalized()
        alignment = max(target_dir.dot(move_dir), influence) - influence
        blend = alignment * (1.0 / (1.0 - influence))
        heading = lerp(move_dir, target_dir, blend)
        step_len = min(target_len, move_len)
        points.append(base + heading * step_len)
    return points[1:]


def apply_assist(
    config: AssistConfig,
    cursor: Vec2,
    raw_delta: Vec2,
    targets: Sequence[TargetRect],
) -> Vec2:
    """Turn a raw input delta into the assisted delta for this tick.

    NONE passes the delta through. GRAVITY_MAP adds the influence vector
    scaled by assist_gain times the raw delta magnitude, so an idle device
    never moves the cursor on its own. INTERPOLATION runs a one-step
    prediction toward the nearest target center and returns the resulting
    displacement; with no targets the delta is unchanged.
    """
    if config.mode is AssistMode.NONE:
        return raw_delta
    if config.mode is AssistMode.GRAVITY_MAP:
        pull = gravity_map_influence(targets, cursor, config.influence_distance)
        return raw_delta + pull * (config.assist_gain * raw_delta.length())
    if not targets:
        return raw_delta
    nearest = min(targets, key=lambda r: (cursor.distance_to(r.center), r.id))
    predicted = interpolation_prediction(
        cursor, raw_delta, nearest.center, config.influence, 1
    )
    return predicted[-1] - cursor
