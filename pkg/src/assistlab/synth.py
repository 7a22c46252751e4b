"""Synthetic per-tick input deltas standing in for a human operator.

Device classes are modelled as pursuit controllers with class-specific
noise: precise pointing (mouse-like) has tiny tremor and a short reaction
delay, while head- and image-tracking style input carries continuous
tremor even when the operator holds still, plus a longer delay after each
new target appears. All randomness flows through PortableRng so runs
replay exactly from a seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .geometry import Vec2
from .rng import PortableRng


class InputKind(Enum):
    SCRIPTED = "scripted"
    PURE_PURSUIT = "pure-pursuit"
    NOISY_PURSUIT = "noisy-pursuit"


@dataclass(frozen=True)
class InputModel:
    """Parameters of one synthetic input device.

    gain_p is the proportional pursuit gain (1/s), max_speed caps the
    pursuit step (px/s), tremor_sigma is per-axis Gaussian noise in px per
    tick, and reaction_delay suppresses pursuit (noise still applies) for
    that many seconds after each sub-task starts. Scripted models ignore
    all of those and replay `deltas` verbatim, then emit (0, 0).
    """

    kind: InputKind
    gain_p: float = 6.0
    max_speed: float = 1500.0
    tremor_sigma: float = 0.0
    reaction_delay: float = 0.0
    seed: int = 0
    deltas: tuple[Vec2, ...] = ()

    def __post_init__(self) -> None:
        if self.tremor_sigma < 0:
            raise ValueError(f"tremor_sigma must be >= 0, got {self.tremor_sigma}")
        if not self.max_speed > 0:
            raise ValueError(f"max_speed must be > 0, got {self.max_speed}")
        if self.kind is not InputKind.SCRIPTED and not self.gain_p > 0:
            raise ValueError(f"gain_p must be > 0, got {self.gain_p}")


# Mouse-like is near-noiseless and quick; head- and image-tracking carry
# visible tremor and slower reactions. Modelling choices, not measurements.
PROFILES: dict[str, InputModel] = {
    "mouse-like": InputModel(
        InputKind.NOISY_PURSUIT,
        gain_p=12.0,
        max_speed=3000.0,
        tremor_sigma=0.1,
        reaction_delay=0.15,
    ),
    "head-like": InputModel(
        InputKind.NOISY_PURSUIT,
        gain_p=5.0,
        max_speed=1500.0,
        tremor_sigma=1.2,
        reaction_delay=0.3,
    ),
    "image-like": InputModel(
        InputKind.NOISY_PURSUIT,
        gain_p=3.5,
        max_speed=1100.0,
        tremor_sigma=2.0,
        reaction_delay=0.4,
    ),
}


class InputSource:
    """Stateful delta stream for one session: one model, one seed, one rng."""

    def __init__(self, model: InputModel, tick_rate: float = 60.0, seed: int | None = None):
        if not tick_rate > 0:
            raise ValueError(f"tick_rate must be > 0, got {tick_rate}")
        self.model = model
        self.dt = 1.0 / tick_rate
        if model.kind is not InputKind.SCRIPTED and model.gain_p * self.dt >= 1.0:
            # gain_p * dt < 1 keeps pursuit geometrically convergent.
            raise ValueError(
                f"gain_p {model.gain_p} too high for tick rate {tick_rate}"
            )
        self._rng = PortableRng(model.seed if seed is None else seed)
        self._script_index = 0

    def next_delta(self, cursor: Vec2, aim_point: Vec2, subtask_elapsed: float) -> Vec2:
        """Raw delta for the next tick given where the device is aiming.

        subtask_elapsed is seconds since the current sub-task appeared and
        gates the reaction delay.
        """
        model = self.model
        if model.kind is InputKind.SCRIPTED:
            if self._script_index < len(model.deltas):
                delta = model.deltas[self._script_index]
                self._script_index += 1
                return delta
            return Vec2(0.0, 0.0)

        if subtask_elapsed < model.reaction_delay:
            pursuit = Vec2(0.0, 0.0)
        else:
            pursuit = (aim_point - cursor) * (model.gain_p * self.dt)
            max_step = model.max_speed * self.dt
            speed = pursuit.length()
            if speed > max_step:
                pursuit = pursuit * (max_step / speed)

        if model.kind is InputKind.PURE_PURSUIT:
            return pursuit
        # Noise is drawn every tick, including during the reaction delay, so
        # the random stream position depends only on the tick count.
        gx, gy = self._rng.next_gaussian_pair()
        return Vec2(
            pursuit.x + model.tremor_sigma * gx,
            pursuit.y + model.tremor_sigma * gy,
        )
