"""Desk-scale lab for AI input assistance on pointing tasks.

Two assistance algorithms (interpolation prediction and a gravity map),
a three-mode trial protocol (locate, select, follow), deterministic
headless simulation with synthetic input models, session logs with exact
replay, batch reports, and a local WebSocket service for live trials.
"""

from .assist import (
    AssistConfig,
    AssistMode,
    apply_assist,
    gravity_map_influence,
    interpolation_prediction,
)
from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .engine import (
    EventKind,
    InvalidSpec,
    SessionAlreadyEnded,
    SessionEvent,
    SessionState,
    SubTaskSpec,
    TaskMode,
    TaskSpec,
    start_session,
    step,
)
from .geometry import TargetRect, Vec2
from .metrics import EmptyRecordSet, ModeSummary, SubTaskRecord, compute_for_mode
from .rng import PortableRng, derive_seed
from .runner import run_experiment, run_session
from .store import (
    CorruptLine,
    LogHeader,
    SchemaVersionUnsupported,
    SessionLog,
    read_log,
    write_log,
)
from .synth import PROFILES, InputKind, InputModel, InputSource

__version__ = "0.1.0"

__all__ = [
    "AssistConfig",
    "AssistMode",
    "apply_assist",
    "gravity_map_influence",
    "interpolation_prediction",
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "EventKind",
    "InvalidSpec",
    "SessionAlreadyEnded",
    "SessionEvent",
    "SessionState",
    "SubTaskSpec",
    "TaskMode",
    "TaskSpec",
    "start_session",
    "step",
    "TargetRect",
    "Vec2",
    "EmptyRecordSet",
    "ModeSummary",
    "SubTaskRecord",
    "compute_for_mode",
    "PortableRng",
    "derive_seed",
    "run_experiment",
    "run_session",
    "CorruptLine",
    "LogHeader",
    "SchemaVersionUnsupported",
    "SessionLog",
    "read_log",
    "write_log",
    "PROFILES",
    "InputKind",
    "InputModel",
    "InputSource",
]
