"""Experiment configuration: one human-editable YAML file per batch run.

The file names the input profiles, assistance conditions, task settings
and a mandatory master seed; every random stream in a run is derived from
that seed, never from the clock. See configs/demo.yaml for a commented
example of the full schema.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .assist import AssistConfig, AssistMode
from .engine import TaskMode
from .synth import PROFILES, InputKind, InputModel


class ConfigError(Exception):
    """The experiment config is missing, malformed, or inconsistent."""


ASSIST_NAMES = {
    "none": AssistMode.NONE,
    "interpolation": AssistMode.INTERPOLATION,
    "gravity": AssistMode.GRAVITY_MAP,
}

ASSIST_LABELS = {
    AssistMode.NONE: None,
    AssistMode.INTERPOLATION: "Interpolation",
    AssistMode.GRAVITY_MAP: "Gravity-Map",
}

_CONFIG_KINDS = {
    "pure-pursuit": InputKind.PURE_PURSUIT,
    "noisy-pursuit": InputKind.NOISY_PURSUIT,
}


@dataclass(frozen=True)
class LocateSettings:
    subtasks: int = 20
    target_size: float = 80.0
    availability_window: float = 5.0
    margin: float = 120.0


@dataclass(frozen=True)
class SelectSettings:
    subtasks: int = 20
    target_size: float = 80.0
    dwell: float = 1.0
    timeout: float = 10.0
    margin: float = 120.0


@dataclass(frozen=True)
class FollowSettings:
    subtasks: int = 10
    target_size: float = 80.0
    speeds: tuple[float, ...] = (200.0, 400.0, 600.0)
    segments: int = 3
    segment_length_min: float = 250.0
    segment_length_max: float = 550.0
    margin: float = 160.0


@dataclass(frozen=True)
class ProfileSpec:
    name: str
    model: InputModel


@dataclass(frozen=True)
class AssistSpec:
    name: str
    config: AssistConfig


@dataclass(frozen=True)
class ExperimentConfig:
    master_seed: int
    profiles: tuple[ProfileSpec, ...]
    assists: tuple[AssistSpec, ...]
    label: str = "experiment"
    repetitions: int = 5
    tick_rate: int = 60
    canvas_width: float = 1920.0
    canvas_height: float = 1080.0
    modes: tuple[TaskMode, ...] = (TaskMode.LOCATE, TaskMode.SELECT, TaskMode.FOLLOW)
    locate: LocateSettings = field(default_factory=LocateSettings)
    select: SelectSettings = field(default_factory=SelectSettings)
    follow: FollowSettings = field(default_factory=FollowSettings)
    paper_literal: bool = False


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise ConfigError(f"{path}.{key}: required field is missing")
    return mapping[key]


def _number(value, path: str, *, minimum: float | None = None, strict: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    out = float(value)
    if minimum is not None and (out <= minimum if strict else out < minimum):
        op = ">" if strict else ">="
        raise ConfigError(f"{path}: must be {op} {minimum}, got {value}")
    return out


def _integer(value, path: str, *, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {value}")
    return value


def _as_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {value!r}")
    return value


def _profile_entry(entry, path: str) -> ProfileSpec:
    if isinstance(entry, str):
        entry = {"name": entry}
    entry = _as_mapping(entry, path)
    name = _require(entry, "name", path)
    if not isinstance(name, str):
        raise ConfigError(f"{path}.name: expected a string, got {name!r}")
    overrides = {}
    for key in ("gain_p", "max_speed", "tremor_sigma", "reaction_delay"):
        if key in entry:
            overrides[key] = _number(entry[key], f"{path}.{key}", minimum=0.0)
    if "kind" in entry:
        kind = entry["kind"]
        if kind not in _CONFIG_KINDS:
            raise ConfigError(
                f"{path}.kind: unknown input kind {kind!r} "
                f"(allowed: {', '.join(sorted(_CONFIG_KINDS))})"
            )
        model = InputModel(kind=_CONFIG_KINDS[kind], **overrides)
    elif name in PROFILES:
        model = replace(PROFILES[name], **overrides) if overrides else PROFILES[name]
    else:
        raise ConfigError(
            f"{path}.name: unknown profile {name!r} "
            f"(built-ins: {', '.join(sorted(PROFILES))}; or give an explicit kind)"
        )
    unknown = set(entry) - {"name", "kind", "gain_p", "max_speed", "tremor_sigma", "reaction_delay"}
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}: unknown field")
    return ProfileSpec(name=name, model=model)


def _assist_entry(entry, path: str) -> AssistSpec:
    if isinstance(entry, str):
        entry = {"name": entry}
    entry = _as_mapping(entry, path)
    name = _require(entry, "name", path)
    if name not in ASSIST_NAMES:
        raise ConfigError(
            f"{path}.name: unknown assist mode {name!r} "
            f"(allowed: {', '.join(ASSIST_NAMES)})"
        )
    kwargs: dict = {"mode": ASSIST_NAMES[name]}
    if "influence" in entry:
        kwargs["influence"] = _number(entry["influence"], f"{path}.influence", minimum=0.0)
    if "prediction_steps" in entry:
        kwargs["prediction_steps"] = _integer(entry["prediction_steps"], f"{path}.prediction_steps", minimum=1)
    if "influence_distance" in entry:
        kwargs["influence_distance"] = _number(
            entry["influence_distance"], f"{path}.influence_distance", minimum=0.0, strict=True
        )
    if "assist_gain" in entry:
        kwargs["assist_gain"] = _number(entry["assist_gain"], f"{path}.assist_gain", minimum=0.0)
    unknown = set(entry) - {"name", "influence", "prediction_steps", "influence_distance", "assist_gain"}
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}: unknown field")
    try:
        config = AssistConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return AssistSpec(name=name, config=config)


def _locate_settings(data: dict, path: str) -> LocateSettings:
    return LocateSettings(
        subtasks=_integer(data.get("subtasks", 20), f"{path}.subtasks", minimum=1),
        target_size=_number(data.get("target_size", 80.0), f"{path}.target_size", minimum=0.0, strict=True),
        availability_window=_number(
            data.get("availability_window", 5.0), f"{path}.availability_window", minimum=0.0, strict=True
        ),
        margin=_number(data.get("margin", 120.0), f"{path}.margin", minimum=0.0),
    )


def _select_settings(data: dict, path: str) -> SelectSettings:
    return SelectSettings(
        subtasks=_integer(data.get("subtasks", 20), f"{path}.subtasks", minimum=1),
        target_size=_number(data.get("target_size", 80.0), f"{path}.target_size", minimum=0.0, strict=True),
        dwell=_number(data.get("dwell", 1.0), f"{path}.dwell", minimum=0.0, strict=True),
        timeout=_number(data.get("timeout", 10.0), f"{path}.timeout", minimum=0.0, strict=True),
        margin=_number(data.get("margin", 120.0), f"{path}.margin", minimum=0.0),
    )


def _follow_settings(data: dict, path: str) -> FollowSettings:
    speeds_raw = data.get("speeds", [200.0, 400.0, 600.0])
    if not isinstance(speeds_raw, list) or not speeds_raw:
        raise ConfigError(f"{path}.speeds: expected a non-empty list")
    speeds = tuple(
        _number(s, f"{path}.speeds[{i}]", minimum=0.0, strict=True) for i, s in enumerate(speeds_raw)
    )
    return FollowSettings(
        subtasks=_integer(data.get("subtasks", 10), f"{path}.subtasks", minimum=1),
        target_size=_number(data.get("target_size", 80.0), f"{path}.target_size", minimum=0.0, strict=True),
        speeds=speeds,
        segments=_integer(data.get("segments", 3), f"{path}.segments", minimum=1),
        segment_length_min=_number(
            data.get("segment_length_min", 250.0), f"{path}.segment_length_min", minimum=0.0, strict=True
        ),
        segment_length_max=_number(
            data.get("segment_length_max", 550.0), f"{path}.segment_length_max", minimum=0.0, strict=True
        ),
        margin=_number(data.get("margin", 160.0), f"{path}.margin", minimum=0.0),
    )


def parse_config(data: dict) -> ExperimentConfig:
    data = _as_mapping(data, "config")
    master_seed = _integer(_require(data, "master_seed", "config"), "config.master_seed")

    profiles_raw = _require(data, "profiles", "config")
    if not isinstance(profiles_raw, list) or not profiles_raw:
        raise ConfigError("config.profiles: expected a non-empty list")
    profiles = tuple(_profile_entry(p, f"config.profiles[{i}]") for i, p in enumerate(profiles_raw))
    if len({p.name for p in profiles}) != len(profiles):
        raise ConfigError("config.profiles: duplicate profile names")

    assists_raw = _require(data, "assists", "config")
    if not isinstance(assists_raw, list) or not assists_raw:
        raise ConfigError("config.assists: expected a non-empty list")
    assists = tuple(_assist_entry(a, f"config.assists[{i}]") for i, a in enumerate(assists_raw))
    if len({a.name for a in assists}) != len(assists):
        raise ConfigError("config.assists: duplicate assist names")

    modes_raw = data.get("modes", ["locate", "select", "follow"])
    if not isinstance(modes_raw, list) or not modes_raw:
        raise ConfigError("config.modes: expected a non-empty list")
    modes = []
    for i, mode in enumerate(modes_raw):
        try:
            modes.append(TaskMode(mode))
        except ValueError:
            raise ConfigError(
                f"config.modes[{i}]: unknown mode {mode!r} (allowed: locate, select, follow)"
            ) from None

    canvas = _as_mapping(data.get("canvas", {"width": 1920, "height": 1080}), "config.canvas")
    tasks = _as_mapping(data.get("tasks", {}), "config.tasks")

    label = data.get("label", "experiment")
    if not isinstance(label, str):
        raise ConfigError(f"config.label: expected a string, got {label!r}")

    paper_literal = data.get("paper_literal_averages", False)
    if not isinstance(paper_literal, bool):
        raise ConfigError("config.paper_literal_averages: expected a boolean")

    known = {
        "master_seed", "profiles", "assists", "modes", "canvas", "tasks",
        "label", "repetitions", "tick_rate", "paper_literal_averages",
    }
    for key in data:
        if key not in known:
            raise ConfigError(f"config.{key}: unknown field")

    return ExperimentConfig(
        master_seed=master_seed,
        label=label,
        repetitions=_integer(data.get("repetitions", 5), "config.repetitions", minimum=1),
        tick_rate=_integer(data.get("tick_rate", 60), "config.tick_rate", minimum=1),
        canvas_width=_number(_require(canvas, "width", "config.canvas"), "config.canvas.width", minimum=1.0),
        canvas_height=_number(_require(canvas, "height", "config.canvas"), "config.canvas.height", minimum=1.0),
        modes=tuple(modes),
        profiles=profiles,
        assists=assists,
        locate=_locate_settings(_as_mapping(tasks.get("locate", {}), "config.tasks.locate"), "config.tasks.locate"),
        select=_select_settings(_as_mapping(tasks.get("select", {}), "config.tasks.select"), "config.tasks.select"),
        follow=_follow_settings(_as_mapping(tasks.get("follow", {}), "config.tasks.follow"), "config.tasks.follow"),
        paper_literal=paper_literal,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return parse_config(data)


def profile_label(name: str) -> str:
    """Display label for a profile name: 'mouse-like' -> 'Mouse-like'."""
    return name[:1].upper() + name[1:]


def condition_label(profile_name: str, assist_mode: AssistMode) -> str:
    suffix = ASSIST_LABELS[assist_mode]
    base = profile_label(profile_name)
    return base if suffix is None else f"{base} - {suffix}"
