"""Bit-stable persistence and replay of session logs (.session.jsonl).

One JSON object per line: a header, then the strictly tick-ordered events,
then a trailer holding the per-sub-task records. Numbers serialize with
Python's shortest round-trip float representation and no wall-clock data
is ever written, so identical runs produce byte-identical files. The line
format is documented field by field in docs/log-format.md alongside three
annotated golden files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .assist import AssistConfig, AssistMode
from .engine import EventKind, SessionEvent, SubTaskSpec, TaskMode, TaskSpec
from .geometry import TargetRect, Vec2
from .metrics import SubTaskRecord
from .synth import InputKind, InputModel

SCHEMA_VERSION = 1
LOG_SUFFIX = ".session.jsonl"


class SchemaVersionUnsupported(Exception):
    """The log declares a schema version this reader does not understand."""


class CorruptLine(Exception):
    """A log line is malformed or violates stream ordering."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


@dataclass(frozen=True)
class LogHeader:
    run_label: str
    profile: str
    seed: int | None
    input_model: InputModel | None
    spec: TaskSpec
    initial_cursor: Vec2
    schema_version: int = SCHEMA_VERSION


@dataclass
class SessionLog:
    header: LogHeader
    events: list[SessionEvent]
    records: list[SubTaskRecord]


def _vec_to_list(v: Vec2) -> list[float]:
    return [v.x, v.y]


def _vec_from_list(data: list) -> Vec2:
    return Vec2(float(data[0]), float(data[1]))


def _rect_to_dict(rect: TargetRect) -> dict:
    return {"x": rect.x, "y": rect.y, "w": rect.width, "h": rect.height, "id": rect.id}


def _rect_from_dict(data: dict) -> TargetRect:
    return TargetRect(data["x"], data["y"], data["w"], data["h"], data["id"])


def _assist_to_dict(config: AssistConfig) -> dict:
    return {
        "mode": config.mode.value,
        "influence": config.influence,
        "prediction_steps": config.prediction_steps,
        "influence_distance": config.influence_distance,
        "assist_gain": config.assist_gain,
    }


def _assist_from_dict(data: dict) -> AssistConfig:
    return AssistConfig(
        mode=AssistMode(data["mode"]),
        influence=data["influence"],
        prediction_steps=data["prediction_steps"],
        influence_distance=data["influence_distance"],
        assist_gain=data["assist_gain"],
    )


def _subtask_to_dict(sub: SubTaskSpec) -> dict:
    out: dict = {"target": _rect_to_dict(sub.target)}
    if sub.availability_window is not None:
        out["availability_window"] = sub.availability_window
    if sub.dwell_required is not None:
        out["dwell_required"] = sub.dwell_required
    if sub.select_timeout is not None:
        out["select_timeout"] = sub.select_timeout
    if sub.path is not None:
        out["path"] = [_vec_to_list(p) for p in sub.path]
    if sub.speed is not None:
        out["speed"] = sub.speed
    return out


def _subtask_from_dict(data: dict) -> SubTaskSpec:
    path = data.get("path")
    return SubTaskSpec(
        target=_rect_from_dict(data["target"]),
        availability_window=data.get("availability_window"),
        dwell_required=data.get("dwell_required"),
        select_timeout=data.get("select_timeout"),
        path=None if path is None else tuple(_vec_from_list(p) for p in path),
        speed=data.get("speed"),
    )


def spec_to_dict(spec: TaskSpec) -> dict:
    return {
        "mode": spec.mode.value,
        "canvas": {"width": spec.canvas_width, "height": spec.canvas_height},
        "tick_rate": spec.tick_rate,
        "assist": _assist_to_dict(spec.assist),
        "sub_tasks": [_subtask_to_dict(s) for s in spec.sub_tasks],
    }


def spec_from_dict(data: dict) -> TaskSpec:
    return TaskSpec(
        mode=TaskMode(data["mode"]),
        sub_tasks=tuple(_subtask_from_dict(s) for s in data["sub_tasks"]),
        canvas_width=data["canvas"]["width"],
        canvas_height=data["canvas"]["height"],
        tick_rate=data["tick_rate"],
        assist=_assist_from_dict(data["assist"]),
    )


def _model_to_dict(model: InputModel) -> dict:
    return {
        "kind": model.kind.value,
        "gain_p": model.gain_p,
        "max_speed": model.max_speed,
        "tremor_sigma": model.tremor_sigma,
        "reaction_delay": model.reaction_delay,
        "seed": model.seed,
        "deltas": [_vec_to_list(d) for d in model.deltas],
    }


def _model_from_dict(data: dict) -> InputModel:
    return InputModel(
        kind=InputKind(data["kind"]),
        gain_p=data["gain_p"],
        max_speed=data["max_speed"],
        tremor_sigma=data["tremor_sigma"],
        reaction_delay=data["reaction_delay"],
        seed=data["seed"],
        deltas=tuple(_vec_from_list(d) for d in data["deltas"]),
    )


def record_to_dict(record: SubTaskRecord) -> dict:
    out: dict = {"mode": record.mode, "index": record.index, "success": record.success}
    for name in ("reach_time", "cumulative_overlap", "dwell_required", "overlap_time", "fly_time"):
        value = getattr(record, name)
        if value is not None:
            out[name] = value
    return out


def record_from_dict(data: dict) -> SubTaskRecord:
    return SubTaskRecord(
        mode=data["mode"],
        index=data["index"],
        success=data["success"],
        reach_time=data.get("reach_time"),
        cumulative_overlap=data.get("cumulative_overlap"),
        dwell_required=data.get("dwell_required"),
        overlap_time=data.get("overlap_time"),
        fly_time=data.get("fly_time"),
    )


def _header_to_dict(header: LogHeader) -> dict:
    return {
        "kind": "header",
        "schema_version": header.schema_version,
        "run_label": header.run_label,
        "profile": header.profile,
        "seed": header.seed,
        "input_model": None if header.input_model is None else _model_to_dict(header.input_model),
        "spec": spec_to_dict(header.spec),
        "initial_cursor": _vec_to_list(header.initial_cursor),
    }


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def write_log(log: SessionLog, destination: str | Path) -> int:
    """Write the log to `destination`; returns the number of bytes written."""
    lines = [_dumps(_header_to_dict(log.header))]
    for event in log.events:
        lines.append(
            _dumps(
                {"kind": "event", "tick": event.tick, "event": event.kind.value, "data": event.data}
            )
        )
    lines.append(_dumps({"kind": "trailer", "records": [record_to_dict(r) for r in log.records]}))
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    Path(destination).write_bytes(payload)
    return len(payload)


def read_log(source: str | Path) -> SessionLog:
    """Parse and validate a log file; inverse of write_log for supported versions."""
    text = Path(source).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CorruptLine(1, "empty file")

    def parse(number: int, line: str) -> dict:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptLine(number, f"invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict) or "kind" not in obj:
            raise CorruptLine(number, "expected an object with a 'kind' field")
        return obj

    head_obj = parse(1, lines[0])
    if head_obj["kind"] != "header":
        raise CorruptLine(1, f"expected header line, got {head_obj['kind']!r}")
    version = head_obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionUnsupported(f"schema_version {version!r} (supported: {SCHEMA_VERSION})")
    try:
        model = head_obj["input_model"]
        header = LogHeader(
            run_label=head_obj["run_label"],
            profile=head_obj["profile"],
            seed=head_obj["seed"],
            input_model=None if model is None else _model_from_dict(model),
            spec=spec_from_dict(head_obj["spec"]),
            initial_cursor=_vec_from_list(head_obj["initial_cursor"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptLine(1, f"bad header: {exc}") from exc

    events: list[SessionEvent] = []
    records: list[SubTaskRecord] | None = None
    last_tick = -1
    for number, line in enumerate(lines[1:], start=2):
        obj = parse(number, line)
        kind = obj["kind"]
        if records is not None:
            raise CorruptLine(number, "content after trailer")
        if kind == "event":
            try:
                event = SessionEvent(obj["tick"], EventKind(obj["event"]), obj["data"])
            except (KeyError, ValueError) as exc:
                raise CorruptLine(number, f"bad event: {exc}") from exc
            if event.tick < last_tick:
                raise CorruptLine(
                    number, f"event tick {event.tick} out of order (after {last_tick})"
                )
            last_tick = event.tick
            events.append(event)
        elif kind == "trailer":
            try:
                records = [record_from_dict(r) for r in obj["records"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise CorruptLine(number, f"bad trailer: {exc}") from exc
        else:
            raise CorruptLine(number, f"unknown line kind {kind!r}")
    if records is None:
        raise CorruptLine(len(lines), "missing trailer line")
    return SessionLog(header=header, events=events, records=records)
