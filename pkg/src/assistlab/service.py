"""Local WebSocket service that lets a browser client drive live sessions.

Protocol v1, one JSON message per text frame. The client greets with
`hello`, receives the `catalog`, starts one session per connection with
`start`, then streams `input {seq, dx, dy, dt?}` messages and gets a
`state` reply for each. Raw deltas pass through the configured assistance
on the server, so a client never computes assistance or success locally.
When the session resolves the server writes the log and sends `done`.

Wall-clock `dt` is quantized to engine ticks: per connection the received
dt accumulates, each input runs floor(accumulated / tick_dt) ticks, and
the pending movement delta is applied on the first tick of that batch.
An `input` without dt counts as exactly one tick.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .assist import AssistConfig
from .config import (
    ASSIST_NAMES,
    ExperimentConfig,
    FollowSettings,
    LocateSettings,
    SelectSettings,
)
from .engine import (
    SessionState,
    TaskMode,
    TaskSpec,
    active_target_rect,
    path_length,
    start_session,
    step,
    subtask_elapsed_seconds,
)
from .geometry import Vec2
from .metrics import compute_for_mode
from .store import LOG_SUFFIX, LogHeader, SessionLog, write_log
from .synth import PROFILES
from .taskgen import build_task_spec

PROTOCOL_VERSION = "v1"

DEFAULT_BIND = "127.0.0.1"
DEFAULT_PORT = 8787

_CATALOG_SEED = 727144063


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    label: str
    spec: TaskSpec


def default_catalog() -> list[CatalogEntry]:
    """Three fixed-layout demo tasks, one per mode, from a frozen seed."""
    config = ExperimentConfig(
        master_seed=_CATALOG_SEED,
        profiles=(),
        assists=(),
        locate=LocateSettings(subtasks=5),
        select=SelectSettings(subtasks=5),
        follow=FollowSettings(subtasks=3),
    )
    entries = []
    for mode, label in (
        (TaskMode.LOCATE, "Locate: reach 5 targets"),
        (TaskMode.SELECT, "Select: dwell on 5 targets"),
        (TaskMode.FOLLOW, "Follow: track 3 moving targets"),
    ):
        spec = build_task_spec(config, mode, 0, AssistConfig())
        entries.append(CatalogEntry(id=f"demo-{mode.value}", label=label, spec=spec))
    return entries


def _catalog_message(catalog: list[CatalogEntry]) -> dict:
    return {
        "type": "catalog",
        "protocolVersion": PROTOCOL_VERSION,
        "taskSpecs": [
            {
                "id": entry.id,
                "label": entry.label,
                "mode": entry.spec.mode.value,
                "canvasWidth": entry.spec.canvas_width,
                "canvasHeight": entry.spec.canvas_height,
                "tickRate": entry.spec.tick_rate,
                "subTaskCount": len(entry.spec.sub_tasks),
            }
            for entry in catalog
        ],
        "assistModes": [
            {"name": "none", "label": "None"},
            {"name": "interpolation", "label": "Interpolation"},
            {"name": "gravity", "label": "Gravity-Map"},
        ],
        "profiles": [
            {
                "name": name,
                "gainP": model.gain_p,
                "maxSpeed": model.max_speed,
                "tremorSigma": model.tremor_sigma,
                "reactionDelay": model.reaction_delay,
            }
            for name, model in PROFILES.items()
        ],
    }


def _error(code: str, detail: str) -> dict:
    return {"type": "error", "code": code, "detail": detail}


def _parse_assist_config(data) -> AssistConfig:
    """Wire assistConfig -> AssistConfig; ValueError/KeyError on bad input."""
    if data is None:
        return AssistConfig()
    if not isinstance(data, dict):
        raise ValueError(f"assistConfig must be an object, got {type(data).__name__}")
    name = data.get("mode", "none")
    if name not in ASSIST_NAMES:
        raise KeyError(name)
    kwargs: dict = {"mode": ASSIST_NAMES[name]}
    for wire, field_name in (
        ("influence", "influence"),
        ("influenceDistance", "influence_distance"),
        ("assistGain", "assist_gain"),
        ("predictionSteps", "prediction_steps"),
    ):
        if wire in data:
            kwargs[field_name] = data[wire]
    return AssistConfig(**kwargs)


def _finite_number(value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"expected a number, got {value!r}")
    result = float(value)
    if not math.isfinite(result):
        raise ValueError(f"expected a finite number, got {value!r}")
    return result


class TrialConnection:
    """Protocol state machine for one connection; transport-agnostic.

    handle() maps one incoming message to the list of replies to send, in
    order. All session state lives here, so concurrent connections never
    share anything mutable.
    """

    def __init__(self, catalog, sessions_dir, next_serial):
        self.catalog = {entry.id: entry for entry in catalog}
        self.sessions_dir = Path(sessions_dir)
        self.next_serial = next_serial
        self.helloed = False
        self.spec: TaskSpec | None = None
        self.state: SessionState | None = None
        self.expected_seq = 0
        self.accum_dt = 0.0
        self.pending = Vec2(0.0, 0.0)
        self.completed = False
        self.log_id: str | None = None
        self._events_cursor = 0

    def handle_frame(self, text: str) -> list[dict]:
        try:
            message = json.loads(text)
        except json.JSONDecodeError:
            return [_error("bad-message", "frame is not valid JSON")]
        return self.handle(message)

    def handle(self, message) -> list[dict]:
        if not isinstance(message, dict) or not isinstance(message.get("type"), str):
            return [_error("bad-message", "expected an object with a string 'type'")]
        kind = message["type"]
        if kind == "hello":
            return self._on_hello(message)
        if kind == "start":
            return self._on_start(message)
        if kind == "input":
            return self._on_input(message)
        return [_error("bad-message", f"unknown message type {kind!r}")]

    def _on_hello(self, message) -> list[dict]:
        version = message.get("protocolVersion")
        if version != PROTOCOL_VERSION:
            return [
                _error(
                    "version-mismatch",
                    f"protocolVersion {version!r} unsupported (server speaks {PROTOCOL_VERSION})",
                )
            ]
        if self.helloed:
            return [_error("bad-state", "hello already exchanged")]
        self.helloed = True
        return [_catalog_message(list(self.catalog.values()))]

    def _on_start(self, message) -> list[dict]:
        if not self.helloed:
            return [_error("bad-state", "hello first")]
        if self.completed:
            return [_error("bad-state", "session already completed; reconnect to run another")]
        if self.state is not None:
            return [_error("bad-state", "session already started")]
        task_id = message.get("taskSpecId")
        entry = self.catalog.get(task_id)
        if entry is None:
            return [_error("unknown-id", f"taskSpecId {task_id!r} is not in the catalog")]
        try:
            assist = _parse_assist_config(message.get("assistConfig"))
        except KeyError as exc:
            allowed = ", ".join(ASSIST_NAMES)
            return [_error("unknown-id", f"assist mode {exc.args[0]!r} (allowed: {allowed})")]
        except (TypeError, ValueError) as exc:
            return [_error("bad-message", f"assistConfig: {exc}")]
        spec = replace(entry.spec, assist=assist)
        cursor = Vec2(spec.canvas_width / 2.0, spec.canvas_height / 2.0)
        self.spec = spec
        self.state = start_session(spec, cursor)
        serial = self.next_serial()
        self.log_id = f"live__{entry.id}__{assist.mode.value}__{serial:04d}"
        self.expected_seq = 0
        self.accum_dt = 0.0
        self.pending = Vec2(0.0, 0.0)
        self._events_cursor = 0
        return [self._state_message()]

    def _on_input(self, message) -> list[dict]:
        if self.state is None:
            return [_error("bad-state", "no session; send start first")]
        if self.completed:
            return [_error("bad-state", "session already completed")]
        seq = message.get("seq")
        if not isinstance(seq, int) or isinstance(seq, bool):
            return [_error("bad-message", "seq must be an integer")]
        if seq != self.expected_seq:
            return [
                _error("bad-seq", f"got seq {seq}, expected {self.expected_seq}")
            ]
        try:
            dx = _finite_number(message.get("dx", 0.0))
            dy = _finite_number(message.get("dy", 0.0))
            dt = self.spec.dt if "dt" not in message else _finite_number(message["dt"])
            if dt < 0.0:
                raise ValueError(f"dt must be >= 0, got {dt}")
        except ValueError as exc:
            return [_error("bad-message", str(exc))]
        self.expected_seq += 1
        self.pending = self.pending + Vec2(dx, dy)
        self.accum_dt += dt
        # Same slack as the engine's seconds-to-ticks conversion, so a
        # client sending dt=1/60 lands exactly one tick per message.
        ticks = int(math.floor(self.accum_dt / self.spec.dt + 1e-9))
        if ticks > 0:
            self.accum_dt -= ticks * self.spec.dt
            if self.accum_dt < 1e-12:
                self.accum_dt = 0.0
        for i in range(ticks):
            delta = self.pending if i == 0 else Vec2(0.0, 0.0)
            step(self.state, delta, self.spec)
            if i == 0:
                self.pending = Vec2(0.0, 0.0)
            if self.state.ended:
                break
        replies = [self._state_message()]
        if self.state.ended:
            replies.append(self._finish())
        return replies

    def _state_message(self) -> dict:
        state, spec = self.state, self.spec
        new_events = state.events[self._events_cursor :]
        self._events_cursor = len(state.events)
        sub = spec.sub_tasks[state.subtask_index]
        elapsed = subtask_elapsed_seconds(state, spec)
        status = {
            "index": state.subtask_index,
            "count": len(spec.sub_tasks),
            "mode": spec.mode.value,
            "elapsed": elapsed,
            "overlapping": state.overlapping,
            "ended": state.ended,
        }
        rate = spec.tick_rate
        if spec.mode is TaskMode.LOCATE:
            status["window"] = sub.availability_window
        elif spec.mode is TaskMode.SELECT:
            status["dwell"] = sub.dwell_required
            status["timeout"] = sub.select_timeout
            status["dwellHeld"] = state.continuous_overlap_ticks / rate
        else:
            total = path_length(sub.path)
            status["pathLength"] = total
            status["distance"] = min(elapsed * sub.speed, total)
            status["overlapHeld"] = state.cumulative_overlap_ticks / rate
        if state.ended:
            target = None
        else:
            rect = active_target_rect(state, spec)
            target = {"x": rect.x, "y": rect.y, "w": rect.width, "h": rect.height, "id": rect.id}
        return {
            "type": "state",
            "tick": state.tick,
            "cursor": {"x": state.cursor.x, "y": state.cursor.y},
            "target": target,
            "subTaskStatus": status,
            "eventsSinceLast": [
                {"tick": e.tick, "event": e.kind.value, "data": e.data} for e in new_events
            ],
        }

    def _finish(self) -> dict:
        spec, state = self.spec, self.state
        self.completed = True
        header = LogHeader(
            run_label=self.log_id,
            profile="live",
            seed=None,
            input_model=None,
            spec=spec,
            initial_cursor=Vec2(spec.canvas_width / 2.0, spec.canvas_height / 2.0),
        )
        log = SessionLog(header=header, events=state.events, records=state.records)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        write_log(log, self.sessions_dir / f"{self.log_id}{LOG_SUFFIX}")
        summary = compute_for_mode(spec.mode.value, state.records)
        return {
            "type": "done",
            "logId": self.log_id,
            "summaries": [
                {
                    "mode": summary.mode,
                    "n": summary.n,
                    "successes": summary.successes,
                    "successPct": summary.success_pct,
                    "timeMetric": summary.time_metric,
                }
            ],
        }


def create_app(catalog=None, sessions_dir="sessions", ui_dir=None):
    """FastAPI app: `/ws` speaks the protocol, `/` serves the UI bundle."""
    app = FastAPI(title="assistlab trial service")
    if catalog is None:
        catalog = default_catalog()
    serial = itertools.count(1)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        connection = TrialConnection(catalog, sessions_dir, lambda: next(serial))
        try:
            while True:
                text = await ws.receive_text()
                for reply in connection.handle_frame(text):
                    await ws.send_text(json.dumps(reply, separators=(",", ":")))
        except WebSocketDisconnect:
            pass  # partial sessions are discarded, only done writes a log

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def serve(bind=DEFAULT_BIND, port=DEFAULT_PORT, sessions_dir="sessions", ui_dir=None) -> None:
    import uvicorn

    app = create_app(sessions_dir=sessions_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=bind, port=port, log_level="warning")
