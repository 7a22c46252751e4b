"""Headless experiment execution: seeded cells, session logs, and reports.

A run sweeps profiles x assists x task modes. Each cell executes
`repetitions` sessions; the input stream seed of every session is derived
from the master seed and the cell's label, so results do not depend on
execution order and cells can run in parallel.
"""

from __future__ import annotations

import shutil
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .assist import AssistMode
from .config import AssistSpec, ExperimentConfig, ProfileSpec, condition_label
from .engine import (
    SessionState,
    TaskMode,
    TaskSpec,
    active_target_rect,
    start_session,
    step,
    subtask_elapsed_seconds,
)
from .geometry import Vec2
from .metrics import ModeSummary, SubTaskRecord, compute_for_mode
from .replay import records_from_events
from .report import ConditionSummary, ReportTable, summarize
from .rng import derive_seed
from .store import LOG_SUFFIX, LogHeader, SessionLog, read_log, write_log
from .synth import InputModel, InputSource
from .taskgen import build_task_spec

_MAX_SESSION_TICKS = 10_000_000


@dataclass(frozen=True)
class CellResult:
    profile: str
    assist: str
    mode: TaskMode
    records: tuple[SubTaskRecord, ...]
    log_names: tuple[str, ...]


@dataclass
class ExperimentResult:
    out_dir: Path
    report: ReportTable
    cells: dict[tuple[str, str, str], ModeSummary]


def input_seed(master_seed: int, profile: str, assist: str, mode: TaskMode, rep: int) -> int:
    return derive_seed(master_seed, f"input/{profile}/{assist}/{mode.value}/rep{rep}")


def run_session(
    spec: TaskSpec,
    model: InputModel,
    seed: int,
    run_label: str,
    profile_name: str = "custom",
) -> SessionLog:
    """One headless session: a synthetic operator plays the spec to the end."""
    initial_cursor = Vec2(spec.canvas_width / 2.0, spec.canvas_height / 2.0)
    state = start_session(spec, initial_cursor)
    source = InputSource(model, tick_rate=spec.tick_rate, seed=seed)
    while not state.ended:
        aim = active_target_rect(state, spec).center
        elapsed = subtask_elapsed_seconds(state, spec)
        delta = source.next_delta(state.cursor, aim, elapsed)
        step(state, delta, spec)
        if state.tick > _MAX_SESSION_TICKS:
            raise RuntimeError(f"session {run_label} exceeded {_MAX_SESSION_TICKS} ticks")
    header = LogHeader(
        run_label=run_label,
        profile=profile_name,
        seed=seed,
        input_model=replace(model, seed=seed),
        spec=spec,
        initial_cursor=initial_cursor,
    )
    return SessionLog(header=header, events=state.events, records=state.records)


def run_cell(
    config: ExperimentConfig,
    profile: ProfileSpec,
    assist: AssistSpec,
    mode: TaskMode,
    logs_dir: Path | None,
) -> CellResult:
    records: list[SubTaskRecord] = []
    log_names: list[str] = []
    for rep in range(config.repetitions):
        spec = build_task_spec(config, mode, rep, assist.config)
        seed = input_seed(config.master_seed, profile.name, assist.name, mode, rep)
        label = f"{profile.name}__{assist.name}__{mode.value}__rep{rep:02d}"
        log = run_session(spec, profile.model, seed, label, profile_name=profile.name)
        if logs_dir is not None:
            name = label + LOG_SUFFIX
            write_log(log, logs_dir / name)
            log_names.append(name)
        records.extend(log.records)
    return CellResult(
        profile=profile.name,
        assist=assist.name,
        mode=mode,
        records=tuple(records),
        log_names=tuple(log_names),
    )


def _cell_job(args) -> CellResult:
    config, profile, assist, mode, logs_dir = args
    return run_cell(config, profile, assist, mode, logs_dir)


def _build_report(
    config: ExperimentConfig,
    results: list[CellResult],
    paper_literal: bool,
) -> tuple[ReportTable, dict[tuple[str, str, str], ModeSummary]]:
    by_key = {(r.profile, r.assist, r.mode.value): r for r in results}
    conditions: list[ConditionSummary] = []
    cells: dict[tuple[str, str, str], ModeSummary] = {}
    for mode in config.modes:
        for assist in config.assists:
            for profile in config.profiles:
                result = by_key[(profile.name, assist.name, mode.value)]
                summary = compute_for_mode(mode.value, list(result.records), paper_literal)
                cells[(profile.name, assist.name, mode.value)] = summary
                conditions.append(
                    ConditionSummary(
                        label=condition_label(profile.name, assist.config.mode),
                        assisted=assist.config.mode.value != "none",
                        summary=summary,
                    )
                )
    return summarize(config.label, conditions), cells


def run_experiment(
    config: ExperimentConfig,
    out_dir: str | Path,
    jobs: int = 1,
    paper_literal: bool | None = None,
) -> ExperimentResult:
    """Run the full sweep, writing logs plus report.txt/report.csv to out_dir.

    out_dir must not already contain files. Work is staged in a sibling
    directory that is renamed into place on success and removed on any
    failure, so a crashed run leaves no partial outputs behind.
    """
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise RuntimeError(f"output directory {out} is not empty")
    if paper_literal is None:
        paper_literal = config.paper_literal
    staging = out.parent / (out.name + ".partial")
    if staging.exists():
        shutil.rmtree(staging)
    logs_dir = staging / "logs"
    logs_dir.mkdir(parents=True)
    try:
        tasks = [
            (config, profile, assist, mode, logs_dir)
            for mode in config.modes
            for assist in config.assists
            for profile in config.profiles
        ]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_cell_job, tasks))
        else:
            results = [_cell_job(t) for t in tasks]
        report, cells = _build_report(config, results, paper_literal)
        (staging / "report.txt").write_text(report.to_text(), encoding="utf-8")
        (staging / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    if out.exists():
        out.rmdir()
    staging.rename(out)
    return ExperimentResult(out_dir=out, report=report, cells=cells)


def replay_summaries(log: SessionLog, paper_literal: bool = False) -> ModeSummary:
    """Metrics of one stored session, computed from its trailer records."""
    mode = log.header.spec.mode.value
    return compute_for_mode(mode, log.records, paper_literal)


def verify_log(log: SessionLog) -> list[str]:
    """Differences between the trailer and records rebuilt from the events."""
    rebuilt = records_from_events(log.header.spec, log.events)
    problems = []
    if len(rebuilt) != len(log.records):
        problems.append(f"{len(log.records)} trailer records vs {len(rebuilt)} from events")
    for i, (stored, fresh) in enumerate(zip(log.records, rebuilt)):
        if stored != fresh:
            problems.append(f"record {i}: trailer {stored} != events {fresh}")
    return problems


def report_from_logs(directory: str | Path, paper_literal: bool = False) -> ReportTable:
    """Rebuild a report from every .session.jsonl under `directory`.

    Cells are keyed by (profile, assist mode, task mode) from each log's
    header and ordered alphabetically by profile, which keeps the output
    deterministic for any fixed set of logs.
    """
    directory = Path(directory)
    groups: dict[tuple[str, str, str], list] = {}
    for path in sorted(directory.rglob(f"*{LOG_SUFFIX}")):
        log = read_log(path)
        key = (
            log.header.profile,
            log.header.spec.assist.mode.value,
            log.header.spec.mode.value,
        )
        groups.setdefault(key, []).extend(log.records)
    assist_order = {"none": 0, "interpolation": 1, "gravity": 2}
    conditions = []
    for (profile, assist_value, mode) in sorted(
        groups, key=lambda k: (k[2], assist_order.get(k[1], 9), k[0])
    ):
        records = groups[(profile, assist_value, mode)]
        summary = compute_for_mode(mode, records, paper_literal)
        assist_mode = AssistMode(assist_value)
        conditions.append(
            ConditionSummary(
                label=condition_label(profile, assist_mode),
                assisted=assist_mode is not AssistMode.NONE,
                summary=summary,
            )
        )
    label = directory.name or "logs"
    return summarize(label, conditions)
