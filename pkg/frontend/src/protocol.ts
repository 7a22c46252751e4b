// Wire types for the trial service protocol (v1): one JSON object per
// websocket text frame. The server owns all positions and outcomes; this
// client only renders what `state` messages say.

export const PROTOCOL_VERSION = "v1";

export type TaskSpecInfo = {
  id: string;
  label: string;
  mode: string;
  canvasWidth: number;
  canvasHeight: number;
  tickRate: number;
  subTaskCount: number;
};

export type AssistModeInfo = { name: string; label: string };

export type ProfileInfo = {
  name: string;
  gainP: number;
  maxSpeed: number;
  tremorSigma: number;
  reactionDelay: number;
};

export type CatalogMsg = {
  type: "catalog";
  protocolVersion: string;
  taskSpecs: TaskSpecInfo[];
  assistModes: AssistModeInfo[];
  profiles: ProfileInfo[];
};

export type TargetBox = { x: number; y: number; w: number; h: number; id: string };

// Common fields always present; the rest depend on subTaskStatus.mode.
export type SubTaskStatus = {
  index: number;
  count: number;
  mode: string;
  elapsed: number;
  overlapping: boolean;
  ended: boolean;
  window?: number; // locate
  dwell?: number; // select
  timeout?: number;
  dwellHeld?: number;
  pathLength?: number; // follow
  distance?: number;
  overlapHeld?: number;
};

export type TickEvent = { tick: number; event: string; data: Record<string, unknown> };

export type StateMsg = {
  type: "state";
  tick: number;
  cursor: { x: number; y: number };
  target: TargetBox | null;
  subTaskStatus: SubTaskStatus;
  eventsSinceLast: TickEvent[];
};

export type ModeSummary = {
  mode: string;
  n: number;
  successes: number;
  successPct: number;
  timeMetric: number | null;
};

export type DoneMsg = { type: "done"; logId: string; summaries: ModeSummary[] };

export type ErrorMsg = { type: "error"; code: string; detail: string };

export type ServerMsg = CatalogMsg | StateMsg | DoneMsg | ErrorMsg;

export type AssistConfigWire = {
  mode: string;
  influence?: number;
  influenceDistance?: number;
  assistGain?: number;
  predictionSteps?: number;
};

export type ClientMsg =
  | { type: "hello"; protocolVersion: string }
  | { type: "start"; taskSpecId: string; assistConfig?: AssistConfigWire }
  | { type: "input"; seq: number; dx: number; dy: number; dt?: number };

function isObj(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function isNum(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function isStr(v: unknown): v is string {
  return typeof v === "string";
}

function isTaskSpecInfo(v: unknown): v is TaskSpecInfo {
  return (
    isObj(v) &&
    isStr(v.id) &&
    isStr(v.label) &&
    isStr(v.mode) &&
    isNum(v.canvasWidth) &&
    isNum(v.canvasHeight) &&
    isNum(v.tickRate) &&
    isNum(v.subTaskCount)
  );
}

function isAssistModeInfo(v: unknown): v is AssistModeInfo {
  return isObj(v) && isStr(v.name) && isStr(v.label);
}

function isProfileInfo(v: unknown): v is ProfileInfo {
  return (
    isObj(v) &&
    isStr(v.name) &&
    isNum(v.gainP) &&
    isNum(v.maxSpeed) &&
    isNum(v.tremorSigma) &&
    isNum(v.reactionDelay)
  );
}

function isCatalog(v: Record<string, unknown>): v is CatalogMsg {
  return (
    isStr(v.protocolVersion) &&
    Array.isArray(v.taskSpecs) &&
    v.taskSpecs.every(isTaskSpecInfo) &&
    Array.isArray(v.assistModes) &&
    v.assistModes.every(isAssistModeInfo) &&
    Array.isArray(v.profiles) &&
    v.profiles.every(isProfileInfo)
  );
}

function isTargetBox(v: unknown): v is TargetBox {
  return isObj(v) && isNum(v.x) && isNum(v.y) && isNum(v.w) && isNum(v.h) && isStr(v.id);
}

function isSubTaskStatus(v: unknown): v is SubTaskStatus {
  return (
    isObj(v) &&
    isNum(v.index) &&
    isNum(v.count) &&
    isStr(v.mode) &&
    isNum(v.elapsed) &&
    typeof v.overlapping === "boolean" &&
    typeof v.ended === "boolean"
  );
}

function isTickEvent(v: unknown): v is TickEvent {
  return isObj(v) && isNum(v.tick) && isStr(v.event) && isObj(v.data);
}

function isState(v: Record<string, unknown>): v is StateMsg {
  return (
    isNum(v.tick) &&
    isObj(v.cursor) &&
    isNum(v.cursor.x) &&
    isNum(v.cursor.y) &&
    (v.target === null || isTargetBox(v.target)) &&
    isSubTaskStatus(v.subTaskStatus) &&
    Array.isArray(v.eventsSinceLast) &&
    v.eventsSinceLast.every(isTickEvent)
  );
}

function isModeSummary(v: unknown): v is ModeSummary {
  return (
    isObj(v) &&
    isStr(v.mode) &&
    isNum(v.n) &&
    isNum(v.successes) &&
    isNum(v.successPct) &&
    (v.timeMetric === null || isNum(v.timeMetric))
  );
}

function isDone(v: Record<string, unknown>): v is DoneMsg {
  return isStr(v.logId) && Array.isArray(v.summaries) && v.summaries.every(isModeSummary);
}

function isError(v: Record<string, unknown>): v is ErrorMsg {
  return isStr(v.code) && isStr(v.detail);
}

// Returns null for anything that is not a well-formed server message.
export function parseServerMsg(text: string): ServerMsg | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (!isObj(raw) || !isStr(raw.type)) return null;
  switch (raw.type) {
    case "catalog":
      return isCatalog(raw) ? raw : null;
    case "state":
      return isState(raw) ? raw : null;
    case "done":
      return isDone(raw) ? raw : null;
    case "error":
      return isError(raw) ? raw : null;
    default:
      return null;
  }
}
