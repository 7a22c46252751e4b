import type { ModeSummary } from "./protocol";

export function fmtPct(v: number): string {
  return `${v.toFixed(1)}%`;
}

export function metricLabel(mode: string): string {
  if (mode === "locate") return "Avg. Reach Time";
  if (mode === "select") return "Avg. Extra Time";
  if (mode === "follow") return "Avg. Follow %";
  return "Metric";
}

// timeMetric is seconds for locate/select, a percentage for follow, and
// null when no sub-task succeeded.
export function fmtMetric(mode: string, value: number | null): string {
  if (value === null) return "—";
  if (mode === "locate") return `${value.toFixed(2)}s`;
  if (mode === "select") return `${value.toFixed(3)}s`;
  if (mode === "follow") return fmtPct(value);
  return String(value);
}

export type SessionRecord = {
  logId: string;
  taskLabel: string;
  assistLabel: string;
  summaries: ModeSummary[];
};

// Payload for the summary download control.
export function exportJson(record: SessionRecord): string {
  return JSON.stringify(record, null, 2) + "\n";
}
