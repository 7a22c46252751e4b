import type { SubTaskStatus } from "./protocol";

// HUD values derived from the authoritative sub-task status. Nothing here
// decides success or applies assistance; it only re-expresses what the
// server reported as fractions and countdowns for drawing.

export function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

// Fraction of the required dwell currently held; resets with dwellHeld.
export function dwellFraction(s: SubTaskStatus): number {
  if (s.dwell === undefined || s.dwellHeld === undefined || s.dwell <= 0) return 0;
  return clamp01(s.dwellHeld / s.dwell);
}

export function locateRemaining(s: SubTaskStatus): number {
  if (s.window === undefined) return 0;
  return Math.max(0, s.window - s.elapsed);
}

export function selectRemaining(s: SubTaskStatus): number {
  if (s.timeout === undefined) return 0;
  return Math.max(0, s.timeout - s.elapsed);
}

export function followFraction(s: SubTaskStatus): number {
  if (s.pathLength === undefined || s.distance === undefined) return 0;
  if (s.pathLength <= 0) return 1;
  return clamp01(s.distance / s.pathLength);
}

export function statusLine(s: SubTaskStatus): string {
  const head = `${s.mode} ${s.index + 1}/${s.count}`;
  if (s.mode === "locate") {
    return `${head} — ${locateRemaining(s).toFixed(1)}s left`;
  }
  if (s.mode === "select") {
    const pct = (dwellFraction(s) * 100).toFixed(0);
    return `${head} — dwell ${pct}% · ${selectRemaining(s).toFixed(1)}s left`;
  }
  if (s.mode === "follow") {
    const pct = (followFraction(s) * 100).toFixed(0);
    const held = (s.overlapHeld ?? 0).toFixed(1);
    return `${head} — path ${pct}% · on target ${held}s`;
  }
  return head;
}
