import type { StateMsg, TargetBox } from "./protocol";
import { clamp01, dwellFraction, followFraction, locateRemaining } from "./status";

export type ArenaSize = { width: number; height: number };

// The crosshair stays at the view center and the arena scrolls under it,
// so mouse deltas read like re-aiming a head-worn pointer. World pixels
// map 1:1 to view pixels; the view is just a window onto the arena.

const CROSSHAIR = "#e5e7eb";
const TARGET = "#2563eb";
const TARGET_HIT = "#3fae6a";
const RING_TRACK = "#394251";

export function drawFrame(ctx: CanvasRenderingContext2D, state: StateMsg, arena: ArenaSize): void {
  const w = ctx.canvas.width;
  const h = ctx.canvas.height;
  const ox = w / 2 - state.cursor.x;
  const oy = h / 2 - state.cursor.y;

  ctx.fillStyle = "#05070a";
  ctx.fillRect(0, 0, w, h);

  ctx.fillStyle = "#11161d";
  ctx.fillRect(ox, oy, arena.width, arena.height);
  ctx.strokeStyle = "#2e3a48";
  ctx.lineWidth = 2;
  ctx.strokeRect(ox, oy, arena.width, arena.height);

  if (state.target) {
    ctx.fillStyle = state.subTaskStatus.overlapping ? TARGET_HIT : TARGET;
    ctx.fillRect(ox + state.target.x, oy + state.target.y, state.target.w, state.target.h);
    drawOffscreenHint(ctx, state.target, ox, oy);
  }

  const s = state.subTaskStatus;
  if (s.mode === "select") {
    drawDwellRing(ctx, w / 2, h / 2, dwellFraction(s));
  } else if (s.mode === "locate" && s.window !== undefined && s.window > 0) {
    drawBar(ctx, locateRemaining(s) / s.window, "#fbbf24");
  } else if (s.mode === "follow") {
    drawBar(ctx, followFraction(s), "#60a5fa");
  }

  drawCrosshair(ctx, w / 2, h / 2);
}

function drawCrosshair(ctx: CanvasRenderingContext2D, cx: number, cy: number): void {
  ctx.strokeStyle = CROSSHAIR;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(cx - 12, cy);
  ctx.lineTo(cx + 12, cy);
  ctx.moveTo(cx, cy - 12);
  ctx.lineTo(cx, cy + 12);
  ctx.stroke();
}

// Ring around the crosshair that fills while dwell is held; the fraction
// drops back to zero the moment the server reports the overlap broken.
function drawDwellRing(ctx: CanvasRenderingContext2D, cx: number, cy: number, fraction: number): void {
  ctx.lineWidth = 5;
  ctx.strokeStyle = RING_TRACK;
  ctx.beginPath();
  ctx.arc(cx, cy, 26, 0, Math.PI * 2);
  ctx.stroke();
  if (fraction > 0) {
    ctx.strokeStyle = TARGET_HIT;
    ctx.beginPath();
    ctx.arc(cx, cy, 26, -Math.PI / 2, -Math.PI / 2 + fraction * Math.PI * 2);
    ctx.stroke();
  }
}

function drawBar(ctx: CanvasRenderingContext2D, fraction: number, color: string): void {
  const w = ctx.canvas.width;
  ctx.fillStyle = "#1f2633";
  ctx.fillRect(16, 12, w - 32, 6);
  ctx.fillStyle = color;
  ctx.fillRect(16, 12, (w - 32) * clamp01(fraction), 6);
}

// Arrowhead at the view edge when the target sits outside the window,
// otherwise Locate targets beyond the half-arena view would be invisible.
function drawOffscreenHint(ctx: CanvasRenderingContext2D, target: TargetBox, ox: number, oy: number): void {
  const w = ctx.canvas.width;
  const h = ctx.canvas.height;
  const tx = ox + target.x + target.w / 2;
  const ty = oy + target.y + target.h / 2;
  if (tx >= 0 && tx <= w && ty >= 0 && ty <= h) return;

  const cx = w / 2;
  const cy = h / 2;
  const angle = Math.atan2(ty - cy, tx - cx);
  const hx = Math.cos(angle);
  const hy = Math.sin(angle);
  const margin = 18;
  let t = Infinity;
  if (hx > 1e-9) t = Math.min(t, (w - margin - cx) / hx);
  if (hx < -1e-9) t = Math.min(t, (margin - cx) / hx);
  if (hy > 1e-9) t = Math.min(t, (h - margin - cy) / hy);
  if (hy < -1e-9) t = Math.min(t, (margin - cy) / hy);
  if (!Number.isFinite(t)) return;

  ctx.save();
  ctx.translate(cx + hx * t, cy + hy * t);
  ctx.rotate(angle);
  ctx.fillStyle = "#fbbf24";
  ctx.beginPath();
  ctx.moveTo(8, 0);
  ctx.lineTo(-6, -6);
  ctx.lineTo(-6, 6);
  ctx.closePath();
  ctx.fill();
  ctx.restore();
}
