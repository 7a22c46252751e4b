import "./style.css";
import type { CatalogMsg, TaskSpecInfo } from "./protocol";
import type { Connection } from "./net";
import { connect } from "./net";
import { TrialSession } from "./session";
import { RelativeCapture } from "./input";
import { drawFrame } from "./render";
import { statusLine } from "./status";
import type { SessionRecord } from "./format";
import { exportJson, fmtMetric, fmtPct, metricLabel } from "./format";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

const SCREENS = ["connect", "picker", "run", "done", "notice"] as const;

function show(name: (typeof SCREENS)[number]): void {
  for (const s of SCREENS) $(`screen-${s}`).hidden = s !== name;
}

const canvas = $("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const capture = new RelativeCapture(canvas);

let conn: Connection | null = null;
let session: TrialSession | null = null;
let chosenTask: TaskSpecInfo | null = null;
let chosenAssist = "none";
let assistLabels: Record<string, string> = {};
const history: SessionRecord[] = [];
let rafId = 0;
let lastSendAt = 0;

function wsUrl(): string {
  const proto = location.protocol === "https:" ? "wss:" : "ws:";
  return `${proto}//${location.host}/ws`;
}

function freshConnection(): void {
  conn?.close();
  show("connect");
  let sess: TrialSession | null = null;
  const c = connect(
    wsUrl(),
    (msg) => {
      sess?.receive(msg);
      onSessionUpdate();
    },
    (closedByUs) => {
      if (!closedByUs && session === sess) onConnectionLost();
    },
  );
  sess = new TrialSession((m) => c.send(m));
  conn = c;
  session = sess;
}

function onSessionUpdate(): void {
  if (!session) return;
  switch (session.phase) {
    case "ready":
      if ($("screen-picker").hidden) {
        buildPicker(session.catalog!);
        show("picker");
      }
      break;
    case "done":
      finishSession();
      break;
    case "invalid": {
      const err = session.lastError;
      const what = err ? `${err.code}: ${err.detail}` : "protocol error";
      endRun(`Session invalid (${what}). Nothing was saved — you can restart it.`);
      break;
    }
    case "failed": {
      const err = session.lastError;
      notice(`The service rejected the handshake (${err ? err.code : "unknown"}).`);
      break;
    }
    default:
      break; // greeting/starting/running need no screen change here
  }
}

function buildPicker(catalog: CatalogMsg): void {
  const taskList = $("task-list");
  taskList.textContent = "";
  for (const t of catalog.taskSpecs) {
    const btn = document.createElement("button");
    const title = document.createElement("strong");
    title.textContent = t.label;
    const detail = document.createElement("small");
    detail.textContent = `${t.subTaskCount} sub-tasks · ${t.canvasWidth}×${t.canvasHeight} arena · ${t.tickRate} Hz`;
    btn.append(title, detail);
    btn.onclick = () => {
      chosenTask = t;
      markChosen(taskList, btn);
    };
    taskList.appendChild(btn);
    if (!chosenTask || chosenTask.id === t.id) {
      chosenTask = t;
      markChosen(taskList, btn);
    }
  }

  const assistList = $("assist-list");
  assistList.textContent = "";
  assistLabels = {};
  for (const a of catalog.assistModes) {
    assistLabels[a.name] = a.label;
    const btn = document.createElement("button");
    btn.textContent = a.label;
    btn.onclick = () => {
      chosenAssist = a.name;
      markChosen(assistList, btn);
    };
    assistList.appendChild(btn);
    if (chosenAssist === a.name) markChosen(assistList, btn);
  }

  const profileList = $("profile-list");
  profileList.textContent = "";
  for (const p of catalog.profiles) {
    const li = document.createElement("li");
    li.textContent =
      `${p.name} — gain ${p.gainP}, max ${p.maxSpeed} px/s, ` +
      `tremor σ ${p.tremorSigma}, reaction ${p.reactionDelay}s`;
    profileList.appendChild(li);
  }
}

function markChosen(group: HTMLElement, chosen: HTMLElement): void {
  for (const child of Array.from(group.children)) child.classList.remove("chosen");
  chosen.classList.add("chosen");
}

$("start-btn").onclick = () => {
  if (!session || !chosenTask) return;
  if (!session.start(chosenTask.id, { mode: chosenAssist })) return;
  beginRunScreen();
};

function beginRunScreen(): void {
  show("run");
  $("event-feed").textContent = "";
  $("hud-status").textContent = "waiting for server…";
  $("hud-hint").textContent = "Click the canvas to capture the mouse · Esc aborts";
  lastSendAt = 0;
  cancelAnimationFrame(rafId);
  rafId = requestAnimationFrame(loop);
}

canvas.onclick = () => {
  if (!session) return;
  if ((session.phase === "running" || session.phase === "starting") && !capture.locked) {
    capture.engage();
  }
};

capture.onLockChange = (locked) => {
  if (!session) return;
  if (locked) {
    lastSendAt = 0;
    $("hud-hint").textContent = "Esc aborts";
  } else if (session.phase === "running" || session.phase === "starting") {
    // Escape (or anything else that broke the lock) aborts the session.
    endRun("Session aborted — capture was released before the run finished. Nothing was saved.");
  }
};

function loop(): void {
  const sess = session;
  if (!sess) return;
  if (sess.phase === "running" && capture.locked) {
    const now = performance.now();
    if (lastSendAt === 0) lastSendAt = now;
    // Clamp long gaps (hidden tab) so the task clock cannot fast-forward.
    const dt = Math.min((now - lastSendAt) / 1000, 0.25);
    lastSendAt = now;
    const d = capture.deltas.take();
    sess.sendInput(d.dx, d.dy, dt);
  } else {
    lastSendAt = 0;
  }
  renderNow(sess);
  if (sess.phase === "running" || sess.phase === "starting") {
    rafId = requestAnimationFrame(loop);
  }
}

function renderNow(sess: TrialSession): void {
  const state = sess.buffer.peek();
  if (!state || !chosenTask) return;
  drawFrame(ctx, state, { width: chosenTask.canvasWidth, height: chosenTask.canvasHeight });
  $("hud-status").textContent = statusLine(state.subTaskStatus);
  const feed = $("event-feed");
  for (const e of sess.buffer.takeEvents()) {
    const li = document.createElement("li");
    li.textContent = `tick ${e.tick} · ${e.event}`;
    feed.prepend(li);
  }
  while (feed.children.length > 8) feed.removeChild(feed.lastChild!);
}

function finishSession(): void {
  cancelAnimationFrame(rafId);
  capture.release();
  conn?.close();
  const result = session!.result!;
  history.unshift({
    logId: result.logId,
    taskLabel: chosenTask?.label ?? "",
    assistLabel: assistLabels[chosenAssist] ?? chosenAssist,
    summaries: result.summaries,
  });
  renderSummaries();
  show("done");
}

// Completed runs stay on screen side by side so assist modes can be
// compared without leaving the page.
function renderSummaries(): void {
  const cards = $("summary-cards");
  cards.textContent = "";
  history.forEach((rec, i) => {
    const card = document.createElement("div");
    card.className = i === 0 ? "card latest" : "card";
    const title = document.createElement("h3");
    title.textContent = `${rec.taskLabel} — ${rec.assistLabel}`;
    card.appendChild(title);
    const table = document.createElement("table");
    for (const s of rec.summaries) {
      addRow(table, "Sub-tasks", String(s.n));
      addRow(table, "Succeeded", `${s.successes}/${s.n} (${fmtPct(s.successPct)})`);
      addRow(table, metricLabel(s.mode), fmtMetric(s.mode, s.timeMetric));
    }
    card.appendChild(table);
    const foot = document.createElement("small");
    foot.textContent = `log ${rec.logId}`;
    card.appendChild(foot);
    cards.appendChild(card);
  });
}

function addRow(table: HTMLTableElement, label: string, value: string): void {
  const tr = document.createElement("tr");
  const td1 = document.createElement("td");
  td1.textContent = label;
  const td2 = document.createElement("td");
  td2.textContent = value;
  tr.append(td1, td2);
  table.appendChild(tr);
}

$("export-btn").onclick = () => {
  const rec = history[0];
  if (!rec) return;
  const blob = new Blob([exportJson(rec)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `${rec.logId}.summary.json`;
  a.click();
  URL.revokeObjectURL(a.href);
};

$("again-btn").onclick = () => freshConnection();
$("notice-btn").onclick = () => freshConnection();

function endRun(text: string): void {
  cancelAnimationFrame(rafId);
  capture.release();
  conn?.close();
  session = null;
  notice(text);
}

function onConnectionLost(): void {
  const phase = session?.phase;
  session = null;
  cancelAnimationFrame(rafId);
  capture.release();
  if (phase === "running" || phase === "starting") {
    notice("Connection lost — the session was aborted and no summary is available.");
  } else if (phase === "greeting") {
    notice("Could not reach the trial service. Is `assistlab serve` running on this host?");
  } else if (phase === "ready") {
    notice("The trial service closed the connection.");
  }
  // done/invalid screens already stand on their own
}

function notice(text: string): void {
  $("notice-text").textContent = text;
  show("notice");
}

freshConnection();
