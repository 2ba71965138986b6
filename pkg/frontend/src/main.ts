/** Browser entry point: wires the session model, socket client, and canvas
 * into the page. Everything interesting happens in the imported modules. */

import { ClientHandle, connectSession } from "./client.js";
import { drawScene, renderGauge } from "./render.js";
import { ConsoleSession } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("scene");
const ctx = canvas.getContext("2d");
if (ctx === null) throw new Error("no 2d canvas context");

const urlInput = el<HTMLInputElement>("ws-url");
const connectBtn = el<HTMLButtonElement>("connect");
const confirmBtn = el<HTMLButtonElement>("confirm");
const gaugeBar = el<HTMLElement>("gauge-bar");
const gaugeLabel = el<HTMLElement>("gauge-label");
const statusLine = el<HTMLElement>("status");
const bannerBox = el<HTMLElement>("banner");
const metricsBox = el<HTMLElement>("metrics");

const params = new URLSearchParams(window.location.search);
urlInput.value = params.get("ws") ?? `ws://${window.location.hostname || "localhost"}:8765`;

let session = new ConsoleSession();
let handle: ClientHandle | null = null;

connectBtn.addEventListener("click", () => {
  handle?.close();
  session = new ConsoleSession();
  handle = connectSession(urlInput.value, session);
});

confirmBtn.addEventListener("click", () => session.requestConfirm());

window.addEventListener("keydown", (e) => {
  if (document.activeElement === urlInput) return;
  if (e.repeat) return;
  if (session.keyEvent("keydown", e.code)) e.preventDefault();
});
window.addEventListener("keyup", (e) => {
  if (session.keyEvent("keyup", e.code)) e.preventDefault();
});
window.addEventListener("blur", () => {
  // dropped keyup events must not leave the robot driving
  for (const code of ["KeyW", "KeyS", "KeyA", "KeyD"]) session.keyEvent("keyup", code);
});

function fmt(x: unknown, digits = 2): string {
  return typeof x === "number" ? x.toFixed(digits) : "-";
}

function renderPanel(now: number): void {
  const hello = session.hello;
  const view = session.lastView;

  let status = session.phase as string;
  if (hello !== null) status = `case ${hello.case} / scenario ${hello.scenario} (${session.phase})`;
  if (session.isStale(now)) status += " [stale]";
  statusLine.textContent = status;
  statusLine.classList.toggle("stale", session.isStale(now));

  bannerBox.textContent = session.banner ?? "";
  bannerBox.style.display = session.banner === null ? "none" : "block";

  const thr = hello?.f_th ?? 0;
  renderGauge(gaugeBar, session.gaugeValue(), thr);
  gaugeLabel.textContent = `${session.gaugeValue().toFixed(2)} / ${thr.toFixed(2)}`;

  if (session.phase === "ended" && session.finalMetrics !== null) {
    const m = session.finalMetrics;
    metricsBox.textContent =
      `trial over: ${String(m.end_reason ?? "?")}  ` +
      `t=${fmt(m.duration, 1)}s  err=${fmt(m.final_goal_err)}m`;
  } else if (view !== null) {
    const m = view.metrics;
    const tw = session.commandedTwist();
    metricsBox.textContent =
      `t=${fmt(m.elapsed, 1)}s  goal ${fmt(m.goal_dist)}m` +
      (m.reached ? " (in tolerance)" : "") +
      `  cmd v=${tw.v.toFixed(2)} w=${tw.w.toFixed(2)}` +
      (typeof m.latency_avg === "number" ? `  rtt ${(m.latency_avg * 1000).toFixed(0)}ms` : "");
  } else {
    metricsBox.textContent = "";
  }

  confirmBtn.disabled = session.phase !== "live";
}

function frame(): void {
  const now = Date.now();
  if (session.hello !== null) {
    drawScene(ctx as CanvasRenderingContext2D, canvas.width, canvas.height, session.hello, session.lastView);
  } else {
    (ctx as CanvasRenderingContext2D).clearRect(0, 0, canvas.width, canvas.height);
  }
  renderPanel(now);
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
