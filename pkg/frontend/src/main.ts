/** Browser entry point: canvas rendering, pointer wiring, live readouts. */

import { BridgeClient } from "./bridge.js";
import { Mesh } from "./mesh.js";
import { PadController } from "./controller.js";
import { MIN_SEND_INTERVAL_MS, RateLimiter } from "./rate.js";
import { formatPitch, formatValue, TelemetryStore } from "./telemetry.js";
import { Viewport } from "./view.js";

const REPORT_INTERVAL_MS = 30;
const PARAMS_INTERVAL_MS = 100;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("pad");
const ctx = canvas.getContext("2d")!;
const altitudeInput = el<HTMLInputElement>("altitude");
const statusLine = el<HTMLElement>("status");

const telemetry = new TelemetryStore(() => performance.now());

let mesh: Mesh | null = null;
let viewport: Viewport | null = null;

const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/bridge`;
const ws = new WebSocket(wsUrl);
const client = new BridgeClient({
  send: (data) => ws.send(data),
  close: () => ws.close(),
});

const limiter = new RateLimiter<[number, number, number]>(
  ([x, y, altitude]) => client.sendPose(x, y, altitude),
  () => performance.now(),
  (fn, delay) => { setTimeout(fn, delay); },
  MIN_SEND_INTERVAL_MS,
);
const controller = new PadController((pose) => limiter.push(pose),
                                     Number(altitudeInput.value));

ws.onopen = () => {
  statusLine.textContent = "connected";
  client.connect();
  client.requestMap();
  for (const name of ["Amplitude", "Pitch", "Centroid"]) {
    client.subscribe(name, REPORT_INTERVAL_MS);
  }
  client.subscribeParams(PARAMS_INTERVAL_MS);
};
ws.onclose = () => { statusLine.textContent = "disconnected"; };
ws.onmessage = (event) => client.receive(String(event.data));

client.onMesh = (m) => {
  mesh = m;
  viewport = new Viewport(m.domain, canvas.width, canvas.height);
  controller.setMesh(m);
};
client.onReport = (address, args) => telemetry.ingest(address, args);
client.onError = (detail) => { statusLine.textContent = `error: ${detail}`; };

// -- pointer ----------------------------------------------------------------

let dragging = false;

function pointerToWorld(event: PointerEvent): [number, number] | null {
  if (!viewport) return null;
  const rect = canvas.getBoundingClientRect();
  const sx = (event.clientX - rect.left) * (canvas.width / rect.width);
  const sy = (event.clientY - rect.top) * (canvas.height / rect.height);
  return viewport.toWorld([sx, sy]);
}

canvas.addEventListener("pointerdown", (event) => {
  dragging = true;
  canvas.setPointerCapture(event.pointerId);
  const p = pointerToWorld(event);
  if (p) controller.dragTo(p[0], p[1]);
});
canvas.addEventListener("pointermove", (event) => {
  if (!dragging) return;
  const p = pointerToWorld(event);
  if (p) controller.dragTo(p[0], p[1]);
});
canvas.addEventListener("pointerup", () => { dragging = false; });
canvas.addEventListener("pointercancel", () => { dragging = false; });

altitudeInput.addEventListener("input", () => {
  controller.setAltitude(Number(altitudeInput.value));
});

// -- drawing ----------------------------------------------------------------

function drawMesh(state: ReturnType<PadController["state"]>): void {
  if (!mesh || !viewport) return;
  if (state.triangle !== null) {
    const [a, b, c] = mesh.triangles[state.triangle];
    ctx.beginPath();
    const pa = viewport.toScreen(mesh.domain[a]);
    const pb = viewport.toScreen(mesh.domain[b]);
    const pc = viewport.toScreen(mesh.domain[c]);
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
    ctx.lineTo(pc[0], pc[1]);
    ctx.closePath();
    ctx.fillStyle = "rgba(94, 156, 255, 0.18)";
    ctx.fill();
  }
  ctx.strokeStyle = "#3a4356";
  ctx.lineWidth = 1;
  for (const [a, b, c] of mesh.triangles) {
    ctx.beginPath();
    const pa = viewport.toScreen(mesh.domain[a]);
    const pb = viewport.toScreen(mesh.domain[b]);
    const pc = viewport.toScreen(mesh.domain[c]);
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
    ctx.lineTo(pc[0], pc[1]);
    ctx.closePath();
    ctx.stroke();
  }
  ctx.fillStyle = "#8fa3c8";
  for (const p of mesh.domain) {
    const [x, y] = viewport.toScreen(p);
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawCursor(state: ReturnType<PadController["state"]>): void {
  if (!viewport) return;
  const raw = viewport.toScreen(state.raw);
  const display = viewport.toScreen(state.display);
  const offHull = state.raw[0] !== state.display[0] || state.raw[1] !== state.display[1];
  if (offHull) {
    ctx.strokeStyle = "#7a6a3a";
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(raw[0], raw[1]);
    ctx.lineTo(display[0], display[1]);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#b0a060";
    ctx.beginPath();
    ctx.arc(raw[0], raw[1], 5, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.fillStyle = "#ffb454";
  ctx.beginPath();
  ctx.arc(display[0], display[1], 7, 0, 2 * Math.PI);
  ctx.fill();
}

function setReadout(id: string, text: string, stale: boolean): void {
  const node = el<HTMLElement>(id);
  node.textContent = text;
  node.classList.toggle("stale", stale);
}

function frame(): void {
  ctx.fillStyle = "#12151c";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const state = controller.state();
  drawMesh(state);
  drawCursor(state);
  setReadout("readout-pitch", formatPitch(telemetry.value("Pitch")),
             telemetry.stale("Pitch"));
  setReadout("readout-amplitude", formatValue(telemetry.value("Amplitude"), 4),
             telemetry.stale("Amplitude"));
  setReadout("readout-centroid", formatPitch(telemetry.value("Centroid")),
             telemetry.stale("Centroid"));
  const params = telemetry.params();
  setReadout("readout-params",
             params ? params.map((v) => v.toFixed(3)).join("  ") : "—",
             telemetry.paramsStale());
  setReadout("readout-altitude", state.altitude.toFixed(2), false);
  requestAnimationFrame(frame);
}

requestAnimationFrame(frame);
