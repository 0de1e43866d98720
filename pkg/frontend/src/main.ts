import { SessionClient, ShotRequest } from "./client.js";
import { drawCameraView, drawMap } from "./render.js";
import { safetyStatus } from "./overlay.js";
import { ShotButtonGate } from "./stateMachine.js";
import type { SessionInfo, TelemetryFrame } from "./types.js";

const SHOT_BUTTONS: { label: string; spec: ShotRequest }[] = [
  { label: "Apex", spec: { shot_type: "apex" } },
  { label: "Close apex", spec: { shot_type: "close_apex" } },
  { label: "Internal A", spec: { shot_type: "internal", primary_subject: "A" } },
  { label: "Internal B", spec: { shot_type: "internal", primary_subject: "B" } },
  { label: "External A", spec: { shot_type: "external", primary_subject: "A" } },
  { label: "External B", spec: { shot_type: "external", primary_subject: "B" } },
  { label: "Apex above", spec: { shot_type: "apex_from_above" } },
  { label: "External A above", spec: { shot_type: "external_from_above", primary_subject: "A" } },
];

const DEFAULT_SCENE = {
  subjects: [
    { position: [0, 0, 1.7], gaze: [1, 0.3, 0], height: 1.75, safety_radius: 2.0 },
    { position: [4, 0, 1.65], gaze: [-1, 0.3, 0], height: 1.7, safety_radius: 2.0 },
  ],
  fov_max_deg: 70.0,
  aspect_ratio: 16 / 9,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function toast(message: string, isError = false): void {
  const box = el<HTMLDivElement>("toasts");
  const item = document.createElement("div");
  item.className = `toast${isError ? " error" : ""}`;
  item.textContent = message;
  box.appendChild(item);
  setTimeout(() => item.remove(), 6000);
}

async function start(): Promise<void> {
  const client = new SessionClient("");
  const gate = new ShotButtonGate();
  const cameraCanvas = el<HTMLCanvasElement>("camera-view");
  const mapCanvas = el<HTMLCanvasElement>("map-view");
  const cameraCtx = cameraCanvas.getContext("2d")!;
  const mapCtx = mapCanvas.getContext("2d")!;
  const statusBox = el<HTMLSpanElement>("conn-status");
  const safetyBox = el<HTMLDivElement>("safety");

  const sceneText = el<HTMLTextAreaElement>("scene-json");
  sceneText.value = JSON.stringify(DEFAULT_SCENE, null, 2);

  let session: SessionInfo | null = null;
  let latest: TelemetryFrame | null = null;
  let plannedPath: number[][] | null = null;
  let stop: (() => void) | null = null;

  const buttonsBox = el<HTMLDivElement>("shot-buttons");
  const buttons: HTMLButtonElement[] = [];
  for (const { label, spec } of SHOT_BUTTONS) {
    const button = document.createElement("button");
    button.textContent = label;
    button.disabled = true;
    button.onclick = async () => {
      if (!session || !gate.canSend()) return;
      gate.markSent();
      const result = await client.commandShot(session.id, spec);
      gate.onResult(result.ok, result.busy, result.message);
      if (result.ok && result.summary) {
        const s = result.summary;
        toast(
          `${label}: ${s.duration_s.toFixed(1)} s transition` +
            (s.crop_warning ? ` - CROP WARNING (fov ${s.fov_deg.toFixed(1)}°)` : ""),
          s.crop_warning,
        );
      } else {
        toast(`${label}: ${result.busy ? "busy" : result.message}`, true);
      }
    };
    buttonsBox.appendChild(button);
    buttons.push(button);
  }
  gate.subscribe((canSend) => {
    for (const b of buttons) b.disabled = !canSend || session === null;
  });

  function render(): void {
    if (latest && session) {
      drawCameraView(cameraCtx, latest, session);
      drawMap(mapCtx, latest, plannedPath);
      safetyBox.innerHTML = "";
      for (const s of latest.subjects) {
        const margin = s.distance - s.safety_radius;
        const status = safetyStatus(s.distance, s.safety_radius);
        const row = document.createElement("div");
        row.className = `safety-row ${status}`;
        row.textContent = `subject ${s.id}: ${s.distance.toFixed(2)} m (margin ${margin.toFixed(2)} m)`;
        safetyBox.appendChild(row);
      }
    }
    requestAnimationFrame(render);
  }
  requestAnimationFrame(render);

  el<HTMLButtonElement>("connect").onclick = async () => {
    try {
      const scene = JSON.parse(sceneText.value);
      const sid = await client.createSession(scene);
      const snap = await client.snapshot(sid);
      session = snap.session;
      stop?.();
      stop = client.subscribe(
        sid,
        (frame) => {
          if (frame.type === "session_closed") {
            statusBox.textContent = "session closed";
            return;
          }
          latest = frame;
          if (frame.planned_path) plannedPath = frame.planned_path;
          if (frame.type === "transition_end") {
            plannedPath = null;
            toast(`transition ${frame.transition?.id ?? ""} complete`);
          }
          gate.onFrame(frame);
        },
        (connected) => {
          statusBox.textContent = connected ? `connected (${sid.slice(0, 8)})` : "reconnecting...";
          statusBox.className = connected ? "ok" : "warning";
        },
      );
      toast(`session ${sid.slice(0, 8)} created`);
    } catch (err) {
      toast(String(err), true);
    }
  };
}

window.addEventListener("DOMContentLoaded", () => void start());
