// Canvas rendering: the virtual camera view (billboarded subjects, thirds
// grid, crop rectangle) and the top-down map (subjects, safety circles,
// quadrotor, planned path).

import { cropRectPx, safetyStatus, thirdsLines } from "./overlay.js";
import {
  Camera,
  cameraFromJson,
  projectPoint,
  toPixels,
  vec3,
} from "./projection.js";
import type { SessionInfo, TelemetryFrame } from "./types.js";

const COLORS = {
  background: "#10141c",
  grid: "rgba(255,255,255,0.25)",
  crop: "#ffb545",
  subject: ["#53a7f0", "#f0906b"],
  ok: "#69d394",
  warning: "#ffb545",
  violation: "#f05b5b",
  path: "#7e6ff0",
  quad: "#e8e8ee",
};

/** Camera view rendered at the full sensor fov; the delivered (cropped)
 * framing is drawn as a rectangle with its own thirds grid. */
export function drawCameraView(
  ctx: CanvasRenderingContext2D,
  frame: TelemetryFrame,
  session: SessionInfo,
): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  if (!frame.camera) {
    ctx.fillStyle = COLORS.warning;
    ctx.fillText("camera pose degenerate", 20, 20);
    return;
  }
  const sensor: Camera = {
    ...cameraFromJson(frame.camera),
    fovDeg: session.fov_max_deg,
  };
  const aspect = session.aspect_ratio;

  // Horizon reference: project a far point at camera height.
  ctx.strokeStyle = "rgba(255,255,255,0.08)";
  ctx.beginPath();
  ctx.moveTo(0, height / 2);
  ctx.lineTo(width, height / 2);
  ctx.stroke();

  for (const [i, subject] of frame.subjects.entries()) {
    const eye = vec3(subject.position);
    const headHeight = subject.height / 7.5;
    const top = projectPoint(sensor, [eye[0], eye[1], eye[2] + headHeight / 2], aspect);
    const bottom = projectPoint(
      sensor,
      [eye[0], eye[1], eye[2] - headHeight / 2],
      aspect,
    );
    const feet = projectPoint(
      sensor,
      [eye[0], eye[1], eye[2] + headHeight - subject.height],
      aspect,
    );
    if (!top || !bottom) continue;
    const eyePx = toPixels(projectPoint(sensor, eye, aspect)!, width, height);
    const headPx = Math.max(Math.abs(toPixels(top, width, height).py - toPixels(bottom, width, height).py), 2);
    const color = COLORS.subject[i % COLORS.subject.length];

    // Body: a simple billboard bar from head to feet.
    if (feet) {
      const feetPx = toPixels(feet, width, height);
      ctx.strokeStyle = color;
      ctx.lineWidth = Math.max(headPx * 0.6, 2);
      ctx.beginPath();
      ctx.moveTo(eyePx.px, eyePx.py);
      ctx.lineTo(feetPx.px, feetPx.py);
      ctx.stroke();
    }
    // Head marker centered on the eye position.
    ctx.fillStyle = color;
    ctx.beginPath();
    ctx.arc(eyePx.px, eyePx.py, headPx / 2, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = "#fff";
    ctx.font = "12px sans-serif";
    ctx.fillText(subject.id, eyePx.px + headPx / 2 + 4, eyePx.py);
  }

  // Delivered frame (crop) plus its rule-of-thirds grid.
  const fov = frame.camera.fov_deg;
  const rect = cropRectPx(fov, session.fov_max_deg, width, height);
  ctx.strokeStyle = COLORS.crop;
  ctx.lineWidth = 1.5;
  ctx.strokeRect(rect.x, rect.y, rect.w, rect.h);
  const grid = thirdsLines(rect);
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (const x of grid.vertical) {
    ctx.moveTo(x, rect.y);
    ctx.lineTo(x, rect.y + rect.h);
  }
  for (const y of grid.horizontal) {
    ctx.moveTo(rect.x, y);
    ctx.lineTo(rect.x + rect.w, y);
  }
  ctx.stroke();
}

export interface MapView {
  centerX: number;
  centerY: number;
  scale: number; // pixels per meter
}

export function fitMap(frame: TelemetryFrame, width: number, height: number): MapView {
  const points: number[][] = [
    frame.quad.position,
    ...frame.subjects.map((s) => s.position),
    ...(frame.planned_path ?? []),
  ];
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p[0]);
    maxX = Math.max(maxX, p[0]);
    minY = Math.min(minY, p[1]);
    maxY = Math.max(maxY, p[1]);
  }
  for (const s of frame.subjects) {
    minX = Math.min(minX, s.position[0] - s.safety_radius);
    maxX = Math.max(maxX, s.position[0] + s.safety_radius);
    minY = Math.min(minY, s.position[1] - s.safety_radius);
    maxY = Math.max(maxY, s.position[1] + s.safety_radius);
  }
  const margin = 2.0;
  const spanX = maxX - minX + 2 * margin;
  const spanY = maxY - minY + 2 * margin;
  return {
    centerX: (minX + maxX) / 2,
    centerY: (minY + maxY) / 2,
    scale: Math.min(width / spanX, height / spanY),
  };
}

function mapToPx(view: MapView, width: number, height: number, x: number, y: number) {
  return {
    px: width / 2 + (x - view.centerX) * view.scale,
    py: height / 2 - (y - view.centerY) * view.scale,
  };
}

export function drawMap(
  ctx: CanvasRenderingContext2D,
  frame: TelemetryFrame,
  plannedPath: number[][] | null,
): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  const enriched = { ...frame, planned_path: plannedPath ?? frame.planned_path };
  const view = fitMap(enriched, width, height);

  for (const [i, subject] of frame.subjects.entries()) {
    const c = mapToPx(view, width, height, subject.position[0], subject.position[1]);
    const status = safetyStatus(subject.distance, subject.safety_radius);
    ctx.strokeStyle = COLORS[status];
    ctx.lineWidth = status === "ok" ? 1 : 2.5;
    ctx.beginPath();
    ctx.arc(c.px, c.py, subject.safety_radius * view.scale, 0, Math.PI * 2);
    ctx.stroke();
    ctx.fillStyle = COLORS.subject[i % COLORS.subject.length];
    ctx.beginPath();
    ctx.arc(c.px, c.py, 5, 0, Math.PI * 2);
    ctx.fill();
    const g = subject.gaze;
    ctx.strokeStyle = ctx.fillStyle;
    ctx.beginPath();
    ctx.moveTo(c.px, c.py);
    ctx.lineTo(c.px + g[0] * 15, c.py - g[1] * 15);
    ctx.stroke();
  }

  if (plannedPath && plannedPath.length > 1) {
    ctx.strokeStyle = COLORS.path;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    const first = mapToPx(view, width, height, plannedPath[0][0], plannedPath[0][1]);
    ctx.moveTo(first.px, first.py);
    for (const p of plannedPath.slice(1)) {
      const q = mapToPx(view, width, height, p[0], p[1]);
      ctx.lineTo(q.px, q.py);
    }
    ctx.stroke();
  }

  const quad = mapToPx(view, width, height, frame.quad.position[0], frame.quad.position[1]);
  ctx.fillStyle = COLORS.quad;
  ctx.beginPath();
  ctx.arc(quad.px, quad.py, 6, 0, Math.PI * 2);
  ctx.fill();
  const pan = (frame.quad.gimbal_pan * Math.PI) / 180;
  ctx.strokeStyle = COLORS.quad;
  ctx.beginPath();
  ctx.moveTo(quad.px, quad.py);
  ctx.lineTo(quad.px + Math.cos(pan) * 14, quad.py - Math.sin(pan) * 14);
  ctx.stroke();
}
