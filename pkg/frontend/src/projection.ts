// Pinhole projection mirroring the server's camera math: look-from/look-at
// with a world-vertical up vector, horizontal fov in degrees, normalized
// screen coordinates in [0,1]^2 with the origin at the bottom-left.
//
// This duplicate is validated against server-exported fixtures (see
// test/projection.test.ts) so the client view cannot drift from the planner.

export type Vec3 = readonly [number, number, number];

export interface Camera {
  lookFrom: Vec3;
  lookAt: Vec3;
  fovDeg: number;
}

export interface ScreenPoint {
  x: number;
  y: number;
}

export function vec3(a: number[] | Vec3): Vec3 {
  return [a[0], a[1], a[2]];
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

export function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

export function normalize(a: Vec3): Vec3 {
  const n = norm(a);
  if (n === 0) throw new Error("cannot normalize the zero vector");
  return [a[0] / n, a[1] / n, a[2] / n];
}

const WORLD_UP: Vec3 = [0, 0, 1];

export interface CameraBasis {
  forward: Vec3;
  right: Vec3;
  up: Vec3;
}

export function cameraBasis(camera: Camera): CameraBasis {
  const view = sub(camera.lookAt, camera.lookFrom);
  const n = norm(view);
  if (n < 1e-12) throw new Error("camera look-from and look-at coincide");
  if (Math.hypot(view[0], view[1]) / n < 1e-9) {
    throw new Error("vertical view direction: camera roll undefined");
  }
  const forward = normalize(view);
  const right = normalize(cross(forward, WORLD_UP));
  const up = cross(right, forward);
  return { forward, right, up };
}

export function halfTangents(fovDeg: number, aspect: number): { tanH: number; tanV: number } {
  const tanH = Math.tan(((fovDeg * Math.PI) / 180) / 2);
  return { tanH, tanV: tanH / aspect };
}

/** Project a world point; returns null when it lies behind the camera. */
export function projectPoint(
  camera: Camera,
  point: Vec3,
  aspect: number,
): ScreenPoint | null {
  const { forward, right, up } = cameraBasis(camera);
  const v = sub(point, camera.lookFrom);
  const depth = dot(v, forward);
  if (depth <= 0) return null;
  const { tanH, tanV } = halfTangents(camera.fovDeg, aspect);
  return {
    x: 0.5 + (0.5 * dot(v, right)) / (depth * tanH),
    y: 0.5 + (0.5 * dot(v, up)) / (depth * tanV),
  };
}

/** Normalized (bottom-left origin) to canvas pixels (top-left origin). */
export function toPixels(
  s: ScreenPoint,
  width: number,
  height: number,
): { px: number; py: number } {
  return { px: s.x * width, py: (1 - s.y) * height };
}

export function cameraFromJson(pose: {
  look_from: number[];
  look_at: number[];
  fov_deg: number;
}): Camera {
  return {
    lookFrom: vec3(pose.look_from),
    lookAt: vec3(pose.look_at),
    fovDeg: pose.fov_deg,
  };
}
