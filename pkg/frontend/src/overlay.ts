// Overlay math for the camera view and safety indicators.

export type SafetyStatus = "ok" | "warning" | "violation";

/** Margin below 0.5 m turns the indicator to warning; inside the sphere is a violation. */
export function safetyStatus(
  distance: number,
  radius: number,
  warnMargin = 0.5,
): SafetyStatus {
  if (distance < radius) return "violation";
  if (distance - radius < warnMargin) return "warning";
  return "ok";
}

/** Side fraction of the delivered (cropped) frame inside the full sensor frame. */
export function cropFraction(fovDeg: number, fovMaxDeg: number): number {
  const t = Math.tan(((fovDeg * Math.PI) / 180) / 2);
  const tMax = Math.tan(((fovMaxDeg * Math.PI) / 180) / 2);
  return Math.min(t / tMax, 1);
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Centered crop rectangle in canvas pixels for a sensor frame of w x h. */
export function cropRectPx(
  fovDeg: number,
  fovMaxDeg: number,
  width: number,
  height: number,
): Rect {
  const f = cropFraction(fovDeg, fovMaxDeg);
  return {
    x: (width * (1 - f)) / 2,
    y: (height * (1 - f)) / 2,
    w: width * f,
    h: height * f,
  };
}

/** Rule-of-thirds grid line positions in pixels inside a rectangle. */
export function thirdsLines(rect: Rect): { vertical: number[]; horizontal: number[] } {
  return {
    vertical: [rect.x + rect.w / 3, rect.x + (2 * rect.w) / 3],
    horizontal: [rect.y + rect.h / 3, rect.y + (2 * rect.h) / 3],
  };
}
