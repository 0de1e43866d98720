// Client-side projection must agree with the server-exported fixtures to
// within one pixel at 1920x1080, including behind-camera classification.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { projectPoint, toPixels, vec3 } from "../src/projection.js";

interface ProjectionCase {
  look_from: number[];
  look_at: number[];
  fov_deg: number;
  aspect_ratio: number;
  point: number[];
  screen: { x: number; y: number } | null;
  pixel: { px: number; py: number } | null;
}

interface Fixtures {
  width: number;
  height: number;
  cases: ProjectionCase[];
  behind_camera_cases: number;
}

const here = dirname(fileURLToPath(import.meta.url));
const fixtures: Fixtures = JSON.parse(
  readFileSync(join(here, "fixtures", "projection_fixtures.json"), "utf-8"),
);

describe("projection fixture agreement", () => {
  it("has a meaningful corpus", () => {
    expect(fixtures.cases.length).toBeGreaterThanOrEqual(50);
    expect(fixtures.width).toBe(1920);
    expect(fixtures.height).toBe(1080);
  });

  it("matches every server screen point within one pixel", () => {
    let checked = 0;
    for (const c of fixtures.cases) {
      const camera = {
        lookFrom: vec3(c.look_from),
        lookAt: vec3(c.look_at),
        fovDeg: c.fov_deg,
      };
      const local = projectPoint(camera, vec3(c.point), c.aspect_ratio);
      if (c.screen === null) {
        expect(local).toBeNull();
        continue;
      }
      expect(local).not.toBeNull();
      const px = toPixels(local!, fixtures.width, fixtures.height);
      expect(Math.abs(px.px - c.pixel!.px)).toBeLessThanOrEqual(1.0);
      expect(Math.abs(px.py - c.pixel!.py)).toBeLessThanOrEqual(1.0);
      checked += 1;
    }
    expect(checked).toBeGreaterThanOrEqual(fixtures.cases.length - fixtures.behind_camera_cases);
  });

  it("rejects degenerate vertical views like the server", () => {
    const camera = { lookFrom: [0, 0, 0] as const, lookAt: [0, 0, 5] as const, fovDeg: 60 };
    expect(() => projectPoint(camera, [1, 1, 1], 16 / 9)).toThrow(/vertical/);
  });
});
