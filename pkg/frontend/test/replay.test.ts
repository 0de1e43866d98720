// Scripted replay of a recorded session: the UI state machine must mirror
// the server's busy state, see exactly one transition end, and reproduce the
// server's reported subject screen points from the camera pose in each frame.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { cameraFromJson, projectPoint, toPixels, vec3 } from "../src/projection.js";
import { ShotButtonGate } from "../src/stateMachine.js";
import type { TelemetryFrame, SessionInfo, ShotSummary } from "../src/types.js";

interface Replay {
  session: SessionInfo;
  shot_summary: ShotSummary;
  busy_status_during_transition: number;
  frames: TelemetryFrame[];
}

const here = dirname(fileURLToPath(import.meta.url));
const replay: Replay = JSON.parse(
  readFileSync(join(here, "fixtures", "telemetry_replay.json"), "utf-8"),
);

describe("telemetry replay", () => {
  it("frames are ordered and cover a full transition", () => {
    const seqs = replay.frames.map((f) => f.seq);
    for (let i = 1; i < seqs.length; i++) expect(seqs[i]).toBeGreaterThan(seqs[i - 1]);
    expect(replay.frames.some((f) => f.transitioning)).toBe(true);
    expect(replay.frames.filter((f) => f.type === "transition_end")).toHaveLength(1);
  });

  it("buttons are disabled whenever the server is transitioning", () => {
    const gate = new ShotButtonGate();
    for (const frame of replay.frames) {
      gate.onFrame(frame);
      if (frame.transitioning) {
        expect(gate.canSend()).toBe(false);
      }
    }
    expect(gate.transitionEndCount).toBe(1);
    // After the recorded transition completes the gate reopens.
    expect(gate.canSend()).toBe(true);
  });

  it("a lost race surfaces the server busy error, never a silent drop", () => {
    const gate = new ShotButtonGate();
    gate.onFrame({ type: "state", transitioning: false });
    expect(gate.canSend()).toBe(true);
    gate.markSent();
    expect(gate.canSend()).toBe(false); // optimistic disable while in flight
    // The recorded session answered a mid-transition command with 409.
    expect(replay.busy_status_during_transition).toBe(409);
    gate.onResult(false, true);
    expect(gate.lastError).toBe("busy");
    gate.onFrame({ type: "state", transitioning: true });
    expect(gate.canSend()).toBe(false);
    gate.onFrame({ type: "transition_end", transitioning: false });
    expect(gate.canSend()).toBe(true);
  });

  it("client-side projection matches server screen points within one pixel", () => {
    const width = 1920;
    const height = 1080;
    let checked = 0;
    for (const frame of replay.frames) {
      if (!frame.camera) continue;
      const camera = cameraFromJson(frame.camera);
      for (const subject of frame.subjects) {
        const local = projectPoint(camera, vec3(subject.position), replay.session.aspect_ratio);
        if (subject.screen === null) {
          expect(local).toBeNull();
          continue;
        }
        expect(local).not.toBeNull();
        const mine = toPixels(local!, width, height);
        const server = toPixels(subject.screen, width, height);
        expect(Math.abs(mine.px - server.px)).toBeLessThanOrEqual(1.0);
        expect(Math.abs(mine.py - server.py)).toBeLessThanOrEqual(1.0);
        checked += 1;
      }
    }
    expect(checked).toBeGreaterThan(50);
  });

  it("shot summary carries the transition metadata the toast shows", () => {
    expect(replay.shot_summary.duration_s).toBeGreaterThan(0);
    expect(typeof replay.shot_summary.crop_warning).toBe("boolean");
    expect(replay.shot_summary.fov_deg).toBeLessThanOrEqual(
      replay.shot_summary.uncropped_fov_deg,
    );
  });
});
