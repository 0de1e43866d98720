// Mirrors the server's session state machine so the UI never offers a
// command the server would reject as busy. A lost race (the server flips to
// transitioning between our last frame and the request) surfaces the
// server's busy error; it is never silently dropped.

import type { TelemetryFrame } from "./types.js";

export type GateListener = (canSend: boolean) => void;

export class ShotButtonGate {
  private transitioning = false;
  private pending = false;
  private listeners: GateListener[] = [];
  transitionEndCount = 0;
  lastError: string | null = null;

  onFrame(frame: Pick<TelemetryFrame, "type" | "transitioning">): void {
    if (frame.type === "transition_end") this.transitionEndCount += 1;
    this.transitioning = frame.transitioning;
    this.notify();
  }

  canSend(): boolean {
    return !this.transitioning && !this.pending;
  }

  /** Optimistically disable the buttons while a command is in flight. */
  markSent(): void {
    this.pending = true;
    this.lastError = null;
    this.notify();
  }

  onResult(ok: boolean, busy: boolean, message?: string): void {
    this.pending = false;
    if (!ok) {
      this.lastError = busy ? "busy" : message ?? "command failed";
    }
    this.notify();
  }

  subscribe(listener: GateListener): void {
    this.listeners.push(listener);
    listener(this.canSend());
  }

  private notify(): void {
    const state = this.canSend();
    for (const listener of this.listeners) listener(state);
  }
}
