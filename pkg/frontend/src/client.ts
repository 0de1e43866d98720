// REST + WebSocket client for the session service.

import type { ShotSummary, Snapshot, TelemetryFrame } from "./types.js";

export interface ShotRequest {
  shot_type: string;
  primary_subject?: string;
  distance_class?: string;
  theta_deg?: number;
  phi_deg?: number;
}

export class SessionClient {
  constructor(readonly baseUrl: string = "") {}

  async createSession(scene: unknown, realtimeFactor?: number): Promise<string> {
    const payload: Record<string, unknown> = { scene };
    if (realtimeFactor !== undefined) payload.realtime_factor = realtimeFactor;
    const resp = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!resp.ok) throw new Error(`create session failed: ${await resp.text()}`);
    const body = (await resp.json()) as { session_id: string };
    return body.session_id;
  }

  async snapshot(sessionId: string): Promise<Snapshot> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/state`);
    if (!resp.ok) throw new Error(`snapshot failed: ${resp.status}`);
    return (await resp.json()) as Snapshot;
  }

  async commandShot(
    sessionId: string,
    spec: ShotRequest,
  ): Promise<{ ok: boolean; busy: boolean; summary?: ShotSummary; message?: string }> {
    const resp = await fetch(`${this.baseUrl}/sessions/${sessionId}/shot`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(spec),
    });
    if (resp.ok) {
      return { ok: true, busy: false, summary: (await resp.json()) as ShotSummary };
    }
    const text = await resp.text();
    return { ok: false, busy: resp.status === 409, message: text };
  }

  telemetryUrl(sessionId: string): string {
    const base = this.baseUrl || window.location.origin;
    return `${base.replace(/^http/, "ws")}/sessions/${sessionId}/telemetry`;
  }

  /** Subscribe with automatic retry; returns a stop function. */
  subscribe(
    sessionId: string,
    onFrame: (frame: TelemetryFrame) => void,
    onStatus: (connected: boolean) => void,
  ): () => void {
    let stopped = false;
    let socket: WebSocket | null = null;

    const connect = () => {
      if (stopped) return;
      socket = new WebSocket(this.telemetryUrl(sessionId));
      socket.onopen = () => onStatus(true);
      socket.onmessage = (event: MessageEvent) => {
        try {
          onFrame(JSON.parse(event.data as string) as TelemetryFrame);
        } catch (err) {
          console.error("bad telemetry frame", err);
        }
      };
      socket.onclose = () => {
        onStatus(false);
        if (!stopped) setTimeout(connect, 1000);
      };
      socket.onerror = () => socket?.close();
    };
    connect();
    return () => {
      stopped = true;
      socket?.close();
    };
  }
}
