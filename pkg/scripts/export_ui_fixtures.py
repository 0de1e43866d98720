"""Export the shared test fixtures consumed by the browser UI's test suite.

Writes frontend/test/fixtures/projection_fixtures.json (random camera poses
and world points with the server-computed screen/pixel coordinates) and
frontend/test/fixtures/telemetry_replay.json (a real recorded session:
idle frames, one commanded shot, transition frames, completion marker).

Run from the repository root:  python3 scripts/export_ui_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "frontend" / "test" / "fixtures"

WIDTH, HEIGHT = 1920, 1080


def export_projection_fixtures() -> dict:
    from dronecine.scene import CameraPose, project

    rng = np.random.default_rng(20260810)
    cases = []
    while len(cases) < 80:
        look_from = rng.uniform(-12, 12, 3) + [0, 0, 3]
        look_at = rng.uniform(-6, 6, 3) + [0, 0, 1.7]
        view = look_at - look_from
        if np.hypot(view[0], view[1]) < 0.2 or np.linalg.norm(view) < 0.5:
            continue
        fov = float(rng.uniform(20, 110))
        aspect = float(rng.choice([16 / 9, 4 / 3, 1.0, 2.0]))
        pose = CameraPose(look_from, look_at, fov)
        point = rng.uniform(-10, 10, 3) + [0, 0, 1.7]
        sp = project(pose, point, aspect)
        case = {
            "look_from": look_from.tolist(),
            "look_at": look_at.tolist(),
            "fov_deg": fov,
            "aspect_ratio": aspect,
            "point": point.tolist(),
            "screen": None if sp is None else {"x": sp.x, "y": sp.y},
            "pixel": None
            if sp is None
            else {"px": sp.x * WIDTH, "py": (1.0 - sp.y) * HEIGHT},
        }
        cases.append(case)
    behind = sum(1 for c in cases if c["screen"] is None)
    return {"width": WIDTH, "height": HEIGHT, "cases": cases, "behind_camera_cases": behind}


def export_telemetry_replay() -> dict:
    from fastapi.testclient import TestClient

    from dronecine.scene import scene_to_dict
    from dronecine.service import ServiceConfig, create_app
    from dronecine.scene import Scene, SubjectState, unit

    scene = Scene(
        subject_a=SubjectState(np.array([0.0, 0.0, 1.7]), unit([1, 0.3, 0]), 1.75, 2.0),
        subject_b=SubjectState(np.array([4.0, 0.0, 1.65]), unit([-1, 0.3, 0]), 1.7, 2.0),
        fov_max=70.0,
    )
    app = create_app(ServiceConfig(tick_rate=50.0, realtime_factor=0.0, seed=20260810))
    frames = []
    summary = None
    with TestClient(app) as client:
        sid = client.post("/sessions", json={"scene": scene_to_dict(scene)}).json()["session_id"]
        with client.websocket_connect(f"/sessions/{sid}/telemetry") as ws:
            for _ in range(10):  # idle frames first
                frames.append(json.loads(ws.receive_text()))
            summary = client.post(f"/sessions/{sid}/shot", json={"shot_type": "apex"}).json()
            busy = client.post(
                f"/sessions/{sid}/shot", json={"shot_type": "internal"}
            )
            busy_status = busy.status_code
            while True:
                frame = json.loads(ws.receive_text())
                frames.append(frame)
                if frame["type"] == "transition_end":
                    break
            for _ in range(10):  # settled frames after the transition
                frames.append(json.loads(ws.receive_text()))
        snapshot = client.get(f"/sessions/{sid}/state").json()
        client.delete(f"/sessions/{sid}")
    # Thin out mid-transition frames to keep the fixture small but ordered.
    kept = [f for i, f in enumerate(frames) if i < 12 or i % 5 == 0 or f["type"] != "state"]
    return {
        "session": snapshot["session"],
        "shot_summary": summary,
        "busy_status_during_transition": busy_status,
        "frames": kept,
    }


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    projection = export_projection_fixtures()
    (FIXTURES / "projection_fixtures.json").write_text(json.dumps(projection, indent=1) + "\n")
    replay = export_telemetry_replay()
    (FIXTURES / "telemetry_replay.json").write_text(json.dumps(replay, indent=1) + "\n")
    print(
        f"wrote {len(projection['cases'])} projection cases "
        f"({projection['behind_camera_cases']} behind camera) and "
        f"{len(replay['frames'])} replay frames to {FIXTURES}"
    )


if __name__ == "__main__":
    main()
