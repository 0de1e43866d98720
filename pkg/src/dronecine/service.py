"""Live directing session service.

Each session owns a scene, a simulated quadrotor, and a ticker that streams
telemetry. Shot commands plan a framed shot plus a safe transition from the
current pose and then feed setpoints to the follower tick by tick. Commands
arriving mid-transition are rejected as busy, never preempted.

Endpoints (JSON):
  POST   /sessions                   create session {scene, seed?, planner?, limits?}
  GET    /sessions/{id}/state        snapshot
  POST   /sessions/{id}/shot         command a shot (ShotSpec JSON)
  WS     /sessions/{id}/telemetry    ordered telemetry stream
  GET    /sessions/{id}/trajectory.csv | trajectory.json   last planned transition
  DELETE /sessions/{id}              close session
"""

from __future__ import annotations

import asyncio
import dataclasses
import itertools
import json
import logging
import os
import secrets
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .config import PlannerConfig
from .dynamics import QuadrotorLimits
from .errors import PlanningError, SceneFormatError
from .scene import CameraPose, Scene, project, scene_from_dict, unit, WORLD_UP
from .shotgen import FramedShot, ShotSpec, place_shot
from .simkit import SimState, step
from .transition import (
    Trajectory,
    plan_transition,
    trajectory_to_csv,
    trajectory_to_dict,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ServiceConfig:
    tick_rate: float = 50.0
    # Simulated seconds per wall-clock second; 0 runs the ticker flat out.
    realtime_factor: float = 1.0
    seed: int = 0
    bind_host: str = "127.0.0.1"
    bind_port: int = 8750
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    limits: QuadrotorLimits = field(default_factory=QuadrotorLimits)

    @classmethod
    def load(cls, path: str | Path | None = None, env: dict | None = None) -> "ServiceConfig":
        """Config file plus environment overrides (SIM_SEED, DRONECINE_*)."""
        env = dict(os.environ if env is None else env)
        data: dict = {}
        if path is not None:
            data = json.loads(Path(path).read_text())
        planner = PlannerConfig.from_dict(data.get("planner", {}))
        limits = QuadrotorLimits.from_dict(data.get("limits", {}))
        seed = int(env.get("SIM_SEED", data.get("seed", 0)))
        return cls(
            tick_rate=float(env.get("DRONECINE_TICK_RATE", data.get("tick_rate", 50.0))),
            realtime_factor=float(
                env.get("DRONECINE_REALTIME_FACTOR", data.get("realtime_factor", 1.0))
            ),
            seed=seed,
            bind_host=env.get("DRONECINE_HOST", data.get("bind_host", "127.0.0.1")),
            bind_port=int(env.get("DRONECINE_PORT", data.get("bind_port", 8750))),
            planner=planner,
            limits=limits,
        )


def default_start_pose(scene: Scene) -> CameraPose:
    """A safe hover pose: off to the side of the pair, looking at the midpoint."""
    a, b = scene.subject_a, scene.subject_b
    mid = 0.5 * (a.position + b.position)
    lateral = np.cross(WORLD_UP, b.position - a.position)
    direction = unit(lateral) if np.linalg.norm(lateral) > 1e-9 else np.array([1.0, 0.0, 0.0])
    reach = max(a.safety_radius, b.safety_radius) + 3.0
    for _ in range(16):
        position = mid + direction * reach + np.array([0.0, 0.0, 1.0])
        if all(
            np.linalg.norm(position - s.position) >= s.safety_radius + 0.5
            for s in scene.subjects
        ):
            return CameraPose(position, mid, scene.fov_max)
        reach += 2.0
    raise SceneFormatError("could not place a safe initial camera pose")


class Session:
    def __init__(self, session_id: str, scene: Scene, config: ServiceConfig):
        self.id = session_id
        self.scene = scene
        self.config = config
        self.state = "idle"  # idle | transitioning
        self.seq = itertools.count()
        self.closed = False
        pose = default_start_pose(scene)
        self.current_pose = pose
        self.current_shot: FramedShot | None = None
        self.sim = SimState.initial(pose.look_from, pose.look_at, scene.subjects, config.seed)
        self.active_trajectory: Trajectory | None = None
        self.last_trajectory: Trajectory | None = None
        self.transition_started_at = 0.0
        self.transition_count = 0
        self.pending_event: str | None = None
        self.subscribers: list[asyncio.Queue] = []
        self.ticker_task: asyncio.Task | None = None
        self.command_lock = asyncio.Lock()

    # -- telemetry ---------------------------------------------------------

    def subscribe(self) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue(maxsize=1024)
        self.subscribers.append(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        if q in self.subscribers:
            self.subscribers.remove(q)

    def _publish(self, frame: dict) -> None:
        for q in self.subscribers:
            if q.full():
                try:
                    q.get_nowait()  # drop oldest, keep ordering
                except asyncio.QueueEmpty:
                    pass
            q.put_nowait(frame)

    def camera_view(self) -> CameraPose | None:
        """Actual simulated camera: quad position plus gimbal orientation."""
        pan = np.radians(self.sim.gimbal_pan)
        tilt = np.radians(self.sim.gimbal_tilt)
        direction = np.array(
            [np.cos(tilt) * np.cos(pan), np.cos(tilt) * np.sin(pan), np.sin(tilt)]
        )
        try:
            return CameraPose(
                self.sim.quad_position, self.sim.quad_position + direction, self._current_fov()
            )
        except PlanningError:
            return None

    def _current_fov(self) -> float:
        lf, la, fov = self._setpoint()
        return fov

    def _setpoint(self) -> tuple[np.ndarray, np.ndarray, float]:
        if self.state == "transitioning" and self.active_trajectory is not None:
            tau = self.sim.time - self.transition_started_at
            return self.active_trajectory.pose_at_time(tau)
        return (
            self.current_pose.look_from,
            self.current_pose.look_at,
            self.current_pose.fov,
        )

    def build_frame(self, event: str | None = None) -> dict:
        lf, la, fov = self._setpoint()
        view = self.camera_view()
        subjects = []
        for name, s in (("A", self.scene.subject_a), ("B", self.scene.subject_b)):
            screen = None
            if view is not None:
                sp = project(view, s.position, self.scene.aspect_ratio)
                if sp is not None:
                    screen = {"x": sp.x, "y": sp.y}
            subjects.append(
                {
                    "id": name,
                    "position": s.position.tolist(),
                    "gaze": s.gaze.tolist(),
                    "height": s.height,
                    "safety_radius": s.safety_radius,
                    "distance": float(np.linalg.norm(self.sim.quad_position - s.position)),
                    "screen": screen,
                }
            )
        frame: dict = {
            "type": event or "state",
            "seq": next(self.seq),
            "t": self.sim.time,
            "quad": {
                "position": self.sim.quad_position.tolist(),
                "velocity": self.sim.quad_velocity.tolist(),
                "gimbal_pan": self.sim.gimbal_pan,
                "gimbal_tilt": self.sim.gimbal_tilt,
            },
            "setpoint": {
                "look_from": np.asarray(lf).tolist(),
                "look_at": np.asarray(la).tolist(),
                "fov_deg": float(fov),
            },
            "camera": None
            if view is None
            else {
                "look_from": view.look_from.tolist(),
                "look_at": view.look_at.tolist(),
                "fov_deg": view.fov,
            },
            "subjects": subjects,
            "transitioning": self.state == "transitioning",
            "transition": None,
            "tracking_error": float(np.linalg.norm(self.sim.quad_position - np.asarray(lf))),
        }
        if self.state == "transitioning" and self.active_trajectory is not None:
            tau = self.sim.time - self.transition_started_at
            frame["transition"] = {
                "id": self.transition_count,
                "progress": min(max(tau / self.active_trajectory.duration, 0.0), 1.0),
                "duration": self.active_trajectory.duration,
            }
        if event == "transition_start" and self.active_trajectory is not None:
            frame["planned_path"] = self.active_trajectory.look_from.tolist()
        return frame

    def snapshot(self) -> dict:
        frame = self.build_frame()
        frame["type"] = "snapshot"
        frame["session"] = {
            "id": self.id,
            "state": self.state,
            "line_of_action_side": self.scene.line_of_action_side.value,
            "fov_max_deg": self.scene.fov_max,
            "aspect_ratio": self.scene.aspect_ratio,
            "tick_rate": self.config.tick_rate,
            "current_shot": None if self.current_shot is None else self.current_shot.to_dict(),
        }
        if self.active_trajectory is not None:
            frame["planned_path"] = self.active_trajectory.look_from.tolist()
        return frame

    # -- simulation --------------------------------------------------------

    def tick(self, dt: float) -> None:
        event = None
        if self.state == "transitioning" and self.active_trajectory is not None:
            tau = self.sim.time - self.transition_started_at
            if tau >= self.active_trajectory.duration:
                self.state = "idle"
                self.active_trajectory = None
                event = "transition_end"
        lf, la, _ = self._setpoint()
        self.sim = step(self.sim, (lf, la), dt, limits=self.config.limits)
        self._publish(self.build_frame(event))

    async def run_ticker(self) -> None:
        dt = 1.0 / self.config.tick_rate
        try:
            while not self.closed:
                self.tick(dt)
                if self.config.realtime_factor > 0:
                    await asyncio.sleep(dt / self.config.realtime_factor)
                else:
                    await asyncio.sleep(0)
        except asyncio.CancelledError:
            pass

    # -- commands ----------------------------------------------------------

    async def command_shot(self, spec: ShotSpec) -> dict:
        async with self.command_lock:
            if self.state != "idle":
                raise HTTPException(status_code=409, detail={"error": "busy"})
            scene = self.scene
            config = self.config
            from_pose = self.current_pose

            def plan() -> tuple[FramedShot, Trajectory]:
                shot = place_shot(scene, spec, config.planner)
                origin = FramedShot(
                    pose=from_pose,
                    uncropped_fov=scene.fov_max,
                    crop_warning=False,
                    target_screen_points=(),
                )
                traj = plan_transition(origin, shot, scene, config.planner, config.limits)
                return shot, traj

            try:
                shot, trajectory = await asyncio.to_thread(plan)
            except PlanningError as exc:
                raise HTTPException(
                    status_code=422,
                    detail={"error": type(exc).__name__, "message": str(exc)},
                ) from exc

            self.transition_count += 1
            self.active_trajectory = trajectory
            self.last_trajectory = trajectory
            self.transition_started_at = self.sim.time
            self.state = "transitioning"
            self.current_shot = shot
            self.current_pose = shot.pose
            self._publish(self.build_frame("transition_start"))
            return {
                "transition_id": self.transition_count,
                "duration_s": trajectory.duration,
                "crop_warning": shot.crop_warning,
                "fov_deg": shot.pose.fov,
                "uncropped_fov_deg": shot.uncropped_fov,
                "target_screen_points": [
                    {"target": label, "x": sp.x, "y": sp.y}
                    for label, sp in shot.target_screen_points
                ],
            }

    async def close(self) -> None:
        self.closed = True
        if self.ticker_task is not None:
            self.ticker_task.cancel()
            try:
                await self.ticker_task
            except asyncio.CancelledError:
                pass
        for q in self.subscribers:
            q.put_nowait(None)
        self.subscribers.clear()


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    sessions: dict[str, Session] = {}

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        for session in list(sessions.values()):
            await session.close()
        sessions.clear()

    app = FastAPI(title="dronecine", version="0.1.0", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.sessions = sessions
    app.state.config = config

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None or session.closed:
            raise HTTPException(status_code=404, detail={"error": "unknown session"})
        return session

    @app.post("/sessions")
    async def create_session(payload: dict = Body(...)):
        if "scene" not in payload:
            raise HTTPException(status_code=400, detail={"error": "missing scene"})
        try:
            scene = scene_from_dict(payload["scene"])
        except (SceneFormatError, PlanningError) as exc:
            raise HTTPException(
                status_code=400, detail={"error": type(exc).__name__, "message": str(exc)}
            ) from exc
        session_config = config
        overrides = {}
        if "seed" in payload:
            overrides["seed"] = int(payload["seed"])
        if "planner" in payload:
            overrides["planner"] = PlannerConfig.from_dict(payload["planner"])
        if "limits" in payload:
            overrides["limits"] = QuadrotorLimits.from_dict(payload["limits"])
        if "realtime_factor" in payload:
            overrides["realtime_factor"] = float(payload["realtime_factor"])
        if overrides:
            session_config = dataclasses.replace(config, **overrides)
        session = Session(secrets.token_hex(8), scene, session_config)
        sessions[session.id] = session
        session.ticker_task = asyncio.create_task(session.run_ticker())
        return {"session_id": session.id}

    @app.get("/sessions/{session_id}/state")
    async def state(session_id: str):
        return get_session(session_id).snapshot()

    @app.post("/sessions/{session_id}/shot")
    async def shot(session_id: str, payload: dict = Body(...)):
        session = get_session(session_id)
        try:
            spec = ShotSpec.from_dict(payload)
        except SceneFormatError as exc:
            raise HTTPException(
                status_code=400, detail={"error": "SceneFormatError", "message": str(exc)}
            ) from exc
        return await session.command_shot(spec)

    @app.get("/sessions/{session_id}/trajectory.csv")
    async def trajectory_csv(session_id: str):
        session = get_session(session_id)
        if session.last_trajectory is None:
            raise HTTPException(status_code=404, detail={"error": "no trajectory planned"})
        return PlainTextResponse(trajectory_to_csv(session.last_trajectory))

    @app.get("/sessions/{session_id}/trajectory.json")
    async def trajectory_json(session_id: str):
        session = get_session(session_id)
        if session.last_trajectory is None:
            raise HTTPException(status_code=404, detail={"error": "no trajectory planned"})
        return JSONResponse(trajectory_to_dict(session.last_trajectory))

    @app.delete("/sessions/{session_id}")
    async def close_session(session_id: str):
        session = get_session(session_id)
        del sessions[session_id]
        await session.close()
        return {"closed": session_id}

    @app.websocket("/sessions/{session_id}/telemetry")
    async def telemetry(websocket: WebSocket, session_id: str):
        session = sessions.get(session_id)
        await websocket.accept()
        if session is None or session.closed:
            await websocket.send_json({"type": "error", "error": "unknown session"})
            await websocket.close()
            return
        queue = session.subscribe()
        try:
            while True:
                frame = await queue.get()
                if frame is None:
                    await websocket.send_json({"type": "session_closed"})
                    break
                await websocket.send_text(json.dumps(frame))
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            session.unsubscribe(queue)

    # Serve the built browser frontend when present.
    dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=dist, html=True), name="ui")

    return app
